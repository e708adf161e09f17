"""Exact combinatorial ground truth for subset-sum instances.

Everything optical in this package is checked against the tables built here:
a pseudo-polynomial counting DP and (for small N) brute-force enumeration.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import (
    CountOverflow,
    InstanceTooLarge,
    MissingTarget,
    NonPositiveElement,
    TargetOutOfRange,
)

MAX_ENUMERATION_SIZE = 30
# 2**62 still fits a signed 64-bit counter with room for the final addition
_INT64_MAX_N = 62


@dataclass(frozen=True)
class SSPInstance:
    elements: tuple[int, ...]
    target: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(int(e) for e in self.elements))
        if not self.elements:
            raise ValueError("an instance needs at least one element")
        bad = [e for e in self.elements if e < 1]
        if bad:
            raise NonPositiveElement(f"elements must be positive integers, got {bad}")
        if self.target is not None:
            t = int(self.target)
            object.__setattr__(self, "target", t)
            if t < 0 or t > self.total:
                raise TargetOutOfRange(
                    f"target {t} outside [0, {self.total}]: trivially NO"
                )

    @property
    def total(self) -> int:
        return sum(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def with_target(self, target: Optional[int]) -> "SSPInstance":
        return SSPInstance(self.elements, target)

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "target": self.target}


@dataclass(frozen=True)
class SubsetCountTable:
    """counts[s] = number of index-subsets of the instance summing to s."""

    counts: np.ndarray = field(repr=False)
    size: int

    @property
    def total(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, s: int) -> int:
        if s < 0 or s > self.total:
            return 0
        return int(self.counts[s])

    def achievable(self) -> list[int]:
        return [int(s) for s in np.flatnonzero(self.counts)]

    def present_mask(self) -> np.ndarray:
        return np.asarray(self.counts != 0, dtype=bool)


def parse_instance(elements: Sequence[int], target: Optional[int] = None) -> SSPInstance:
    """Validate raw input and build an :class:`SSPInstance`.

    Raises
    ------
    NonPositiveElement
        Any element below 1.
    TargetOutOfRange
        ``target < 0`` or ``target > sum(elements)``. Callers answering the
        decision question may treat this as a definite NO.
    """
    if isinstance(elements, (str, bytes)) or not len(elements):
        raise ValueError("elements must be a non-empty list of integers")
    for e in elements:
        if isinstance(e, bool) or int(e) != e:
            raise ValueError(f"element {e!r} is not an integer")
    if target is not None and (isinstance(target, bool) or int(target) != target):
        raise ValueError(f"target {target!r} is not an integer")
    return SSPInstance(tuple(int(e) for e in elements), target)


def load_instance(path: str | Path) -> SSPInstance:
    """Read the shared ``{"elements": [...], "target": int|null}`` JSON file."""
    doc = json.loads(Path(path).read_text())
    return parse_instance(doc["elements"], doc.get("target"))


def count_subsets_dp(instance: SSPInstance, dtype=None) -> SubsetCountTable:
    """Count subsets per sum with the classic 0/1-knapsack recurrence.

    ``dtype=None`` picks int64 when 2**N fits and exact Python integers
    otherwise. Asking for ``np.int64`` explicitly on a too-large instance
    raises :class:`CountOverflow`.
    """
    n = instance.size
    if dtype is None:
        dtype = np.int64 if n <= _INT64_MAX_N else object
    elif np.dtype(dtype) == np.int64 and n > _INT64_MAX_N:
        raise CountOverflow(f"2**{n} subsets do not fit a 64-bit counter")

    counts = np.zeros(instance.total + 1, dtype=dtype)
    counts[0] = 1
    reach = 0
    for e in instance.elements:
        # slices read the pre-update array because the RHS is copied first
        counts[e : reach + e + 1] = counts[e : reach + e + 1] + counts[: reach + 1]
        reach += e
    return SubsetCountTable(counts=counts, size=n)


def enumerate_subsets(instance: SSPInstance) -> Iterator[tuple[int, int]]:
    """Yield ``(mask, sum)`` for all 2**N subsets; bit i selects element i."""
    n = instance.size
    if n > MAX_ENUMERATION_SIZE:
        raise InstanceTooLarge(f"N={n} exceeds enumeration guard {MAX_ENUMERATION_SIZE}")
    elems = instance.elements
    for mask in range(1 << n):
        s = 0
        for i in range(n):
            if mask >> i & 1:
                s += elems[i]
        yield mask, s


def decide(instance: SSPInstance, table: Optional[SubsetCountTable] = None) -> bool:
    if instance.target is None:
        raise MissingTarget("decide() needs an instance with a target")
    if table is None:
        table = count_subsets_dp(instance)
    return table[instance.target] >= 1


def first_primes(n: int) -> list[int]:
    """The first ``n`` primes, 2, 3, 5, ..."""
    primes: list[int] = []
    candidate = 2
    while len(primes) < n:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def successive_primes_instance(n: int) -> SSPInstance:
    return SSPInstance(tuple(first_primes(n)))
