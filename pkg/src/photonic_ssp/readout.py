"""Threshold read-out: turn port intensities into subset-sum answers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import MissingTarget
from .network import build_network
from .propagation import (
    IntensityDistribution,
    NoiseModel,
    OpticalParams,
    apply_noise,
    propagate,
)
from .ssp_core import SSPInstance, SubsetCountTable, count_subsets_dp, successive_primes_instance

RELIABLE_SIZE_CAP = 20


@dataclass(frozen=True)
class ThresholdBand:
    lower: float
    upper: float

    @property
    def valid(self) -> bool:
        return self.lower < self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, threshold: float) -> bool:
        return self.lower < threshold < self.upper

    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "valid": self.valid}


@dataclass
class DecisionReport:
    ports: list[dict]
    answer: str
    band: ThresholdBand
    threshold: Optional[float]
    mismatches: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "band": self.band.to_dict(),
            "threshold": self.threshold,
            "mismatches": list(self.mismatches),
            "ports": self.ports,
        }


def tolerance_band(dist: IntensityDistribution, oracle: SubsetCountTable) -> ThresholdBand:
    """Open interval of thresholds that separate present from absent ports.

    ``lower`` is the brightest port with no subset behind it (0 if every sum
    is achievable), ``upper`` the dimmest port that has at least one.
    """
    values = dist.as_array(oracle.total)
    present = oracle.present_mask()
    lower = float(values[~present].max()) if (~present).any() else 0.0
    upper = float(values[present].min())
    return ThresholdBand(lower, upper)


def classify(
    dist: IntensityDistribution,
    threshold: Optional[float],
    instance: SSPInstance,
    oracle: Optional[SubsetCountTable] = None,
) -> DecisionReport:
    """Classify every port 0..total and answer the instance's target.

    Ports at exactly ``threshold`` count as present. With ``threshold=None``
    the band midpoint is used when the band is valid; otherwise every port is
    reported absent and the answer is ``"indeterminate"``.

    Raises :class:`MissingTarget` (with the finished report on ``.report``)
    when the instance has no target.
    """
    if oracle is None:
        oracle = count_subsets_dp(instance)
    band = tolerance_band(dist, oracle)
    indeterminate = False
    if threshold is None:
        if band.valid:
            threshold = band.midpoint()
        else:
            indeterminate = True
    elif not threshold > 0:
        raise ValueError("threshold must be positive")

    values = dist.as_array(instance.total)
    oracle_present = oracle.present_mask()
    if indeterminate:
        measured = np.zeros_like(oracle_present)
    else:
        measured = values >= threshold

    ports = [
        {
            "port": s,
            "intensity": float(values[s]),
            "class": "present" if measured[s] else "absent",
            "oracle": "present" if oracle_present[s] else "absent",
        }
        for s in range(instance.total + 1)
    ]
    mismatches = [] if indeterminate else [
        int(s) for s in np.flatnonzero(measured != oracle_present)
    ]

    if instance.target is None or indeterminate:
        answer = "indeterminate"
    else:
        answer = "yes" if measured[instance.target] else "no"
    report = DecisionReport(ports, answer, band, threshold, mismatches)
    if instance.target is None:
        raise _missing_target(report)
    return report


def _missing_target(report: DecisionReport) -> MissingTarget:
    err = MissingTarget("instance has no target; per-port report attached as .report")
    err.report = report
    return err


def max_reliable_size(
    params: OpticalParams,
    noise: NoiseModel = NoiseModel(),
    cap: int = RELIABLE_SIZE_CAP,
) -> tuple[int, bool]:
    """Largest N (first N primes) whose read-out stays reliable.

    An instance is reliable when its band, computed on the noisy
    distribution, is valid and wider than the noise floor: the weakest
    present port must stand out from the brightest absent port by more than
    the environmental level. Returns ``(N, cap_reached)``; the search stops at
    the first failing N.
    """
    best = 0
    for n in range(1, cap + 1):
        inst = successive_primes_instance(n)
        dist = apply_noise(propagate(build_network(inst), params), noise)
        band = tolerance_band(dist, count_subsets_dp(inst))
        if not (band.valid and band.width > noise.noise_floor_per_port):
            return best, False
        best = n
    return best, True
