"""Incoherent intensity propagation through the junction network.

Two independent routes compute the same thing:

* :func:`propagate` sweeps the network row by row with numpy arrays indexed
  by column. It is the production path and handles tens of thousands of
  columns-times-rows per millisecond.
* :func:`propagate_graph` walks the explicit node/edge list one junction at
  a time. It is slow and exists to cross-check the sweep.

Light from different routes adds in intensity, never in amplitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .errors import InvalidParams
from .network import Branch, JunctionKind, JunctionNetwork
from .ssp_core import SSPInstance, count_subsets_dp

LOSS_CATEGORIES = (
    "propagation",
    "bend",
    "converge_insertion",
    "residual_sink",
    "crosstalk_stray",
)


@dataclass(frozen=True)
class OpticalParams:
    split_diagonal_fraction: float = 0.5
    pass_crosstalk: float = 0.0
    converge_residual: float = 0.0
    converge_insertion_loss: float = 0.0
    propagation_loss_db_per_node: float = 0.0
    bend_excess_loss: float = 0.0
    # send leaked crosstalk to the stray ledger instead of the other guide
    crosstalk_to_stray: bool = False

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        f = self.split_diagonal_fraction
        if not 0.0 < f < 1.0:
            raise InvalidParams(f"split_diagonal_fraction must be in (0, 1), got {f}")
        for name in (
            "pass_crosstalk",
            "converge_residual",
            "converge_insertion_loss",
            "bend_excess_loss",
        ):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise InvalidParams(f"{name} must be in [0, 1), got {v}")
        if self.converge_residual + self.converge_insertion_loss > 1.0:
            raise InvalidParams("converge_residual + converge_insertion_loss exceeds 1")
        if not (self.propagation_loss_db_per_node >= 0.0
                and math.isfinite(self.propagation_loss_db_per_node)):
            raise InvalidParams("propagation_loss_db_per_node must be finite and >= 0")

    @property
    def node_transmission(self) -> float:
        return 10.0 ** (-self.propagation_loss_db_per_node / 10.0)

    @classmethod
    def lossless(cls) -> "OpticalParams":
        return cls()

    @classmethod
    def compensated(cls, bend_excess_loss: float, **kwargs) -> "OpticalParams":
        """Split ratio chosen so that f * (1 - bend) == 1 - f after the arc."""
        f = 1.0 / (2.0 - bend_excess_loss)
        return cls(split_diagonal_fraction=f, bend_excess_loss=bend_excess_loss, **kwargs)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "OpticalParams":
        known = {k: doc[k] for k in cls.__dataclass_fields__ if k in doc}
        unknown = set(doc) - set(known)
        if unknown:
            raise InvalidParams(f"unknown optical parameters: {sorted(unknown)}")
        return cls(**known)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class IntensityDistribution:
    port_intensity: dict[int, float]
    loss_ledger: dict[str, float] = field(
        default_factory=lambda: {k: 0.0 for k in LOSS_CATEGORIES}
    )
    input_power: float = 1.0
    total: Optional[int] = None

    def intensity(self, port: int) -> float:
        return self.port_intensity.get(port, 0.0)

    def as_array(self, total: Optional[int] = None) -> np.ndarray:
        """Dense intensities over ports 0..total; missing ports read 0."""
        if total is None:
            total = self.total if self.total is not None else max(self.port_intensity)
        out = np.zeros(total + 1)
        for p, v in self.port_intensity.items():
            if 0 <= p <= total:
                out[p] = v
        return out

    def energy_residual(self) -> float:
        return (sum(self.port_intensity.values()) + sum(self.loss_ledger.values())
                - self.input_power)


@dataclass(frozen=True)
class NoiseModel:
    """Per-port environmental floor (as a fraction of input power) and optional shot noise."""

    noise_floor_per_port: float = 0.0
    photon_budget: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.noise_floor_per_port < 0:
            raise ValueError("noise floor must be non-negative")
        if self.photon_budget is not None and self.photon_budget <= 0:
            raise ValueError("photon_budget must be a positive integer")


def propagate(
    network: JunctionNetwork,
    params: OpticalParams = OpticalParams(),
    input_power: float = 1.0,
) -> IntensityDistribution:
    """Single forward sweep over the network, one node row at a time.

    At each row every stream loses ``propagation_loss_db_per_node``; diagonal
    streams then exchange ``pass_crosstalk`` with any vertical guide they
    cross, or, on the last row of the block, hand ``1 - residual - insertion``
    of their power to the vertical line at the converge column.
    """
    params.validate()
    if not input_power > 0:
        raise InvalidParams("input_power must be positive")
    total = network.total
    n = total + 1
    f = params.split_diagonal_fraction
    bend = params.bend_excess_loss
    k = params.pass_crosstalk
    t = params.node_transmission
    keep = 1.0 - params.converge_residual - params.converge_insertion_loss
    lossy_rows = t != 1.0
    ledger = {c: 0.0 for c in LOSS_CATEGORIES}

    vert = np.zeros(n)
    vert[0] = input_power
    for mask, e in zip(network.layer_masks[:-1], network.elements):
        # diag[x] is the stream that left the split at column x
        diag = vert * f
        ledger["bend"] += float(diag.sum()) * bend
        diag *= 1.0 - bend
        vert = vert * (1.0 - f)
        for r in range(1, e + 1):
            if lossy_rows:
                ledger["propagation"] += (float(vert.sum()) + float(diag.sum())) * (1.0 - t)
                vert *= t
                diag *= t
            if r < e:
                if k == 0.0 or r >= n:
                    continue
                cross = mask[: n - r] & mask[r:]
                if not cross.any():
                    continue
                v_here = vert[r:]
                d_here = diag[: n - r]
                v_old = v_here[cross]
                d_old = d_here[cross]
                if params.crosstalk_to_stray:
                    ledger["crosstalk_stray"] += float((v_old + d_old).sum()) * k
                    v_here[cross] = (1.0 - k) * v_old
                    d_here[cross] = (1.0 - k) * d_old
                else:
                    v_here[cross] = (1.0 - k) * v_old + k * d_old
                    d_here[cross] = (1.0 - k) * d_old + k * v_old
            else:
                arriving = diag[: n - e]
                s = float(arriving.sum())
                ledger["residual_sink"] += s * params.converge_residual
                ledger["converge_insertion"] += s * params.converge_insertion_loss
                vert[e:] += keep * arriving

    ports = network.layer_masks[-1]
    port_intensity = {int(p): float(vert[p]) for p in np.flatnonzero(ports)}
    return IntensityDistribution(port_intensity, ledger, float(input_power), total)


def propagate_graph(
    network: JunctionNetwork,
    params: OpticalParams = OpticalParams(),
    input_power: float = 1.0,
) -> IntensityDistribution:
    """Reference propagation: visit every junction of the explicit DAG in order."""
    params.validate()
    nodes, edges = network.nodes, network.edges
    t = params.node_transmission
    ledger = {c: 0.0 for c in LOSS_CATEGORIES}
    k = params.pass_crosstalk

    incoming: dict[int, list[int]] = {}
    outgoing: dict[int, dict[Branch, int]] = {}
    for idx, edge in enumerate(edges):
        incoming.setdefault(edge.dst, []).append(idx)
        outgoing.setdefault(edge.src, {})[edge.branch] = idx
    on_edge = [0.0] * len(edges)

    def send(edge_idx: int, power: float) -> None:
        edge = edges[edge_idx]
        length = network.edge_length(edge)
        arriving = power * t**length
        ledger["propagation"] += power - arriving
        on_edge[edge_idx] = arriving

    ports: dict[int, float] = {}
    for idx, node in enumerate(nodes):
        arrive = {Branch.VERTICAL: 0.0, Branch.DIAGONAL: 0.0}
        for e_idx in incoming.get(idx, []):
            arrive[edges[e_idx].branch] += on_edge[e_idx]
        v_in, d_in = arrive[Branch.VERTICAL], arrive[Branch.DIAGONAL]
        out = outgoing.get(idx, {})
        kind = node.kind

        if kind is JunctionKind.INPUT:
            send(out[Branch.VERTICAL], input_power)
        elif kind is JunctionKind.SPLIT:
            total_in = v_in + d_in
            f = params.split_diagonal_fraction
            ledger["bend"] += total_in * f * params.bend_excess_loss
            send(out[Branch.VERTICAL], total_in * (1.0 - f))
            send(out[Branch.DIAGONAL], total_in * f * (1.0 - params.bend_excess_loss))
        elif kind is JunctionKind.PASS:
            if params.crosstalk_to_stray:
                ledger["crosstalk_stray"] += k * (v_in + d_in)
                send(out[Branch.VERTICAL], (1.0 - k) * v_in)
                send(out[Branch.DIAGONAL], (1.0 - k) * d_in)
            else:
                send(out[Branch.VERTICAL], (1.0 - k) * v_in + k * d_in)
                send(out[Branch.DIAGONAL], (1.0 - k) * d_in + k * v_in)
        elif kind is JunctionKind.CONVERGE:
            ledger["residual_sink"] += d_in * params.converge_residual
            ledger["converge_insertion"] += d_in * params.converge_insertion_loss
            keep = 1.0 - params.converge_residual - params.converge_insertion_loss
            send(out[Branch.VERTICAL], v_in + keep * d_in)
        elif kind is JunctionKind.OUTPUT:
            ports[node.col] = v_in + d_in

    return IntensityDistribution(ports, ledger, float(input_power), network.total)


def lossless_reference(instance: SSPInstance) -> IntensityDistribution:
    """Port intensities counts[s] / 2**N straight from the counting oracle."""
    table = count_subsets_dp(instance)
    n = instance.size
    ports = {
        int(s): math.ldexp(float(table.counts[s]), -n)
        if table.counts.dtype != object
        else float(int(table.counts[s]) / (1 << n))
        for s in np.flatnonzero(table.counts)
    }
    return IntensityDistribution(ports, input_power=1.0, total=instance.total)


def apply_noise(dist: IntensityDistribution, noise: NoiseModel) -> IntensityDistribution:
    """Add the environmental floor to every port 0..total, optionally after Poisson sampling.

    With a photon budget ``B`` each port's count is ``Poisson(B * I) + B * floor``
    and is divided by ``B`` again, so results stay fractions of the input.
    """
    total = dist.total if dist.total is not None else max(dist.port_intensity)
    dense = dist.as_array(total) / dist.input_power
    floor = noise.noise_floor_per_port
    if noise.photon_budget is not None:
        rng = np.random.default_rng(noise.seed)
        budget = noise.photon_budget
        counts = rng.poisson(budget * dense).astype(float) + budget * floor
        noisy = counts / budget
    elif floor == 0.0:
        return replace(dist, port_intensity=dict(dist.port_intensity),
                       loss_ledger=dict(dist.loss_ledger))
    else:
        noisy = dense + floor
    noisy *= dist.input_power
    return IntensityDistribution(
        {p: float(v) for p, v in enumerate(noisy)},
        dict(dist.loss_ledger),
        dist.input_power,
        total,
    )
