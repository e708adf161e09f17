"""Closed-form time, SNR and Fisher-information models.

Photonic and molecular computing time is the longest route length divided by
carrier speed; brute-force electronic time is an operation count divided by
peak FLOPS. Lengths are in millimetres, times in seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import NoCrossover, ThetaOutOfRange
from .ssp_core import SSPInstance, first_primes, successive_primes_instance

CROSSOVER_CAP = 64


@dataclass(frozen=True)
class GeometryParams:
    node_pitch_mm: float = 0.05
    diagonal_factor: float = math.sqrt(2.0)
    split_coupling_len_mm: float = 1.8
    converge_coupling_len_mm: float = 3.3
    extra_len_per_junction_mm: float = 0.0

    def __post_init__(self) -> None:
        if self.node_pitch_mm < 0 or self.diagonal_factor < 1:
            raise ValueError("node pitch must be >= 0 and diagonal_factor >= 1")
        if min(self.split_coupling_len_mm, self.converge_coupling_len_mm,
               self.extra_len_per_junction_mm) < 0:
            raise ValueError("junction lengths must be non-negative")


@dataclass(frozen=True)
class CarrierModel:
    name: str
    speed_mm_per_s: float

    def __post_init__(self) -> None:
        if not self.speed_mm_per_s > 0:
            raise ValueError("carrier speed must be positive")


PHOTON = CarrierModel("photon", 2e11)
ACTIN = CarrierModel("actin", 5e-3)


@dataclass(frozen=True)
class ElectronicModel:
    name: str
    flops: float
    ops_per_subset_coefficient: float = 1.0

    def __post_init__(self) -> None:
        if not self.flops > 0 or not self.ops_per_subset_coefficient > 0:
            raise ValueError("flops and op coefficient must be positive")

    def total_ops(self, n: int) -> float:
        # each subset costs one addition per member: sum_k k*C(n,k) = n*2**(n-1)
        return self.ops_per_subset_coefficient * n * 2.0 ** (n - 1)


@dataclass(frozen=True)
class SnrModel:
    c1: float = -3.212
    c2: float = -0.0252
    input_power: float = 1.0
    noise_power: float = 1.0

    def __post_init__(self) -> None:
        if not (self.input_power > 0 and self.noise_power > 0):
            raise ValueError("input and noise power must be positive")

    @property
    def offset_db(self) -> float:
        """C = 10 log10(In / Noi), the size-independent SNR ceiling."""
        return 10.0 * math.log10(self.input_power / self.noise_power)

    def weakest_path_db(self, n: int, element_sum: float) -> float:
        return self.c1 * n + self.c2 * element_sum


@dataclass(frozen=True)
class QuantumSourceModel:
    m: float

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ValueError("m must be positive")


def longest_path_length(instance: SSPInstance, geom: GeometryParams) -> float:
    """Length of the include-every-element route, which ends at port ``total``.

    Per block it runs one split coupler, ``e_i`` diagonal node units and one
    converge coupler. It never meets a pass junction because its diagonal
    always lies right of every vertical guide in the block.
    """
    n = instance.size
    diag = instance.total * geom.node_pitch_mm * geom.diagonal_factor
    couplers = n * (geom.split_coupling_len_mm + geom.converge_coupling_len_mm)
    junctions = 2 * n
    return diag + couplers + junctions * geom.extra_len_per_junction_mm


def photonic_time(instance: SSPInstance, geom: GeometryParams,
                  carrier: CarrierModel = PHOTON) -> float:
    return longest_path_length(instance, geom) / carrier.speed_mm_per_s


def quantum_time_multiplier(model: QuantumSourceModel) -> float:
    """Lossless lower bound on (single-photon source time) / (classical time)."""
    return float(model.m)


def quantum_photonic_time(instance: SSPInstance, geom: GeometryParams,
                          model: QuantumSourceModel,
                          carrier: CarrierModel = PHOTON) -> float:
    """Lower bound on computing time with a heralded single-photon source."""
    return quantum_time_multiplier(model) * photonic_time(instance, geom, carrier)


def electronic_time(n: int, model: ElectronicModel) -> float:
    if n < 1:
        raise ValueError("N must be >= 1")
    return model.total_ops(n) / model.flops


def crossover(geom: GeometryParams, carrier: CarrierModel, model: ElectronicModel,
              cap: int = CROSSOVER_CAP) -> int:
    """Smallest N for which the photonic computer beats ``model`` on the first N primes."""
    primes = first_primes(cap)
    for n in range(1, cap + 1):
        inst = SSPInstance(tuple(primes[:n]))
        if photonic_time(inst, geom, carrier) < electronic_time(n, model):
            return n
    raise NoCrossover(f"{model.name} is never beaten for N <= {cap}")


def flops_window(target_n: int, geom: GeometryParams, carrier: CarrierModel = PHOTON,
                 ops_per_subset_coefficient: float = 1.0) -> tuple[float, float]:
    """FLOPS interval ``[lo, hi)`` for which :func:`crossover` returns ``target_n``.

    The ratio total_ops(N) / photonic_time(N) increases with N, so the
    crossover is N* exactly when it exceeds FLOPS at N* but not before.
    """
    probe = ElectronicModel("probe", 1.0, ops_per_subset_coefficient)

    def ratio(n: int) -> float:
        return probe.total_ops(n) / photonic_time(successive_primes_instance(n), geom, carrier)

    lo = max((ratio(n) for n in range(1, target_n)), default=0.0)
    return lo, ratio(target_n)


def calibrate_flops(target_n: int, geom: GeometryParams, carrier: CarrierModel = PHOTON,
                    ops_per_subset_coefficient: float = 1.0, digits: int = 3) -> float:
    """Geometric centre of :func:`flops_window`, rounded to ``digits`` significant figures."""
    lo, hi = flops_window(target_n, geom, carrier, ops_per_subset_coefficient)
    centre = math.sqrt(lo * hi) if lo > 0 else hi / 2.0
    value = float(f"{centre:.{digits - 1}e}")
    if not lo <= value < hi:
        value = centre
    return value


def snr(n: int, model: SnrModel = SnrModel()) -> float:
    """SNR in dB of the weakest (longest-path) signal for the first ``n`` primes."""
    if n < 1:
        raise ValueError("N must be >= 1")
    return model.weakest_path_db(n, sum(first_primes(n))) + model.offset_db


def snr_for_instance(instance: SSPInstance, model: SnrModel = SnrModel()) -> float:
    return model.weakest_path_db(instance.size, instance.total) + model.offset_db


def fisher_info(theta: float) -> float:
    """Fisher information of one Bernoulli(theta) trial."""
    _check_theta(theta)
    return 1.0 / (theta * (1.0 - theta))


def variance_bound(theta: float, trials: int) -> float:
    """Cramér–Rao lower bound on Var(theta_hat) from ``trials`` independent trials."""
    _check_theta(theta)
    if trials < 1:
        raise ValueError("need at least one trial")
    return theta * (1.0 - theta) / trials


def theta_of_N(n: int, model: SnrModel = SnrModel()) -> float:
    """Arrival probability at the longest-path port, 10**(F(N)/10)."""
    f_db = model.weakest_path_db(n, sum(first_primes(n)))
    theta = 10.0 ** (f_db / 10.0)
    _check_theta(theta)
    return theta


def _check_theta(theta: float) -> None:
    if not 0.0 < theta < 1.0:
        raise ThetaOutOfRange(f"theta={theta} is not a probability in (0, 1)")


@dataclass(frozen=True)
class RaceRow:
    n: int
    photonic_s: float
    molecular_s: float
    electronic_s: dict[str, float]


def race_table(n_values: Iterable[int], geom: GeometryParams,
               electronics: Iterable[ElectronicModel],
               photon: CarrierModel = PHOTON, molecule: CarrierModel = ACTIN,
               ) -> list[RaceRow]:
    electronics = list(electronics)
    rows = []
    for n in n_values:
        inst = successive_primes_instance(n)
        rows.append(RaceRow(
            n=n,
            photonic_s=photonic_time(inst, geom, photon),
            molecular_s=photonic_time(inst, geom, molecule),
            electronic_s={m.name: electronic_time(n, m) for m in electronics},
        ))
    return rows


def crossovers(geom: GeometryParams, electronics: Iterable[ElectronicModel],
               carrier: CarrierModel = PHOTON) -> dict[str, Optional[int]]:
    out: dict[str, Optional[int]] = {}
    for m in electronics:
        try:
            out[m.name] = crossover(geom, carrier, m)
        except NoCrossover:
            out[m.name] = None
    return out
