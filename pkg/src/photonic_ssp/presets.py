"""Named model presets shipped in ``data/presets.json``.

The electronic FLOPS values are not measured machine figures. They were
calibrated once with :func:`photonic_ssp.performance.calibrate_flops` against
the default geometry so that the successive-primes crossovers fall at
N = 6 (cpu), 12 (gpu) and 28 (super); ``calibrated_crossover`` records the
target used for each.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

from .errors import UnknownPreset
from .performance import CarrierModel, ElectronicModel, GeometryParams, SnrModel
from .propagation import OpticalParams

ELECTRONIC_ORDER = ("cpu", "gpu", "super")


@lru_cache(maxsize=1)
def _load() -> str:
    return resources.files("photonic_ssp").joinpath("data/presets.json").read_text()


def load_presets() -> dict[str, Any]:
    # fresh copy each call so callers may mutate freely
    return json.loads(_load())


def _section(name: str) -> dict[str, Any]:
    return load_presets()[name]


def optical_preset(name: str) -> OpticalParams:
    table = _section("optical")
    if name not in table:
        raise UnknownPreset(f"unknown optical preset {name!r}; choose from {sorted(table)}")
    return OpticalParams.from_dict(table[name])


def optical_preset_names() -> list[str]:
    return sorted(_section("optical"))


def default_geometry() -> GeometryParams:
    return GeometryParams(**_section("geometry"))


def carrier(name: str) -> CarrierModel:
    table = _section("carriers")
    if name not in table:
        raise UnknownPreset(f"unknown carrier {name!r}; choose from {sorted(table)}")
    return CarrierModel(name, table[name]["speed_mm_per_s"])


def electronic_models() -> list[ElectronicModel]:
    table = _section("electronics")
    names = [n for n in ELECTRONIC_ORDER if n in table] + sorted(set(table) - set(ELECTRONIC_ORDER))
    return [
        ElectronicModel(n, table[n]["flops"], table[n].get("ops_per_subset_coefficient", 1.0))
        for n in names
    ]


def calibration_targets() -> dict[str, int]:
    return {n: v["calibrated_crossover"] for n, v in _section("electronics").items()
            if "calibrated_crossover" in v}


def snr_model(input_power: float = 1.0, noise_power: float = 1.0) -> SnrModel:
    s = _section("snr")
    return SnrModel(c1=s["c1"], c2=s["c2"], input_power=input_power, noise_power=noise_power)
