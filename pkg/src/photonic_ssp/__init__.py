"""Photonic subset-sum computer: network compiler, intensity simulator and race models."""

__version__ = "0.1.0"

from .errors import (
    CountOverflow,
    InstanceTooLarge,
    InvalidParams,
    MissingTarget,
    NoCrossover,
    NonPositiveElement,
    SSPError,
    TargetOutOfRange,
    ThetaOutOfRange,
    UnknownPreset,
)
from .network import (
    JunctionKind,
    JunctionNetwork,
    NetworkStats,
    Node,
    build_network,
    export_network,
    import_network,
    network_stats,
)
from .propagation import (
    IntensityDistribution,
    NoiseModel,
    OpticalParams,
    apply_noise,
    lossless_reference,
    propagate,
    propagate_graph,
)
from .readout import DecisionReport, ThresholdBand, classify, max_reliable_size, tolerance_band
from .ssp_core import (
    SSPInstance,
    SubsetCountTable,
    count_subsets_dp,
    decide,
    enumerate_subsets,
    parse_instance,
)
