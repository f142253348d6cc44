"""Desk-scale simulation toolkit for upper mid-band gigantic MIMO.

The package covers four connected study areas: antenna scaling laws
across carrier frequencies, near-field beamfocusing with collocated or
distributed arrays, subspace source localization, and multi-user
spatial multiplexing with zero-interference precoding.  Every
stochastic routine takes an explicit seed and is bit-reproducible.
"""

from .version import __version__
from .constants import BOLTZMANN, REFERENCE_TEMPERATURE_K, SPEED_OF_LIGHT
from .geometry import (
    ArrayGeometry,
    BandPlan,
    CANDIDATE_BANDS,
    beamwidth_ratio,
    bs_antenna_scaling_factor,
    build_distributed,
    build_ula,
    elements_per_side,
    fraunhofer_distance,
    peak_rate,
    required_spectral_efficiency,
)
from .grids import SpatialGrid
from .wavefield import (
    LinkBudget,
    PolarPosition,
    farfield_steering,
    friis_received_power,
    nearfield_steering,
    snr,
)
from .beamfocus import beampattern, depth_of_focus, focus_weights, gain_at
from .localize import (
    MusicResult,
    SnapshotSet,
    generate_snapshots,
    music_spectrum,
    resolve_check,
    sample_covariance,
)
from .mumimo import (
    ChannelSet,
    PrecodingSolution,
    block_diagonalize,
    evaluate,
    generate_channels,
    rate_cdf,
    waterfill,
)
from .config import ScenarioConfig, ConfigError, parse_config, serialize_config

__all__ = [
    "__version__",
    "BOLTZMANN",
    "REFERENCE_TEMPERATURE_K",
    "SPEED_OF_LIGHT",
    "ArrayGeometry",
    "BandPlan",
    "CANDIDATE_BANDS",
    "beamwidth_ratio",
    "bs_antenna_scaling_factor",
    "build_distributed",
    "build_ula",
    "elements_per_side",
    "fraunhofer_distance",
    "peak_rate",
    "required_spectral_efficiency",
    "SpatialGrid",
    "LinkBudget",
    "PolarPosition",
    "farfield_steering",
    "friis_received_power",
    "nearfield_steering",
    "snr",
    "beampattern",
    "depth_of_focus",
    "focus_weights",
    "gain_at",
    "MusicResult",
    "SnapshotSet",
    "generate_snapshots",
    "music_spectrum",
    "resolve_check",
    "sample_covariance",
    "ChannelSet",
    "PrecodingSolution",
    "block_diagonalize",
    "evaluate",
    "generate_channels",
    "rate_cdf",
    "waterfill",
    "ScenarioConfig",
    "ConfigError",
    "parse_config",
    "serialize_config",
]
