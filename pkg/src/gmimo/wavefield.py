"""Array response vectors and free-space link budgets.

Spherical-wavefront (near-field) and planar (far-field) steering
vectors for an :class:`~gmimo.geometry.ArrayGeometry`, the aperture
form of the Friis received-power law, and thermal-noise SNR.

Steering model is phase-only: every entry has unit modulus, and phases
are referenced to the geometry centroid.  Positions follow the package
convention (array near the x-axis, broadside +y, azimuth measured from
broadside toward +x).
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN, REFERENCE_TEMPERATURE_K
from .geometry import ArrayGeometry

__all__ = [
    "PolarPosition",
    "LinkBudget",
    "friis_received_power",
    "nearfield_steering",
    "farfield_steering",
    "snr",
]


@dataclass(frozen=True)
class PolarPosition:
    """Source position as (azimuth, range) in the azimuth plane.

    azimuth : radians in the open interval (-pi/2, pi/2), zero at broadside.
    range_m : distance from the array reference point, > 0.
    """

    azimuth: float
    range_m: float

    def __post_init__(self):
        if not (self.range_m > 0 and math.isfinite(self.range_m)):
            raise ValueError("range_m must be positive and finite")
        if not (-math.pi / 2 < self.azimuth < math.pi / 2):
            raise ValueError("azimuth must lie in (-pi/2, pi/2)")

    def to_cartesian(self, reference=(0.0, 0.0, 0.0)) -> np.ndarray:
        """3-D point at this azimuth/range from ``reference`` in the z=0 plane."""
        ref = np.asarray(reference, dtype=float)
        return ref + self.range_m * np.array(
            [math.sin(self.azimuth), math.cos(self.azimuth), 0.0]
        )


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power, bandwidth and receiver noise description of one link."""

    tx_power: float
    bandwidth: float
    noise_figure_db: float = 0.0
    noise_psd: float = BOLTZMANN * REFERENCE_TEMPERATURE_K

    def __post_init__(self):
        if self.tx_power <= 0 or self.bandwidth <= 0 or self.noise_psd <= 0:
            raise ValueError("tx_power, bandwidth and noise_psd must be positive")

    @property
    def noise_power(self) -> float:
        """Receiver noise power N = PSD * 10^(NF/10) * B in watts."""
        return self.noise_psd * 10.0 ** (self.noise_figure_db / 10.0) * self.bandwidth

    def snr(self, received_power: float) -> float:
        if received_power < 0:
            raise ValueError("received_power must be nonnegative")
        return received_power / self.noise_power


def friis_received_power(p_t: float, a_t: float, a_r: float, d: float, wavelength: float) -> float:
    """Free-space received power P_t * A_t * A_r / (d * lambda)^2.

    Aperture form of the Friis law: at fixed effective areas the
    received power grows quadratically with the carrier frequency.
    """
    if p_t <= 0 or a_t <= 0 or a_r <= 0:
        raise ValueError("powers and areas must be positive")
    if d <= 0 or wavelength <= 0:
        raise ValueError("distance and wavelength must be positive")
    return p_t * a_t * a_r / (d * wavelength) ** 2


def nearfield_steering(geometry: ArrayGeometry, source) -> np.ndarray:
    """Spherical-wavefront steering vector for a 3-D source point.

    Entry m is exp(-j 2 pi (d_m - d_ref) / lambda) with d_m the
    element-to-source distance and d_ref the centroid-to-source
    distance.  Unit modulus per entry.
    """
    source = np.asarray(source, dtype=float)
    if source.shape != (3,):
        raise ValueError(f"source must be a 3-D point, got shape {source.shape}")
    dists = np.linalg.norm(geometry.element_positions - source[None, :], axis=1)
    if np.any(dists == 0.0):
        raise ValueError("source coincides with an array element")
    d_ref = np.linalg.norm(geometry.centroid - source)
    return np.exp(-2j * np.pi * (dists - d_ref) / geometry.wavelength)


def farfield_steering(geometry: ArrayGeometry, azimuth: float) -> np.ndarray:
    """Planar-wavefront steering vector for a far-field azimuth.

    Entry m is exp(-j 2 pi / lambda * <p_m - centroid, u>) with u the
    unit propagation direction of a wave arriving from ``azimuth``.
    Matches the limit of :func:`nearfield_steering` as range grows.
    """
    u_prop = -np.array([math.sin(azimuth), math.cos(azimuth), 0.0])
    offsets = geometry.element_positions - geometry.centroid[None, :]
    phase = 2.0 * np.pi / geometry.wavelength * (offsets @ u_prop)
    return np.exp(-1j * phase)


def snr(
    received_power: float,
    bandwidth: float,
    noise_figure_db: float = 0.0,
    noise_psd: float = BOLTZMANN * REFERENCE_TEMPERATURE_K,
) -> float:
    """Linear SNR of ``received_power`` against thermal noise over ``bandwidth``."""
    if received_power < 0:
        raise ValueError("received_power must be nonnegative")
    if bandwidth <= 0 or noise_psd <= 0:
        raise ValueError("bandwidth and noise_psd must be positive")
    return received_power / (noise_psd * 10.0 ** (noise_figure_db / 10.0) * bandwidth)
