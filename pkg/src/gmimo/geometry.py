"""Array geometries and closed-form antenna scaling laws.

Builds uniform linear arrays and distributed subarray layouts, and
evaluates the frequency-scaling arithmetic for element counts, base
station antenna factors, beamwidths, Fraunhofer distance, and peak
rates.

Coordinate convention used throughout the toolkit: arrays lie in the
z=0 plane, the default array axis is x, and broadside is +y.

Aperture convention: an element occupies a lambda/2 footprint, so the
aperture of an n-element half-wavelength ULA is n*lambda/2 (not the
(n-1)*lambda/2 position span).  A single element has zero aperture.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .constants import SPEED_OF_LIGHT

__all__ = [
    "ArrayGeometry",
    "BandPlan",
    "CANDIDATE_BANDS",
    "elements_per_side",
    "build_ula",
    "build_distributed",
    "fraunhofer_distance",
    "bs_antenna_scaling_factor",
    "beamwidth_ratio",
    "peak_rate",
    "required_spectral_efficiency",
]

MIN_SPACING_FACTOR = 0.45
"Minimum intra-subarray element spacing in wavelengths (half-wavelength design, 10% slack)."


@dataclass(frozen=True)
class ArrayGeometry:
    """Element positions of one (possibly distributed) antenna array.

    element_positions : (n, 3) float array of coordinates in meters.
    carrier_frequency : carrier in Hz; fixes the wavelength.
    ports_per_element : 1, or 2 for dual-polarized elements.  Ports share
        the element position; only port-count arithmetic changes.
    subarray_index : per-element integer label grouping elements into
        phase-coherent subarrays.
    """

    element_positions: np.ndarray
    carrier_frequency: float
    ports_per_element: int = 1
    subarray_index: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.element_positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"element_positions must be (n, 3), got {pos.shape}")
        if pos.shape[0] < 1:
            raise ValueError("array needs at least one element")
        if not np.all(np.isfinite(pos)):
            raise ValueError("element positions must be finite")
        if not (self.carrier_frequency > 0 and math.isfinite(self.carrier_frequency)):
            raise ValueError("carrier_frequency must be positive and finite")
        if self.ports_per_element not in (1, 2):
            raise ValueError("ports_per_element must be 1 or 2")
        idx = self.subarray_index
        if idx is None:
            idx = np.zeros(pos.shape[0], dtype=int)
        else:
            idx = np.asarray(idx, dtype=int)
            if idx.shape != (pos.shape[0],):
                raise ValueError("subarray_index must have one label per element")
        object.__setattr__(self, "element_positions", pos)
        object.__setattr__(self, "subarray_index", idx)
        self._check_spacing()

    def _check_spacing(self):
        lam = self.wavelength
        for label in np.unique(self.subarray_index):
            sub = self.element_positions[self.subarray_index == label]
            if sub.shape[0] < 2:
                continue
            d = np.linalg.norm(sub[:, None, :] - sub[None, :, :], axis=-1)
            d_min = np.min(d[np.triu_indices(sub.shape[0], k=1)])
            if d_min < MIN_SPACING_FACTOR * lam:
                raise ValueError(
                    f"subarray {label}: minimum element spacing {d_min:.4g} m is below "
                    f"{MIN_SPACING_FACTOR} wavelengths ({MIN_SPACING_FACTOR * lam:.4g} m)"
                )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def n_elements(self) -> int:
        return self.element_positions.shape[0]

    @property
    def n_ports(self) -> int:
        return self.n_elements * self.ports_per_element

    @property
    def n_subarrays(self) -> int:
        return int(np.unique(self.subarray_index).size)

    @property
    def centroid(self) -> np.ndarray:
        return self.element_positions.mean(axis=0)

    @property
    def aperture(self) -> float:
        """Global aperture in meters under the element-footprint convention.

        Largest pairwise element distance plus one lambda/2 footprint;
        a lone element has zero aperture.
        """
        n = self.n_elements
        if n == 1:
            return 0.0
        pos = self.element_positions
        d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        return float(d.max()) + self.wavelength / 2.0


@dataclass(frozen=True)
class BandPlan:
    """One candidate carrier band: name plus band edges in Hz."""

    name: str
    low: float
    high: float

    def __post_init__(self):
        if not self.high > self.low:
            raise ValueError(f"band {self.name}: high edge must exceed low edge")

    @property
    def bandwidth(self) -> float:
        return self.high - self.low

    @property
    def center(self) -> float:
        return 0.5 * (self.low + self.high)


CANDIDATE_BANDS: Tuple[BandPlan, ...] = (
    BandPlan("4.4-4.8GHz", 4.4e9, 4.8e9),
    BandPlan("7.125-8.4GHz", 7.125e9, 8.4e9),
    BandPlan("7.75-8.4GHz", 7.75e9, 8.4e9),
    BandPlan("14.8-15.35GHz", 14.8e9, 15.35e9),
)
"Candidate upper mid-band allocations (the 7-8.4 GHz band has two regional variants)."


def elements_per_side(aperture_length: float, carrier_frequency: float) -> int:
    """Number of half-wavelength-spaced elements fitting along one side.

    Fixed counting rule floor(L / (lambda/2)).
    """
    if aperture_length <= 0:
        raise ValueError("aperture_length must be positive")
    if carrier_frequency <= 0:
        raise ValueError("carrier_frequency must be positive")
    half_wavelength = SPEED_OF_LIGHT / carrier_frequency / 2.0
    return int(math.floor(aperture_length / half_wavelength))


def build_ula(
    n: int,
    carrier_frequency: float,
    center: Sequence[float] = (0.0, 0.0, 0.0),
    axis: Sequence[float] = (1.0, 0.0, 0.0),
    ports_per_element: int = 1,
) -> ArrayGeometry:
    """Uniform linear array of ``n`` elements at exactly lambda/2 spacing.

    Elements are centered on ``center`` along the unit vector ``axis``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise ValueError("axis must be a nonzero vector")
    axis = axis / norm
    lam = SPEED_OF_LIGHT / carrier_frequency
    offsets = (np.arange(n) - (n - 1) / 2.0) * (lam / 2.0)
    positions = np.asarray(center, dtype=float)[None, :] + offsets[:, None] * axis[None, :]
    return ArrayGeometry(positions, carrier_frequency, ports_per_element=ports_per_element)


def build_distributed(
    subarray_specs: Sequence[Tuple[int, Sequence[float]]],
    carrier_frequency: float,
    axis: Sequence[float] = (1.0, 0.0, 0.0),
    ports_per_element: int = 1,
) -> ArrayGeometry:
    """Concatenate half-wavelength ULA subarrays into one coherent array.

    ``subarray_specs`` is a list of (element_count, center) pairs; each
    subarray is a ULA along ``axis``.  Subarrays must not overlap: any
    inter-subarray element spacing below lambda/2 is rejected.
    """
    if len(subarray_specs) == 0:
        raise ValueError("need at least one subarray")
    centers = [np.asarray(c, dtype=float) for _, c in subarray_specs]
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if np.allclose(centers[i], centers[j]):
                raise ValueError(f"subarray centers {i} and {j} coincide")
    lam = SPEED_OF_LIGHT / carrier_frequency
    blocks = []
    labels = []
    for label, (n, center) in enumerate(subarray_specs):
        sub = build_ula(n, carrier_frequency, center=center, axis=axis)
        blocks.append(sub.element_positions)
        labels.append(np.full(n, label, dtype=int))
    positions = np.vstack(blocks)
    labels = np.concatenate(labels)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            d = np.linalg.norm(blocks[i][:, None, :] - blocks[j][None, :, :], axis=-1)
            if d.min() < lam / 2.0:
                raise ValueError(
                    f"subarrays {i} and {j} overlap: element spacing {d.min():.4g} m "
                    f"is below lambda/2 ({lam / 2.0:.4g} m)"
                )
    return ArrayGeometry(
        positions, carrier_frequency, ports_per_element=ports_per_element, subarray_index=labels
    )


def fraunhofer_distance(geometry: ArrayGeometry) -> float:
    """Far-field boundary 2 D^2 / lambda for the global aperture D."""
    d = geometry.aperture
    return 2.0 * d * d / geometry.wavelength


def bs_antenna_scaling_factor(f_c: float, f_0: float, ue_antenna_multiplier: float = 1.0) -> float:
    """Base-station antenna-count factor keeping free-space pathloss fixed.

    Growing the element count as (f_c/f_0)^2 keeps the array area product
    constant relative to lambda^2; a terminal with k times the baseline
    antenna count shoulders a k-th of that growth.
    """
    if f_c <= 0 or f_0 <= 0:
        raise ValueError("frequencies must be positive")
    if ue_antenna_multiplier < 1:
        raise ValueError("ue_antenna_multiplier must be >= 1")
    return (f_c / f_0) ** 2 / ue_antenna_multiplier


def beamwidth_ratio(f_c: float, f_0: float) -> float:
    """Factor by which the half-power beamwidth shrinks at fixed aperture."""
    if f_c <= 0 or f_0 <= 0:
        raise ValueError("frequencies must be positive")
    return f_c / f_0


def peak_rate(bits_per_symbol: float, dof: int, bandwidth: float) -> float:
    """Theoretical peak rate in bit/s: modulation rate x spatial streams x bandwidth."""
    if bits_per_symbol <= 0 or dof <= 0 or bandwidth <= 0:
        raise ValueError("all peak-rate factors must be positive")
    return bits_per_symbol * dof * bandwidth


def required_spectral_efficiency(target_rate: float, bandwidth: float) -> float:
    """Spectral efficiency in bit/s/Hz needed for ``target_rate`` over ``bandwidth``."""
    if target_rate <= 0 or bandwidth <= 0:
        raise ValueError("rate and bandwidth must be positive")
    return target_rate / bandwidth
