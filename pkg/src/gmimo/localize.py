"""Near-field source localization with subspace pseudo-spectra.

Synthesizes array snapshots for point sources, forms the sample
covariance, and scans a polar (azimuth, range) grid with the classic
noise-subspace pseudo-spectrum 1 / ||E_n^H a||^2.  Spherical-wave
steering makes range observable whenever the array aperture puts the
sources inside the radiative near field.

Detected peaks are local maxima of the normalized spectrum; the
resolve check turns a localization figure into a pass/fail answer by
matching peaks one-to-one against ground truth within tolerances.
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import numerics
from .geometry import ArrayGeometry
from .grids import SpatialGrid
from .wavefield import PolarPosition, nearfield_steering

__all__ = [
    "SnapshotSet",
    "MusicResult",
    "generate_snapshots",
    "sample_covariance",
    "music_spectrum",
    "resolve_check",
    "default_azimuth_grid",
    "default_range_grid",
]

PEAK_THRESHOLD = 0.3
"Local maxima below this fraction of the spectrum peak are discarded."

PEAK_SEPARATION_CELLS = 2
"Minimum Chebyshev index distance between two detected peaks."


def default_azimuth_grid() -> np.ndarray:
    """Azimuth scan from -60 to +60 degrees in 0.25 degree steps (radians)."""
    return np.deg2rad(np.arange(-60.0, 60.0 + 0.125, 0.25))


def default_range_grid() -> np.ndarray:
    """Range scan from 10 to 100 m in 0.5 m steps."""
    return np.arange(10.0, 100.0 + 0.25, 0.5)


@dataclass(frozen=True)
class SnapshotSet:
    """Complex baseband snapshots, one column per sampling instant."""

    snapshots: np.ndarray
    noise_variance: float
    rng_seed: int

    def __post_init__(self):
        x = np.asarray(self.snapshots, dtype=np.complex128)
        if x.ndim != 2 or x.shape[1] < 1:
            raise ValueError("snapshots must be (elements, T) with T >= 1")
        if not np.all(np.isfinite(x.real)) or not np.all(np.isfinite(x.imag)):
            raise ValueError("snapshots must be finite")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be nonnegative")
        object.__setattr__(self, "snapshots", x)

    @property
    def n_snapshots(self) -> int:
        return self.snapshots.shape[1]


@dataclass(frozen=True)
class MusicResult:
    """Normalized pseudo-spectrum with its detected peaks."""

    spectrum: SpatialGrid
    detected_peaks: List[PolarPosition]
    peak_values: List[float]
    model_order: int


def generate_snapshots(
    geometry: ArrayGeometry,
    sources: Sequence[PolarPosition],
    source_powers: Sequence[float],
    noise_variance: float,
    n_snapshots: int,
    seed: int,
) -> SnapshotSet:
    """Synthesize snapshots x(t) = sum_k s_k(t) a_k + n(t).

    Source symbols are circularly-symmetric complex Gaussian with the
    given per-source powers, mutually uncorrelated; noise is white with
    ``noise_variance`` per element.  Bit-identical for a fixed seed.
    """
    if len(sources) == 0:
        raise ValueError("need at least one source")
    if len(source_powers) != len(sources):
        raise ValueError("one power per source required")
    if n_snapshots < 1:
        raise ValueError("n_snapshots must be >= 1")
    powers = np.asarray(source_powers, dtype=float)
    if np.any(powers <= 0):
        raise ValueError("source powers must be positive")
    a = np.column_stack(
        [nearfield_steering(geometry, s.to_cartesian()) for s in sources]
    )
    rng = np.random.default_rng(seed)
    k, t = len(sources), n_snapshots
    symbols = (rng.standard_normal((k, t)) + 1j * rng.standard_normal((k, t))) / np.sqrt(2.0)
    symbols *= np.sqrt(powers)[:, None]
    n = geometry.n_elements
    noise = (rng.standard_normal((n, t)) + 1j * rng.standard_normal((n, t))) / np.sqrt(2.0)
    noise *= np.sqrt(noise_variance)
    return SnapshotSet(a @ symbols + noise, noise_variance, seed)


def sample_covariance(snapshots: SnapshotSet) -> np.ndarray:
    """Hermitian PSD sample covariance (1/T) X X^H."""
    x = snapshots.snapshots
    return x @ x.conj().T / snapshots.n_snapshots


def _steering_table(
    geometry: ArrayGeometry, azimuth_grid: np.ndarray, range_grid: np.ndarray
) -> np.ndarray:
    """Steering vectors for every (range, azimuth) cell, shape (n_elem, nr*na)."""
    az = azimuth_grid[None, :]
    rng_m = range_grid[:, None]
    px = (rng_m * np.sin(az)).ravel()
    py = (rng_m * np.cos(az)).ravel()
    pos = geometry.element_positions
    dx = px[None, :] - pos[:, 0, None]
    dy = py[None, :] - pos[:, 1, None]
    dz = pos[:, 2, None]
    dists = np.sqrt(dx * dx + dy * dy + dz * dz)
    cx, cy, _ = geometry.centroid
    d_ref = np.sqrt((px - cx) ** 2 + (py - cy) ** 2)
    return np.exp(-2j * np.pi * (dists - d_ref[None, :]) / geometry.wavelength)


def music_spectrum(
    covariance: np.ndarray,
    geometry: ArrayGeometry,
    model_order: int,
    azimuth_grid: Optional[np.ndarray] = None,
    range_grid: Optional[np.ndarray] = None,
) -> MusicResult:
    """Noise-subspace pseudo-spectrum over an (azimuth, range) grid.

    The noise subspace spans the eigenvectors of the N - K smallest
    covariance eigenvalues (K = ``model_order``); the spectrum value is
    1 / ||E_n^H a(az, r)||^2, normalized to a maximum of 1.  Up to K
    local maxima above the peak threshold are reported as peaks,
    greedily largest-first with a minimum grid separation.
    """
    azimuth_grid = default_azimuth_grid() if azimuth_grid is None else np.asarray(azimuth_grid, float)
    range_grid = default_range_grid() if range_grid is None else np.asarray(range_grid, float)
    cov = np.asarray(covariance, dtype=np.complex128)
    n = geometry.n_elements
    if cov.shape != (n, n):
        raise ValueError(f"covariance shape {cov.shape} does not match {n} elements")
    if not 1 <= model_order < n:
        raise ValueError("model_order must satisfy 1 <= K < N")
    eigenvalues, eigenvectors = numerics.hermitian_eig(cov)
    trace = float(np.sum(eigenvalues))
    if eigenvalues[-1] < -1e-8 * max(trace, 1e-300):
        raise ValueError("covariance is not positive semidefinite")
    noise_subspace = eigenvectors[:, model_order:]
    a = _steering_table(geometry, azimuth_grid, range_grid)
    denom = np.sum(np.abs(noise_subspace.conj().T @ a) ** 2, axis=0)
    denom = np.maximum(denom, np.finfo(float).tiny)
    spectrum = (1.0 / denom).reshape(range_grid.size, azimuth_grid.size)
    spectrum /= spectrum.max()
    grid = SpatialGrid(azimuth_grid, range_grid, spectrum, x_name="azimuth_rad", y_name="range_m")
    peaks, values = _detect_peaks(grid, model_order)
    return MusicResult(grid, peaks, values, model_order)


def _detect_peaks(grid: SpatialGrid, max_peaks: int) -> Tuple[List[PolarPosition], List[float]]:
    """8-neighbor local maxima above threshold, greedy with cell separation."""
    v = grid.values
    nr, na = v.shape
    padded = np.full((nr + 2, na + 2), -np.inf)
    padded[1:-1, 1:-1] = v
    is_max = np.ones_like(v, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor = padded[1 + di : 1 + di + nr, 1 + dj : 1 + dj + na]
            is_max &= v >= neighbor
    is_max &= v >= PEAK_THRESHOLD * v.max()
    cand = np.argwhere(is_max)
    order = np.argsort(v[cand[:, 0], cand[:, 1]])[::-1]
    selected: List[Tuple[int, int]] = []
    peaks: List[PolarPosition] = []
    values: List[float] = []
    for idx in order:
        i, j = int(cand[idx, 0]), int(cand[idx, 1])
        if any(max(abs(i - si), abs(j - sj)) < PEAK_SEPARATION_CELLS for si, sj in selected):
            continue
        selected.append((i, j))
        peaks.append(PolarPosition(float(grid.x_axis[j]), float(grid.y_axis[i])))
        values.append(float(v[i, j]))
        if len(peaks) == max_peaks:
            break
    return peaks, values


def resolve_check(
    result: MusicResult,
    truth: Sequence[PolarPosition],
    azimuth_tol: float,
    range_tol: float,
) -> bool:
    """True iff every true source matches a distinct detected peak.

    A match requires both |azimuth error| <= ``azimuth_tol`` (radians)
    and |range error| <= ``range_tol`` (meters); the pairing must be
    one-to-one.
    """
    if azimuth_tol <= 0 or range_tol <= 0:
        raise ValueError("tolerances must be positive")
    peaks = result.detected_peaks
    if len(peaks) < len(truth):
        return False
    ok = [
        [
            abs(p.azimuth - t.azimuth) <= azimuth_tol and abs(p.range_m - t.range_m) <= range_tol
            for p in peaks
        ]
        for t in truth
    ]
    for assignment in itertools.permutations(range(len(peaks)), len(truth)):
        if all(ok[t][p] for t, p in enumerate(assignment)):
            return True
    return False
