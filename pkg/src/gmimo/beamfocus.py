"""Matched-filter beamfocusing and beampattern evaluation.

Weights conjugate the spherical-wave steering phases of a focal point;
the resulting transmit gain is normalized to [0, 1] so a perfect phase
match scores 1.  The depth-of-focus metric turns the spotlight-vs-cone
distinction into a number: the along-bearing extent of the half-power
region around the focal point, reported as unbounded when that region
runs off the evaluated grid.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .geometry import ArrayGeometry
from .grids import SpatialGrid
from .wavefield import nearfield_steering

__all__ = [
    "focus_weights",
    "gain_at",
    "beampattern",
    "depth_of_focus",
    "default_pattern_axes",
]

HALF_POWER = 0.5
_ROW_CHUNK = 32


def default_pattern_axes(step: float = 0.25):
    """Default evaluation grid: x in [-50, 50] m, y in [0, 100] m."""
    x = np.arange(-50.0, 50.0 + step / 2, step)
    y = np.arange(0.0, 100.0 + step / 2, step)
    return x, y


def focus_weights(geometry: ArrayGeometry, focal_point) -> np.ndarray:
    """Unit-norm transmit weights focusing on a 3-D point.

    w = conj(a(focal_point)) / ||a(focal_point)||, so each element
    pre-compensates its propagation phase toward the focal point.
    """
    a = nearfield_steering(geometry, focal_point)
    return np.conj(a) / np.linalg.norm(a)


def gain_at(geometry: ArrayGeometry, weights: np.ndarray, point) -> float:
    """Relative transmit gain |sum_m w_m a_m(point)|^2 / N in [0, 1].

    The field radiated by weights w at a point with steering vector a
    is a^T w; normalizing by the element count N makes the self-matched
    focal point score exactly 1 (Cauchy-Schwarz bound).
    """
    weights = np.asarray(weights)
    n = geometry.n_elements
    if weights.shape != (n,):
        raise ValueError(f"weights length {weights.shape} does not match {n} elements")
    a = nearfield_steering(geometry, point)
    return float(np.abs(np.dot(weights, a)) ** 2 / n)


def _gain_rows(geometry: ArrayGeometry, weights: np.ndarray, x: np.ndarray, y: np.ndarray):
    """Gains for the block of grid rows y (vectorized over all cells)."""
    pos = geometry.element_positions
    lam = geometry.wavelength
    # (ny, nx, n_elem) distances from every cell to every element
    px = x[None, :, None] - pos[None, None, :, 0]
    py = y[:, None, None] - pos[None, None, :, 1]
    pz = pos[None, None, :, 2]
    dists = np.sqrt(px * px + py * py + pz * pz)
    cx, cy, cz = geometry.centroid
    d_ref = np.sqrt((x[None, :] - cx) ** 2 + (y[:, None] - cy) ** 2 + cz * cz)
    a = np.exp(-2j * np.pi * (dists - d_ref[:, :, None]) / lam)
    field = a @ weights
    return np.abs(field) ** 2 / geometry.n_elements


def beampattern(
    geometry: ArrayGeometry,
    focal_point,
    x_axis: Optional[np.ndarray] = None,
    y_axis: Optional[np.ndarray] = None,
    threads: int = 1,
) -> SpatialGrid:
    """Relative beamforming gain over a z=0 grid for a focal point.

    Grid rows are evaluated in independent chunks (optionally on a
    thread pool) and reassembled in order, so results are deterministic
    regardless of ``threads``.
    """
    if x_axis is None or y_axis is None:
        dx, dy = default_pattern_axes()
        x_axis = dx if x_axis is None else np.asarray(x_axis, dtype=float)
        y_axis = dy if y_axis is None else np.asarray(y_axis, dtype=float)
    else:
        x_axis = np.asarray(x_axis, dtype=float)
        y_axis = np.asarray(y_axis, dtype=float)
    weights = focus_weights(geometry, focal_point)
    chunks = [y_axis[i : i + _ROW_CHUNK] for i in range(0, y_axis.size, _ROW_CHUNK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda yc: _gain_rows(geometry, weights, x_axis, yc), chunks))
    else:
        parts = [_gain_rows(geometry, weights, x_axis, yc) for yc in chunks]
    values = np.vstack(parts)
    # clip float noise just above the Cauchy-Schwarz bound
    np.clip(values, 0.0, 1.0, out=values)
    return SpatialGrid(x_axis, y_axis, values)


def depth_of_focus(grid: SpatialGrid, focal_point) -> float:
    """Length in meters of the half-power interval along the focal bearing.

    The bearing is the grid column through the focal point (the focal x
    must lie on the x axis).  Returns ``math.inf`` when the contiguous
    gain >= 0.5 interval containing the focal point reaches the grid
    edge, i.e. the focus has no finite depth on this grid.
    """
    focal_point = np.asarray(focal_point, dtype=float)
    ix_candidates = np.where(np.isclose(grid.x_axis, focal_point[0], atol=1e-9))[0]
    if ix_candidates.size == 0:
        raise ValueError("focal point does not lie on a grid x line")
    ix = int(ix_candidates[0])
    y = grid.y_axis
    if not (y.min() <= focal_point[1] <= y.max()):
        raise ValueError("focal point lies outside the grid y range")
    iy = int(np.argmin(np.abs(y - focal_point[1])))
    profile = grid.values[:, ix]
    if profile[iy] < HALF_POWER:
        return 0.0
    lo = iy
    while lo > 0 and profile[lo - 1] >= HALF_POWER:
        lo -= 1
    hi = iy
    while hi < y.size - 1 and profile[hi + 1] >= HALF_POWER:
        hi += 1
    if lo == 0 or hi == y.size - 1:
        return math.inf
    return float(abs(y[hi] - y[lo]))
