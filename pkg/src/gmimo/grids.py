"""Shared 2-D grid container for beam gains and pseudo-spectra."""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SpatialGrid"]


@dataclass(frozen=True)
class SpatialGrid:
    """Nonnegative scalar field sampled on a rectangular grid.

    values[i, j] belongs to (y_axis[i], x_axis[j]); both axes must be
    strictly monotone with at least two samples.  Axis names record the
    physical meaning (meters for beampatterns, azimuth/range for
    localization spectra).
    """

    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    x_name: str = "x_m"
    y_name: str = "y_m"

    def __post_init__(self):
        x = np.asarray(self.x_axis, dtype=float)
        y = np.asarray(self.y_axis, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or y.ndim != 1 or x.size < 2 or y.size < 2:
            raise ValueError("grid axes must be 1-D with at least two samples")
        dx, dy = np.diff(x), np.diff(y)
        if not (np.all(dx > 0) or np.all(dx < 0)):
            raise ValueError("x_axis must be strictly monotone")
        if not (np.all(dy > 0) or np.all(dy < 0)):
            raise ValueError("y_axis must be strictly monotone")
        if v.shape != (y.size, x.size):
            raise ValueError(f"values shape {v.shape} does not match (len(y), len(x))")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        if np.any(v < 0):
            raise ValueError("grid values must be nonnegative")
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "y_axis", y)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape
