"""Rendering of experiment figures as in-memory PNG images.

Every function returns the encoded PNG bytes so the caller can decide
where (and whether) to put them on disk.  The Agg backend is forced
before pyplot is imported, so rendering works without a display.
"""

import io
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .grids import SpatialGrid  # noqa: E402

__all__ = [
    "scale_figure",
    "beamfocus_figure",
    "music_figure",
    "capacity_figure",
    "linkbudget_figure",
]

_DPI = 130


def _to_png(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def scale_figure(
    frequencies_hz: Sequence[float],
    multipliers: Sequence[float],
    factors: np.ndarray,
    elements_per_side: Sequence[int],
    baseline_hz: float,
) -> bytes:
    """Antenna scaling factor and element count versus carrier frequency.

    ``factors`` has shape (len(frequencies), len(multipliers)).
    """
    f_ghz = np.asarray(frequencies_hz, dtype=float) / 1e9
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for j, k in enumerate(multipliers):
        ax1.plot(f_ghz, factors[:, j], marker="o", label=f"UE antennas x{k:g}")
    ax1.set_xlabel("carrier frequency [GHz]")
    ax1.set_ylabel(f"BS antenna factor vs {baseline_hz / 1e9:g} GHz")
    ax1.grid(True, alpha=0.3)
    ax1.legend(fontsize=8)
    ax2.plot(f_ghz, elements_per_side, marker="s", color="tab:red")
    ax2.set_xlabel("carrier frequency [GHz]")
    ax2.set_ylabel("elements per aperture side")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    return _to_png(fig)


def beamfocus_figure(
    grid: SpatialGrid,
    element_xy: np.ndarray,
    focal_xy: Tuple[float, float],
) -> bytes:
    """Normalized gain map with the array elements and the focal point."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    extent = (grid.x_axis[0], grid.x_axis[-1], grid.y_axis[0], grid.y_axis[-1])
    im = ax.imshow(
        grid.values,
        origin="lower",
        extent=extent,
        aspect="auto",
        cmap="inferno",
        vmin=0.0,
        vmax=1.0,
    )
    fig.colorbar(im, ax=ax, label="normalized gain")
    ax.plot(element_xy[:, 0], element_xy[:, 1], ".", color="cyan", ms=2, label="elements")
    ax.plot(focal_xy[0], focal_xy[1], "wx", ms=9, mew=2, label="focal point")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return _to_png(fig)


def music_figure(
    grid: SpatialGrid,
    truth: List[Tuple[float, float]],
    peaks: List[Tuple[float, float]],
) -> bytes:
    """Pseudo-spectrum in dB over (azimuth, range) with truth and peaks.

    ``grid`` carries azimuth in radians; the plot shows degrees.
    """
    az_deg = np.degrees(grid.x_axis)
    floor_db = -50.0
    level = 10.0 * np.log10(np.maximum(grid.values, 10.0 ** (floor_db / 10.0)))
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    extent = (az_deg[0], az_deg[-1], grid.y_axis[0], grid.y_axis[-1])
    im = ax.imshow(
        level, origin="lower", extent=extent, aspect="auto", cmap="viridis", vmin=floor_db, vmax=0.0
    )
    fig.colorbar(im, ax=ax, label="pseudo-spectrum [dB]")
    if truth:
        t = np.asarray(truth)
        ax.plot(t[:, 0], t[:, 1], "wx", ms=9, mew=2, label="true sources")
    if peaks:
        p = np.asarray(peaks)
        ax.plot(p[:, 0], p[:, 1], "o", mfc="none", mec="red", ms=10, mew=1.5, label="peaks")
    ax.set_xlabel("azimuth [deg]")
    ax.set_ylabel("range [m]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return _to_png(fig)


def capacity_figure(
    rate_curves: Dict[str, Tuple[np.ndarray, np.ndarray]],
    stream_curves: Dict[str, Tuple[np.ndarray, np.ndarray]],
) -> bytes:
    """Empirical CDFs of per-user rate and stream count, one line per band."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for name, (rates, fracs) in rate_curves.items():
        ax1.semilogx(np.maximum(rates, 1.0) / 1e9, fracs, label=name)
    ax1.set_xlabel("per-user rate [Gbit/s]")
    ax1.set_ylabel("CDF")
    ax1.grid(True, which="both", alpha=0.3)
    ax1.legend(fontsize=8)
    for name, (streams, fracs) in stream_curves.items():
        ax2.step(streams, fracs, where="post", label=name)
    ax2.set_xlabel("active streams per user")
    ax2.set_ylabel("CDF")
    ax2.grid(True, alpha=0.3)
    ax2.legend(fontsize=8)
    fig.tight_layout()
    return _to_png(fig)


def linkbudget_figure(distances_m: Sequence[float], snr_db: Sequence[float]) -> bytes:
    """Post-combining SNR versus link distance on a log distance axis."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(distances_m, snr_db, marker="o")
    ax.set_xlabel("distance [m]")
    ax.set_ylabel("SNR [dB]")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _to_png(fig)
