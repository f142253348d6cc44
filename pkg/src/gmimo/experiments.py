"""Experiment runners behind the command line interface.

Each runner turns a validated :class:`~gmimo.config.ScenarioConfig`
into a list of named artifacts (CSV tables, JSON summaries, PNG
figures), all built in memory first.  ``run_scenario`` then writes
them in one pass and finishes with a manifest.  If anything fails
mid-write, the partial files are removed so a run directory never
holds a half-finished result.

Numeric CSV cells are formatted with a fixed shortest-round-trip rule,
so rerunning the same configuration yields byte-identical tables.
"""

import json
import math
import os
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from . import beamfocus as bf
from . import geometry as geo
from . import localize as loc
from . import mumimo as mu
from . import report
from . import wavefield as wf
from .config import ScenarioConfig, build_geometry
from .constants import BOLTZMANN, REFERENCE_TEMPERATURE_K, SPEED_OF_LIGHT
from .version import __version__

__all__ = ["ComputeError", "OutputError", "RunResult", "run_scenario"]


class ComputeError(RuntimeError):
    """The simulation itself failed (singular input, non-convergence)."""


class OutputError(RuntimeError):
    """Artifacts could not be written to the output directory."""


@dataclass(frozen=True)
class RunResult:
    """Paths written by a run plus the manifest that describes them."""

    manifest: Dict[str, Any]
    paths: List[str]


Artifact = Tuple[str, bytes]


def _fmt(value: float) -> str:
    """Fixed decimal formatting shared by every CSV cell."""
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return format(float(value), ".12g")


def _csv(header: str, rows: List[List[Any]]) -> bytes:
    lines = [header]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _axis(minimum: float, maximum: float, step: float) -> np.ndarray:
    return np.arange(minimum, maximum + step / 2.0, step)


# ---------------------------------------------------------------------------
# scale


def _run_scale(params: Dict[str, Any], threads: int) -> List[Artifact]:
    prefix = params["output_prefix"]
    f0 = params["baseline_frequency_hz"]
    targets = params["target_frequencies_hz"]
    mults = params["ue_antenna_multipliers"]
    aperture = params["aperture_m"]

    sides = [geo.elements_per_side(aperture, f) for f in targets]
    factors = np.array(
        [[geo.bs_antenna_scaling_factor(f, f0, k) for k in mults] for f in targets]
    )
    rows = []
    for i, f in enumerate(targets):
        for j, k in enumerate(mults):
            rows.append(
                [f, k, factors[i, j], geo.beamwidth_ratio(f, f0), sides[i], sides[i] ** 2]
            )
    table = _csv(
        "carrier_frequency_hz,ue_antenna_multiplier,bs_antenna_factor,"
        "beamwidth_shrink_factor,elements_per_side,elements_total",
        rows,
    )

    pr = params["peak_rate"]
    rate = geo.peak_rate(pr["bits_per_symbol"], pr["dof"], pr["bandwidth_hz"])
    summary = {
        "baseline_frequency_hz": f0,
        "aperture_m": aperture,
        "peak_rate": {
            **pr,
            "rate_bps": rate,
            "spectral_efficiency_bps_per_hz": geo.required_spectral_efficiency(
                rate, pr["bandwidth_hz"]
            ),
        },
        "candidate_bands": [
            {
                "name": b.name,
                "low_hz": b.low,
                "high_hz": b.high,
                "bandwidth_hz": b.bandwidth,
            }
            for b in geo.CANDIDATE_BANDS
        ],
    }
    png = report.scale_figure(targets, mults, factors, sides, f0)
    return [
        (f"{prefix}_factors.csv", table),
        (f"{prefix}_summary.json", _json_bytes(summary)),
        (f"{prefix}_factors.png", png),
    ]


# ---------------------------------------------------------------------------
# beamfocus


def _run_beamfocus(params: Dict[str, Any], threads: int) -> List[Artifact]:
    prefix = params["output_prefix"]
    freq = params["frequency_hz"]
    geometry = build_geometry(params["geometry"], freq)
    focus = params["focus"]
    focal = wf.PolarPosition(
        math.radians(focus["azimuth_deg"]), focus["range_m"]
    ).to_cartesian()

    g = params["grid"]
    x_axis = _axis(g["x_min_m"], g["x_max_m"], g["step_m"])
    y_axis = _axis(g["y_min_m"], g["y_max_m"], g["step_m"])
    grid = bf.beampattern(geometry, focal, x_axis, y_axis, threads=threads)

    # Depth is measured down the grid column closest to the focal x.
    snapped = np.array(
        [x_axis[int(np.argmin(np.abs(x_axis - focal[0])))], focal[1], 0.0]
    )
    if y_axis[0] <= focal[1] <= y_axis[-1]:
        dof = bf.depth_of_focus(grid, snapped)
    else:
        dof = math.nan

    weights = bf.focus_weights(geometry, focal)
    rows = [["y_m\\x_m"] + [_fmt(x) for x in x_axis]]
    body = [[y] + list(grid.values[i]) for i, y in enumerate(y_axis)]
    table = _csv(",".join(rows[0]), body)

    summary = {
        "frequency_hz": freq,
        "n_elements": geometry.n_elements,
        "n_subarrays": geometry.n_subarrays,
        "aperture_m": geometry.aperture,
        "fraunhofer_distance_m": geo.fraunhofer_distance(geometry),
        "focus": {
            "azimuth_deg": focus["azimuth_deg"],
            "range_m": focus["range_m"],
            "cartesian_m": [float(c) for c in focal],
        },
        "gain_at_focus": bf.gain_at(geometry, weights, focal),
        "depth_of_focus_m": None if not math.isfinite(dof) else dof,
        "depth_of_focus_unbounded": dof == math.inf,
    }
    png = report.beamfocus_figure(
        grid, geometry.element_positions[:, :2], (float(focal[0]), float(focal[1]))
    )
    return [
        (f"{prefix}_gain.csv", table),
        (f"{prefix}_summary.json", _json_bytes(summary)),
        (f"{prefix}_gain.png", png),
    ]


# ---------------------------------------------------------------------------
# music


def _run_music(params: Dict[str, Any], threads: int) -> List[Artifact]:
    prefix = params["output_prefix"]
    freq = params["frequency_hz"]
    geometry = build_geometry(params["geometry"], freq)
    truth = [
        wf.PolarPosition(math.radians(s["azimuth_deg"]), s["range_m"])
        for s in params["sources"]
    ]
    power = 10.0 ** (params["snr_db"] / 10.0)
    snapshots = loc.generate_snapshots(
        geometry,
        truth,
        [power] * len(truth),
        1.0,
        params["snapshots"],
        params["seed"],
    )
    cov = loc.sample_covariance(snapshots)

    g = params["grid"]
    az_grid = np.radians(_axis(g["azimuth_min_deg"], g["azimuth_max_deg"], g["azimuth_step_deg"]))
    r_grid = _axis(g["range_min_m"], g["range_max_m"], g["range_step_m"])
    result = loc.music_spectrum(cov, geometry, params["model_order"], az_grid, r_grid)

    spectrum = result.spectrum
    az_deg = np.degrees(spectrum.x_axis)
    rows = []
    for i, r in enumerate(spectrum.y_axis):
        for j, a in enumerate(az_deg):
            rows.append([a, r, spectrum.values[i, j]])
    table = _csv("azimuth_deg,range_m,value", rows)

    peaks = [
        {
            "azimuth_deg": math.degrees(p.azimuth),
            "range_m": p.range_m,
            "value": v,
        }
        for p, v in zip(result.detected_peaks, result.peak_values)
    ]
    az_tol_deg, range_tol_m = 1.0, 2.0
    summary = {
        "frequency_hz": freq,
        "n_elements": geometry.n_elements,
        "n_subarrays": geometry.n_subarrays,
        "model_order": result.model_order,
        "snapshots": params["snapshots"],
        "snr_db": params["snr_db"],
        "seed": params["seed"],
        "detected": len(peaks),
        "resolved": loc.resolve_check(
            result, truth, math.radians(az_tol_deg), range_tol_m
        ),
        "azimuth_tol_deg": az_tol_deg,
        "range_tol_m": range_tol_m,
        "true_sources": params["sources"],
    }
    png = report.music_figure(
        spectrum,
        [(s["azimuth_deg"], s["range_m"]) for s in params["sources"]],
        [(p["azimuth_deg"], p["range_m"]) for p in peaks],
    )
    return [
        (f"{prefix}_spectrum.csv", table),
        (f"{prefix}_peaks.json", _json_bytes(peaks)),
        (f"{prefix}_summary.json", _json_bytes(summary)),
        (f"{prefix}_spectrum.png", png),
    ]


# ---------------------------------------------------------------------------
# capacity


def _run_capacity(params: Dict[str, Any], threads: int) -> List[Artifact]:
    prefix = params["output_prefix"]
    seed = params["seed"]
    drops = params["drops"]
    n_ues = params["num_ues"]
    ppe = 2 if params["dual_polarized"] else 1

    # UE placements are drawn once and shared by every band so the
    # frequency comparison sees identical geometries per drop.
    master = np.random.default_rng(seed)
    radii = master.uniform(params["range_min_m"], params["range_max_m"], (drops, n_ues))
    half_span = math.radians(params["azimuth_span_deg"]) / 2.0
    azimuths = master.uniform(-half_span, half_span, (drops, n_ues))

    artifacts: List[Artifact] = []
    rate_curves: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
    stream_curves: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
    drop_records = []
    summary_bands = []
    for band_idx, band in enumerate(params["bands"]):
        f = band["frequency_hz"]
        bw = band["bandwidth_hz"]
        bs_n = geo.elements_per_side(params["bs_aperture_m"], f)
        ue_n = max(1, geo.elements_per_side(params["ue_aperture_m"], f))
        bs = geo.build_ula(bs_n, f, ports_per_element=ppe)
        ue_template = geo.build_ula(ue_n, f, ports_per_element=ppe)
        noise = (
            BOLTZMANN
            * REFERENCE_TEMPERATURE_K
            * 10.0 ** (params["noise_figure_db"] / 10.0)
            * bw
        )
        rates: List[float] = []
        streams: List[int] = []
        for d in range(drops):
            positions = [
                np.array(
                    [
                        radii[d, u] * math.sin(azimuths[d, u]),
                        radii[d, u] * math.cos(azimuths[d, u]),
                        0.0,
                    ]
                )
                for u in range(n_ues)
            ]
            drop_seed = seed + 1000 + band_idx * drops + d
            channels = mu.generate_channels(
                bs,
                [ue_template] * n_ues,
                positions,
                cluster_count=params["clusters"],
                rician_k_db=params["rician_k_db"],
                seed=drop_seed,
                bandwidth=bw,
                noise_power=noise,
            )
            solution = mu.evaluate(channels)
            rates.extend(solution.user_rates)
            streams.extend(solution.active_streams)
            drop_records.append(
                {
                    "band": band["name"],
                    "drop": d,
                    "seed": drop_seed,
                    "per_user_rate": [float(r) for r in solution.user_rates],
                    "per_user_streams": [int(s) for s in solution.active_streams],
                }
            )
        r_sorted, r_frac = mu.rate_cdf(rates)
        s_sorted, s_frac = mu.rate_cdf(streams)
        rate_curves[band["name"]] = (r_sorted, r_frac)
        stream_curves[band["name"]] = (s_sorted, s_frac)
        artifacts.append(
            (
                f"{prefix}_{band['name']}_rate_cdf.csv",
                _csv("rate_bps,cdf", [[r, c] for r, c in zip(r_sorted, r_frac)]),
            )
        )
        artifacts.append(
            (
                f"{prefix}_{band['name']}_streams_cdf.csv",
                _csv("streams,cdf", [[s, c] for s, c in zip(s_sorted, s_frac)]),
            )
        )
        summary_bands.append(
            {
                "name": band["name"],
                "frequency_hz": f,
                "bandwidth_hz": bw,
                "bs_elements": bs_n,
                "bs_ports": bs.n_ports,
                "ue_elements": ue_n,
                "ue_ports": ue_template.n_ports,
                "noise_power_w": noise,
                "tx_power_w": mu.WATT_PER_MHZ * bw / 1e6,
                "median_rate_bps": float(np.median(rates)),
                "median_streams": float(np.median(streams)),
            }
        )

    summary = {
        "drops": drops,
        "num_ues": n_ues,
        "seed": seed,
        "dual_polarized": params["dual_polarized"],
        "bands": summary_bands,
    }
    artifacts.append((f"{prefix}_drops.json", _json_bytes(drop_records)))
    artifacts.append((f"{prefix}_summary.json", _json_bytes(summary)))
    artifacts.append(
        (f"{prefix}_cdf.png", report.capacity_figure(rate_curves, stream_curves))
    )
    return artifacts


# ---------------------------------------------------------------------------
# linkbudget


def _run_linkbudget(params: Dict[str, Any], threads: int) -> List[Artifact]:
    prefix = params["output_prefix"]
    wavelength = SPEED_OF_LIGHT / params["frequency_hz"]
    rows = []
    snrs_db = []
    for d in params["distances_m"]:
        p_r = wf.friis_received_power(
            params["tx_power_w"],
            params["tx_aperture_m2"],
            params["rx_aperture_m2"],
            d,
            wavelength,
        )
        ratio = wf.snr(p_r, params["bandwidth_hz"], params["noise_figure_db"])
        s_db = 10.0 * math.log10(ratio)
        snrs_db.append(s_db)
        rows.append([d, p_r, 10.0 * math.log10(p_r * 1e3), s_db])
    table = _csv("distance_m,received_power_w,received_power_dbm,snr_db", rows)
    noise = (
        BOLTZMANN
        * REFERENCE_TEMPERATURE_K
        * 10.0 ** (params["noise_figure_db"] / 10.0)
        * params["bandwidth_hz"]
    )
    summary = {
        "frequency_hz": params["frequency_hz"],
        "wavelength_m": wavelength,
        "bandwidth_hz": params["bandwidth_hz"],
        "noise_figure_db": params["noise_figure_db"],
        "noise_power_w": noise,
        "tx_power_w": params["tx_power_w"],
        "tx_aperture_m2": params["tx_aperture_m2"],
        "rx_aperture_m2": params["rx_aperture_m2"],
    }
    png = report.linkbudget_figure(params["distances_m"], snrs_db)
    return [
        (f"{prefix}_linkbudget.csv", table),
        (f"{prefix}_summary.json", _json_bytes(summary)),
        (f"{prefix}_linkbudget.png", png),
    ]


_RUNNERS: Dict[str, Callable[[Dict[str, Any], int], List[Artifact]]] = {
    "scale": _run_scale,
    "beamfocus": _run_beamfocus,
    "music": _run_music,
    "capacity": _run_capacity,
    "linkbudget": _run_linkbudget,
}


def run_scenario(config: ScenarioConfig, out_dir: str, threads: int = 1) -> RunResult:
    """Run one experiment and write its artifacts plus a manifest.

    Artifacts are fully computed before the first byte hits disk.  A
    write failure removes everything already written and raises
    :class:`OutputError`; a simulation failure raises
    :class:`ComputeError` after recording an error manifest.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    start = time.perf_counter()
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out_dir}: {exc}") from exc

    prefix = config.params["output_prefix"]
    manifest_name = f"{prefix}_manifest.json"
    manifest: Dict[str, Any] = {
        "experiment": config.experiment,
        "config": config.to_dict(),
        "version": __version__,
    }

    try:
        artifacts = _RUNNERS[config.experiment](config.params, threads)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        manifest.update(
            status="error",
            error=str(exc),
            outputs=[],
            wall_time_s=time.perf_counter() - start,
        )
        path = os.path.join(out_dir, manifest_name)
        try:
            with open(path, "wb") as fh:
                fh.write(_json_bytes(manifest))
        except OSError:
            path = None
        raise ComputeError(str(exc)) from exc

    manifest.update(
        status="ok",
        outputs=[name for name, _ in artifacts],
        wall_time_s=time.perf_counter() - start,
    )

    written: List[str] = []
    try:
        for name, data in artifacts:
            path = os.path.join(out_dir, name)
            with open(path, "wb") as fh:
                fh.write(data)
            written.append(path)
        manifest_path = os.path.join(out_dir, manifest_name)
        with open(manifest_path, "wb") as fh:
            fh.write(_json_bytes(manifest))
        written.append(manifest_path)
    except OSError as exc:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise OutputError(f"failed writing {out_dir}: {exc}") from exc
    return RunResult(manifest, written)
