"""Scenario configuration: JSON schema, validation, round-trip serialization.

One self-describing JSON document drives one experiment run.  Parsing
validates everything up front and reports every problem found, not
just the first; unknown keys are rejected so typos cannot silently
fall back to defaults.  ``parse_config(serialize_config(c)) == c``.

The full schema is documented in docs/config-schema.md.
"""

import json
import re
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from . import geometry as geo

__all__ = [
    "ScenarioConfig",
    "ConfigError",
    "EXPERIMENTS",
    "parse_config",
    "validate_config",
    "serialize_config",
    "build_geometry",
]

EXPERIMENTS = ("scale", "beamfocus", "music", "capacity", "linkbudget")

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class ConfigError(ValueError):
    """Invalid scenario configuration; carries the full list of problems."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated experiment configuration with all defaults filled in."""

    experiment: str
    params: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"experiment": self.experiment, **self.params}


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            [f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]
        ) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["top level must be a JSON object"])
    return validate_config(raw)


def serialize_config(config: ScenarioConfig) -> str:
    """Canonical JSON text for a config; stable under re-parsing."""
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"


def validate_config(raw: Dict[str, Any]) -> ScenarioConfig:
    errors: List[str] = []
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            [f"experiment: must be one of {list(EXPERIMENTS)}, got {experiment!r}"]
        )
    params = _VALIDATORS[experiment](raw, errors)
    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(experiment, params)


# ---------------------------------------------------------------------------
# field helpers


def _reject_unknown(raw: Dict[str, Any], allowed, errors: List[str], prefix: str = ""):
    for key in raw:
        if key not in allowed:
            errors.append(f"{prefix}{key}: unknown key")


def _number(
    raw,
    key: str,
    errors: List[str],
    default=None,
    minimum: Optional[float] = None,
    exclusive: bool = True,
    maximum: Optional[float] = None,
    maximum_exclusive: bool = False,
    prefix: str = "",
):
    if key not in raw:
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{prefix}{key}: expected a number, got {value!r}")
        return default
    value = float(value)
    if minimum is not None and (value <= minimum if exclusive else value < minimum):
        bound = "greater than" if exclusive else "at least"
        errors.append(f"{prefix}{key}: must be {bound} {minimum:g}, got {value:g}")
        return default
    if maximum is not None and (value >= maximum if maximum_exclusive else value > maximum):
        bound = "below" if maximum_exclusive else "at most"
        errors.append(f"{prefix}{key}: must be {bound} {maximum:g}, got {value:g}")
        return default
    return value


def _integer(raw, key: str, errors: List[str], default=None, minimum=None, prefix: str = ""):
    if key not in raw:
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{prefix}{key}: expected an integer, got {value!r}")
        return default
    if minimum is not None and value < minimum:
        errors.append(f"{prefix}{key}: must be at least {minimum}, got {value}")
        return default
    return value


def _required(raw, key: str, errors: List[str], prefix: str = "") -> bool:
    if key not in raw:
        errors.append(f"{prefix}{key}: required key is missing")
        return False
    return True


def _output_prefix(raw, errors: List[str], default: str) -> str:
    value = raw.get("output_prefix", default)
    if not isinstance(value, str) or not _NAME_RE.match(value):
        errors.append(
            f"output_prefix: must match [A-Za-z0-9_.-]+, got {value!r}"
        )
        return default
    return value


# ---------------------------------------------------------------------------
# geometry sub-schema (shared by beamfocus and music)


def _validate_geometry(raw, frequency_hz, errors: List[str]) -> Dict[str, Any]:
    prefix = "geometry."
    if not isinstance(raw, dict):
        errors.append("geometry: expected an object")
        return {"type": "ula", "elements": 1}
    kind = raw.get("type")
    if kind == "ula":
        _reject_unknown(raw, {"type", "elements"}, errors, prefix)
        elements = _integer(raw, "elements", errors, minimum=1, prefix=prefix)
        if elements is None and "elements" not in raw:
            errors.append(f"{prefix}elements: required key is missing")
        out = {"type": "ula", "elements": elements or 1}
    elif kind == "distributed":
        _reject_unknown(raw, {"type", "subarrays"}, errors, prefix)
        subs = raw.get("subarrays")
        out_subs = []
        if not isinstance(subs, list) or not subs:
            errors.append(f"{prefix}subarrays: expected a nonempty list")
        else:
            for i, sub in enumerate(subs):
                sp = f"{prefix}subarrays[{i}]."
                if not isinstance(sub, dict):
                    errors.append(f"{prefix}subarrays[{i}]: expected an object")
                    continue
                _reject_unknown(sub, {"elements", "center_m"}, errors, sp)
                n = _integer(sub, "elements", errors, minimum=1, prefix=sp)
                if n is None and "elements" not in sub:
                    errors.append(f"{sp}elements: required key is missing")
                center = sub.get("center_m")
                if (
                    not isinstance(center, list)
                    or len(center) != 3
                    or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in center)
                ):
                    errors.append(f"{sp}center_m: expected [x, y, z] in meters")
                    center = [0.0, 0.0, 0.0]
                out_subs.append({"elements": n or 1, "center_m": [float(c) for c in center]})
        out = {"type": "distributed", "subarrays": out_subs}
    else:
        errors.append(f"{prefix}type: must be 'ula' or 'distributed', got {kind!r}")
        return {"type": "ula", "elements": 1}
    if not errors and frequency_hz:
        try:
            build_geometry(out, frequency_hz)
        except ValueError as exc:
            errors.append(f"geometry: {exc}")
    return out


def build_geometry(params: Dict[str, Any], frequency_hz: float, ports_per_element: int = 1):
    """Instantiate the ArrayGeometry described by a validated geometry block."""
    if params["type"] == "ula":
        return geo.build_ula(
            params["elements"], frequency_hz, ports_per_element=ports_per_element
        )
    specs = [(s["elements"], s["center_m"]) for s in params["subarrays"]]
    return geo.build_distributed(specs, frequency_hz, ports_per_element=ports_per_element)


# ---------------------------------------------------------------------------
# per-experiment validators


def _validate_scale(raw, errors: List[str]) -> Dict[str, Any]:
    allowed = {
        "experiment",
        "output_prefix",
        "baseline_frequency_hz",
        "target_frequencies_hz",
        "ue_antenna_multipliers",
        "aperture_m",
        "peak_rate",
    }
    _reject_unknown(raw, allowed, errors)
    params: Dict[str, Any] = {}
    params["output_prefix"] = _output_prefix(raw, errors, "scale")
    params["baseline_frequency_hz"] = _number(
        raw, "baseline_frequency_hz", errors, default=3.5e9, minimum=0.0
    )
    targets = raw.get("target_frequencies_hz", [7.8e9, 15e9])
    if (
        not isinstance(targets, list)
        or not targets
        or any(isinstance(f, bool) or not isinstance(f, (int, float)) or f <= 0 for f in targets)
    ):
        errors.append("target_frequencies_hz: expected a nonempty list of positive numbers")
        targets = [7.8e9, 15e9]
    params["target_frequencies_hz"] = [float(f) for f in targets]
    mults = raw.get("ue_antenna_multipliers", [1, 2, 4])
    if (
        not isinstance(mults, list)
        or not mults
        or any(isinstance(k, bool) or not isinstance(k, (int, float)) or k < 1 for k in mults)
    ):
        errors.append("ue_antenna_multipliers: expected a nonempty list of numbers >= 1")
        mults = [1, 2, 4]
    params["ue_antenna_multipliers"] = [float(k) for k in mults]
    params["aperture_m"] = _number(raw, "aperture_m", errors, default=0.5, minimum=0.0)
    pr = raw.get("peak_rate", {})
    if not isinstance(pr, dict):
        errors.append("peak_rate: expected an object")
        pr = {}
    _reject_unknown(pr, {"bits_per_symbol", "dof", "bandwidth_hz"}, errors, "peak_rate.")
    params["peak_rate"] = {
        "bits_per_symbol": _number(pr, "bits_per_symbol", errors, default=12.0, minimum=0.0, prefix="peak_rate."),
        "dof": _integer(pr, "dof", errors, default=16, minimum=1, prefix="peak_rate."),
        "bandwidth_hz": _number(pr, "bandwidth_hz", errors, default=1.2e9, minimum=0.0, prefix="peak_rate."),
    }
    return params


def _validate_beamfocus(raw, errors: List[str]) -> Dict[str, Any]:
    allowed = {"experiment", "output_prefix", "frequency_hz", "geometry", "focus", "grid"}
    _reject_unknown(raw, allowed, errors)
    params: Dict[str, Any] = {}
    params["output_prefix"] = _output_prefix(raw, errors, "beamfocus")
    freq = _number(raw, "frequency_hz", errors, default=15e9, minimum=0.0)
    params["frequency_hz"] = freq
    if _required(raw, "geometry", errors):
        params["geometry"] = _validate_geometry(raw["geometry"], freq, errors)
    focus = raw.get("focus", {})
    if not isinstance(focus, dict):
        errors.append("focus: expected an object")
        focus = {}
    _reject_unknown(focus, {"azimuth_deg", "range_m"}, errors, "focus.")
    params["focus"] = {
        "azimuth_deg": _number(
            focus,
            "azimuth_deg",
            errors,
            default=0.0,
            minimum=-90.0,
            maximum=90.0,
            maximum_exclusive=True,
            prefix="focus.",
        ),
        "range_m": _number(focus, "range_m", errors, default=30.0, minimum=0.0, prefix="focus."),
    }
    grid = raw.get("grid", {})
    if not isinstance(grid, dict):
        errors.append("grid: expected an object")
        grid = {}
    _reject_unknown(
        grid, {"x_min_m", "x_max_m", "y_min_m", "y_max_m", "step_m"}, errors, "grid."
    )
    g = {
        "x_min_m": _number(grid, "x_min_m", errors, default=-50.0, prefix="grid."),
        "x_max_m": _number(grid, "x_max_m", errors, default=50.0, prefix="grid."),
        "y_min_m": _number(grid, "y_min_m", errors, default=0.0, prefix="grid."),
        "y_max_m": _number(grid, "y_max_m", errors, default=100.0, prefix="grid."),
        "step_m": _number(grid, "step_m", errors, default=0.25, minimum=0.0, prefix="grid."),
    }
    if g["x_max_m"] is not None and g["x_min_m"] is not None and g["x_max_m"] <= g["x_min_m"]:
        errors.append("grid.x_max_m: must exceed grid.x_min_m")
    if g["y_max_m"] is not None and g["y_min_m"] is not None and g["y_max_m"] <= g["y_min_m"]:
        errors.append("grid.y_max_m: must exceed grid.y_min_m")
    params["grid"] = g
    return params


def _validate_sources(raw, errors: List[str]) -> List[Dict[str, float]]:
    sources = raw.get("sources")
    out = []
    if not isinstance(sources, list) or not sources:
        errors.append("sources: expected a nonempty list")
        return out
    for i, src in enumerate(sources):
        sp = f"sources[{i}]."
        if not isinstance(src, dict):
            errors.append(f"sources[{i}]: expected an object")
            continue
        _reject_unknown(src, {"azimuth_deg", "range_m"}, errors, sp)
        az = _number(
            src, "azimuth_deg", errors, minimum=-90.0, maximum=90.0, maximum_exclusive=True, prefix=sp
        )
        rng = _number(src, "range_m", errors, minimum=0.0, prefix=sp)
        if "azimuth_deg" not in src:
            errors.append(f"{sp}azimuth_deg: required key is missing")
        if "range_m" not in src:
            errors.append(f"{sp}range_m: required key is missing")
        if az is not None and rng is not None:
            out.append({"azimuth_deg": az, "range_m": rng})
    return out


def _validate_music(raw, errors: List[str]) -> Dict[str, Any]:
    allowed = {
        "experiment",
        "output_prefix",
        "frequency_hz",
        "geometry",
        "sources",
        "snr_db",
        "snapshots",
        "seed",
        "model_order",
        "grid",
    }
    _reject_unknown(raw, allowed, errors)
    params: Dict[str, Any] = {}
    params["output_prefix"] = _output_prefix(raw, errors, "music")
    freq = _number(raw, "frequency_hz", errors, default=15e9, minimum=0.0)
    params["frequency_hz"] = freq
    n_elements = None
    if _required(raw, "geometry", errors):
        params["geometry"] = _validate_geometry(raw["geometry"], freq, errors)
        if params["geometry"]["type"] == "ula":
            n_elements = params["geometry"]["elements"]
        else:
            n_elements = sum(s["elements"] for s in params["geometry"]["subarrays"])
    params["sources"] = _validate_sources(raw, errors)
    params["snr_db"] = _number(raw, "snr_db", errors, default=20.0, minimum=None)
    params["snapshots"] = _integer(raw, "snapshots", errors, default=200, minimum=1)
    if _required(raw, "seed", errors):
        params["seed"] = _integer(raw, "seed", errors, minimum=0)
    order = _integer(raw, "model_order", errors, minimum=1)
    if order is None:
        order = len(params["sources"]) or 1
    params["model_order"] = order
    if n_elements is not None and order >= n_elements:
        errors.append(
            f"model_order: must be below the element count ({n_elements}), got {order}"
        )
    grid = raw.get("grid", {})
    if not isinstance(grid, dict):
        errors.append("grid: expected an object")
        grid = {}
    keys = {
        "azimuth_min_deg",
        "azimuth_max_deg",
        "azimuth_step_deg",
        "range_min_m",
        "range_max_m",
        "range_step_m",
    }
    _reject_unknown(grid, keys, errors, "grid.")
    g = {
        "azimuth_min_deg": _number(grid, "azimuth_min_deg", errors, default=-60.0, minimum=-90.0, prefix="grid."),
        "azimuth_max_deg": _number(grid, "azimuth_max_deg", errors, default=60.0, maximum=90.0, maximum_exclusive=True, prefix="grid."),
        "azimuth_step_deg": _number(grid, "azimuth_step_deg", errors, default=0.25, minimum=0.0, prefix="grid."),
        "range_min_m": _number(grid, "range_min_m", errors, default=10.0, minimum=0.0, prefix="grid."),
        "range_max_m": _number(grid, "range_max_m", errors, default=100.0, minimum=0.0, prefix="grid."),
        "range_step_m": _number(grid, "range_step_m", errors, default=0.5, minimum=0.0, prefix="grid."),
    }
    if None not in (g["azimuth_min_deg"], g["azimuth_max_deg"]) and g["azimuth_max_deg"] <= g["azimuth_min_deg"]:
        errors.append("grid.azimuth_max_deg: must exceed grid.azimuth_min_deg")
    if None not in (g["range_min_m"], g["range_max_m"]) and g["range_max_m"] <= g["range_min_m"]:
        errors.append("grid.range_max_m: must exceed grid.range_min_m")
    params["grid"] = g
    return params


def _validate_capacity(raw, errors: List[str]) -> Dict[str, Any]:
    allowed = {
        "experiment",
        "output_prefix",
        "bands",
        "bs_aperture_m",
        "ue_aperture_m",
        "dual_polarized",
        "num_ues",
        "drops",
        "seed",
        "range_min_m",
        "range_max_m",
        "azimuth_span_deg",
        "rician_k_db",
        "clusters",
        "noise_figure_db",
    }
    _reject_unknown(raw, allowed, errors)
    params: Dict[str, Any] = {}
    params["output_prefix"] = _output_prefix(raw, errors, "capacity")
    bands = raw.get(
        "bands",
        [
            {"name": "3.5GHz", "frequency_hz": 3.5e9, "bandwidth_hz": 100e6},
            {"name": "15GHz", "frequency_hz": 15e9, "bandwidth_hz": 400e6},
        ],
    )
    out_bands = []
    if not isinstance(bands, list) or not bands:
        errors.append("bands: expected a nonempty list")
    else:
        names = set()
        for i, band in enumerate(bands):
            bp = f"bands[{i}]."
            if not isinstance(band, dict):
                errors.append(f"bands[{i}]: expected an object")
                continue
            _reject_unknown(band, {"name", "frequency_hz", "bandwidth_hz"}, errors, bp)
            name = band.get("name")
            if not isinstance(name, str) or not _NAME_RE.match(name):
                errors.append(f"{bp}name: must match [A-Za-z0-9_.-]+, got {name!r}")
                name = f"band{i}"
            if name in names:
                errors.append(f"{bp}name: duplicate band name {name!r}")
            names.add(name)
            freq = _number(band, "frequency_hz", errors, minimum=0.0, prefix=bp)
            bw = _number(band, "bandwidth_hz", errors, minimum=0.0, prefix=bp)
            if "frequency_hz" not in band:
                errors.append(f"{bp}frequency_hz: required key is missing")
            if "bandwidth_hz" not in band:
                errors.append(f"{bp}bandwidth_hz: required key is missing")
            if freq is not None and bw is not None:
                out_bands.append({"name": name, "frequency_hz": freq, "bandwidth_hz": bw})
    params["bands"] = out_bands
    params["bs_aperture_m"] = _number(raw, "bs_aperture_m", errors, default=0.5, minimum=0.0)
    params["ue_aperture_m"] = _number(raw, "ue_aperture_m", errors, default=0.04, minimum=0.0)
    if params["bs_aperture_m"] is not None:
        for band in out_bands:
            if geo.elements_per_side(params["bs_aperture_m"], band["frequency_hz"]) < 1:
                errors.append(
                    f"bands[{band['name']}]: bs_aperture_m {params['bs_aperture_m']:g} is "
                    f"below half a wavelength at {band['frequency_hz']:g} Hz"
                )
    dual = raw.get("dual_polarized", True)
    if not isinstance(dual, bool):
        errors.append(f"dual_polarized: expected true or false, got {dual!r}")
        dual = True
    params["dual_polarized"] = dual
    params["num_ues"] = _integer(raw, "num_ues", errors, default=4, minimum=1)
    params["drops"] = _integer(raw, "drops", errors, default=200, minimum=1)
    if _required(raw, "seed", errors):
        params["seed"] = _integer(raw, "seed", errors, minimum=0)
    params["range_min_m"] = _number(raw, "range_min_m", errors, default=30.0, minimum=0.0)
    params["range_max_m"] = _number(raw, "range_max_m", errors, default=150.0, minimum=0.0)
    if (
        params["range_min_m"] is not None
        and params["range_max_m"] is not None
        and params["range_max_m"] <= params["range_min_m"]
    ):
        errors.append("range_max_m: must exceed range_min_m")
    params["azimuth_span_deg"] = _number(
        raw, "azimuth_span_deg", errors, default=120.0, minimum=0.0, maximum=180.0
    )
    params["rician_k_db"] = _number(raw, "rician_k_db", errors, default=10.0, minimum=None)
    params["clusters"] = _integer(raw, "clusters", errors, default=6, minimum=0)
    params["noise_figure_db"] = _number(
        raw, "noise_figure_db", errors, default=9.0, minimum=0.0, exclusive=False
    )
    return params


def _validate_linkbudget(raw, errors: List[str]) -> Dict[str, Any]:
    allowed = {
        "experiment",
        "output_prefix",
        "frequency_hz",
        "tx_power_w",
        "tx_aperture_m2",
        "rx_aperture_m2",
        "distances_m",
        "bandwidth_hz",
        "noise_figure_db",
    }
    _reject_unknown(raw, allowed, errors)
    params: Dict[str, Any] = {}
    params["output_prefix"] = _output_prefix(raw, errors, "linkbudget")
    params["frequency_hz"] = _number(raw, "frequency_hz", errors, default=15e9, minimum=0.0)
    params["tx_power_w"] = _number(raw, "tx_power_w", errors, default=1.0, minimum=0.0)
    params["tx_aperture_m2"] = _number(raw, "tx_aperture_m2", errors, default=0.25, minimum=0.0)
    params["rx_aperture_m2"] = _number(raw, "rx_aperture_m2", errors, default=0.0016, minimum=0.0)
    dists = raw.get("distances_m", [10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0])
    if (
        not isinstance(dists, list)
        or not dists
        or any(isinstance(d, bool) or not isinstance(d, (int, float)) or d <= 0 for d in dists)
    ):
        errors.append("distances_m: expected a nonempty list of positive numbers")
        dists = [100.0]
    params["distances_m"] = [float(d) for d in dists]
    params["bandwidth_hz"] = _number(raw, "bandwidth_hz", errors, default=400e6, minimum=0.0)
    params["noise_figure_db"] = _number(
        raw, "noise_figure_db", errors, default=9.0, minimum=0.0, exclusive=False
    )
    return params


_VALIDATORS = {
    "scale": _validate_scale,
    "beamfocus": _validate_beamfocus,
    "music": _validate_music,
    "capacity": _validate_capacity,
    "linkbudget": _validate_linkbudget,
}
