"""Unit tests for scenario parsing, validation and round-tripping."""

import json
import pathlib

import pytest

from gmimo import config

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.name)
def test_shipped_configs_parse_and_round_trip(path):
    parsed = config.parse_config(path.read_text())
    again = config.parse_config(config.serialize_config(parsed))
    assert again == parsed
    assert parsed.experiment in config.EXPERIMENTS


def test_minimal_music_config_gets_grid_defaults():
    parsed = config.parse_config(
        json.dumps(
            {
                "experiment": "music",
                "geometry": {"type": "ula", "elements": 16},
                "sources": [{"azimuth_deg": 0.0, "range_m": 40.0}],
                "seed": 1,
            }
        )
    )
    grid = parsed.params["grid"]
    assert grid["azimuth_min_deg"] == -60.0
    assert grid["range_max_m"] == 100.0
    assert parsed.params["snapshots"] == 200
    assert parsed.params["model_order"] == 1
    assert parsed.params["output_prefix"] == "music"


def test_all_problems_reported_in_one_pass():
    raw = {
        "experiment": "music",
        "geometry": {"type": "ring"},
        "sources": [{"azimuth_deg": 120.0, "range_m": -3.0}],
        "snapshots": 0,
        "mystery": True,
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(raw)
    messages = "\n".join(err.value.errors)
    assert len(err.value.errors) >= 5
    assert "mystery" in messages
    assert "geometry.type" in messages
    assert "azimuth_deg" in messages
    assert "range_m" in messages
    assert "seed" in messages


def test_unknown_nested_keys_rejected():
    raw = {
        "experiment": "beamfocus",
        "geometry": {"type": "ula", "elements": 8, "spacing": 0.5},
        "focus": {"azimuth_deg": 0.0, "range_m": 30.0, "height": 2.0},
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(raw)
    messages = "\n".join(err.value.errors)
    assert "geometry.spacing" in messages
    assert "focus.height" in messages


def test_geometry_physical_constraints_surface_as_config_errors():
    raw = {
        "experiment": "beamfocus",
        "frequency_hz": 15e9,
        "geometry": {
            "type": "distributed",
            "subarrays": [
                {"elements": 4, "center_m": [0.0, 0.0, 0.0]},
                {"elements": 4, "center_m": [0.01, 0.0, 0.0]},
            ],
        },
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(raw)
    assert any("overlap" in e for e in err.value.errors)


def test_seed_required_only_for_stochastic_experiments():
    with pytest.raises(config.ConfigError) as err:
        config.validate_config({"experiment": "capacity"})
    assert any(e.startswith("seed") for e in err.value.errors)
    # deterministic experiments need no seed
    config.validate_config({"experiment": "scale"})
    config.validate_config({"experiment": "linkbudget"})


def test_unknown_experiment_rejected():
    with pytest.raises(config.ConfigError):
        config.parse_config('{"experiment": "teleport"}')
    with pytest.raises(config.ConfigError):
        config.parse_config("[1, 2]")


def test_syntax_errors_carry_position():
    with pytest.raises(config.ConfigError) as err:
        config.parse_config('{"experiment": "scale",}')
    assert "line 1" in err.value.errors[0]


def test_model_order_capped_by_element_count():
    raw = {
        "experiment": "music",
        "geometry": {"type": "ula", "elements": 8},
        "sources": [{"azimuth_deg": 0.0, "range_m": 40.0}],
        "seed": 1,
        "model_order": 8,
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(raw)
    assert any("model_order" in e for e in err.value.errors)


def test_capacity_band_names_must_be_unique_and_filename_safe():
    base = {
        "experiment": "capacity",
        "seed": 0,
        "bands": [
            {"name": "a b", "frequency_hz": 15e9, "bandwidth_hz": 1e8},
            {"name": "x", "frequency_hz": 15e9, "bandwidth_hz": 1e8},
            {"name": "x", "frequency_hz": 7.8e9, "bandwidth_hz": 1e8},
        ],
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(base)
    messages = "\n".join(err.value.errors)
    assert "name" in messages and "duplicate" in messages


def test_aperture_must_fit_at_least_one_element():
    raw = {
        "experiment": "capacity",
        "seed": 0,
        "bs_aperture_m": 0.01,
        "bands": [{"name": "3.5GHz", "frequency_hz": 3.5e9, "bandwidth_hz": 1e8}],
    }
    with pytest.raises(config.ConfigError) as err:
        config.validate_config(raw)
    assert any("half a wavelength" in e for e in err.value.errors)


def test_booleans_are_not_numbers():
    raw = {"experiment": "scale", "baseline_frequency_hz": True}
    with pytest.raises(config.ConfigError):
        config.validate_config(raw)
