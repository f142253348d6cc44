"""End-to-end tests of the command line interface and run pipeline."""

import json
import pathlib
import subprocess
import sys

import pytest

from gmimo import cli, experiments
from gmimo.config import parse_config

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


def _write(tmp_path, payload):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(payload))
    return str(path)


def _small_music(tmp_path, **overrides):
    payload = {
        "experiment": "music",
        "geometry": {"type": "ula", "elements": 12},
        "sources": [{"azimuth_deg": 5.0, "range_m": 40.0}],
        "seed": 3,
        "snapshots": 64,
        "grid": {
            "azimuth_min_deg": -20.0,
            "azimuth_max_deg": 20.0,
            "azimuth_step_deg": 0.5,
            "range_min_m": 20.0,
            "range_max_m": 60.0,
            "range_step_m": 1.0,
        },
    }
    payload.update(overrides)
    return _write(tmp_path, payload)


def test_successful_run_writes_artifacts_and_manifest(tmp_path):
    cfg = _small_music(tmp_path)
    out = tmp_path / "out"
    assert cli.main(["music", "--config", cfg, "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "music_manifest.json",
        "music_peaks.json",
        "music_spectrum.csv",
        "music_spectrum.png",
        "music_summary.json",
    ]
    manifest = json.loads((out / "music_manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert manifest["config"]["experiment"] == "music"
    assert manifest["config"]["seed"] == 3
    assert manifest["wall_time_s"] > 0
    assert "music_spectrum.csv" in manifest["outputs"]


def test_console_script_runs_scale(tmp_path):
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "gmimo.cli",
            "scale",
            "--config",
            str(CONFIG_DIR / "scale.json"),
            "--out",
            str(tmp_path),
        ],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert (tmp_path / "scale_factors.csv").exists()
    assert (tmp_path / "scale_factors.png").exists()


def test_invalid_config_exits_2_with_error_json(tmp_path, capsys):
    cfg = _write(tmp_path, {"experiment": "music", "seed": -1})
    assert cli.main(["music", "--config", cfg, "--out", str(tmp_path)]) == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "error"
    assert payload["kind"] == "config"
    assert payload["errors"]


def test_experiment_mismatch_exits_2(tmp_path, capsys):
    cfg = _small_music(tmp_path)
    assert cli.main(["scale", "--config", cfg, "--out", str(tmp_path)]) == 2
    payload = json.loads(capsys.readouterr().out)
    assert "mismatch" in payload["errors"][0]


def test_missing_config_file_exits_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert cli.main(["music", "--config", missing, "--out", str(tmp_path)]) == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "config"


def test_numerical_failure_exits_3_and_records_error_manifest(
    tmp_path, capsys, monkeypatch
):
    def explode(params, threads):
        raise ValueError("synthetic breakdown")

    monkeypatch.setitem(experiments._RUNNERS, "music", explode)
    cfg = _small_music(tmp_path)
    out = tmp_path / "out"
    assert cli.main(["music", "--config", cfg, "--out", str(out)]) == 3
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "numerical"
    manifest = json.loads((out / "music_manifest.json").read_text())
    assert manifest["status"] == "error"
    assert "synthetic breakdown" in manifest["error"]


def test_unwritable_output_exits_4(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    cfg = _small_music(tmp_path)
    assert cli.main(["music", "--config", cfg, "--out", str(blocker)]) == 4
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "io"


def test_partial_outputs_removed_on_write_failure(tmp_path, monkeypatch):
    def fake_runner(params, threads):
        return [("ok_first.csv", b"a,b\n"), ("missing_dir/second.csv", b"c,d\n")]

    monkeypatch.setitem(experiments._RUNNERS, "music", fake_runner)
    cfg = _small_music(tmp_path)
    out = tmp_path / "out"
    config = parse_config(pathlib.Path(cfg).read_text())
    with pytest.raises(experiments.OutputError):
        experiments.run_scenario(config, str(out))
    assert not (out / "ok_first.csv").exists()


def test_thread_flag_must_be_positive(tmp_path):
    cfg = _small_music(tmp_path)
    with pytest.raises(SystemExit) as err:
        cli.main(["music", "--config", cfg, "--threads", "0"])
    assert err.value.code == 2


def test_rerun_is_byte_identical(tmp_path):
    cfg = _small_music(tmp_path)
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert cli.main(["music", "--config", cfg, "--out", str(out1)]) == 0
    assert cli.main(["music", "--config", cfg, "--out", str(out2)]) == 0
    a = (out1 / "music_spectrum.csv").read_bytes()
    b = (out2 / "music_spectrum.csv").read_bytes()
    assert a == b
    assert (out1 / "music_peaks.json").read_bytes() == (out2 / "music_peaks.json").read_bytes()
