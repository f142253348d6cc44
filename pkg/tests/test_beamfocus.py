"""Unit tests for matched-filter focusing and the gain-map machinery."""

import math

import numpy as np
import pytest

from gmimo import beamfocus, geometry
from gmimo.grids import SpatialGrid


def _ula():
    return geometry.build_ula(48, 15e9)


def test_focus_weights_are_unit_norm():
    g = _ula()
    w = beamfocus.focus_weights(g, (0.0, 30.0, 0.0))
    assert np.linalg.norm(w) == pytest.approx(1.0)
    assert w.shape == (48,)


def test_gain_is_one_at_the_focal_point():
    focal = np.array([3.0, 25.0, 0.0])
    for g in [_ula(), geometry.build_distributed([(24, (-2.5, 0, 0)), (24, (2.5, 0, 0))], 15e9)]:
        w = beamfocus.focus_weights(g, focal)
        assert beamfocus.gain_at(g, w, focal) == pytest.approx(1.0, abs=1e-12)


def test_gain_decays_away_from_focus():
    g = _ula()
    w = beamfocus.focus_weights(g, (0.0, 30.0, 0.0))
    off = beamfocus.gain_at(g, w, (25.0, 30.0, 0.0))
    assert off < 0.05


def test_beampattern_values_normalized_and_shaped():
    g = _ula()
    x = np.arange(-5.0, 5.01, 0.5)
    y = np.arange(5.0, 60.01, 0.5)
    grid = beamfocus.beampattern(g, (0.0, 30.0, 0.0), x, y)
    assert grid.values.shape == (y.size, x.size)
    assert grid.values.min() >= 0.0
    assert grid.values.max() <= 1.0
    iy = int(np.argmin(np.abs(y - 30.0)))
    ix = int(np.argmin(np.abs(x)))
    assert grid.values[iy, ix] == pytest.approx(1.0, abs=1e-12)


def test_beampattern_thread_count_does_not_change_values():
    g = geometry.build_distributed([(24, (-2.5, 0, 0)), (24, (2.5, 0, 0))], 15e9)
    x = np.arange(-10.0, 10.01, 0.25)
    y = np.arange(1.0, 80.01, 0.25)
    serial = beamfocus.beampattern(g, (0.0, 30.0, 0.0), x, y, threads=1)
    threaded = beamfocus.beampattern(g, (0.0, 30.0, 0.0), x, y, threads=4)
    np.testing.assert_array_equal(serial.values, threaded.values)


def _profile_grid(profile, x_value=0.0):
    y = np.arange(len(profile), dtype=float)
    x = np.array([x_value - 1.0, x_value, x_value + 1.0])
    values = np.zeros((len(profile), 3))
    values[:, 1] = profile
    return SpatialGrid(x, y, values)


def test_depth_of_focus_measures_half_power_run():
    grid = _profile_grid([0.1, 0.2, 0.6, 0.9, 0.7, 0.2, 0.1])
    assert beamfocus.depth_of_focus(grid, (0.0, 3.0)) == pytest.approx(2.0)


def test_depth_of_focus_unbounded_when_run_reaches_edge():
    grid = _profile_grid([0.9, 0.9, 0.9, 0.6, 0.2, 0.1, 0.1])
    assert beamfocus.depth_of_focus(grid, (0.0, 1.0)) == math.inf
    grid = _profile_grid([0.1, 0.2, 0.6, 0.9, 0.9])
    assert beamfocus.depth_of_focus(grid, (0.0, 3.0)) == math.inf


def test_depth_of_focus_zero_below_half_power():
    grid = _profile_grid([0.1, 0.2, 0.4, 0.3, 0.1])
    assert beamfocus.depth_of_focus(grid, (0.0, 2.0)) == 0.0


def test_depth_of_focus_requires_on_grid_focal_column():
    grid = _profile_grid([0.1, 0.9, 0.1])
    with pytest.raises(ValueError):
        beamfocus.depth_of_focus(grid, (0.37, 1.0))
    with pytest.raises(ValueError):
        beamfocus.depth_of_focus(grid, (0.0, 99.0))


def test_default_pattern_axes_cover_the_service_area():
    x, y = beamfocus.default_pattern_axes()
    assert x[0] == -50.0 and x[-1] == 50.0
    assert y[0] == 0.0 and y[-1] == 100.0
    assert np.diff(x).max() == pytest.approx(0.25)
