"""Unit tests for channel synthesis, zero-interference precoding and
power allocation."""

import numpy as np
import pytest

from gmimo import geometry, mumimo


def _scenario(ppe=1, seed=0, clusters=6):
    bs = geometry.build_ula(16, 15e9, ports_per_element=ppe)
    ue = geometry.build_ula(2, 15e9, ports_per_element=ppe)
    positions = [np.array([10.0, 50.0, 0.0]), np.array([-20.0, 70.0, 0.0])]
    return mumimo.generate_channels(
        bs, [ue, ue], positions, cluster_count=clusters, seed=seed
    )


def test_channels_are_seeded_and_shaped():
    a = _scenario(seed=3)
    b = _scenario(seed=3)
    c = _scenario(seed=4)
    assert a.channels[0].shape == (2, 16)
    for ha, hb in zip(a.channels, b.channels):
        np.testing.assert_array_equal(ha, hb)
    assert not np.array_equal(a.channels[0], c.channels[0])


def test_pure_los_channel_has_unit_modulus_entries():
    channels = _scenario(clusters=0)
    for h in channels.channels:
        np.testing.assert_allclose(np.abs(h), 1.0, atol=1e-12)


def test_dual_polarized_channel_is_co_polar_block_diagonal():
    channels = _scenario(ppe=2, clusters=0)
    h = channels.channels[0]
    assert h.shape == (4, 32)
    np.testing.assert_allclose(h[:2, 16:], 0.0, atol=1e-15)
    np.testing.assert_allclose(h[2:, :16], 0.0, atol=1e-15)


def test_mixed_polarization_rejected():
    bs = geometry.build_ula(8, 15e9, ports_per_element=2)
    ue = geometry.build_ula(2, 15e9, ports_per_element=1)
    with pytest.raises(ValueError):
        mumimo.generate_channels(bs, [ue], [np.array([0.0, 50.0, 0.0])])


def test_average_channel_energy_matches_port_product():
    bs = geometry.build_ula(12, 15e9)
    ue = geometry.build_ula(2, 15e9)
    pos = [np.array([5.0, 60.0, 0.0])]
    energies = [
        np.linalg.norm(
            mumimo.generate_channels(bs, [ue], pos, seed=s).channels[0]
        )
        ** 2
        for s in range(60)
    ]
    assert np.mean(energies) / (2 * 12) == pytest.approx(1.0, abs=0.1)


def test_block_diagonalization_cancels_cross_user_leakage():
    rng = np.random.default_rng(0)
    for _ in range(10):
        users = rng.integers(2, 5)
        bs_ports = rng.integers(8, 17)
        mats = [
            rng.standard_normal((2, bs_ports)) + 1j * rng.standard_normal((2, bs_ports))
            for _ in range(users)
        ]
        channels = mumimo.ChannelSet(tuple(mats), 15e9, 100e6)
        bd = mumimo.block_diagonalize(channels)
        for k in range(users):
            w = bd.precoders[k]
            if w.shape[1] == 0:
                continue
            np.testing.assert_allclose(
                w.conj().T @ w, np.eye(w.shape[1]), atol=1e-10
            )
            for j in range(users):
                if j != k:
                    leak = np.abs(mats[j] @ w).max()
                    assert leak < 1e-10


def test_single_user_keeps_every_direction():
    rng = np.random.default_rng(1)
    h = rng.standard_normal((3, 8)) + 1j * rng.standard_normal((3, 8))
    channels = mumimo.ChannelSet((h,), 15e9, 100e6)
    bd = mumimo.block_diagonalize(channels)
    assert bd.null_bases[0].shape == (8, 8)
    assert bd.stream_gains[0].size == 3


def test_waterfill_equal_gains_split_evenly():
    powers, mu = mumimo.waterfill([2.0, 2.0, 2.0], noise_power=1.0, total_power=3.0)
    np.testing.assert_allclose(powers, 1.0)
    assert mu == pytest.approx(1.5)


def test_waterfill_drops_weak_stream():
    # floors are noise/gain = [1, 4]; one watt only lifts the strong stream
    powers, mu = mumimo.waterfill([1.0, 0.25], noise_power=1.0, total_power=1.0)
    np.testing.assert_allclose(powers, [1.0, 0.0], atol=1e-12)
    assert mu == pytest.approx(2.0)


def test_waterfill_hand_computed_three_streams():
    # floors [1, 2, 5]; P = 3 fills the first two up to level 3
    powers, mu = mumimo.waterfill([1.0, 0.5, 0.2], noise_power=1.0, total_power=3.0)
    np.testing.assert_allclose(powers, [2.0, 1.0, 0.0], atol=1e-12)
    assert mu == pytest.approx(3.0)


def test_waterfill_conserves_power_and_satisfies_kkt():
    rng = np.random.default_rng(2)
    for _ in range(50):
        gains = rng.uniform(0.05, 5.0, rng.integers(1, 9))
        total = float(rng.uniform(0.5, 20.0))
        noise = float(rng.uniform(0.1, 2.0))
        powers, mu = mumimo.waterfill(gains, noise, total)
        assert powers.sum() == pytest.approx(total, rel=1e-12)
        floors = noise / gains
        active = powers > 0
        np.testing.assert_allclose(floors[active] + powers[active], mu, rtol=1e-12)
        assert np.all(floors[~active] >= mu - 1e-12 * mu)


def test_waterfill_rejects_bad_input():
    with pytest.raises(ValueError):
        mumimo.waterfill([], 1.0, 1.0)
    with pytest.raises(ValueError):
        mumimo.waterfill([1.0, -0.5], 1.0, 1.0)
    with pytest.raises(ValueError):
        mumimo.waterfill([1.0], 0.0, 1.0)


def test_evaluate_budget_and_stream_caps():
    channels = _scenario(seed=9)
    solution = mumimo.evaluate(channels)
    spent = sum(p.sum() for p in solution.stream_powers)
    assert spent == pytest.approx(channels.tx_power, rel=1e-12)
    for k, streams in enumerate(solution.active_streams):
        assert 0 <= streams <= channels.channels[k].shape[0]
        assert solution.user_rates[k] >= 0.0
    assert solution.sum_rate == pytest.approx(sum(solution.user_rates))


def test_rate_cdf_is_sorted_with_uniform_steps():
    values, fractions = mumimo.rate_cdf([3.0, 1.0, 2.0, 4.0])
    np.testing.assert_array_equal(values, [1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(fractions, [0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ValueError):
        mumimo.rate_cdf([])
