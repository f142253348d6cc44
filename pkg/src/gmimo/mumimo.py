"""Multi-user downlink: channels, block diagonalization, water-filling.

Channel realizations come from a seeded geometric Rician cluster model
(line-of-sight spherical-wave phases plus a small number of far-field
scattering clusters), normalized so the mean squared Frobenius norm
equals the port-count product.  Precoding is classic block
diagonalization: each user's precoder lives in the null space of all
other users' channels, so inter-user interference is zero by
construction, and a single pooled water-filling spreads the total
transmit power over every user's effective streams.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import numerics
from .constants import BOLTZMANN, REFERENCE_TEMPERATURE_K
from .geometry import ArrayGeometry
from .wavefield import farfield_steering

__all__ = [
    "ChannelSet",
    "BdDecomposition",
    "PrecodingSolution",
    "generate_channels",
    "block_diagonalize",
    "waterfill",
    "evaluate",
    "rate_cdf",
]

DEFAULT_RICIAN_K_DB = 10.0
DEFAULT_CLUSTER_COUNT = 6
DEFAULT_NOISE_FIGURE_DB = 9.0
WATT_PER_MHZ = 1.0
"Scenario default transmit power rule: 1 W per MHz of bandwidth."


@dataclass(frozen=True)
class ChannelSet:
    """Per-user downlink channel matrices plus the scenario link settings.

    Each channel is (UE ports x BS ports) of dimensionless complex
    gains; tx_power defaults to 1 W per MHz of bandwidth and
    noise_power to thermal noise at the default noise figure.
    """

    channels: Tuple[np.ndarray, ...]
    carrier_frequency: float
    bandwidth: float
    noise_power: float = None  # type: ignore[assignment]
    tx_power: float = None  # type: ignore[assignment]
    seed: int = 0

    def __post_init__(self):
        if len(self.channels) == 0:
            raise ValueError("need at least one user channel")
        mats = tuple(np.asarray(h, dtype=np.complex128) for h in self.channels)
        bs_ports = {h.shape[1] for h in mats}
        if len(bs_ports) != 1:
            raise ValueError(f"inconsistent BS port counts across users: {sorted(bs_ports)}")
        for k, h in enumerate(mats):
            if h.ndim != 2 or h.shape[0] < 1:
                raise ValueError(f"user {k}: channel must be a 2-D matrix with >= 1 row")
            if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
                raise ValueError(f"user {k}: channel has non-finite entries")
        if self.carrier_frequency <= 0 or self.bandwidth <= 0:
            raise ValueError("carrier_frequency and bandwidth must be positive")
        tx = self.tx_power
        if tx is None:
            tx = WATT_PER_MHZ * self.bandwidth / 1e6
        noise = self.noise_power
        if noise is None:
            noise = (
                BOLTZMANN
                * REFERENCE_TEMPERATURE_K
                * 10.0 ** (DEFAULT_NOISE_FIGURE_DB / 10.0)
                * self.bandwidth
            )
        if tx <= 0 or noise <= 0:
            raise ValueError("tx_power and noise_power must be positive")
        object.__setattr__(self, "channels", mats)
        object.__setattr__(self, "tx_power", float(tx))
        object.__setattr__(self, "noise_power", float(noise))

    @property
    def n_users(self) -> int:
        return len(self.channels)

    @property
    def bs_ports(self) -> int:
        return self.channels[0].shape[1]


@dataclass(frozen=True)
class BdDecomposition:
    """Null-space bases, effective channels and precoder directions per user."""

    null_bases: Tuple[np.ndarray, ...]
    effective_channels: Tuple[np.ndarray, ...]
    precoders: Tuple[np.ndarray, ...]
    stream_gains: Tuple[np.ndarray, ...]


@dataclass(frozen=True)
class PrecodingSolution:
    """One solved downlink drop: precoders, powers, rates, stream counts."""

    precoders: Tuple[np.ndarray, ...]
    stream_powers: Tuple[np.ndarray, ...]
    user_rates: Tuple[float, ...]
    active_streams: Tuple[int, ...]
    water_level: float

    @property
    def sum_rate(self) -> float:
        return float(sum(self.user_rates))


def _cluster_channel(
    bs: ArrayGeometry,
    ue: ArrayGeometry,
    ue_position: np.ndarray,
    cluster_count: int,
    kappa: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Single-polarization Rician channel between element sets."""
    lam = bs.wavelength
    ue_pos = ue.element_positions + ue_position[None, :]
    diff = ue_pos[:, None, :] - bs.element_positions[None, :, :]
    dists = np.linalg.norm(diff, axis=-1)
    if np.any(dists == 0.0):
        raise ValueError("UE element coincides with a BS element")
    h_los = np.exp(-2j * np.pi * dists / lam)
    if cluster_count == 0:
        return h_los
    nr, nt = h_los.shape
    h_nlos = np.zeros((nr, nt), dtype=np.complex128)
    tx_angles = rng.uniform(-np.pi / 2, np.pi / 2, size=cluster_count)
    rx_angles = rng.uniform(-np.pi / 2, np.pi / 2, size=cluster_count)
    alphas = (
        rng.standard_normal(cluster_count) + 1j * rng.standard_normal(cluster_count)
    ) / np.sqrt(2.0 * cluster_count)
    for c in range(cluster_count):
        a_rx = farfield_steering(ue, rx_angles[c])
        a_tx = farfield_steering(bs, tx_angles[c])
        h_nlos += alphas[c] * np.outer(a_rx, a_tx.conj())
    return np.sqrt(kappa / (kappa + 1.0)) * h_los + np.sqrt(1.0 / (kappa + 1.0)) * h_nlos


def generate_channels(
    bs: ArrayGeometry,
    ue_geometries: Sequence[ArrayGeometry],
    ue_positions: Sequence,
    cluster_count: int = DEFAULT_CLUSTER_COUNT,
    rician_k_db: float = DEFAULT_RICIAN_K_DB,
    seed: int = 0,
    bandwidth: float = 100e6,
    noise_power: Optional[float] = None,
    tx_power: Optional[float] = None,
) -> ChannelSet:
    """Seeded geometric Rician channels for every UE.

    The line-of-sight part carries exact spherical-wave phases between
    all BS/UE element pairs; the diffuse part is ``cluster_count``
    far-field clusters with complex Gaussian gains and uniform angles.
    Dual-polarized elements double the port count with co-polarized
    propagation only: polarizations share the LOS phases but draw
    independent cluster gains, and the matrix is scaled to keep
    E[||H||_F^2] equal to the port-count product.  ``cluster_count=0``
    yields the pure LOS channel.  Deterministic for a fixed seed.
    """
    if cluster_count < 0:
        raise ValueError("cluster_count must be nonnegative")
    if len(ue_geometries) != len(ue_positions):
        raise ValueError("one position per UE geometry required")
    kappa = 10.0 ** (rician_k_db / 10.0)
    rng = np.random.default_rng(seed)
    channels = []
    for ue, pos in zip(ue_geometries, ue_positions):
        if ue.carrier_frequency != bs.carrier_frequency:
            raise ValueError("UE and BS carrier frequencies must match")
        if ue.ports_per_element != bs.ports_per_element:
            raise ValueError("mixed single/dual-polarized links are not supported")
        pos = np.asarray(pos, dtype=float)
        pols = bs.ports_per_element
        blocks = [
            _cluster_channel(bs, ue, pos, cluster_count, kappa, rng) for _ in range(pols)
        ]
        if pols == 1:
            h = blocks[0]
        else:
            nr, nt = blocks[0].shape
            h = np.zeros((pols * nr, pols * nt), dtype=np.complex128)
            for p, hp in enumerate(blocks):
                h[p * nr : (p + 1) * nr, p * nt : (p + 1) * nt] = hp
            h *= np.sqrt(pols)
        channels.append(h)
    return ChannelSet(
        tuple(channels),
        carrier_frequency=bs.carrier_frequency,
        bandwidth=bandwidth,
        noise_power=noise_power,
        tx_power=tx_power,
        seed=seed,
    )


def block_diagonalize(channels: ChannelSet) -> BdDecomposition:
    """Zero-interference precoder directions for every user.

    For user k, N_k spans the null space of the stacked other-user
    channels; the per-user directions are N_k V_k with V_k the right
    singular vectors of the effective channel H_k N_k, giving
    orthonormal columns and stream gains equal to the squared singular
    values.  A user whose null space is empty gets zero streams.
    """
    mats = channels.channels
    bs_ports = channels.bs_ports
    null_bases, effective, precoders, gains = [], [], [], []
    for k in range(channels.n_users):
        others = [mats[j] for j in range(channels.n_users) if j != k]
        if others:
            stacked = np.vstack(others)
            basis = numerics.null_space(stacked)
        else:
            basis = np.eye(bs_ports, dtype=np.complex128)
        if basis.shape[1] == 0:
            null_bases.append(basis)
            effective.append(np.zeros((mats[k].shape[0], 0), dtype=np.complex128))
            precoders.append(np.zeros((bs_ports, 0), dtype=np.complex128))
            gains.append(np.zeros(0))
            continue
        h_eff = mats[k] @ basis
        _, s, v = numerics.svd(h_eff)
        null_bases.append(basis)
        effective.append(h_eff)
        precoders.append(basis @ v)
        gains.append(s**2)
    return BdDecomposition(
        tuple(null_bases), tuple(effective), tuple(precoders), tuple(gains)
    )


def waterfill(
    stream_gains: Sequence[float], noise_power: float, total_power: float
) -> Tuple[np.ndarray, float]:
    """Water-filling power allocation over parallel streams.

    Returns (powers, water_level) with p_i = max(0, mu - noise/g_i) and
    sum(p) = total_power; maximizes sum log2(1 + p_i g_i / noise).
    """
    g = np.asarray(stream_gains, dtype=float)
    if g.size == 0:
        raise ValueError("stream_gains must be nonempty")
    if np.any(g <= 0):
        raise ValueError("stream gains must be positive")
    if noise_power <= 0 or total_power <= 0:
        raise ValueError("noise_power and total_power must be positive")
    floors = noise_power / g
    order = np.argsort(floors)
    sorted_floors = floors[order]
    cumulative = np.cumsum(sorted_floors)
    # largest active set whose common water level clears every member's floor
    n = g.size
    m = n
    while m > 1:
        mu = (total_power + cumulative[m - 1]) / m
        if mu > sorted_floors[m - 1]:
            break
        m -= 1
    mu = (total_power + cumulative[m - 1]) / m
    powers = np.maximum(0.0, mu - floors)
    return powers, float(mu)


def evaluate(channels: ChannelSet) -> PrecodingSolution:
    """Block-diagonalize, pool stream gains, water-fill, and compute rates.

    All users' positive stream gains compete for the single total power
    budget; per-user rate is bandwidth times the summed Shannon
    efficiencies of that user's streams.
    """
    bd = block_diagonalize(channels)
    pooled, owners = [], []
    for k, g in enumerate(bd.stream_gains):
        for gi in g:
            if gi > 0:
                pooled.append(gi)
                owners.append(k)
    if not pooled:
        zero_p = tuple(np.zeros(0) for _ in range(channels.n_users))
        return PrecodingSolution(bd.precoders, zero_p, (0.0,) * channels.n_users,
                                 (0,) * channels.n_users, 0.0)
    powers, mu = waterfill(pooled, channels.noise_power, channels.tx_power)
    stream_powers, rates, active = [], [], []
    idx = 0
    for k, g in enumerate(bd.stream_gains):
        pk = np.zeros(g.size)
        for i, gi in enumerate(g):
            if gi > 0:
                pk[i] = powers[idx]
                idx += 1
        stream_powers.append(pk)
        snr = pk * g / channels.noise_power
        rates.append(float(channels.bandwidth * np.sum(np.log2(1.0 + snr))))
        active.append(int(np.sum(pk > 0)))
    return PrecodingSolution(
        bd.precoders, tuple(stream_powers), tuple(rates), tuple(active), mu
    )


def rate_cdf(samples: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Empirical CDF of a sample set: sorted values and cumulative fractions."""
    values = np.sort(np.asarray(samples, dtype=float))
    if values.size == 0:
        raise ValueError("need at least one sample")
    fractions = np.arange(1, values.size + 1) / values.size
    return values, fractions
