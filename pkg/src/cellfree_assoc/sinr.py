"""Closed-form uplink MRC SINR, its LSFD-weighted form and a Monte-Carlo oracle.

All SINRs are the use-and-then-forget lower bound: the mean combined gain
of the desired user is the signal, everything else is effective noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .channel import ChannelStats
from .config import SimConfig
from .errors import ContractError, NumericalError


@dataclass(frozen=True)
class RateReport:
    sinr: np.ndarray
    rate: np.ndarray
    sum_rate: float


def rate_from_sinr(sinr, config: SimConfig) -> RateReport:
    """Per-user rate ``(tau_u / tau_c) * W * log2(1 + sinr)`` in bit/s."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0) or not np.all(np.isfinite(sinr)):
        raise ContractError("SINR values must be finite and nonnegative")
    rate = config.prelog * config.W * np.log2(1.0 + sinr)
    return RateReport(sinr, rate, float(rate.sum()))


def _copilot_pairs(stats: ChannelStats):
    return np.nonzero(stats.copilot())


def sinr_matrix(stats: ChannelStats, eta, n_antennas: int, set_masks) -> np.ndarray:
    """SINR of every user against every candidate serving set.

    ``set_masks`` is a boolean ``J x M`` matrix; the result is ``K x J``.
    """
    eta = np.asarray(eta, dtype=float)
    S = np.asarray(set_masks, dtype=float)
    beta, gamma = stats.beta, stats.gamma
    gain = gamma @ S.T
    received = eta @ beta
    interference = (gamma * received) @ S.T
    noise = stats.noise_power * gain
    contamination = np.zeros_like(gain)
    ks, ls = _copilot_pairs(stats)
    if ks.size:
        coherent = ((gamma / beta)[ks] * beta[ls]) @ S.T
        np.add.at(contamination, ks, (eta[ls] * n_antennas)[:, None] * coherent ** 2)
    signal = eta[:, None] * n_antennas * gain ** 2
    denom = interference + contamination + noise
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(gain > 0, signal / denom, 0.0)


def sinr_per_user(stats: ChannelStats, eta, n_antennas: int, serving_mask) -> np.ndarray:
    """SINR of user ``k`` over its own serving set ``serving_mask[k]``."""
    mask = np.asarray(serving_mask, dtype=bool)
    if mask.shape != stats.beta.shape:
        raise ContractError("serving_mask must be K x M")
    if not mask.any(axis=1).all():
        raise ContractError("every user needs a non-empty serving set")
    eta = np.asarray(eta, dtype=float)
    beta, gamma = stats.beta, stats.gamma
    g = np.where(mask, gamma, 0.0)
    gain = g.sum(axis=1)
    interference = g @ (eta @ beta)
    contamination = np.zeros(stats.K)
    ks, ls = _copilot_pairs(stats)
    if ks.size:
        coherent = ((g / beta)[ks] * beta[ls]).sum(axis=1)
        np.add.at(contamination, ks, eta[ls] * n_antennas * coherent ** 2)
    denom = interference + contamination + stats.noise_power * gain
    return eta * n_antennas * gain ** 2 / denom


def sinr_closed_form(k: int, serving_set, stats: ChannelStats, eta, n_antennas: int) -> float:
    """Uplink MRC SINR of user ``k`` when decoded by the APs in ``serving_set``."""
    aps = sorted(set(int(m) for m in serving_set))
    if not aps:
        raise ContractError("serving set must be non-empty")
    mask = np.zeros((1, stats.M), dtype=bool)
    mask[0, aps] = True
    row = sinr_matrix(stats, eta, n_antennas, mask)
    return float(row[k, 0])


def _lsfd_terms(k, domain, stats, eta, n_antennas):
    """Signal vector ``b`` and quadratic-form matrix ``C`` on ``domain``."""
    eta = np.asarray(eta, dtype=float)
    beta = stats.beta[:, domain]
    gk = stats.gamma[k, domain]
    b = gk
    C = np.diag(gk * (eta @ beta) + stats.noise_power * gk)
    for l in np.flatnonzero(stats.copilot()[k]):
        c = gk * beta[l] / beta[k]
        C += eta[l] * n_antennas * np.outer(c, c)
    return b, C


def weighted_sinr(k: int, weights, stats: ChannelStats, eta, n_antennas: int) -> float:
    """SINR of user ``k`` when the per-AP MR statistics are combined with
    real ``weights`` (length M; zero weight excludes an AP)."""
    a = np.asarray(weights, dtype=float)
    domain = np.flatnonzero(a)
    if domain.size == 0:
        raise ContractError("weights must have at least one non-zero entry")
    b, C = _lsfd_terms(k, domain, stats, eta, n_antennas)
    a = a[domain]
    num = np.asarray(eta, dtype=float)[k] * n_antennas * (a @ b) ** 2
    return float(num / (a @ C @ a))


def lsfd_sinr(k: int, weight_domain, stats: ChannelStats, eta, n_antennas: int):
    """Best weighted SINR of user ``k`` over weights supported on ``weight_domain``.

    Maximizing ``(a.b)**2 / a.C.a`` is a generalized Rayleigh quotient whose
    optimum is ``a = C^-1 b`` with value ``b.C^-1.b``. Returns the SINR and the
    length-M weight vector (zero outside the domain), scaled to unit max.
    """
    domain = np.array(sorted(set(int(m) for m in weight_domain)), dtype=np.int64)
    if domain.size == 0:
        raise ContractError("weight domain must be non-empty")
    b, C = _lsfd_terms(k, domain, stats, eta, n_antennas)
    try:
        factor = linalg.cho_factor(C, lower=True)
    except linalg.LinAlgError:
        jitter = 1e-12 * np.trace(C) / C.shape[0]
        try:
            factor = linalg.cho_factor(C + jitter * np.eye(C.shape[0]), lower=True)
        except linalg.LinAlgError as exc:
            raise NumericalError(f"LSFD matrix of user {k} is singular") from exc
    a = linalg.cho_solve(factor, b)
    value = float(np.asarray(eta, dtype=float)[k] * n_antennas * (b @ a))
    weights = np.zeros(stats.M)
    weights[domain] = a / np.max(np.abs(a))
    return value, weights


def lsfd_sinr_per_user(stats: ChannelStats, eta, n_antennas: int, domain_mask) -> np.ndarray:
    mask = np.asarray(domain_mask, dtype=bool)
    return np.array([
        lsfd_sinr(k, np.flatnonzero(mask[k]), stats, eta, n_antennas)[0]
        for k in range(stats.K)
    ])


# --- Monte-Carlo oracle ----------------------------------------------------


def _cn(rng, shape, var=1.0):
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def pilot_book(tau_p: int) -> np.ndarray:
    """Orthonormal pilot sequences as columns (normalized DFT)."""
    t = np.arange(tau_p)
    return np.exp(-2j * np.pi * np.outer(t, t) / tau_p) / np.sqrt(tau_p)


def sample_mmse_estimates(stats: ChannelStats, n_antennas: int, aps, num_samples: int, rng):
    """Draw true channels and their MMSE estimates at the given APs.

    Returns ``(g, g_hat)`` of shape ``(num_samples, K, len(aps), n_antennas)``.
    Each AP projects its received pilot block on the user's sequence and
    scales by the MMSE gain ``alpha``.
    """
    aps = np.asarray(aps, dtype=np.int64)
    K = stats.K
    tau_p = int(stats.pilot_of.max()) + 1
    phi = pilot_book(tau_p)[:, stats.pilot_of]  # tau_p x K
    beta = stats.beta[:, aps]
    g = np.sqrt(beta)[None, :, :, None] * _cn(rng, (num_samples, K, aps.size, n_antennas))
    # received pilot block Y_m = sum_i sqrt(p_i) g_i phi_i^H + W_m, shape (s, m, n, tau_p)
    tx = np.sqrt(stats.pilot_power)[None, :, None, None] * g
    Y = np.einsum("simn,ti->smnt", tx, phi.conj())
    Y += _cn(rng, Y.shape, stats.noise_power)
    y_proj = np.einsum("smnt,tk->skmn", Y, phi)
    g_hat = stats.alpha[:, aps][None, :, :, None] * y_proj
    return g, g_hat


def uatf_oracle(k, serving_set, stats: ChannelStats, eta, n_antennas: int,
                num_samples: int, seed, chunk: int = 20000):
    """Monte-Carlo estimate of the use-and-then-forget SINR under MRC.

    ``k`` may be a single user or a sequence of users sharing
    ``serving_set``; the return type follows. Every expectation is a sample
    mean over common draws of fading, pilot noise and data-phase noise.
    """
    users = np.atleast_1d(np.asarray(k, dtype=np.int64))
    aps = np.array(sorted(set(int(m) for m in serving_set)), dtype=np.int64)
    if aps.size == 0:
        raise ContractError("serving set must be non-empty")
    if num_samples < 1:
        raise ContractError("num_samples must be >= 1")
    eta = np.asarray(eta, dtype=float)
    rng = np.random.default_rng(seed)
    K = stats.K
    mean_gain = np.zeros((users.size, K), dtype=complex)
    power_gain = np.zeros((users.size, K))
    noise_out = np.zeros(users.size)
    done = 0
    while done < num_samples:
        s = min(chunk, num_samples - done)
        g, g_hat = sample_mmse_estimates(stats, n_antennas, aps, s, rng)
        v = g_hat[:, users]  # MR combiners
        # combined gain of user l's channel through user k's combiners, summed over serving APs
        cross = np.einsum("skmn,slmn->skl", v.conj(), g)
        w = _cn(rng, (s, aps.size, n_antennas), stats.noise_power)
        filtered_noise = np.einsum("skmn,smn->sk", v.conj(), w)
        mean_gain += cross.sum(axis=0)
        power_gain += (np.abs(cross) ** 2).sum(axis=0)
        noise_out += (np.abs(filtered_noise) ** 2).sum(axis=0)
        done += s
    mean_gain /= num_samples
    power_gain /= num_samples
    noise_out /= num_samples

    out = np.empty(users.size)
    for i, kk in enumerate(users):
        desired = np.abs(mean_gain[i, kk]) ** 2
        uncertainty = max(power_gain[i, kk] - desired, 0.0)
        others = np.delete(np.arange(K), kk)
        interference = eta[others] @ power_gain[i, others]
        out[i] = eta[kk] * desired / (eta[kk] * uncertainty + interference + noise_out[i])
    return float(out[0]) if np.ndim(k) == 0 else out
