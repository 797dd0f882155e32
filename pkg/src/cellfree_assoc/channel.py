"""Large-scale fading, MMSE estimate statistics and fractional power control."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .config import SimConfig
from .errors import ContractError, NumericalError
from .geometry import NetworkLayout, wrap_distance_matrix

MIN_DISTANCE = 1.0


@dataclass(frozen=True)
class ChannelStats:
    """Per-drop statistics; all matrices are ``K x M`` in linear scale.

    ``pilot_of`` holds 0-based pilot indices, ``pilot_power`` the training
    powers ``p_k = tau_p * p~_k`` in watts and ``noise_power`` the receiver
    noise variance in watts.
    """

    beta: np.ndarray
    gamma: np.ndarray
    alpha: np.ndarray
    pilot_of: np.ndarray
    noise_power: float
    pilot_power: np.ndarray

    @property
    def K(self) -> int:
        return self.beta.shape[0]

    @property
    def M(self) -> int:
        return self.beta.shape[1]

    def copilot(self) -> np.ndarray:
        """Boolean ``K x K`` mask of distinct users sharing a pilot."""
        same = self.pilot_of[:, None] == self.pilot_of[None, :]
        np.fill_diagonal(same, False)
        return same


def pathloss_db(d, f_c):
    """Deterministic NLOS gain in dB; distances below 1 m are clamped."""
    d = np.maximum(np.asarray(d, dtype=float), MIN_DISTANCE)
    out = -36.7 * np.log10(d) - 22.7 - 26.0 * np.log10(f_c)
    return float(out) if out.ndim == 0 else out


def noise_power(noise_psd: float, W: float, noise_figure: float) -> float:
    """Thermal noise power in watts over bandwidth ``W`` (Hz)."""
    dbm = noise_psd + 10.0 * np.log10(W) + noise_figure
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def _exp_correlated_normal(rng, positions, side, sigma, corr_distance):
    n = positions.shape[0]
    dist = wrap_distance_matrix(positions, positions, side)
    cov = sigma ** 2 * np.exp(-dist / corr_distance)
    try:
        chol = linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError:
        try:
            chol = linalg.cholesky(cov + 1e-10 * np.eye(n), lower=True)
        except linalg.LinAlgError as exc:
            raise NumericalError("shadowing covariance is not positive definite") from exc
    return chol @ rng.standard_normal(n)


def correlated_shadowing(layout: NetworkLayout, config: SimConfig, seed) -> np.ndarray:
    """Shadowing in dB, ``z[k, m] = sqrt(d) a[m] + sqrt(1 - d) b[k]``.

    ``a`` (per AP) and ``b`` (per user) are Gaussian with variance
    ``sigma_sh**2`` and covariance decaying as ``exp(-dist / corr_distance)``
    in the wrap-around metric; ``d`` is ``config.shadow_split``.
    """
    K, M = layout.K, layout.M
    if config.sigma_sh == 0:
        return np.zeros((K, M))
    rng = np.random.default_rng(seed)
    a = _exp_correlated_normal(rng, layout.ap_positions, layout.side,
                               config.sigma_sh, config.shadow_corr_distance)
    b = _exp_correlated_normal(rng, layout.user_positions, layout.side,
                               config.sigma_sh, config.shadow_corr_distance)
    split = config.shadow_split
    return np.sqrt(split) * a[None, :] + np.sqrt(1.0 - split) * b[:, None]


def large_scale_fading(layout: NetworkLayout, config: SimConfig, shadowing: np.ndarray) -> np.ndarray:
    d = wrap_distance_matrix(layout.user_positions, layout.ap_positions, layout.side)
    return 10.0 ** ((pathloss_db(d, config.f_c) + shadowing) / 10.0)


def assign_pilots(K: int, tau_p: int, seed) -> np.ndarray:
    """Random pilot indices in ``0..tau_p-1``.

    Users get distinct pilots when ``K <= tau_p``. Otherwise every pilot is
    used ``K // tau_p`` or ``K // tau_p + 1`` times in random order.
    """
    if tau_p < 1:
        raise ContractError("tau_p must be >= 1")
    rng = np.random.default_rng(seed)
    reps = -(-K // tau_p)
    pool = np.concatenate([rng.permutation(tau_p) for _ in range(reps)])[:K]
    return rng.permutation(pool).astype(np.int64)


def estimate_quality(beta, pilot_of, pilot_power, noise_power):
    """MMSE projection gains ``alpha`` and estimate mean-squares ``gamma``."""
    beta = np.asarray(beta, dtype=float)
    pilot_of = np.asarray(pilot_of)
    p = np.asarray(pilot_power, dtype=float)
    same = (pilot_of[:, None] == pilot_of[None, :]).astype(float)
    denom = same @ (p[:, None] * beta) + noise_power
    alpha = np.sqrt(p)[:, None] * beta / denom
    gamma = np.sqrt(p)[:, None] * beta * alpha
    return alpha, gamma


def fpc_powers(beta, serving_mask, config: SimConfig) -> np.ndarray:
    """Fractional power control ``min(P_max, P_0 * zeta**-kappa)``.

    ``zeta[k]`` is the square root of the summed ``beta`` over user k's
    serving APs (row ``k`` of the boolean ``serving_mask``).
    """
    beta = np.asarray(beta, dtype=float)
    mask = np.asarray(serving_mask, dtype=bool)
    if mask.shape != beta.shape:
        raise ContractError("serving_mask must have the shape of beta")
    if not mask.any(axis=1).all():
        raise ContractError("every user needs a non-empty serving set")
    zeta = np.sqrt(np.where(mask, beta, 0.0).sum(axis=1))
    with np.errstate(divide="ignore", over="ignore"):
        return np.minimum(config.P_max, config.P_0 * zeta ** (-config.kappa))


def build_channel_stats(layout: NetworkLayout, config: SimConfig, shadow_seed, pilot_seed) -> ChannelStats:
    """Assemble beta, pilots and estimate statistics for one drop."""
    z = correlated_shadowing(layout, config, shadow_seed)
    beta = large_scale_fading(layout, config, z)
    pilots = assign_pilots(layout.K, config.tau_p, pilot_seed)
    p = np.full(layout.K, config.tau_p * config.P_max)
    sigma2 = noise_power(config.noise_psd, config.W, config.noise_figure)
    alpha, gamma = estimate_quality(beta, pilots, p, sigma2)
    return ChannelStats(beta, gamma, alpha, pilots, sigma2, p)
