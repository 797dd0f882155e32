import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from cellfree_assoc.channel import ChannelStats, estimate_quality
from cellfree_assoc.config import SimConfig
from cellfree_assoc.errors import ContractError
from cellfree_assoc.sinr import (lsfd_sinr, rate_from_sinr, sinr_closed_form, sinr_matrix,
                                 sinr_per_user, uatf_oracle, weighted_sinr)

from conftest import drop_stats, random_stats

seeds = st.integers(0, 2 ** 32 - 1)


def _single_user(beta=2e-10, s2=6e-13):
    b = np.array([[beta]])
    alpha, gamma = estimate_quality(b, [0], [1.6], s2)
    return ChannelStats(b, gamma, alpha, np.array([0]), s2, np.array([1.6]))


def test_single_user_single_ap():
    st_ = _single_user()
    eta, n = 0.05, 4
    g, b = st_.gamma[0, 0], st_.beta[0, 0]
    expected = eta * n * g ** 2 / (eta * b * g + st_.noise_power * g)
    assert sinr_closed_form(0, [0], st_, [eta], n) == pytest.approx(expected, rel=1e-13)


def test_orthogonal_pilots_remove_contamination():
    rng = np.random.default_rng(0)
    beta = 10 ** rng.uniform(-12, -9, (2, 3))
    s2 = 1e-12
    eta = np.array([0.1, 0.05])
    a, g = estimate_quality(beta, [0, 1], [1.0, 1.0], s2)
    stats = ChannelStats(beta, g, a, np.array([0, 1]), s2, np.ones(2))
    S = [0, 2]
    gain = g[0, S].sum()
    expected = eta[0] * 4 * gain ** 2 / ((eta @ beta[:, S]) @ g[0, S] + s2 * gain)
    assert sinr_closed_form(0, S, stats, eta, 4) == pytest.approx(expected, rel=1e-13)


def test_hand_built_copilot_instance():
    beta = np.array([[1e-10, 4e-11], [2e-11, 8e-11]])
    s2, p = 1e-12, np.array([1.0, 1.0])
    a, g = estimate_quality(beta, [0, 0], p, s2)
    stats = ChannelStats(beta, g, a, np.array([0, 0]), s2, p)
    eta, n = np.array([0.1, 0.02]), 4
    S = [0, 1]
    num = eta[0] * n * g[0].sum() ** 2
    den = (eta[0] * beta[0] + eta[1] * beta[1]) @ g[0]
    den += eta[1] * n * (g[0] * beta[1] / beta[0]).sum() ** 2
    den += s2 * g[0].sum()
    assert sinr_closed_form(0, S, stats, eta, n) == pytest.approx(num / den, rel=1e-13)


def test_empty_serving_set_rejected():
    with pytest.raises(ContractError):
        sinr_closed_form(0, [], _single_user(), [0.1], 4)


def test_vectorized_forms_agree(rng):
    stats = random_stats(rng, K=5, M=7, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 5)
    mask = rng.random((5, 7)) < 0.6
    mask[:, 0] = True
    per_user = sinr_per_user(stats, eta, 4, mask)
    full = sinr_matrix(stats, eta, 4, mask)
    for k in range(5):
        scalar = sinr_closed_form(k, np.flatnonzero(mask[k]), stats, eta, 4)
        assert per_user[k] == pytest.approx(scalar, rel=1e-12)
        assert full[k, k] == pytest.approx(scalar, rel=1e-12)


@settings(max_examples=40)
@given(seeds, st.floats(1e-3, 1e3))
def test_sinr_scale_invariance(seed, c):
    rng = np.random.default_rng(seed)
    stats = random_stats(rng, K=4, M=5, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    scaled = ChannelStats(stats.beta, stats.gamma, stats.alpha, stats.pilot_of,
                          stats.noise_power * c, stats.pilot_power)
    mask = np.ones((4, 5), bool)
    np.testing.assert_allclose(sinr_per_user(scaled, eta * c, 4, mask),
                               sinr_per_user(stats, eta, 4, mask), rtol=1e-10)


def test_subset_can_beat_full_set():
    found = False
    for seed in range(20):
        cfg, layout, stats = drop_stats(seed, M=10, K=6, tau_p=3)
        eta = np.full(stats.K, cfg.P_max)
        full = sinr_per_user(stats, eta, cfg.N_AP, np.ones((stats.K, stats.M), bool))
        for k in range(stats.K):
            best = max(sinr_closed_form(k, [m], stats, eta, cfg.N_AP) for m in range(stats.M))
            if best > full[k]:
                found = True
                break
        if found:
            break
    assert found


def test_oracle_noise_free_single_user():
    beta = np.array([[1e-10, 3e-11, 5e-12]])
    s2 = 1e-30
    a, g = estimate_quality(beta, [0], [1.0], s2)
    stats = ChannelStats(beta, g, a, np.array([0]), s2, np.ones(1))
    closed = sinr_closed_form(0, [0, 1, 2], stats, [0.1], 4)
    assert closed == pytest.approx(4 * g[0].sum() ** 2 / (beta[0] @ g[0]), rel=1e-9)
    oracle = uatf_oracle(0, [0, 1, 2], stats, [0.1], 4, 50_000, 1)
    assert oracle == pytest.approx(closed, rel=0.03)


def test_oracle_smoke_single_sample():
    stats = random_stats(np.random.default_rng(1))
    v = uatf_oracle(0, [0, 1], stats, np.full(4, 0.1), 4, 1, 0)
    assert np.isfinite(v) and v >= 0


def test_oracle_agrees_with_closed_form():
    rng = np.random.default_rng(11)
    stats = random_stats(rng, K=4, M=6, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    S = [1, 3, 4]
    oracle = uatf_oracle(np.arange(4), S, stats, eta, 4, 100_000, 3)
    closed = np.array([sinr_closed_form(k, S, stats, eta, 4) for k in range(4)])
    np.testing.assert_allclose(oracle, closed, rtol=0.02)


def test_oracle_is_seeded():
    stats = random_stats(np.random.default_rng(2))
    eta = np.full(4, 0.1)
    assert uatf_oracle(1, [0], stats, eta, 4, 500, 9) == uatf_oracle(1, [0], stats, eta, 4, 500, 9)


def test_uniform_weights_specialize_exactly(rng):
    stats = random_stats(rng, K=4, M=6, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    S = [0, 2, 3, 5]
    w = np.zeros(6)
    w[S] = 1.0
    for k in range(4):
        assert weighted_sinr(k, w, stats, eta, 4) == pytest.approx(
            sinr_closed_form(k, S, stats, eta, 4), rel=1e-12)


def test_lsfd_weights_attain_reported_value(rng):
    stats = random_stats(rng, K=4, M=6, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    value, weights = lsfd_sinr(2, range(6), stats, eta, 4)
    assert weighted_sinr(2, weights, stats, eta, 4) == pytest.approx(value, rel=1e-10)


@settings(max_examples=40)
@given(seeds)
def test_lsfd_dominates_uniform(seed):
    rng = np.random.default_rng(seed)
    stats = random_stats(rng, K=4, M=6, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    for k in range(4):
        assert lsfd_sinr(k, range(6), stats, eta, 4)[0] >= sinr_closed_form(k, range(6), stats, eta, 4) * (1 - 1e-9)


@settings(max_examples=40)
@given(seeds)
def test_lsfd_monotone_in_domain(seed):
    rng = np.random.default_rng(seed)
    stats = random_stats(rng, K=4, M=8, tau_p=2)
    eta = rng.uniform(0.01, 0.1, 4)
    order = rng.permutation(8)
    small, large = order[:3], order[:6]
    for k in range(4):
        assert lsfd_sinr(k, large, stats, eta, 4)[0] >= lsfd_sinr(k, small, stats, eta, 4)[0] * (1 - 1e-9)


def _numeric_max(k, stats, eta, aps, starts=8, seed=0):
    rng = np.random.default_rng(seed)
    def neg(x):
        w = np.zeros(stats.M)
        w[aps[0]] = 1.0
        w[aps[1:]] = x
        if not np.any(w):
            return 0.0
        return -weighted_sinr(k, w, stats, eta, 4)
    best = 0.0
    for _ in range(starts):
        res = optimize.minimize(neg, rng.uniform(0, 2, len(aps) - 1), method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000})
        best = max(best, -res.fun)
    return best


def test_lsfd_matches_numeric_search_single_user():
    beta = np.array([[1e-10, 3e-11, 5e-12]])
    s2 = 1e-12
    a, g = estimate_quality(beta, [0], [1.6], s2)
    stats = ChannelStats(beta, g, a, np.array([0]), s2, np.array([1.6]))
    eta = np.array([0.1])
    value, _ = lsfd_sinr(0, [0, 1, 2], stats, eta, 4)
    assert value == pytest.approx(_numeric_max(0, stats, eta, [0, 1, 2]), rel=1e-3)


def test_lsfd_matches_numeric_search_with_contamination(rng):
    stats = random_stats(rng, K=3, M=3, tau_p=1)
    eta = rng.uniform(0.01, 0.1, 3)
    value, _ = lsfd_sinr(0, [0, 1, 2], stats, eta, 4)
    assert value == pytest.approx(_numeric_max(0, stats, eta, [0, 1, 2]), rel=1e-3)


def test_rate_from_sinr():
    cfg = SimConfig(tau_p=16, tau_c=200, W=2e7)
    rep = rate_from_sinr([0.0, 1.0, 3.0], cfg)
    np.testing.assert_allclose(rep.rate, [0.0, 1.84e7, 3.68e7], rtol=1e-14)
    assert rep.sum_rate == pytest.approx(rep.rate.sum())


def test_rate_rejects_negative_sinr():
    with pytest.raises(ContractError):
        rate_from_sinr([-1.0], SimConfig())
