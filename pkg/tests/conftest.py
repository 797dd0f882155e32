import numpy as np
import pytest

from cellfree_assoc import assignment
from cellfree_assoc.channel import ChannelStats, build_channel_stats, estimate_quality
from cellfree_assoc.config import SimConfig
from cellfree_assoc.geometry import drop_network

ACCEPTANCE_LINES = []


def random_stats(rng, K=4, M=6, tau_p=2, sigma2=1e-12, p=0.2):
    """Synthetic statistics with beta spread over three decades."""
    beta = 10.0 ** rng.uniform(-12.0, -9.0, size=(K, M))
    pilots = np.arange(K) % tau_p
    rng.shuffle(pilots)
    power = np.full(K, p)
    alpha, gamma = estimate_quality(beta, pilots, power, sigma2)
    return ChannelStats(beta, gamma, alpha, pilots, sigma2, power)


def drop_stats(seed, **overrides):
    cfg = SimConfig(**{"M": 8, "K": 4, "tau_p": 2, "L": 3, "N": 4, "side": 200.0, **overrides})
    layout = drop_network(cfg, seed)
    stats = build_channel_stats(layout, cfg, [seed, 1], [seed, 2])
    return cfg, layout, stats


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(params=sorted(assignment._BACKENDS))
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
