import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellfree_assoc.config import SimConfig
from cellfree_assoc.errors import ConfigurationError
from cellfree_assoc.geometry import (cell_centric_partition, drop_network, wrap_distance,
                                     wrap_distance_matrix)

coord = st.floats(0.0, 999.999, allow_nan=False)
height = st.floats(0.0, 30.0, allow_nan=False)
points = st.tuples(coord, coord, height)


def test_drop_network_paper_size():
    cfg = SimConfig(M=100, K=40, side=1000.0)
    layout = drop_network(cfg, 7)
    assert layout.ap_positions.shape == (100, 3)
    assert layout.user_positions.shape == (40, 3)
    for pos in (layout.ap_positions, layout.user_positions):
        assert np.all(pos[:, :2] >= 0) and np.all(pos[:, :2] < 1000.0)
    assert np.all(layout.ap_positions[:, 2] == 10.0)
    assert np.all(layout.user_positions[:, 2] == 1.65)


def test_drop_network_minimal():
    cfg = SimConfig(M=1, K=1, L=1, side=1.0, N=1)
    layout = drop_network(cfg, 0)
    assert layout.M == 1 and layout.K == 1
    assert np.all(layout.ap_positions[:, :2] < 1.0)
    assert layout.cell_centric_clusters == ((0,),)


def test_drop_network_deterministic():
    cfg = SimConfig()
    a, b = drop_network(cfg, 3), drop_network(cfg, 3)
    assert a.ap_positions.tobytes() == b.ap_positions.tobytes()
    assert a.user_positions.tobytes() == b.user_positions.tobytes()
    assert a.cell_centric_clusters == b.cell_centric_clusters
    c = drop_network(cfg, 4)
    assert not np.array_equal(a.ap_positions, c.ap_positions)


def test_invalid_dimensions_rejected():
    with pytest.raises(ConfigurationError):
        SimConfig(M=0)
    with pytest.raises(ConfigurationError):
        SimConfig(side=-1.0)


def test_wrap_distance_uses_torus():
    assert wrap_distance((0, 0, 10), (990, 0, 10), 1000) == pytest.approx(10.0)


def test_wrap_distance_identity_is_height_gap():
    assert wrap_distance((3, 4, 10), (3, 4, 1.65), 1000) == pytest.approx(8.35)


def test_wrap_distance_hand_value():
    assert wrap_distance((0, 0, 10), (500, 500, 1.65), 1000) == pytest.approx(707.1560807, abs=1e-6)


def _nine_image_distance(a, b, side):
    best = math.inf
    for ox in (-side, 0.0, side):
        for oy in (-side, 0.0, side):
            best = min(best, math.dist(a, (b[0] + ox, b[1] + oy, b[2])))
    return best


@given(points, points)
def test_wrap_distance_matches_nine_images(a, b):
    assert wrap_distance(a, b, 1000.0) == pytest.approx(_nine_image_distance(a, b, 1000.0), abs=1e-9)


@given(points, points)
def test_wrap_distance_properties(a, b):
    d = wrap_distance(a, b, 1000.0)
    assert d == pytest.approx(wrap_distance(b, a, 1000.0), abs=1e-12)
    assert d <= math.dist(a, b) + 1e-9
    horiz = math.sqrt(max(d ** 2 - (a[2] - b[2]) ** 2, 0.0))
    assert horiz <= 1000.0 * math.sqrt(2) / 2 + 1e-6


def test_wrap_distance_matrix_shape():
    a = np.zeros((3, 3))
    b = np.ones((5, 3))
    assert wrap_distance_matrix(a, b, 10.0).shape == (3, 5)


def test_partition_single_cluster():
    aps = np.random.default_rng(0).uniform(0, 1000, (10, 3))
    assert cell_centric_partition(aps, 1000.0, 1) == (tuple(range(10)),)


def test_partition_tile_membership():
    aps = np.array([[100.0, 100.0, 10.0], [600.0, 100.0, 10.0], [100.0, 600.0, 10.0]])
    clusters = cell_centric_partition(aps, 1000.0, 4)
    assert clusters == ((0,), (1,), (2,), ())


def test_partition_tile_centers_are_singletons():
    centers = np.array([[250, 250, 10], [750, 250, 10], [250, 750, 10], [750, 750, 10]], float)
    assert cell_centric_partition(centers, 1000.0, 4) == ((0,), (1,), (2,), (3,))


def test_partition_requires_square():
    with pytest.raises(ConfigurationError):
        cell_centric_partition(np.zeros((2, 3)), 1.0, 3)


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.sampled_from([1, 4, 9, 16]))
def test_partition_is_partition(seed, N):
    layout = drop_network(SimConfig(M=50, K=2, N=N), seed)
    members = [m for c in layout.cell_centric_clusters for m in c]
    assert sorted(members) == list(range(50))
    assert len(layout.cell_centric_clusters) == N
