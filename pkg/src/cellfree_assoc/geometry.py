"""Network drops on a wrap-around square and the cell-centric AP partition."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .errors import ConfigurationError


@dataclass(frozen=True)
class NetworkLayout:
    """AP and user positions (rows of ``(x, y, z)``) plus the CPU partition.

    ``cell_centric_clusters[n]`` is the sorted tuple of AP indices wired to
    CPU ``n``. Indices are 0-based throughout the package.
    """

    ap_positions: np.ndarray
    user_positions: np.ndarray
    side: float
    cell_centric_clusters: tuple

    @property
    def M(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def K(self) -> int:
        return self.user_positions.shape[0]

    @property
    def N(self) -> int:
        return len(self.cell_centric_clusters)

    def cpu_of_ap(self) -> np.ndarray:
        owner = np.empty(self.M, dtype=np.int64)
        for n, members in enumerate(self.cell_centric_clusters):
            owner[list(members)] = n
        return owner


def _uniform_square(rng: np.random.Generator, count: int, side: float) -> np.ndarray:
    xy = rng.uniform(0.0, side, size=(count, 2))
    # side*u may round up to side itself
    return np.minimum(xy, np.nextafter(side, 0.0))


def drop_network(config: SimConfig, seed) -> NetworkLayout:
    """Place ``config.M`` APs and ``config.K`` users i.i.d. uniformly.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    APs are drawn before users, so drops that only differ in ``K`` share the
    same AP deployment.
    """
    if config.M < 1 or config.K < 1 or not config.side > 0:
        raise ConfigurationError("drop_network needs M >= 1, K >= 1 and side > 0")
    rng = np.random.default_rng(seed)
    ap_xy = _uniform_square(rng, config.M, config.side)
    user_xy = _uniform_square(rng, config.K, config.side)
    aps = np.column_stack([ap_xy, np.full(config.M, float(config.ap_height))])
    users = np.column_stack([user_xy, np.full(config.K, float(config.user_height))])
    clusters = cell_centric_partition(aps, config.side, config.N)
    return NetworkLayout(aps, users, float(config.side), clusters)


def wrap_distance(a, b, side: float) -> float:
    """3D distance using the nearest toroidal image in x and y."""
    return float(wrap_distance_matrix(np.asarray(a, float)[None], np.asarray(b, float)[None], side)[0, 0])


def wrap_distance_matrix(a: np.ndarray, b: np.ndarray, side: float) -> np.ndarray:
    """Pairwise wrap-around distances between rows of ``a`` and rows of ``b``.

    For each axis the offset is reduced modulo ``side`` and the shorter of
    the two directions is kept, which equals the minimum over the nine
    translated copies of ``b``. Heights are compared directly.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    delta = np.abs(a[:, None, :2] - b[None, :, :2]) % side
    delta = np.minimum(delta, side - delta)
    dz = a[:, None, 2] - b[None, :, 2]
    return np.sqrt(delta[..., 0] ** 2 + delta[..., 1] ** 2 + dz ** 2)


def cell_centric_partition(ap_positions: np.ndarray, side: float, N: int) -> tuple:
    """Assign APs to the tiles of a ``g x g`` grid (``N = g**2``), row-major.

    A tile without APs yields an empty cluster.
    """
    g = math.isqrt(N) if N >= 1 else 0
    if N < 1 or g * g != N:
        raise ConfigurationError(f"N={N} must be a positive perfect square for the grid partition")
    xy = np.asarray(ap_positions, dtype=float)[:, :2] % side
    cells = np.minimum((xy / side * g).astype(np.int64), g - 1)
    tile = cells[:, 1] * g + cells[:, 0]
    return tuple(tuple(int(m) for m in np.flatnonzero(tile == n)) for n in range(N))
