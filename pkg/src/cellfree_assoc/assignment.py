"""User to virtual-cluster matching that maximizes the sum of log2(1 + SINR)."""

from __future__ import annotations

import functools
import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from .channel import ChannelStats
from .clustering import ClusterCatalog
from .config import SimConfig
from .errors import DimensionError, InputError
from .sinr import sinr_matrix

from . import _munkres_py

if os.environ.get("CELLFREE_ASSOC_PURE_PYTHON"):
    _munkres_ext = None
else:
    try:
        from . import _munkres_ext
    except ImportError:
        _munkres_ext = None

BACKEND = "compiled" if _munkres_ext is not None else "python"
_BACKENDS = {"python": _munkres_py.munkres_min}
if _munkres_ext is not None:
    _BACKENDS["compiled"] = _munkres_ext.munkres_min

BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class AssociationResult:
    """``assigned_vc[k]`` is the (0-based) virtual cluster serving user k."""

    assigned_vc: np.ndarray
    objective: float


def _objective(F: np.ndarray, assigned) -> float:
    total = 0.0
    for k, j in enumerate(assigned):
        total += float(F[k, j])
    return total


def build_weight_matrix(catalog: ClusterCatalog, stats: ChannelStats, config: SimConfig) -> np.ndarray:
    """``F[k, j] = log2(1 + SINR)`` of user k on cluster j, all users at P_max."""
    eta = np.full(stats.K, config.P_max)
    sinr = sinr_matrix(stats, eta, config.N_AP, catalog.masks(stats.M))
    return np.log2(1.0 + sinr)


def hungarian_max(F, allow_sharing: bool = False, backend: str | None = None) -> AssociationResult:
    """Optimal one-to-one assignment of all K rows to distinct columns.

    The maximization is turned into a minimization over ``max(F) - F`` and
    solved with Munkres' covering method. With ``allow_sharing`` and
    ``K > J`` every column is replicated ``ceil(K / J)`` times so several
    users may share one cluster.
    """
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2:
        raise InputError("weight matrix must be two-dimensional")
    if not np.all(np.isfinite(F)):
        raise InputError("weight matrix contains non-finite entries")
    K, J = F.shape
    if K == 0:
        return AssociationResult(np.empty(0, dtype=np.int64), 0.0)
    if J == 0:
        raise DimensionError("weight matrix has no columns")
    reps = 1
    if K > J:
        if not allow_sharing:
            raise DimensionError(f"{K} users cannot be matched one-to-one to {J} clusters")
        reps = math.ceil(K / J)
    work = np.repeat(F, reps, axis=1) if reps > 1 else F
    flipped = work.max() - work
    solve = _BACKENDS[backend or BACKEND]
    cols = np.asarray(solve(np.ascontiguousarray(flipped)), dtype=np.int64) // reps
    return AssociationResult(cols, _objective(F, cols))


def brute_force_max(F) -> AssociationResult:
    """Exhaustive search over all injective user to cluster maps."""
    F = np.asarray(F, dtype=np.float64)
    K, J = F.shape
    if K > BRUTE_FORCE_LIMIT or J > BRUTE_FORCE_LIMIT:
        raise DimensionError(f"brute force limited to {BRUTE_FORCE_LIMIT}x{BRUTE_FORCE_LIMIT}")
    if K > J:
        raise DimensionError(f"{K} users cannot be matched one-to-one to {J} clusters")
    if K == 0:
        return AssociationResult(np.empty(0, dtype=np.int64), 0.0)
    perms = _injections(K, J)
    values = F[np.arange(K), perms].sum(axis=1)
    # re-score near-ties with the same sequential sum hungarian_max reports
    near = np.flatnonzero(values >= values.max() - 1e-9 * max(1.0, abs(values.max())))
    best = max(near, key=lambda i: (_objective(F, perms[i]), -i))
    return AssociationResult(perms[best].copy(), _objective(F, perms[best]))


@functools.lru_cache(maxsize=None)
def _injections(K: int, J: int) -> np.ndarray:
    perms = np.array(list(itertools.permutations(range(J), K)), dtype=np.int64)
    perms.setflags(write=False)
    return perms.reshape(-1, K)
