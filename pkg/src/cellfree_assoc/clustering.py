"""Virtual clusters, baseline serving sets and CPU-side bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractError
from .geometry import NetworkLayout, wrap_distance_matrix


@dataclass(frozen=True)
class ClusterCatalog:
    """Candidate virtual clusters built from AP neighborhoods.

    ``neighbor_sets[m]`` lists AP ``m`` followed by its ``L - 1`` nearest
    APs in distance order. ``virtual_clusters`` holds the distinct
    neighborhoods as sorted tuples, in order of first appearance.
    """

    neighbor_sets: tuple
    virtual_clusters: tuple

    @property
    def J(self) -> int:
        return len(self.virtual_clusters)

    def masks(self, M: int) -> np.ndarray:
        """Boolean ``J x M`` membership matrix."""
        return sets_to_mask(self.virtual_clusters, M)


@dataclass(frozen=True)
class ServingAssignment:
    """Who decodes whom.

    ``served_by[k]``: APs decoding user k. ``users_of_ap[m]``: users decoded
    by AP m. ``decode_sets[k][n]``: APs of CPU n decoding user k.
    ``cpu_sets[k]``: CPUs holding a non-empty ``decode_sets[k][n]``.
    """

    served_by: tuple
    users_of_ap: tuple
    decode_sets: tuple
    cpu_sets: tuple

    @property
    def K(self) -> int:
        return len(self.served_by)

    def mask(self, M: int) -> np.ndarray:
        return sets_to_mask(self.served_by, M)


def sets_to_mask(sets, M: int) -> np.ndarray:
    mask = np.zeros((len(sets), M), dtype=bool)
    for i, s in enumerate(sets):
        mask[i, list(s)] = True
    return mask


def build_pbvc(layout: NetworkLayout, L: int) -> ClusterCatalog:
    """Position-based virtual clusters of ``L`` mutually near APs."""
    M = layout.M
    if not 1 <= L <= M:
        raise ConfigurationError(f"L must satisfy 1 <= L <= M (L={L}, M={M})")
    dist = wrap_distance_matrix(layout.ap_positions, layout.ap_positions, layout.side)
    neighbor_sets = []
    seen = {}
    for m in range(M):
        others = np.delete(np.arange(M), m)
        # stable sort: equal distances keep ascending AP index
        order = others[np.argsort(dist[m, others], kind="stable")]
        g = (m,) + tuple(int(i) for i in order[: L - 1])
        neighbor_sets.append(g)
        seen.setdefault(tuple(sorted(g)), None)
    return ClusterCatalog(tuple(neighbor_sets), tuple(seen))


def build_uc_sets(beta, L: int) -> tuple:
    """Each user's ``L`` strongest APs by large-scale gain (sorted tuples)."""
    beta = np.asarray(beta, dtype=float)
    if not 1 <= L <= beta.shape[1]:
        raise ConfigurationError(f"L must satisfy 1 <= L <= M (L={L}, M={beta.shape[1]})")
    order = np.argsort(-beta, axis=1, kind="stable")[:, :L]
    return tuple(tuple(sorted(int(m) for m in row)) for row in order)


def build_fcf_sets(M: int, K: int) -> tuple:
    everyone = tuple(range(M))
    return tuple(everyone for _ in range(K))


def derive_cpu_sets(served_by, cell_centric_clusters) -> tuple:
    """Split each serving set across CPUs; returns ``(decode_sets, cpu_sets)``."""
    clusters = [frozenset(c) for c in cell_centric_clusters]
    decode_sets = []
    cpu_sets = []
    for aps in served_by:
        parts = tuple(tuple(sorted(set(aps) & c)) for c in clusters)
        if sum(len(p) for p in parts) != len(set(aps)):
            raise ContractError("serving set contains APs outside the cell-centric clusters")
        decode_sets.append(parts)
        cpu_sets.append(tuple(n for n, p in enumerate(parts) if p))
    return tuple(decode_sets), tuple(cpu_sets)


def make_assignment(served_by, cell_centric_clusters, M: int) -> ServingAssignment:
    served_by = tuple(tuple(sorted(set(int(m) for m in s))) for s in served_by)
    users_of_ap = [[] for _ in range(M)]
    for k, aps in enumerate(served_by):
        for m in aps:
            users_of_ap[m].append(k)
    decode_sets, cpu_sets = derive_cpu_sets(served_by, cell_centric_clusters)
    return ServingAssignment(served_by, tuple(tuple(u) for u in users_of_ap), decode_sets, cpu_sets)


def backhaul_load(assignment: ServingAssignment) -> tuple:
    """``(ap_user_pairs, cpu_coop_pairs)`` summed over users."""
    ap_user_pairs = sum(len(s) for s in assignment.served_by)
    cpu_coop_pairs = sum(len(b) for b in assignment.cpu_sets)
    return ap_user_pairs, cpu_coop_pairs
