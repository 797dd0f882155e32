"""Monte-Carlo experiments comparing PBVC against the FCF, UC and LSFD baselines."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assignment import AssociationResult, build_weight_matrix, hungarian_max
from .channel import ChannelStats, build_channel_stats, fpc_powers
from .clustering import (ClusterCatalog, backhaul_load, build_fcf_sets,
                         build_pbvc, build_uc_sets, make_assignment, sets_to_mask)
from .config import SCHEMES, SimConfig
from .errors import CellFreeError, ConfigurationError, ContractError
from .geometry import NetworkLayout, drop_network
from .sinr import lsfd_sinr_per_user, rate_from_sinr, sinr_per_user

log = logging.getLogger(__name__)

# purpose tags for per-drop random substreams
_LAYOUT, _SHADOW, _PILOTS = 1, 2, 3


def drop_stream(seed: int, drop: int, tag: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(drop), int(tag)])


def prepare_drop(config: SimConfig, drop: int):
    """Layout and channel statistics of drop ``drop``; depends only on
    ``(config, config.seed, drop)``."""
    layout = drop_network(config, drop_stream(config.seed, drop, _LAYOUT))
    stats = build_channel_stats(layout, config,
                                drop_stream(config.seed, drop, _SHADOW),
                                drop_stream(config.seed, drop, _PILOTS))
    return layout, stats


def associate_pbvc(catalog: ClusterCatalog, stats: ChannelStats, config: SimConfig) -> AssociationResult:
    F = build_weight_matrix(catalog, stats, config)
    return hungarian_max(F, allow_sharing=config.allow_vc_sharing)


def run_scheme(scheme: str, layout: NetworkLayout, stats: ChannelStats,
               catalog: ClusterCatalog | None, config: SimConfig,
               association: AssociationResult | None = None):
    """Evaluate one scheme on one drop; returns ``(RateReport, ServingAssignment)``.

    The matching is computed at uniform power ``P_max``; reported rates use
    fractional power control over each user's serving (or weighting) set.
    """
    K, M = stats.K, stats.M
    if scheme in ("pbvc", "lsfd_pbvc"):
        if catalog is None:
            raise ContractError(f"scheme {scheme} needs a cluster catalog")
        if association is None:
            association = associate_pbvc(catalog, stats, config)
        served = [catalog.virtual_clusters[j] for j in association.assigned_vc]
    elif scheme in ("fcf", "lsfd"):
        served = build_fcf_sets(M, K)
    elif scheme == "uc":
        served = build_uc_sets(stats.beta, config.L)
    else:
        raise ConfigurationError(f"unknown scheme {scheme!r}")

    serving = make_assignment(served, layout.cell_centric_clusters, M)
    mask = sets_to_mask(serving.served_by, M)
    eta = fpc_powers(stats.beta, mask, config)
    if scheme.startswith("lsfd"):
        sinr = lsfd_sinr_per_user(stats, eta, config.N_AP, mask)
    else:
        sinr = sinr_per_user(stats, eta, config.N_AP, mask)
    return rate_from_sinr(sinr, config), serving


@dataclass(frozen=True)
class DropRecord:
    scheme: str
    L: int
    K: int
    seed: int
    drop: int
    sum_rate: float
    rates: tuple
    ap_user_pairs: int
    cpu_coop_pairs: int


@dataclass(frozen=True)
class Aggregate:
    scheme: str
    L: int
    K: int
    drops: int
    mean_sum_rate: float
    stderr: float
    rates: np.ndarray
    p5_rate: float
    mean_ap_user_pairs: float
    mean_cpu_coop_pairs: float


@dataclass(frozen=True)
class Failure:
    L: int
    K: int
    drop: int
    scheme: str
    kind: str
    message: str


@dataclass
class ExperimentResult:
    config: SimConfig
    sweep: tuple
    schemes: tuple
    per_drop: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)


def run_drop(config: SimConfig, drop: int, schemes) -> list:
    """All requested schemes on one drop, sharing layout, shadowing and pilots."""
    layout, stats = prepare_drop(config, drop)
    catalog = association = None
    if any(s in ("pbvc", "lsfd_pbvc") for s in schemes):
        catalog = build_pbvc(layout, config.L)
        if config.K > catalog.J and not config.allow_vc_sharing:
            raise ConfigurationError(
                f"K={config.K} users exceed J={catalog.J} virtual clusters (L={config.L})")
        association = associate_pbvc(catalog, stats, config)
    out = []
    for scheme in schemes:
        try:
            report, serving = run_scheme(scheme, layout, stats, catalog, config, association)
        except CellFreeError as exc:
            exc.scheme = scheme
            raise
        ap_pairs, cpu_pairs = backhaul_load(serving)
        out.append(DropRecord(scheme, config.L, config.K, config.seed, drop, report.sum_rate,
                              tuple(float(r) for r in report.rate), ap_pairs, cpu_pairs))
    return out


def aggregate(records) -> Aggregate:
    records = sorted(records, key=lambda r: r.drop)
    sums = np.array([r.sum_rate for r in records])
    rates = np.concatenate([np.asarray(r.rates) for r in records])
    n = len(records)
    stderr = float(np.std(sums, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    first = records[0]
    return Aggregate(
        scheme=first.scheme, L=first.L, K=first.K, drops=n,
        mean_sum_rate=float(np.mean(sums)), stderr=stderr, rates=rates,
        p5_rate=float(np.percentile(rates, 5)),
        mean_ap_user_pairs=float(np.mean([r.ap_user_pairs for r in records])),
        mean_cpu_coop_pairs=float(np.mean([r.cpu_coop_pairs for r in records])),
    )


def run_experiment(config: SimConfig, sweep, schemes=None) -> ExperimentResult:
    """Run ``config.drops`` drops at every ``(L, K)`` point of ``sweep``.

    A failing scheme aborts its sweep point: the point is dropped from the
    results and a :class:`Failure` is recorded instead.
    """
    schemes = tuple(schemes or config.schemes)
    for s in schemes:
        if s not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {s!r}")
    sweep = tuple((int(L), int(K)) for L, K in sweep)
    result = ExperimentResult(config, sweep, schemes)
    for L, K in sweep:
        point = []
        drop = -1
        try:
            cfg = config.replace(L=L, K=K)
            for drop in range(cfg.drops):
                point.extend(run_drop(cfg, drop, schemes))
        except CellFreeError as exc:
            result.failures.append(Failure(L, K, drop, getattr(exc, "scheme", ""),
                                           type(exc).__name__, str(exc)))
            log.warning("sweep point L=%d K=%d aborted: %s", L, K, exc)
            continue
        result.per_drop.extend(point)
        for scheme in schemes:
            rec = [r for r in point if r.scheme == scheme]
            result.aggregates[(scheme, L, K)] = aggregate(rec)
    return result


def _fmt(x: float) -> str:
    return repr(float(x))


def _ordered_keys(result: ExperimentResult):
    order = {s: i for i, s in enumerate(SCHEMES)}
    return sorted(result.aggregates, key=lambda key: (order[key[0]], key[2], key[1]))


def emit_results(result: ExperimentResult, out_dir) -> dict:
    """Write ``sumrate_vs_L.csv``, ``rate_cdf.csv`` and ``summary.json``.

    Returns a mapping from file role to written path.
    """
    out = Path(out_dir)
    paths = {
        "sumrate": out / "sumrate_vs_L.csv",
        "cdf": out / "rate_cdf.csv",
        "summary": out / "summary.json",
    }
    keys = _ordered_keys(result)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(paths["sumrate"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["scheme", "L", "K", "mean_sum_rate_bps", "stderr"])
            for key in keys:
                a = result.aggregates[key]
                w.writerow([a.scheme, a.L, a.K, _fmt(a.mean_sum_rate), _fmt(a.stderr)])
        with open(paths["cdf"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["scheme", "L", "K", "rate_bps"])
            for key in keys:
                a = result.aggregates[key]
                for r in a.rates:
                    w.writerow([a.scheme, a.L, a.K, _fmt(r)])
        summary = {
            "config": result.config.to_dict(),
            "sweep": [list(p) for p in result.sweep],
            "schemes": list(result.schemes),
            "aggregates": [
                {
                    "scheme": a.scheme, "L": a.L, "K": a.K, "drops": a.drops,
                    "mean_sum_rate_bps": a.mean_sum_rate, "stderr_bps": a.stderr,
                    "p5_rate_bps": a.p5_rate, "mean_rate_bps": float(np.mean(a.rates)),
                    "mean_ap_user_pairs": a.mean_ap_user_pairs,
                    "mean_cpu_coop_pairs": a.mean_cpu_coop_pairs,
                }
                for a in (result.aggregates[k] for k in keys)
            ],
            "failures": [vars(f) for f in result.failures],
        }
        with open(paths["summary"], "w", newline="") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc.strerror or exc}") from exc
    return paths
