"""Command-line entry point: ``cellfree-assoc simulate --config cfg.txt --out results/``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import SimConfig, _parse_schemes, load_config
from .errors import ConfigurationError, NumericalError
from .harness import emit_results, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("cellfree_assoc")


def parse_range(text: str) -> list:
    """``"5:50:5"`` -> ``[5, 10, ..., 50]`` (stop inclusive); ``"20"`` -> ``[20]``."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise ConfigurationError(f"bad range {text!r}") from exc
    if len(nums) == 1:
        return nums
    if len(nums) not in (2, 3):
        raise ConfigurationError(f"bad range {text!r}; expected start:stop[:step]")
    start, stop = nums[0], nums[1]
    step = nums[2] if len(nums) == 3 else 1
    if step <= 0 or stop < start:
        raise ConfigurationError(f"bad range {text!r}")
    return list(range(start, stop + 1, step))


def parse_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"bad integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cellfree-assoc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a Monte-Carlo sweep and write CSV/JSON results")
    sim.add_argument("--config", required=True, help="key = value config file")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--drops", type=int, help="override the number of drops")
    sim.add_argument("--seed", type=int, help="override the master seed")
    sim.add_argument("--schemes", help="comma list from pbvc,fcf,uc,lsfd,lsfd_pbvc")
    sim.add_argument("--sweep-L", dest="sweep_L", help="L values as start:stop:step (inclusive)")
    sim.add_argument("--K", dest="K", help="comma list of user counts")
    sim.add_argument("-v", "--verbose", action="store_true")
    return parser


def _simulate(args) -> int:
    config: SimConfig = load_config(args.config)
    changes = {}
    if args.drops is not None:
        changes["drops"] = args.drops
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.schemes:
        changes["schemes"] = _parse_schemes(args.schemes)
    if changes:
        config = config.replace(**changes)
    Ls = parse_range(args.sweep_L) if args.sweep_L else [config.L]
    Ks = parse_list(args.K) if args.K else [config.K]
    sweep = [(L, K) for K in Ks for L in Ls]
    result = run_experiment(config, sweep)
    paths = emit_results(result, args.out)
    for role, path in paths.items():
        log.info("wrote %s", path)
    if result.failures:
        for f in result.failures:
            print(f"error: L={f.L} K={f.K} drop={f.drop} {f.scheme}: {f.kind}: {f.message}",
                  file=sys.stderr)
        if any(f.kind == NumericalError.__name__ for f in result.failures):
            return EXIT_NUMERICAL
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _simulate(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
