"""``ildcc`` command line: run, sweep-traffic, validate."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..errors import ConfigError, DomainError, IldccError, InfeasibleError
from .config import ExperimentConfig, load_config
from .experiment import (
    aggregate,
    build_scenario,
    load_requirement,
    run_baseline_sp3d,
    run_ildcc,
    traffic_sweep,
)
from .outputs import emit_outputs, write_traffic

log = logging.getLogger("ildcc")

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3, 4


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ildcc", description="Two-phase relay deployment experiments.")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="repeat for more detail")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run all trials and write CSV tables and figures")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--seed", type=_u64, help="override the master seed")
    run.add_argument("--baseline", action="store_true", help="also run the random-densification baseline")
    run.add_argument("--trials", type=_positive, help="override trials per network size")
    run.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    sweep = sub.add_parser("sweep-traffic", help="lifetime against transmitted packets per round")
    sweep.add_argument("--config", required=True, type=Path)
    sweep.add_argument("--out", type=Path, help="write plotdata_t_r_vs_load.csv here instead of stdout")

    val = sub.add_parser("validate", help="check a config and its scenario without running the search")
    val.add_argument("--config", required=True, type=Path)
    return ap


def _summary(cfg: ExperimentConfig, results) -> None:
    for a in aggregate(results, metrics=("mu_w", "t_r", "lambda2")):
        print(f"{a.method:6s} N={a.n:3d} {a.metric:8s} mean={a.mean:.6g} std={a.std:.3g} trials={a.trials}")
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"failed: {r.method} N={r.n} trial={r.trial}: {r.reason}", file=sys.stderr)


def cmd_run(args) -> int:
    cfg = load_config(args.config).with_overrides(seed=args.seed, trials=args.trials, baseline=args.baseline, output_dir=args.out)
    scenario = build_scenario(cfg)
    results = run_ildcc(cfg, scenario)
    if cfg.baseline_enabled:
        results += run_baseline_sp3d(cfg, scenario)
    traffic = traffic_sweep(cfg, results)
    written = emit_outputs(results, cfg.output_dir, traffic, figures=not args.no_figures)
    _summary(cfg, results)
    print(f"wrote {len(written)} files to {cfg.output_dir}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rows = traffic_sweep(cfg, run_ildcc(cfg, build_scenario(cfg)))
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        print(f"wrote {write_traffic(rows, args.out / 'plotdata_t_r_vs_load.csv')}")
    else:
        print("n,traffic,mu_w,e_p,t_r")
        for r in rows:
            print(f"{r.n},{r.traffic!r},{r.mu_w!r},{r.e_p!r},{r.t_r!r}")
    top = max(cfg.traffic_levels)
    need = load_requirement(rows, top, 10.0)
    if need is None:
        print(f"no network size reaches 10 rounds at {top:g} packets per round", file=sys.stderr)
    else:
        print(f"N >= {need} reaches 10 rounds at {top:g} packets per round", file=sys.stderr)
    return EXIT_OK if rows else EXIT_INFEASIBLE


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    inst, bb = build_scenario(cfg)
    print(f"grid {inst.spec.dims}, range {inst.range_r:g}, {len(inst.cluster_heads)} cluster heads, {inst.n_candidates} candidates")
    print(f"backbone: {bb.n} nodes, {len(bb.fprn_positions)} first-phase relays")
    problems = []
    n_free = len([c for c in inst.candidates if c not in bb.cc])
    for n in cfg.network_sizes:
        budget = n - bb.n
        if budget < 0:
            problems.append(f"N={n} is smaller than the backbone ({bb.n} nodes)")
        elif budget > n_free:
            problems.append(f"N={n} needs {budget} relays but only {n_free} candidate sites are free")
        else:
            cfg.colony.for_network(n, budget, 0)  # raises on an invalid colony
            print(f"N={n}: {budget} second-phase relays, population {cfg.colony.colony_size(n)}")
    for p in problems:
        print(f"invalid: {p}", file=sys.stderr)
    if problems:
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep-traffic": cmd_sweep, "validate": cmd_validate}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"ildcc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleError, DomainError) as exc:
        print(f"ildcc: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except IldccError as exc:
        print(f"ildcc: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"ildcc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
