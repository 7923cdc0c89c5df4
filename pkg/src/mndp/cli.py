"""Command-line entry point: generate, solve, verify, sweep, report.

Exit codes: 0 success, 1 constraint violation, 2 usage or configuration error.
Settings resolve as built-in defaults < ``--config`` file < sweep spec file <
command-line flags. ``MNDP_LOG_LEVEL`` sets the log level.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import harness
from .config import load_config
from .errors import InfeasibleParams, MndpError
from .scenario import BS_MODES, DISTRIBUTIONS, generate, load_scenario, save_scenario
from .verify import load_deployment, save_deployment, verify_deployment

log = logging.getLogger("mndp")


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file (uav/solver/sweep sections)")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float)
    p.add_argument("--d-delta", type=float, dest="d_delta")
    p.add_argument("--e-max", type=float, dest="e_max")
    p.add_argument("--merge-strategy", choices=("mec", "triangle"), dest="merge_strategy")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mndp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random scenario file")
    _add_config(g)
    g.add_argument("--n", type=int, dest="node_count")
    g.add_argument("--side", type=float, dest="region_side")
    g.add_argument("--bs", choices=BS_MODES, dest="bs_mode")
    g.add_argument("--dist", choices=DISTRIBUTIONS, dest="distribution")
    g.add_argument("--groups", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", type=Path, required=True)

    s = sub.add_parser("solve", help="place PADs for a scenario")
    _add_config(s)
    s.add_argument("--algo", choices=harness.ALGORITHMS, default="cdc-dsc")
    s.add_argument("--scenario", type=Path, required=True)
    s.add_argument("-o", "--output", type=Path, required=True)
    s.add_argument("--emit-stages", type=Path, metavar="DIR",
                   help="also write one deployment file per intermediate stage")
    _add_solver_flags(s)

    v = sub.add_parser("verify", help="check a deployment against a scenario")
    v.add_argument("scenario", type=Path)
    v.add_argument("deployment", type=Path)

    w = sub.add_parser("sweep", help="run a parameter sweep")
    _add_config(w)
    w.add_argument("--spec", type=Path, required=True)
    w.add_argument("-o", "--output", type=Path, required=True, help="CSV path")
    w.add_argument("--svg", type=Path, help="chart path (default: CSV path with .svg)")
    w.add_argument("--trials", type=int)
    w.add_argument("--seed", type=int, dest="base_seed")
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--timing", action="store_true", help="record wall time (CSV no longer reproducible)")
    _add_solver_flags(w)

    r = sub.add_parser("report", help="summarize a sweep CSV")
    r.add_argument("csv", type=Path)
    r.add_argument("--svg", type=Path)
    r.add_argument("--param-name", default="param")
    return ap


def _overrides(args) -> dict:
    a = vars(args)
    return {
        "uav": {"e_max": a.get("e_max")},
        "solver": {"alpha": a.get("alpha"), "d_delta": a.get("d_delta"),
                   "merge_strategy": a.get("merge_strategy")},
        "sweep": {k: a.get(k) for k in ("region_side", "node_count", "distribution",
                                        "groups", "bs_mode", "trials", "base_seed")},
    }


def cmd_generate(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    sc = generate(cfg.distribution, cfg.node_count, cfg.region_side, cfg.bs_mode,
                  args.seed, cfg.groups)
    save_scenario(sc, args.output)
    log.info("wrote %d nodes to %s", sc.n, args.output)
    return 0


def cmd_solve(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    sc = load_scenario(args.scenario)
    stages = {} if args.emit_stages else None
    dep = harness.solve(args.algo, sc, cfg.uav, cfg.alpha, cfg.d_delta, cfg.merge_strategy, stages)
    save_deployment(dep, args.output)
    if stages:
        args.emit_stages.mkdir(parents=True, exist_ok=True)
        for name, st in stages.items():
            save_deployment(st, args.emit_stages / f"{name}.json")
    print(f"{args.algo}: {dep.num_pads} PADs")
    return 0


def cmd_verify(args) -> int:
    rep = verify_deployment(load_deployment(args.deployment), load_scenario(args.scenario))
    if rep.ok:
        print("ok")
        return 0
    if not rep.bs_ok:
        print("station 0 does not match the scenario BS")
    if rep.uncovered:
        print("uncovered nodes:", " ".join(map(str, rep.uncovered)))
    if rep.disconnected:
        print("disconnected stations:", " ".join(map(str, rep.disconnected)))
    return 1


def sweep_spec_from(args):
    """(SweepSpec, UavParams) from config, spec file and flags."""
    cfg = load_config(args.config, _overrides(args))
    try:
        data = json.loads(args.spec.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise MndpError(f"cannot read sweep spec {args.spec}: {e}") from e
    if not isinstance(data, dict):
        raise MndpError(f"{args.spec}: top level must be an object")
    base = {
        "distribution": cfg.distribution, "bs_mode": cfg.bs_mode, "trials": cfg.trials,
        "base_seed": cfg.base_seed, "region_side": cfg.region_side,
        "node_count": cfg.node_count, "groups": cfg.groups, "alpha": cfg.alpha,
        "d_delta": cfg.d_delta, "merge_strategy": cfg.merge_strategy,
    }
    merged = {**base, **data}
    cli = {k: v for k, v in _overrides(args)["solver"].items() if v is not None}
    cli.update({k: getattr(args, k) for k in ("trials", "base_seed") if getattr(args, k) is not None})
    merged.update(cli)
    if args.timing:
        merged["record_timing"] = True
    return harness.SweepSpec.from_dict(merged), cfg.uav


def cmd_sweep(args) -> int:
    spec, uav = sweep_spec_from(args)
    report = harness.run_sweep(spec, uav, args.workers)
    harness.emit_csv(report, args.output)
    harness.emit_charts(report, args.svg or args.output.with_suffix(".svg"))
    for (p, algo, mode), agg in report.aggregate().items():
        print(f"{spec.swept_parameter}={harness._fmt_param(p)} {algo:8s} {mode:8s} "
              f"mean={agg.mean:.2f} min={agg.min} max={agg.max}")
    if report.failures:
        print(f"{len(report.failures)} constraint violations", file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    report = harness.read_csv(args.csv, args.param_name)
    for (p, algo, mode), agg in report.aggregate().items():
        print(f"{harness._fmt_param(p)},{algo},{mode},{agg.mean:.3f},{agg.min},{agg.max},{agg.count}")
    if args.svg:
        harness.emit_charts(report, args.svg)
    return 0


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "verify": cmd_verify,
            "sweep": cmd_sweep, "report": cmd_report}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("MNDP_LOG_LEVEL", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (MndpError, InfeasibleParams, OSError) as e:
        print(f"mndp: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
