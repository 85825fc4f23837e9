"""Command-line front end: run experiment grids, sweeps, and verification.

Exit codes: 0 success, 2 configuration error, 3 runtime error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import __version__
from .config import (REFERENCE_CONFIG, apply_sweep, config_digest,
                     expand_scenarios, load_raw_config, resolve_config)
from .errors import ConfigInvalid, PricesimError, UnknownCheck
from .outputs import (write_manifest, write_summary_csv,
                      write_sweep_index, write_trajectories_csv,
                      write_verify_report)
from .simulator import run_grid
from .verification import CHECK_NAMES, run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_VERIFY = 4


def _default_threads() -> int:
    env = os.environ.get("PRICESIM_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigInvalid(f"PRICESIM_THREADS={env!r} is not an integer")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pricesim",
        description="Contextual dynamic pricing simulation and verification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scenario grid of a config file")
    run.add_argument("--config", required=True, help="YAML experiment config")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--threads", type=int, default=None,
                     help="parallel workers (default: PRICESIM_THREADS or 1)")
    run.add_argument("--seed", type=int, default=None,
                     help="override the config base_seed")

    sweep = sub.add_parser("sweep", help="run a config with swept parameter axes")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--sweep", action="append", default=[],
                       metavar="KEY=V1,V2", help="axis override; repeatable "
                       "(keys: alpha, c_lambda, omega)")
    sweep.add_argument("--threads", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=None)

    verify = sub.add_parser("verify", help="run the concentration checks")
    verify.add_argument("--checks", default=",".join(CHECK_NAMES),
                        help=f"comma-separated subset of {','.join(CHECK_NAMES)}")
    verify.add_argument("--out", default=".", help="report directory")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--paths", type=int, default=None,
                        help="override Monte Carlo path counts (smoke runs)")
    verify.add_argument("--lambda-scale", type=float, default=1.0,
                        help="rescale the schedule in the event check "
                        "(0 is the negative control)")

    ref = sub.add_parser("reference", help="print the reference config")
    ref.add_argument("--out", default=None, help="write to a file instead of stdout")
    return parser


def _execute_grid(args, sweep_specs=None):
    raw = load_raw_config(args.config)
    resolved = resolve_config(raw, seed_override=args.seed)
    swept = {}
    if sweep_specs is not None:
        resolved, swept = apply_sweep(resolved, sweep_specs)
    scenarios = expand_scenarios(resolved)
    threads = args.threads if args.threads is not None else _default_threads()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_grid(scenarios, threads=threads)

    trajectories_path = out / "trajectories.csv"
    summary_path = out / "summary.csv"
    write_trajectories_csv(trajectories_path, result.trajectories)
    write_summary_csv(summary_path, result.summary)
    manifest = {
        "config_digest": config_digest(resolved),
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "base_seed": resolved["base_seed"],
        "scenarios": [c.scenario_id for c in scenarios],
        "outputs": {"trajectories": trajectories_path.name,
                    "summary": summary_path.name},
    }
    write_manifest(out / "manifest.json", manifest)
    if sweep_specs is not None:
        cells = [{"scenario_id": c.scenario_id,
                  "noise_true": c.noise_true.as_config(),
                  "alpha": c.alpha, "c_lambda": c.c_lambda,
                  "swept": swept} for c in scenarios]
        write_sweep_index(out / "sweep_index.json", cells)
    return EXIT_OK


def cmd_run(args) -> int:
    return _execute_grid(args)


def cmd_sweep(args) -> int:
    return _execute_grid(args, sweep_specs=args.sweep)


def cmd_verify(args) -> int:
    names = [n.strip() for n in args.checks.split(",") if n.strip()]
    if not names:
        raise UnknownCheck("no checks selected")
    records = run_checks(names, seed=args.seed, paths=args.paths,
                         lambda_scale=args.lambda_scale)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_verify_report(out / "verify_report.json", records)
    for rec in records:
        status = "pass" if rec["passed"] else "FAIL"
        print(f"{status}  {rec['check']}: statistic={rec['statistic']:.6g} "
              f"bound={rec['bound']:.6g}")
    return EXIT_OK if all(r["passed"] for r in records) else EXIT_VERIFY


def cmd_reference(args) -> int:
    if args.out is None:
        sys.stdout.write(REFERENCE_CONFIG)
    else:
        Path(args.out).write_text(REFERENCE_CONFIG)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify,
                "reference": cmd_reference}
    try:
        return handlers[args.command](args)
    except (ConfigInvalid, UnknownCheck) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except PricesimError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
