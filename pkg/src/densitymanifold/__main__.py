"""Command line entry point: ``python -m densitymanifold <experiment> --config c.json``."""

from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, load_config, run_experiment

COMMANDS = {
    "verify": "verify",
    "torsion-scan": "torsion_scan",
    "convergence": "convergence",
    "geodesic-compare": "geodesic_compare",
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="densitymanifold", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", help="report path (JSON); CSV tables are written alongside")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--quiet", action="store_true", help="do not print per-check lines")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    cfg.experiment = COMMANDS[args.command]
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
            return 2
        cfg.seed = args.seed
    try:
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out = args.out or cfg.output
    if out:
        report.write(out)
    if not args.quiet:
        print("\n".join(report.summary_lines()))
    print("all checks passed" if report.passed else "some checks FAILED")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
