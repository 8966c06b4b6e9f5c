"""Command-line entry point: ``hardylab --config cfg.json [--scenario NAME] [--out PATH]``.

Exit codes: 0 all rows pass, 2 configuration error, 3 curvature gate failure,
4 at least one failing or divergent row.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .experiments import SCENARIOS, ConfigError, GateFailure, emit_table, load_scenario, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_GATE, EXIT_ROWS = 0, 2, 3, 4

log = logging.getLogger("hardylab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message format
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hardylab", description="Verify Hardy inequalities on radial model manifolds.")
    ap.add_argument("--config", required=True, help="scenario JSON file")
    ap.add_argument("--scenario", choices=SCENARIOS, help="override the scenario named in the config")
    ap.add_argument("--out", default=None, help="output path (default: config 'output' or stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--tol", type=float, default=None, help="override the row tolerance")
    ap.add_argument("--grid", type=int, default=None, help="override grid size (points or elements)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scen = load_scenario(args.config, args.scenario)
        if args.tol is not None:
            if not args.tol >= 0:
                raise ConfigError("--tol must be non-negative")
            scen.tol = args.tol
        if args.grid is not None:
            if args.grid < 64:
                raise ConfigError("--grid must be at least 64")
            scen.grid = args.grid
        log.info("running %s with %d case(s)", scen.name, len(scen.cases))
        rows = run_scenario(scen)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GateFailure as exc:
        print(f"hypothesis gate failed: {exc}", file=sys.stderr)
        return EXIT_GATE
    out = args.out if args.out is not None else scen.output
    emit_table(rows, args.format, out)
    bad = [r for r in rows if r.verdict != "pass"]
    for r in bad:
        log.warning("%s row %s: %s (margin %.3e)", r.scenario, r.params, r.verdict, r.margin)
    return EXIT_ROWS if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
