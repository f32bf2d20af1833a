"""Command line entry point ``expquad``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .harness import emit_csv, make_config, run_convergence
from .integrators import parse_stepsizes
from .phi import SpectrumError
from .problems import make_problem
from .quadrature import NodeSolverError, default_trace_depth, parse_rule
from .space import parse_space

log = logging.getLogger("expquad")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_args(p):
    p.add_argument("--problem", required=True, choices=("poly", "exp", "sine"))
    p.add_argument("--space", required=True, help="fd:<M> or lgl:<J>")
    p.add_argument("--rule", required=True,
                   help="gauss:<s>, lobatto:<s>, trapezoidal, simpson or midpoint")
    p.add_argument("--approach", required=True, choices=("classical", "corrected"))
    p.add_argument("--p", type=int, default=None, help="trace depth (corrected only)")
    p.add_argument("--t0", type=Fraction, default=Fraction(0))
    p.add_argument("--T", type=Fraction, default=Fraction(1))
    p.add_argument("--k", required=True, help="comma separated step sizes, e.g. 1/10,1/20,1/40")


def build_parser():
    parser = _Parser(prog="expquad", description="Exponential quadrature rules for the 1-D heat equation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="convergence study for one configuration")
    _add_run_args(run)
    run.add_argument("--out", help="CSV destination (default stdout)")
    run.add_argument("--figure", help="also write an error-vs-k figure to this file")
    run.add_argument("--no-timing", action="store_true", help="leave the wall-time column empty")

    sub.add_parser("verify", help="run the invariant suite")

    tab = sub.add_parser("tables", help="reproduce a canned table")
    tab.add_argument("--id", type=int, required=True, choices=range(1, 10), metavar="1..9")
    tab.add_argument("--out", help="directory for CSV files and figures")
    tab.add_argument("--no-timing", action="store_true")

    plot = sub.add_parser("plot", help="gnuplot data and figures (error vs k and vs wall time)")
    _add_run_args(plot)
    plot.add_argument("--out", required=True, help="output prefix; writes <prefix>.dat and <prefix>.png")
    return parser


def _study(args):
    try:
        prob = make_problem(args.problem)
        disc = parse_space(args.space)
        rule = parse_rule(args.rule)
        ks = parse_stepsizes(args.k)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if args.p is not None and args.approach == "classical":
        raise UsageError("--p only applies to the corrected approach")
    if not rule.canonical:
        log.warning("custom nodes: no order statement applies")
    span = args.T - args.t0
    for k in ks:
        if span < 0 or (span / k).denominator != 1:
            raise UsageError(f"step size {k} does not divide [{args.t0}, {args.T}]")
    try:
        cfg = make_config(rule, args.approach, args.p, float(args.t0), float(args.T))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    depth = cfg.depth if args.approach == "corrected" else None
    log.info("problem=%s space=%s rule=%s approach=%s p=%s", args.problem, disc.label, args.rule, args.approach, depth)
    try:
        return run_convergence(prob, disc, cfg, ks), cfg
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args):
    records, _ = _study(args)
    if args.out:
        emit_csv(records, args.out, timing=not args.no_timing)
    else:
        emit_csv(records, sys.stdout, timing=not args.no_timing)
    if args.figure:
        from .plotting import convergence_figure

        convergence_figure({args.approach: records}, args.figure, title=f"{args.rule}, {args.space}, {args.problem}")
    return EXIT_OK


def cmd_plot(args):
    from .plotting import convergence_figure, cost_figure, write_gnuplot_data

    records, _ = _study(args)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_gnuplot_data(records, prefix.with_suffix(".dat"))
    title = f"{args.rule}, {args.space}, {args.problem}"
    convergence_figure({args.approach: records}, prefix.with_suffix(".png"), title=title)
    cost_figure({args.approach: records}, prefix.parent / f"{prefix.name}_cost.png", title=title)
    print(prefix.with_suffix(".dat"))
    return EXIT_OK


def cmd_tables(args):
    from .tables import TABLES, run_table

    spec = TABLES[args.id]
    results = run_table(args.id)
    timing = not args.no_timing
    if args.out:
        from .plotting import convergence_figure

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for approach, records in results.items():
            emit_csv(records, out / f"table{args.id}_{approach}.csv", timing=timing)
        rule = parse_rule(spec.rule)
        guide = default_trace_depth(rule) if rule.kind == "gauss" else None
        convergence_figure(results, out / f"table{args.id}.png", title=spec.title, guide_order=guide)
    for approach, records in results.items():
        print(f"# table {args.id} {approach}: {spec.title}")
        emit_csv(records, sys.stdout, timing=timing)
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"run": cmd_run, "plot": cmd_plot, "tables": cmd_tables, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"expquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NodeSolverError, SpectrumError, np.linalg.LinAlgError) as exc:
        print(f"expquad: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"expquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
