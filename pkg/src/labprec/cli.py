"""Command line front end.

``labprec analyze --input data.csv`` prints point-estimate and interval tables
for one dataset; ``labprec simulate --grid quick`` runs a Monte Carlo study.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
failure.  Warnings and error messages go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from ._backend import BACKEND
from .analysis import AnalysisConfig, analyze, parse_flavors, parse_methods, parse_schemes
from .errors import ConfigError, DataError
from .ingest import ingest
from .report import FORMATS, Table, render
from .simulation import (
    DEFAULT_SEED,
    ScenarioFailure,
    Selection,
    full_grid,
    quick_grid,
    read_grid,
    run_study,
    with_overrides,
)

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p):
    p.add_argument("--alpha", type=float, default=None, help="1 - confidence level (default 0.05)")
    p.add_argument("--boot", type=int, default=None, help="bootstrap replicates M (default 1000)")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--schemes", default="all", help="comma list of boot-i, boot-j_s, boot-j_r, boot-ij_r, boot-ij_s")
    p.add_argument("--flavors", default="all", help="comma list of raw, bias-corrected, adjusted")
    p.add_argument("--ci-methods", default="all",
                   help="comma list of approx (or approx-chi2, approx-moriguchi, approx-satterthwaite), "
                        "normal, percentile, bca")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser():
    parser = _Parser(prog="labprec", description="Precision analysis for balanced interlaboratory studies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="analyze one dataset")
    a.add_argument("--input", required=True, help="CSV file, or builtin:manganese")
    a.add_argument("--wide", action="store_true", help="input has one row per laboratory")
    a.add_argument("--scale", type=float, default=1.0, help="multiply reported variances (e.g. 1e7)")
    _common(a)

    s = sub.add_parser("simulate", help="run a Monte Carlo study")
    s.add_argument("--grid", default="quick", help="quick, full (64 cells; alias paper), or a scenario CSV file")
    s.add_argument("--reps", type=int, default=None, help="Monte Carlo replications per scenario")
    s.add_argument("--workers", type=int, default=1, help="threads used for replications")
    _common(s)
    return parser


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output: {exc}") from exc


def _warn(msg):
    print(f"labprec: warning: {msg}", file=sys.stderr)


def cmd_analyze(args):
    config = AnalysisConfig(
        alpha=0.05 if args.alpha is None else args.alpha,
        m_boot=1000 if args.boot is None else args.boot,
        schemes=parse_schemes(args.schemes),
        flavors=parse_flavors(args.flavors),
        methods=parse_methods(args.ci_methods),
        seed=DEFAULT_SEED if args.seed is None else args.seed,
        scale=args.scale,
    )
    dataset = ingest(args.input, wide=args.wide)
    tables, warnings = analyze(dataset, config)
    for w in warnings:
        _warn(w)
    _emit(render(tables, args.format, meta={"command": "analyze"}), args.out)
    return EXIT_OK


SIM_COLUMNS = ("scenario", "estimator", "component", "mean_estimate", "mean_se",
               "method", "mean_lower", "mean_upper", "mean_width", "coverage", "n_valid")


def summary_tables(rows):
    by_scenario = {}
    for row in rows:
        by_scenario.setdefault(row.scenario, []).append(row)
    tables = []
    for sc, srows in by_scenario.items():
        lines = []
        for row in srows:
            for c, comp in enumerate(("sigma_r2", "sigma_L2", "sigma_R2")):
                head = (sc.label, row.estimator, comp, float(row.mean_estimate[c]), float(row.mean_se[c]))
                if not row.intervals:
                    lines.append(head + (None,) * 6)
                for iv in row.intervals:
                    lines.append(head + (iv.method, float(iv.mean_lower[c]), float(iv.mean_upper[c]),
                                         float(iv.mean_width[c]), float(iv.coverage[c]), iv.n_valid[c]))
        name = (f"{sc.label},mu={sc.mu:g},sigma_r2={sc.sigma_r2:g},m_boot={sc.m_boot},"
                f"r_mc={sc.r_mc},alpha={sc.alpha:g},seed={sc.master_seed}")
        tables.append(Table(name, SIM_COLUMNS, tuple(lines)))
    return tables


def cmd_simulate(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    if args.grid == "quick":
        scenarios = quick_grid(seed)
    elif args.grid in ("full", "paper"):
        scenarios = full_grid(seed)
    else:
        scenarios = with_overrides(read_grid(args.grid), master_seed=args.seed)
    scenarios = with_overrides(scenarios, m_boot=args.boot, r_mc=args.reps, alpha=args.alpha)
    if args.workers < 1:
        raise ConfigError("--workers must be positive")
    selection = Selection(schemes=parse_schemes(args.schemes), flavors=parse_flavors(args.flavors),
                          methods=parse_methods(args.ci_methods))
    result = run_study(scenarios, selection, workers=args.workers)
    for row in result.rows:
        for flag, count in row.flag_counts:
            _warn(f"{row.scenario.label} {row.estimator}: {flag} in {count} interval(s)")
    code = EXIT_OK
    for f in result.failures:
        where = f.scenario.label if hasattr(f.scenario, "label") else f.scenario
        print(f"labprec: scenario {where} aborted: {f.reason}", file=sys.stderr)
        code = max(code, EXIT_CONFIG if isinstance(f.scenario, str) else EXIT_NUMERIC)
    _emit(render(summary_tables(result.rows), args.format, meta={"command": "simulate"}), args.out)
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_simulate(args)
    except ConfigError as exc:
        print(f"labprec: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"labprec: data error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ArithmeticError, ValueError) as exc:
        print(f"labprec: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
