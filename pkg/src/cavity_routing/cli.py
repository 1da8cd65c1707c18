"""Command-line entry point: ``cavity-routing {simulate,reproduce-fig,sweep,oracle-check}``.

Exit codes: 0 success, 2 usage error, 3 config error, 4 no transfer peak,
5 dimension guard, 6 excessive truncation, 7 degenerate qubit, 8 oracle
check outside tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config_io import config_hash, load_config, table_text
from .cscq import field_population, mean_photon_number, normalization
from .dynamics import default_grid, evolve_series
from .errors import (
    ConfigError,
    DegenerateQubit,
    DimensionGuard,
    ExcessiveTruncation,
    NoTransferPeak,
)
from .network import (
    SENDER_EXCITON,
    NetworkConfig,
    build_coupling_matrix,
    mode_ordinal,
    reference_sets,
    receiver_exciton,
)
from .routing import DEFAULT_POINTS, DEFAULT_QUBIT, SweepAxis, default_horizon, selectivity_report, sweep
from .validation import oracle_check

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NO_PEAK = 4
EXIT_DIMENSION = 5
EXIT_TRUNCATION = 6
EXIT_DEGENERATE = 7
EXIT_ORACLE_MISMATCH = 8

# figure id -> (receivers, active set)
FIGURES = {
    3: (2, 1), 4: (2, 2),
    5: (3, 1), 6: (3, 2), 7: (3, 3),
    8: (4, 1), 9: (4, 2), 10: (4, 3), 11: (4, 4),
}


def figure_config(fig):
    if fig not in FIGURES:
        raise KeyError(f"figure id must be one of {sorted(FIGURES)}, got {fig}")
    n, active = FIGURES[fig]
    return NetworkConfig(n, reference_sets(n), active)


def series_table(config, qubit, horizon, points):
    """Columns ``t, U_s, U_r1..U_rN, F, n_bar, unitarity_defect`` on a uniform grid."""
    m = build_coupling_matrix(config)
    series = evolve_series(m, default_grid(horizon, points), SENDER_EXCITON)
    n = config.n_receivers
    pops = series.populations
    columns = ["t", "U_s"] + [f"U_r{j}" for j in range(1, n + 1)] + ["F", "n_bar", "unitarity_defect"]
    sender = mode_ordinal(config, SENDER_EXCITON)
    receivers = [pops[:, mode_ordinal(config, receiver_exciton(j))] for j in range(1, n + 1)]
    rows = []
    for k, t in enumerate(series.grid):
        row = series.row(k)
        rows.append([
            float(t),
            float(pops[k, sender]),
            *[float(r[k]) for r in receivers],
            field_population(row),
            mean_photon_number(row, qubit),
            float(abs(1.0 - pops[k].sum())),
        ])
    return series, columns, rows


def _meta(config, qubit, horizon, points, extra=None):
    meta = {
        "tool": f"cavity_routing {__version__}",
        "config_hash": config_hash(config, qubit),
        "horizon": f"{horizon:.12g}",
        "points": points,
    }
    meta.update(extra or {})
    return meta


def _emit(text, out):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _qubit(qubit):
    q = qubit if qubit is not None else DEFAULT_QUBIT
    normalization(q)
    return q


def _report_dict(report, strict):
    d = report.to_dict()
    d["fidelity_convention"] = "strict" if strict else "phase-corrected"
    d["fidelity"] = report.fidelity_strict if strict else report.fidelity_at_t_star
    return d


def _horizon(args, config):
    return args.horizon if args.horizon is not None else default_horizon(config)


def cmd_simulate(args):
    config, qubit = load_config(args.config)
    q = _qubit(qubit)
    horizon = _horizon(args, config)
    _, columns, rows = series_table(config, q, horizon, args.points)
    _emit(table_text(columns, rows, _meta(config, q, horizon, args.points), args.format), args.out)
    report = selectivity_report(config, horizon=horizon, points=args.points, qubit=q)
    print(json.dumps(_report_dict(report, args.strict_phase)), file=sys.stderr)
    return EXIT_OK


def cmd_reproduce_fig(args):
    try:
        config = figure_config(args.fig)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    q = DEFAULT_QUBIT
    horizon = _horizon(args, config)
    meta = _meta(config, q, horizon, args.points, {"figure": args.fig})
    _, columns, rows = series_table(config, q, horizon, args.points)
    _emit(table_text(columns, rows, meta, args.format), args.out)
    report = json.dumps(_report_dict(selectivity_report(config, horizon, args.points, q), args.strict_phase),
                        indent=1) + "\n"
    if args.out is None or str(args.out) == "-":
        sys.stderr.write(report)
    else:
        Path(args.out).with_suffix(".report.json").write_text(report, encoding="utf-8")
    return EXIT_OK


def _parse_axis(text):
    parts = text.split(":")
    if len(parts) not in (2, 4):
        raise argparse.ArgumentTypeError(f"axis must be NAME:VALUE or NAME:MIN:MAX:COUNT, got {text!r}")
    try:
        if len(parts) == 2:
            return SweepAxis(parts[0], float(parts[1]), float(parts[1]), 1)
        return SweepAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_sweep(args):
    config, qubit = load_config(args.config)
    q = _qubit(qubit)
    grid = sweep(config, args.axis, points=args.points, qubit=q)
    names = [a.name for a in grid.axes]
    fields = ["target", "t_star", "peak_population", "crosstalk", "confinement_defect",
              "max_field_population", "fidelity_at_t_star", "fidelity_strict", "ternary_leakage", "horizon"]
    columns = names + fields + ["transferred", "error"]
    rows = []
    for cell in grid.cells:
        values = [cell.params[n] for n in names]
        if cell.ok:
            d = cell.report.to_dict()
            rows.append(values + [d[f] for f in fields] + [cell.report.transferred, None])
        else:
            rows.append(values + [None] * len(fields) + [False, cell.error])
    meta = {"tool": f"cavity_routing {__version__}", "config_hash": config_hash(config, q),
            "points": args.points, "cells": len(grid.cells)}
    _emit(table_text(columns, rows, meta, args.format), args.out)
    return EXIT_OK


def cmd_oracle_check(args):
    if args.fig is not None:
        try:
            config, qubit = figure_config(args.fig), None
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_USAGE
    elif args.config is not None:
        config, qubit = load_config(args.config)
    else:
        print("error: oracle-check needs --config or --fig", file=sys.stderr)
        return EXIT_USAGE
    q = _qubit(qubit)
    result = oracle_check(config, q, args.cutoff, samples=args.samples,
                          strict_phase=args.strict_phase, max_dim=args.max_dim)
    result["config_hash"] = config_hash(config, q)
    _emit(json.dumps(result, indent=1) + "\n", args.out)
    return EXIT_OK if result["pass"] else EXIT_ORACLE_MISMATCH


def build_parser():
    parser = argparse.ArgumentParser(prog="cavity-routing", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="YAML network configuration")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--points", type=int, default=DEFAULT_POINTS, help="time grid size")
        p.add_argument("--strict-phase", action="store_true",
                       help="report fidelity without the target-mode phase correction")

    p = sub.add_parser("simulate", help="population time series for a config file")
    common(p)
    p.add_argument("--horizon", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce-fig", help="built-in scenario of a reference figure (3..11)")
    common(p, config_required=False)
    p.add_argument("--fig", type=int, required=True)
    p.add_argument("--horizon", type=float, default=None)
    p.set_defaults(func=cmd_reproduce_fig)

    p = sub.add_parser("sweep", help="selectivity reports over a parameter grid")
    common(p)
    p.add_argument("--axis", type=_parse_axis, action="append", required=True,
                   help="NAME:MIN:MAX:COUNT or NAME:VALUE with NAME in g, delta, horizon")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare against the truncated Fock-space oracle")
    p.add_argument("--config", default=None)
    p.add_argument("--fig", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=3)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--max-dim", type=int, default=10 ** 6)
    p.add_argument("--out", default=None)
    p.add_argument("--strict-phase", action="store_true")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "points", 2) < 2:
        parser.error("--points must be >= 2")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoTransferPeak as exc:
        print(f"no transfer peak: {exc}", file=sys.stderr)
        return EXIT_NO_PEAK
    except DimensionGuard as exc:
        print(f"dimension guard: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ExcessiveTruncation as exc:
        print(f"excessive truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except DegenerateQubit as exc:
        print(f"degenerate qubit: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
