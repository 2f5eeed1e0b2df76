"""Command-line entry point: ``copulagraph {generate,analyze,densities,calibrate,sweep}``.

Exit status is 0 on success (an unreachable calibration target counts as
success), 1 for usage and parse errors, 2 for numerical failures.
"""

from __future__ import annotations

import argparse
import sys

from . import calibration, densities, metrics, sampler, sweep
from .errors import CopulaGraphError, DomainError, UndefinedError, UsageError
from .graphons import parse_graphon


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pick(positional, flag, default, name):
    if positional is not None and flag is not None and positional != flag:
        raise UsageError(f"{name} given twice with different values")
    if positional is not None:
        return positional
    return flag if flag is not None else default


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    graphon = parse_graphon(args.graphon)
    n = _pick(args.n_pos, args.n, 1000, "n")
    seed = _pick(args.seed_pos, args.seed, 0, "seed")
    out = _pick(args.out_pos, args.out, None, "output path")
    g = sampler.sample(graphon, n, seed)
    text = sampler.format_edge_list(g)
    mean_degree = 2 * g.m / g.n
    summary = f"n={g.n} m={g.m} mean_degree={mean_degree:.10g}\n"
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stderr.write(summary)
    else:
        _write(text, out)
        sys.stdout.write(summary)
    return 0


def cmd_analyze(args) -> int:
    g = sampler.read_edge_list(args.path)
    rep = metrics.analyze(g)
    text = metrics.report_csv(rep) if args.csv else metrics.report_text(rep)
    _write(text, args.out)
    return 0


def cmd_densities(args) -> int:
    graphon = parse_graphon(args.graphon)
    order = _pick(args.order_pos, args.grid_order, densities.DEFAULT_ORDER, "grid order")
    n = _pick(args.n_pos, args.n, 1000, "n")
    rep = densities.density_report(graphon, order)
    text = ",".join(densities.DensityReport.CSV_FIELDS) + "\n" + rep.csv_row(n) + "\n"
    _write(text, args.out)
    return 0


def cmd_calibrate(args) -> int:
    if (args.r is None) == (args.target is None):
        raise UsageError("give exactly one of --r or --motif/--target")
    if args.r is not None:
        problem = calibration.CalibrationProblem(
            args.template, args.r, n=args.n, theta_bounds=args.bounds, lag=args.lag,
            grid_order=args.grid_order)
    else:
        problem = calibration.CalibrationProblem(
            args.template, args.target, target_kind=calibration.MOTIF_DENSITY,
            motif=args.motif, n=args.n, theta_bounds=args.bounds, lag=args.lag,
            grid_order=args.grid_order)
    result = calibration.solve(problem, tolerance=args.tolerance, max_iters=args.max_iters,
                               grid_points=args.grid_points)
    text = f"template={problem.template.descriptor}\n" + result.as_text()
    if args.verify is not None and result.status != calibration.UNREACHABLE:
        reps, seed = args.verify
        record = calibration.verify_by_sampling(result, problem, reps, seed)
        text += record.as_text()
    _write(text, args.out)
    if args.curve_out:
        _write(result.objective_curve.csv(), args.curve_out)
    return 0


def cmd_sweep(args) -> int:
    config = sweep.SweepConfig(
        args.template, sweep.parse_theta_grid(args.thetas), n=args.n, reps=args.reps,
        base_seed=args.seed, lag=args.lag)
    rows = sweep.run_sweep(config, jobs=args.jobs)
    _write(sweep.rows_to_csv(rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="copulagraph",
                description="Random graphs to target assortativity from copula graphons.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a W-random graph and write its edge list")
    g.add_argument("graphon", help="descriptor, e.g. gumbel:3:cdf or joe:2:density*pi")
    g.add_argument("n_pos", nargs="?", type=int, metavar="N")
    g.add_argument("seed_pos", nargs="?", type=int, metavar="SEED")
    g.add_argument("out_pos", nargs="?", metavar="OUT")
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="motif counts, clustering and assortativity of an edge list")
    a.add_argument("path")
    a.add_argument("--csv", action="store_true", help="emit a CSV row instead of key=value")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("densities", help="quadrature homomorphism densities and r_W")
    d.add_argument("graphon")
    d.add_argument("order_pos", nargs="?", type=int, metavar="GRID_ORDER")
    d.add_argument("n_pos", nargs="?", type=int, metavar="N")
    d.add_argument("--grid-order", type=int)
    d.add_argument("--n", type=int)
    d.add_argument("--out")
    d.set_defaults(func=cmd_densities)

    c = sub.add_parser("calibrate", help="solve for theta at a target r or motif density")
    c.add_argument("template", help="descriptor with one '?' slot, e.g. gumbel:?:cdf")
    c.add_argument("--r", type=float, help="target assortativity")
    c.add_argument("--motif", choices=["P1", "P2", "P3", "C3", "S3"], default="P1")
    c.add_argument("--target", type=float, help="target motif density")
    c.add_argument("--n", type=int, default=1000)
    c.add_argument("--tolerance", type=float, default=1e-4)
    c.add_argument("--max-iters", type=int, default=100)
    c.add_argument("--grid-points", type=int, default=32)
    c.add_argument("--grid-order", type=int, default=densities.DEFAULT_ORDER)
    c.add_argument("--bounds", type=float, nargs=2, metavar=("LO", "HI"))
    c.add_argument("--lag", type=float, default=0.0)
    c.add_argument("--verify", type=int, nargs=2, metavar=("REPS", "SEED"))
    c.add_argument("--curve-out", help="write the scanned objective curve as CSV")
    c.add_argument("--out")
    c.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("sweep", help="mean/min/max empirical r along a theta grid")
    s.add_argument("template")
    s.add_argument("--thetas", required=True, help="start:stop:count or a,b,c")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--reps", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lag", type=float, default=0.0,
                   help="second free slot gets theta - lag (third theta - 2 lag, ...)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UndefinedError, CopulaGraphError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
