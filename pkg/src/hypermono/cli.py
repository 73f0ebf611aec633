"""Command-line interface: ``hypermono {verify, metric, cs, index}``.

Exit codes: 0 when every check passes, 1 on a numeric failure or
non-convergence, 2 on a usage error.
"""

import argparse
import os
import sys
import time

import numpy as np

from . import integrate as itg
from .monopole import gauge_transform, one_monopole
from .report import Result, RunReport
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def cmd_verify(args):
    report = RunReport("verify", {"suite": args.suite, "points": args.points, "seed": args.seed, "h": args.h})
    report.results = run_suite(args.suite, args.points, args.seed, args.h)
    return report


def cmd_metric(args):
    if not args.lam > 0:
        raise UsageError("--lambda must be positive")
    cfg = one_monopole(args.x0, args.y0, args.lam)
    spec = itg.QuadratureSpec(args.nodes, max(1.0, args.lam), args.tol)
    report = RunReport("metric", {"x0": args.x0, "y0": args.y0, "lambda": args.lam,
                                  "nodes": args.nodes, "tol": args.tol})
    ladder = itg.with_ladder(lambda s: itg.gram_direct(cfg, s).values, spec)
    report.convergence = ladder.ladder
    direct = itg.GramMatrix(ladder.value, "direct")
    omega = itg.gram_omega(cfg, spec.refined())
    target = cfg.energy * np.eye(4)
    report.add(Result("quadrature_converged", ladder.converged, args.tol, passed=ladder.converged))
    report.add(Result.compare("gram_direct", direct.values, target, args.tol))
    report.add(Result.compare("gram_omega", omega.values, target, args.tol))
    report.add(Result.residual("gram_routes_disagreement", np.max(np.abs(direct.values - omega.values)),
                               2 * args.tol * cfg.energy))
    report.add(Result.residual("gram_max_imag", direct.max_imag, args.tol * cfg.energy))
    report.add(Result.residual("gram_asymmetry", direct.asymmetry, args.tol * cfg.energy))
    return report


def cmd_cs(args):
    cfg = one_monopole()
    spec = itg.QuadratureSpec(args.nodes, 1.0, args.tol)
    closed_rate = -4 * np.pi * cfg.n * float(cfg.p_mass)
    report = RunReport("cs", {"s": args.s, "nodes": args.nodes, "tol": args.tol})
    moved = gauge_transform(cfg, args.s)
    forward = itg.chern_simons(cfg, moved, spec)
    backward = itg.chern_simons(moved, cfg, spec)
    ladder = itg.with_ladder(lambda s: itg.cs_rate(cfg, s), spec)
    report.convergence = ladder.ladder
    rate = ladder.value
    report.add(Result("quadrature_converged", ladder.converged, args.tol, passed=ladder.converged))
    report.add(Result.compare("chern_simons_vs_closed_form", forward.value, closed_rate * args.s, 5 * args.tol,
                              absolute=args.s == 0))
    report.add(Result.compare("cs_rate_vs_closed_form", rate, closed_rate, args.tol))
    report.add(Result.compare("chern_simons_vs_rate", forward.value, rate * args.s, 2 * args.tol,
                              absolute=args.s == 0))
    report.add(Result.compare("antisymmetry", forward.value + backward.value, 0.0, args.tol, absolute=True))
    report.add(Result.residual("chern_simons_imag", forward.imag, args.tol))
    return report


def cmd_index(args):
    if args.n < 1 or args.p2 < 1:
        raise UsageError("need --n >= 1 and --p2 >= 1")
    from fractions import Fraction

    poly = itg.equivariant_index(args.n, Fraction(args.p2, 2))
    report = RunReport("index", {"n": args.n, "p2": args.p2, "polynomial": str(poly)})
    coeffs = poly.coefficients
    report.add(Result("palindromic", poly.is_palindromic(), 0.0, passed=poly.is_palindromic()))
    uniform = all(c == 2 * args.n for c in coeffs.values())
    report.add(Result("coefficients_all_2n", uniform, 0.0, passed=uniform))
    report.add(Result.compare("term_count", len(coeffs), 2 * args.p2, 0.0, absolute=True))
    report.add(Result.compare("dim_E_plus", poly.dim_plus, 2 * args.n, 0.0, absolute=True))
    report.add(Result.compare("dim_E_minus", poly.dim_minus, 2 * args.n, 0.0, absolute=True))
    return report


class UsageError(ValueError):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record wall time in the report")

    parser = argparse.ArgumentParser(prog="hypermono", description="Hyperbolic monopole moduli-space checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="pointwise residual and identity suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--h", type=float, default=1e-4)
    v.add_argument("--points", type=int, default=10)
    v.add_argument("--seed", type=int, default=42)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("metric", parents=[common], help="Gram matrix of the 1-monopole tangent vectors")
    m.add_argument("--x0", type=float, default=0.0)
    m.add_argument("--y0", type=float, default=0.0)
    m.add_argument("--lambda", dest="lam", type=float, default=1.0)
    m.add_argument("--nodes", type=int, default=64)
    m.add_argument("--tol", type=float, default=1e-3)
    m.set_defaults(func=cmd_metric)

    c = sub.add_parser("cs", parents=[common], help="Chern-Simons number along the dyon path")
    c.add_argument("--s", type=float, default=0.1)
    c.add_argument("--nodes", type=int, default=64)
    c.add_argument("--tol", type=float, default=1e-3)
    c.set_defaults(func=cmd_cs)

    i = sub.add_parser("index", parents=[common], help="equivariant index polynomial")
    i.add_argument("--n", type=int, default=1)
    i.add_argument("--p2", type=int, default=1)
    i.set_defaults(func=cmd_index)
    return parser


def render(report, fmt):
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return report.to_csv()
    return report.to_text() + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    env = os.environ.get(itg.THREADS_ENV, "")
    if env and not env.lstrip("-").isdigit():
        parser.error(f"{itg.THREADS_ENV} must be an integer")
    if getattr(args, "points", 1) < 1 or getattr(args, "nodes", 8) < 8:
        parser.error("--points must be >= 1 and --nodes >= 8")
    if getattr(args, "h", 1.0) <= 0:
        parser.error("--h must be positive")

    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except itg.ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        for n, val in e.ladder:
            print(f"  {n}: {val}", file=sys.stderr)
        return EXIT_FAIL
    except itg.QuadratureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    elapsed = time.perf_counter() - start
    if args.timing:
        report.wall_time_seconds = elapsed

    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.format == "text":
        sys.stdout.flush()
        print(f"wall time {elapsed:.2f} s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
