"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error,
3 domain error (not classical, too large), 4 numerical failure. Failures
print one line ``<Category>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import channel, entropic, io, oracle, region
from .errors import HadamardError, ValidationError

DEGRADE_TOL = 1e-10


def _cmd_validate(args):
    spec = io.load_channel_document(args.channel)
    report = channel.validate_spec(spec)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def _cmd_degrade_check(args):
    spec = io.parse_channel_file(args.channel)
    residual = channel.verify_degradability(spec)
    print(f"choi_residual={residual:.3e}")
    print(f"isometry_residual={channel.isometry_residual(spec):.3e}")
    if residual > DEGRADE_TOL:
        print(f"ValidationError: degrading-map residual {residual:.3e} exceeds {DEGRADE_TOL:g}", file=sys.stderr)
        return 1
    return 0


def _cmd_evaluate(args):
    spec = io.parse_channel_file(args.channel)
    ens = io.parse_ensemble_file(args.ensemble, d_A=spec.d_A)
    r = entropic.rates(spec, ens)
    print(f"task={ens.task}")
    for key, value in r.as_dict().items():
        if value is not None:
            print(f"{key}={value:.9f}")
    return 0


def _emit(frontier, args, title):
    if args.out:
        io.emit_frontier_csv(frontier, args.out)
    else:
        sys.stdout.write(io.frontier_csv(frontier))
    if getattr(args, "plot", None):
        io.emit_frontier_svg(frontier, args.plot, title)


def _cmd_frontier(args):
    spec = io.parse_channel_file(args.channel)
    config = region.OptimizationConfig(
        num_w=args.num_w,
        num_z=args.num_z,
        lambda_grid=args.lambdas,
        restarts=args.restarts,
        seed=args.seed,
        max_iters=args.max_iters,
        obj_tol=args.obj_tol,
        workers=args.workers,
    )
    frontier = region.optimize_frontier(spec, args.task, config)
    _emit(frontier, args, f"{args.task} frontier")
    return 0


def _cmd_oracle(args):
    spec = io.parse_channel_file(args.channel)
    frontier = oracle.classical_oracle_frontier(spec, resolution=args.grid, num_w=args.num_w)
    _emit(frontier, args, "classical oracle")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hadamard-bc",
        description="Hadamard broadcast channels: structure checks and capacity-region frontiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check POVM completeness and output-state norms")
    p.add_argument("channel")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("degrade-check", help="Choi residual of the measure/prepare degrading map")
    p.add_argument("channel")
    p.set_defaults(func=_cmd_degrade_check)

    p = sub.add_parser("evaluate", help="rates of a single input ensemble")
    p.add_argument("channel")
    p.add_argument("ensemble")
    p.set_defaults(func=_cmd_evaluate)

    defaults = region.OptimizationConfig()
    p = sub.add_parser("frontier", help="trace a capacity-region frontier")
    p.add_argument("channel")
    p.add_argument("--task", choices=["cc", "cq", "eac"], required=True)
    p.add_argument("--num-w", type=int, default=None, help="|W| (default d_A^2 + 1)")
    p.add_argument("--num-z", type=int, default=None, help="|Z| per w, cc only (default d_A^2)")
    p.add_argument("--lambdas", type=int, default=defaults.lambda_grid)
    p.add_argument("--restarts", type=int, default=defaults.restarts)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--max-iters", type=int, default=defaults.max_iters)
    p.add_argument("--obj-tol", type=float, default=defaults.obj_tol)
    p.add_argument("--workers", type=int, default=defaults.workers)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="SVG scatter path")
    p.set_defaults(func=_cmd_frontier)

    p = sub.add_parser("oracle", help="brute-force frontier for classically embedded channels")
    p.add_argument("channel")
    p.add_argument("--grid", type=int, default=None, help="simplex grid resolution")
    p.add_argument("--num-w", type=int, default=None)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--plot", help="SVG scatter path")
    p.set_defaults(func=_cmd_oracle)
    return parser


def _fail(category, message, code):
    print(f"{category}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        return _fail(exc.category, "; ".join(exc.problems), exc.exit_code)
    except HadamardError as exc:
        return _fail(exc.category, exc, exc.exit_code)
    except ValueError as exc:
        return _fail("InvalidParameters", exc, 1)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("NumericalError", exc, 4)


if __name__ == "__main__":
    sys.exit(main())
