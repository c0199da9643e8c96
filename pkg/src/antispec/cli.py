"""Command-line interface: classify, model, sweep, verify, gen.

Exit codes: 0 success, 1 usage / I/O / parse / invalid plan, 2 symmetry
violated, 3 not diagonalizable, 4 invalid threshold bracket, 5 parameters
outside the verified regime.
"""

import argparse
import json
import sys
from pathlib import Path

from . import defaults
from ._jsonio import atomic_write, dumps
from .antiunitary import antiunitary_from_json, antiunitary_to_json
from .classifier import classify
from .errors import (
    AntispecError,
    BracketInvalid,
    InvalidMatrix,
    InvalidPlan,
    NotDiagonalizable,
    OutOfRegime,
    SymmetryViolated,
    UnknownM,
)
from .linalg import matrix_from_json, matrix_to_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SYMMETRY = 2
EXIT_NOT_DIAGONALIZABLE = 3
EXIT_BRACKET = 4
EXIT_REGIME = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for SymmetryViolated here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _check_output(path):
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise UsageError(f"output directory {parent} does not exist")


def _write_json(path, payload):
    try:
        atomic_write(path, dumps(payload) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_classify(args):
    _check_output(args.output)
    try:
        h = matrix_from_json(_read_json(args.input))
        a = antiunitary_from_json(_read_json(args.symmetry))
    except (InvalidMatrix, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    report = classify(h, a, tol=args.tol, tol_sym=args.tol_sym)
    if args.output:
        _write_json(args.output, report.to_json())
    print(report.summary_line())
    return EXIT_OK


def cmd_model(args):
    from .models.square_well import build_square_well, square_well_matching

    for p in (args.out_h, args.out_a, args.output):
        _check_output(p)
    if args.out_h or args.out_a:
        try:
            h, a = build_square_well(args.Z, args.N)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.out_h:
            _write_json(args.out_h, matrix_to_json(h))
        if args.out_a:
            _write_json(args.out_a, antiunitary_to_json(a))
    sols = square_well_matching(args.Z, (0.0, args.re_max, None, None))
    payload = {
        "model": "square-well",
        "Z": args.Z,
        "levels": [
            {"E": [s.E.real, s.E.imag], "residual": s.residual, "pt_overlap": s.pt_overlap()} for s in sols
        ],
    }
    if args.output:
        _write_json(args.output, payload)
    for s in sols:
        print(f"E = {s.E.real:.12f} {s.E.imag:+.12f}i")
    return EXIT_OK


def cmd_sweep(args):
    from .sweep import SquareWellFD, SquareWellMatching, sweep

    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    for p in (args.csv, args.json):
        _check_output(p)
    if args.model == "square-well-fd":
        family = SquareWellFD(N=args.grid, n_levels=args.levels)
    else:
        family = SquareWellMatching(n_levels=args.levels)
    try:
        result = sweep(family, args.lo, args.hi, args.steps, refine=args.refine, tol_param=args.tol_param)
    except BracketInvalid:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.csv:
        result.write_csv(args.csv)
    pairs = [c for c in result.pair_counts if c is not None]
    print(f"points={len(result.param_values)} max_pairs={max(pairs) if pairs else 0} "
          f"failed={sum(e is not None for e in result.errors)}")
    if result.threshold is not None:
        th = result.threshold
        payload = dict(th.to_json(), model=args.model)
        if args.model == "square-well-fd":
            payload["N"] = args.grid
        if args.json:
            _write_json(args.json, payload)
        print(f"Z_c={th.z_c:.10f} bracket={th.bracket_width:.3e}")
    return EXIT_OK


def cmd_verify(args):
    from .models.khare_mandal import khare_mandal_verify

    _check_output(args.output)
    report = khare_mandal_verify(args.M, args.zeta)
    if args.output:
        _write_json(args.output, report)
    c = report["checks"]
    print(f"{report['representation']} eigen_residual={c['eigen_residual_max']:.2e} "
          f"flip_residual={c['flip_residual_max']:.2e}")
    return EXIT_OK


def cmd_gen(args):
    from .models.planted import PlantedPlan, build_planted

    for p in (args.out_h, args.out_a, args.out_expected):
        _check_output(p)
    plan = PlantedPlan.from_json(_read_json(args.plan))
    if args.seed is not None:
        plan = plan.with_seed(args.seed)
    h, a, expected = build_planted(plan)
    _write_json(args.out_h, matrix_to_json(h))
    _write_json(args.out_a, antiunitary_to_json(a))
    if args.out_expected:
        _write_json(args.out_expected, expected.to_json())
    print(expected.summary_line())
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="antispec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="Classify the spectrum of H under A")
    p.add_argument("--input", required=True, help="matrix JSON")
    p.add_argument("--symmetry", required=True, help="anti-unitary JSON")
    p.add_argument("--tol", type=_positive, default=defaults.TOL_PROP)
    p.add_argument("--tol-sym", type=_positive, default=defaults.TOL_SYM)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("model", help="Build the PT square well and list its levels")
    p.add_argument("--Z", type=float, required=True)
    p.add_argument("--N", type=int, default=64, help="interior grid points (even, >= 16)")
    p.add_argument("--re-max", type=_positive, default=100.0, help="upper Re E of the level search")
    p.add_argument("--out-h", default=None)
    p.add_argument("--out-a", default=None)
    p.add_argument("--output", default=None, help="levels JSON from the matching solver")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("sweep", help="Sweep the coupling of the square well")
    p.add_argument("--model", choices=["square-well-fd", "square-well-matching"], required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--refine", action="store_true", help="bisect for the threshold")
    p.add_argument("--tol-param", type=_positive, default=defaults.TOL_PARAM)
    p.add_argument("--grid", type=int, default=2000, help="FD grid size N")
    p.add_argument("--levels", type=int, default=6, help="number of lowest states tracked")
    p.add_argument("--csv", default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="Check the Khare-Mandal closed forms")
    p.add_argument("--M", type=int, required=True, choices=[2, 3, 4])
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="Generate a planted (H, A) pair")
    p.add_argument("--plan", required=True)
    p.add_argument("--seed", type=int, default=None, help="overrides the plan's seed")
    p.add_argument("--out-h", required=True)
    p.add_argument("--out-a", required=True)
    p.add_argument("--out-expected", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SymmetryViolated as exc:
        print(f"error: symmetry violated: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY
    except NotDiagonalizable as exc:
        print(f"error: not diagonalizable: {exc}", file=sys.stderr)
        return EXIT_NOT_DIAGONALIZABLE
    except BracketInvalid as exc:
        print(f"error: invalid bracket: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except OutOfRegime as exc:
        print(f"error: out of regime: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (UsageError, InvalidPlan, UnknownM) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AntispecError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
