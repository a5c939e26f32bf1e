"""Command-line interface: ``psinv <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 numerical precondition error,
3 I/O error (missing or malformed input, unwritable output).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import series_report
from .deflation import BACKWARD, FORWARD, deflate_backward, deflate_forward, deflation_oracle
from .errors import PsinvError, PreconditionError
from .experiments import DEFLATION_COLUMNS, write_experiment
from .io import InputFormatError, coeffs_document, load_polynomial, load_series
from .precision import BINARY64, MIN_EXTENDED_DIGITS, default_oracle_digits, extended
from .pseudozero import pseudozero_grid
from .quadratic import MINUS, PLUS, QuadraticCase, invert_quadratic, quadratic_rel_bound
from .report import error_report, format_value
from .series import PowerSeries, invert

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3

BOUNDS_COLUMNS = {"k": "k", "c_k_oracle": "oracle", "rel_err_binary64": "rel_err",
                  "thm31_rel": "rel_bounds.thm31", "cond_rel": "rel_bounds.cond",
                  "stab_rel": "rel_bounds.stab"}


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    oracle_digits: int = MIN_EXTENDED_DIGITS
    out: str | None = None
    fmt: str = "csv"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _digits(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if d < MIN_EXTENDED_DIGITS:
        raise argparse.ArgumentTypeError(f"oracle digits must be >= {MIN_EXTENDED_DIGITS}, got {d}")
    return d


def _rect(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("rect must be re_min,re_max,im_min,im_max")
    try:
        return tuple(float(v) for v in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rect {text!r}") from None


def _floats(text: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psinv", description="Power-series inversion and deflation with error bounds.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, out_help="output format"):
        p.add_argument("--oracle-digits", type=_digits, default=None,
                       help="oracle precision in decimal digits (>= 100; default from PSINV_ORACLE_DIGITS or 100)")
        p.add_argument("--out", choices=("csv", "json"), default="csv", help=out_help)
        p.add_argument("--output", default=None, help="write to this file instead of stdout")

    p = sub.add_parser("invert", help="invert a power series in binary64")
    p.add_argument("--series", required=True)
    p.add_argument("--n", type=int, required=True)
    common(p)

    p = sub.add_parser("deflate", help="divide a monic polynomial by (x - a)")
    p.add_argument("--poly", required=True)
    p.add_argument("--root", required=True)
    p.add_argument("--order", choices=(FORWARD, BACKWARD), default=FORWARD)
    p.add_argument("--bounds", action="store_true")
    common(p)

    p = sub.add_parser("quadratic", help="invert x^2 + b x +- 1")
    p.add_argument("--b", required=True)
    p.add_argument("--sign", choices=("plus", "minus"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bounds", action="store_true")
    common(p)

    p = sub.add_parser("bounds", help="inversion errors against a priori bounds")
    p.add_argument("--series", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", default="thm31,cond,stab")
    common(p)

    p = sub.add_parser("pseudozeros", help="pseudozero indicator on a grid")
    p.add_argument("--poly", required=True)
    p.add_argument("--rect", type=_rect, required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--eps", type=_floats, default=(1e-16, 1e-12, 1e-8))
    common(p)

    p = sub.add_parser("experiment", help="reproduce one figure's data")
    p.add_argument("name", choices=("fig1a", "fig1b", "fig2", "fig3"))
    p.add_argument("--variant", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=int, default=400)
    p.add_argument("--oracle-digits", type=_digits, default=None)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _padded(p: PowerSeries, n: int) -> PowerSeries:
    """A file holding b_0..b_m with m < n means b_k = 0 for k > m."""
    if p.order < n:
        return PowerSeries(p.coeffs + (0.0,) * (n - p.order))
    return p


def _cmd_invert(args, digits):
    p = _padded(load_series(args.series), args.n)
    q = invert(p, args.n, BINARY64)
    if args.out == "json":
        return json.dumps(coeffs_document(q.coeffs)) + "\n"
    return _csv(("k", "coeff"), enumerate(q.coeffs))


def _cmd_deflate(args, digits):
    p = load_polynomial(args.poly)
    a = BINARY64.convert(args.root)
    run = deflate_forward if args.order == FORWARD else deflate_backward
    res = run(p, a, BINARY64, bounds=args.bounds)
    x = extended(digits)
    orc = deflation_oracle(p, a, x, order=args.order)
    bounds = {"bound": res.bound} if args.bounds else None
    rep = error_report(res.quotient.coeffs[:-1], orc.coeffs[:-1], bounds, ctx=x)
    if args.out == "json":
        return json.dumps({"coeffs": list(res.quotient.coeffs), "bound": list(res.bound),
                           "rel_err": rep.rel_err}) + "\n"
    cols = {k: v for k, v in DEFLATION_COLUMNS.items() if k != "excluded"}
    if not args.bounds:
        cols.pop("bound")
    return rep.to_csv(cols)


def _cmd_quadratic(args, digits):
    case = QuadraticCase(BINARY64.convert(args.b), PLUS if args.sign == "plus" else MINUS, args.n)
    x = extended(digits)
    c = invert_quadratic(case, BINARY64).coeffs
    orc = invert_quadratic(case, x).coeffs
    if args.bounds and case.sign != PLUS:
        raise PreconditionError("the Fibonacci bound applies to the plus case")
    rep = error_report(c, orc, ctx=x)
    if args.out == "json":
        return json.dumps(coeffs_document(c)) + "\n"
    header = ["k", "coeff", "oracle_coeff", "rel_err"]
    cols = [rep.k, rep.computed, rep.oracle, rep.rel_err]
    if args.bounds:
        header.append("rel_bound")
        cols.append([quadratic_rel_bound(case, k) for k in range(args.n + 1)])
    return _csv(header, zip(*cols))


def _cmd_bounds(args, digits):
    which = tuple(w for w in args.which.split(",") if w)
    p = _padded(load_series(args.series), args.n)
    rep = series_report(p, args.n, which, digits=digits)
    if args.out == "json":
        doc = {"k": list(rep.k), "rel_err": rep.rel_err,
               "rel_bounds": {k: list(v) for k, v in rep.rel_bounds.items()},
               "metadata": {k: (v if isinstance(v, (str, int, float)) else format_value(v))
                            for k, v in rep.metadata.items()}}
        return json.dumps(doc) + "\n"
    cols = {h: path for h, path in BOUNDS_COLUMNS.items()
            if not path.startswith("rel_bounds.") or path.split(".")[1] in rep.rel_bounds}
    text = rep.to_csv(cols)
    if "infnorm" in rep.metadata:
        sys.stderr.write(f"infnorm bound: {format_value(rep.metadata['infnorm'])}\n")
    return text


def _cmd_pseudozeros(args, digits):
    p = load_polynomial(args.poly)
    grid = pseudozero_grid(p, args.rect, args.res, eps_levels=args.eps)
    if args.out == "json":
        return json.dumps({"rect": list(args.rect), "resolution": args.res,
                           "eps_levels": list(args.eps),
                           "values": grid.values.tolist()}) + "\n"
    rows = ((re, im, grid.values[i, j]) for i, im in enumerate(grid.im_axis.tolist())
            for j, re in enumerate(grid.re_axis.tolist()))
    return _csv(("re", "im", "indicator"), ((float(a), float(b), float(c)) for a, b, c in rows))


COMMANDS = {"invert": _cmd_invert, "deflate": _cmd_deflate, "quadratic": _cmd_quadratic,
            "bounds": _cmd_bounds, "pseudozeros": _cmd_pseudozeros}


def run(argv=None) -> int:
    """Parse ``argv``, run the subcommand, return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        try:
            digits = args.oracle_digits or default_oracle_digits()
        except ValueError:
            raise UsageError("PSINV_ORACLE_DIGITS is not an integer") from None
        if digits < MIN_EXTENDED_DIGITS:
            raise UsageError(f"oracle digits must be >= {MIN_EXTENDED_DIGITS}, got {digits}")
        if args.subcommand == "experiment":
            paths = write_experiment(args.name, args.out, variant=args.variant, seed=args.seed,
                                     digits=digits, resolution=args.resolution)
            for path in paths:
                print(path)
            return EXIT_OK
        _emit(COMMANDS[args.subcommand](args, digits), args)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputFormatError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PsinvError, ValueError, ArithmeticError) as exc:
        print(f"numerical precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
