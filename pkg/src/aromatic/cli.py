"""Command-line interface: ``aromatic <subcommand> [flags]``.

Exit codes: 0 success, 1 failed check, 2 usage error, 3 unreadable input file.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import ark, checks, graph, series
from .eldiff import eval_scalar, eval_vector, index_string
from .polyfield import load_field
from .tensormap import format_table

CHECKS = ("equivariance", "collapse1d", "degeneracy2d", "divfree", "table3", "order", "all")


class UsageError(Exception):
    pass


class InputFileError(Exception):
    pass


@dataclass
class CommandConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        o = self.options
        if self.subcommand == "check" and o.get("tree") and o.get("method"):
            raise UsageError("--tree and --method are mutually exclusive")
        if self.subcommand == "integrate" and o.get("steps") is not None and o["steps"] < 0:
            raise UsageError("--steps must be nonnegative")
        if o.get("order") is not None and o["order"] < 1:
            raise UsageError("--order must be at least 1")
        if o.get("trials") is not None and o["trials"] < 1:
            raise UsageError("--trials must be at least 1")


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_vec(v) -> str:
    return " ".join(fmt(x) for x in np.atleast_1d(v))


def _point(text: str, dim: int) -> np.ndarray:
    try:
        x = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"--point must be comma-separated reals, got {text!r}")
    if x.size != dim:
        raise UsageError(f"--point has {x.size} coordinates, field has dimension {dim}")
    return x


def _field(path: Optional[str]):
    if not path:
        raise UsageError("--field is required")
    try:
        return load_field(path)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InputFileError(f"cannot read field file {path}: {e}")


def _method(name: Optional[str], alpha: Optional[float]) -> ark.AromaticTableau:
    if not name:
        raise UsageError("--method is required")
    try:
        return ark.get_method(name, alpha)
    except ark.UnknownMethodError:
        pass
    try:
        return ark.load_tableau(name)
    except FileNotFoundError:
        raise UsageError(f"unknown method {name!r} (and no tableau file of that name)")
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InputFileError(f"cannot read tableau file {name}: {e}")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="aromatic", description="Aromatic B-series toolkit.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("enumerate", help="list aromatic trees of a given order")
    s.add_argument("--order", type=int, required=True)

    s = sub.add_parser("eldiff", help="evaluate F(tree)(f)(x) for a one-root tree")
    s.add_argument("--tree", required=True)
    s.add_argument("--field", required=True)
    s.add_argument("--point", required=True)

    s = sub.add_parser("aroma", help="evaluate the scalar of a rootless forest")
    s.add_argument("--tree", required=True)
    s.add_argument("--field", required=True)
    s.add_argument("--point", required=True)

    s = sub.add_parser("series", help="evaluate a truncated aromatic B-series")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--field", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--h", type=float, default=1.0)
    s.add_argument("--order", type=int, default=None)

    s = sub.add_parser("integrate", help="run an aromatic Runge-Kutta method")
    s.add_argument("--method", required=True)
    s.add_argument("--field", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--steps", type=int, default=1)
    s.add_argument("--alpha", type=float, default=None)

    s = sub.add_parser("print-index", help="Einstein-notation form of F(tree)")
    s.add_argument("--tree", required=True)

    s = sub.add_parser("check", help="randomized property checks")
    s.add_argument("which", choices=CHECKS)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--order", type=int, default=None)
    s.add_argument("--tree", default=None)
    s.add_argument("--method", default=None)
    s.add_argument("--alpha", type=float, default=None)
    return p


def _run_check(args, out) -> int:
    seed = args.seed
    tol = {} if args.tol is None else {"tol": args.tol}
    which = args.which
    if which == "all":
        reports = checks.run_all(seed, args.trials or 50)
    elif which == "equivariance":
        dims = (args.dim,) if args.dim else (1, 2, 3)
        if args.method:
            target = _method(args.method, args.alpha)
        else:
            target = args.tree if args.tree is not None else "trees"
        reports = [checks.check_equivariance(target, dims, args.trials or 50, seed=seed, **tol)]
    elif which == "collapse1d":
        reports = [checks.check_collapse_1d(args.order or 5, seed, args.trials or 20, **tol)]
    elif which == "degeneracy2d":
        reports = [checks.check_degeneracy_2d(args.trials or 50, seed, dim=args.dim or 2, **tol)]
    elif which == "divfree":
        dims = (args.dim,) if args.dim else (2, 3)
        reports = [checks.check_divfree(args.trials or 20, dims, seed, **tol)]
    elif which == "table3":
        print(format_table((2, 0, 1)), file=out)
        reports = [checks.check_table3()]
    else:  # order
        name = args.method or "euler"
        if args.alpha is not None and "(" not in name:
            name = f"{name}({args.alpha:g})"
        reports = [checks.check_order(name, **tol)]
    for r in reports:
        print(r.line(), file=out)
    return 0 if all(r.passed for r in reports) else 1


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"aromatic: error: {e}", file=err)
        return 2
    except SystemExit as e:  # --help
        return int(e.code) if e.code is not None else 0
    config = CommandConfig(args.subcommand, vars(args))
    try:
        config.validate()
        cmd = args.subcommand
        if cmd == "enumerate":
            for t in graph.enumerate_trees(args.order):
                print(t, file=out)
        elif cmd == "eldiff":
            f = _field(args.field)
            print(fmt_vec(eval_vector(args.tree, f, _point(args.point, f.dim))), file=out)
        elif cmd == "aroma":
            f = _field(args.field)
            print(fmt(eval_scalar(args.tree, f, _point(args.point, f.dim))), file=out)
        elif cmd == "series":
            f = _field(args.field)
            try:
                b = series.BSeriesCoefficients.load(args.coeffs)
            except (OSError, ValueError) as e:
                raise InputFileError(f"cannot read coefficient file {args.coeffs}: {e}")
            print(fmt_vec(series.eval_series(b, f, _point(args.point, f.dim), args.h, args.order)), file=out)
        elif cmd == "integrate":
            f = _field(args.field)
            method = _method(args.method, args.alpha)
            for y in ark.integrate(method, f, _point(args.point, f.dim), args.h, args.steps):
                print(fmt_vec(y), file=out)
        elif cmd == "print-index":
            print(index_string(args.tree), file=out)
        elif cmd == "check":
            return _run_check(args, out)
        return 0
    except InputFileError as e:
        print(f"aromatic: error: {e}", file=err)
        return 3
    except (UsageError, graph.ParseError, graph.OrderCapError, ark.UnknownMethodError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"aromatic: error: {msg}", file=err)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as e:
        print(f"aromatic: error: {e}", file=err)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
