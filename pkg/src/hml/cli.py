"""Command-line interface.

Gaussian integers are written as 3+2i, -1+2i, 7 or -i.  Literals that start
with a minus sign must be attached with '=' (``--n=-1+2i``) so that argparse
does not read them as options.
"""
from __future__ import annotations

import argparse
import json
import sys

from .characters import family_char, symbol, symbol_by_factoring
from .complexval import ComplexVal
from .euler_products import (
    DEFAULT_PRIME_BOUND,
    Q_K_VARIANTS,
    RK1_CONSTANTS,
    B_K,
    E_K,
    G_K,
    P_K,
    Q_K,
    R_K1,
    R_K2,
    Y_K,
)
from .gauss_sums import BRUTE_CAP, gauss_brute, gauss_multiplicative
from .gaussian import parse_gaussian
from .lfunctions import Y, L_afe, L_tilde
from .special import zeta_K


def parse_complex(text: str) -> complex:
    """'0.5' or '0.6,0.3' (real, imaginary)."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected re[,im], got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def gint(text: str):
    try:
        return parse_gaussian(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def x_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _cv(v: ComplexVal | complex) -> dict:
    if isinstance(v, ComplexVal):
        return v.as_dict()
    return ComplexVal.of(complex(v), 0.0).as_dict()


# ---------------------------------------------------------------- commands

def cmd_symbol(args) -> int:
    fn = symbol_by_factoring if args.oracle else symbol
    print(fn(args.a, args.n))
    return 0


def cmd_gauss(args) -> int:
    if args.brute or not args.n.is_primary():
        g = gauss_brute(args.r, args.n, cap=args.cap)
    else:
        g = gauss_multiplicative(args.r, args.n)
    _emit(g.value.as_dict())
    return 0


def cmd_lfun(args) -> int:
    if args.tilde_n is not None:
        res = L_tilde(args.s, args.tilde_n)
    else:
        res = L_afe(args.s, family_char(args.d))
    _emit(res.as_dict())
    return 0


def cmd_zeta(args) -> int:
    _emit(zeta_K(args.s).as_dict())
    return 0


def cmd_euler(args) -> int:
    s, w, bound = args.s, args.w, args.prime_bound
    which = args.which
    if which in ("PK",) and w is None:
        print("euler --which PK needs --w", file=sys.stderr)
        return 2
    if which == "BK":
        out = B_K(s, bound)
    elif which == "EK":
        out = E_K(s, bound)
    elif which == "QK":
        out = Q_K(s, bound, args.q_variant)
    elif which == "PK":
        out = P_K(s, w, bound)
    else:
        value = {
            "RK1": lambda: R_K1(s, args.variant, bound),
            "RK2": lambda: R_K2(s, bound, args.q_variant),
            "Y": lambda: Y(s),
            "YK": lambda: Y_K(s),
            "GK": lambda: G_K(s),
        }[which]()
        _emit({"value": _cv(value), "tail_bound": None, "prime_bound": bound if which.startswith("RK") else None})
        return 0
    _emit({"value": out.value.as_dict(), "tail_bound": out.tail_bound, "prime_bound": out.prime_bound})
    return 0


def cmd_moment(args) -> int:
    from .moments import central_terms, moment_experiment, rhs_main_terms

    s = complex(args.s_re, args.s_im)
    report = moment_experiment(s, args.x, args.threads, args.prime_bound, args.q_variant)
    extra = {}
    if args.debug_variants:
        for name in RK1_CONSTANTS:
            col = []
            for row in report.rows:
                if report.central:
                    terms = central_terms(row.X, prime_bound=args.prime_bound, q_variant=args.q_variant, r1_variant=name)
                else:
                    terms = rhs_main_terms(s, row.X, args.prime_bound, args.q_variant, name)
                col.append(row.lhs.value - sum(terms))
            extra[f"residual_{name}"] = col
    if args.out == "json":
        data = report.as_dict()
        for key, col in extra.items():
            for row, v in zip(data["rows"], col):
                row[key] = [v.real, v.imag]
        _emit(data)
    else:
        lines = report.to_csv().splitlines()
        if extra:
            lines[0] += "," + ",".join(extra)
            for i, line in enumerate(lines[1:]):
                lines[i + 1] = line + "," + ",".join(repr(col[i].real) for col in extra.values())
        print("\n".join(lines))
    return 0


def cmd_check(args) -> int:
    from .checks import run_suite

    results = run_suite(args.suite, echo=lambda line: print(line, file=sys.stderr))
    ok = all(r.passed for r in results)
    _emit({"suite": args.suite, "passed": ok, "results": [r.as_dict() for r in results]})
    return 0 if ok else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hml",
        description="Quadratic Hecke L-functions over Z[i]: symbols, Gauss sums, L-values, Euler products and the first moment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", help="quadratic residue symbol (a/n)")
    p.add_argument("--a", type=gint, required=True)
    p.add_argument("--n", type=gint, required=True)
    p.add_argument("--oracle", action="store_true", help="use the Euler-criterion route over the factorization of n")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("gauss", help="Gauss sum g(r, n)")
    p.add_argument("--r", type=gint, required=True)
    p.add_argument("--n", type=gint, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--brute", action="store_true", help="sum over a residue system")
    mode.add_argument("--closed", action="store_true", help="prime-power closed forms (default for primary n)")
    p.add_argument("--cap", type=int, default=BRUTE_CAP, help="largest residue system to enumerate")
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("lfun", help="L(s, chi) by the approximate functional equation")
    p.add_argument("--s", type=parse_complex, required=True, help="re[,im]")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--d", type=gint, help="square-free primary d: the character chi_{(1+i)^5 d}")
    target.add_argument("--tilde-n", type=gint, help="primary n: the character chi~_n modulo 2n")
    p.set_defaults(func=cmd_lfun)

    p = sub.add_parser("zeta", help="Dedekind zeta function of Q(i)")
    p.add_argument("--s", type=parse_complex, required=True, help="re[,im]")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("euler", help="Euler products and residue constants")
    p.add_argument("--which", choices=["BK", "EK", "QK", "PK", "RK1", "RK2", "Y", "YK", "GK"], required=True)
    p.add_argument("--s", type=parse_complex, required=True, help="re[,im]")
    p.add_argument("--w", type=parse_complex, help="second variable for PK")
    p.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    p.add_argument("--variant", choices=sorted(RK1_CONSTANTS), help="R_K1 constant (default: adjudicated)")
    p.add_argument("--q-variant", choices=Q_K_VARIANTS, default="literal")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("moment", help="first moment against its main terms")
    p.add_argument("--x", type=x_list, default=[500.0, 1000.0, 2000.0, 4000.0], help="comma-separated X values")
    p.add_argument("--s-re", type=float, default=0.5)
    p.add_argument("--s-im", type=float, default=0.0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", choices=["csv", "json"], default="csv")
    p.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    p.add_argument("--q-variant", choices=Q_K_VARIANTS, default="derived")
    p.add_argument("--debug-variants", action="store_true", help="add residual columns for both R_K1 constants")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("check", help="run acceptance checks; exit 1 on any failure")
    p.add_argument(
        "--suite",
        choices=["all", "symbols", "gauss", "afe", "prop25", "decomp", "residue", "products", "moment"],
        default="all",
    )
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
