"""Command-line front end.

Subcommands:
  eval         one function value at one point
  table        a function over a t (or x) grid, as CSV
  error-curve  reference / asymptotic / envelope / omega rows, as CSV
  coeffs       dump generated coefficient families
  selftest     run the built-in invariant suites

Exit codes: 0 success, 1 usage error, 2 numeric failure.  All numeric output
is fixed 17-significant-digit decimal so CSV artifacts are byte-stable.
"""

from __future__ import annotations

import argparse
import sys

import mpmath as mp
from mpmath import mpf

from . import lgcoeff, selftest
from .errors import LegasymError
from .legendre import ferrers_p, ferrers_q, legendre_p_cut, legendre_q_bold
from .mapping import LegendreParams
from .numerics import PrecisionCtx
from .oracle import omega_error

__all__ = ["main"]

_FUNCTIONS = {
    "ferrersP": ferrers_p,
    "ferrersQ": ferrers_q,
    "legendreP": legendre_p_cut,
    "legendreQ": legendre_q_bold,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _build_parser() -> _Parser:
    parser = _Parser(prog="legasym", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p, with_terms=True):
        p.add_argument("--nu", required=True, help="degree (>= 0)")
        p.add_argument("--alpha", help="order ratio mu/(nu+1/2)")
        p.add_argument("--mu", help="order (alternative to --alpha)")
        if with_terms:
            p.add_argument("--terms", type=int, default=4,
                           help="retained series terms (default 4)")
        p.add_argument("--precision", type=int, default=34,
                       help="working decimal digits (default 34)")

    p_eval = sub.add_parser("eval", help="evaluate one point")
    add_params(p_eval)
    p_eval.add_argument("--fn", choices=sorted(_FUNCTIONS), default="ferrersP")
    p_eval.add_argument("--t", help="argument in [0,1)")
    p_eval.add_argument("--x", help="argument in (1,oo)")

    p_table = sub.add_parser("table", help="evaluate over a grid, CSV out")
    add_params(p_table)
    p_table.add_argument("--fn", choices=sorted(_FUNCTIONS), default="ferrersP")
    p_table.add_argument("--grid", required=True, help="start:stop:step")
    p_table.add_argument("--output", default="-", help="file path or - (stdout)")

    p_err = sub.add_parser("error-curve",
                           help="reference vs asymptotic error rows, CSV out")
    add_params(p_err)
    p_err.add_argument("--grid", required=True, help="start:stop:step in [0,1)")
    p_err.add_argument("--output", default="-", help="file path or - (stdout)")

    p_coef = sub.add_parser("coeffs", help="dump coefficient families")
    add_params(p_coef, with_terms=False)
    p_coef.add_argument("--smax", type=int, default=8,
                        help="highest coefficient index (<= 12)")

    p_self = sub.add_parser("selftest", help="run invariant suites")
    p_self.add_argument("--quick", action="store_true",
                        help="coefficient identities only")
    p_self.add_argument("--precision", type=int, default=34)
    return parser


def _params_from(args) -> LegendreParams:
    if (args.alpha is None) == (args.mu is None):
        raise UsageError("exactly one of --alpha / --mu must be given")
    if args.alpha is not None:
        return LegendreParams.from_nu_alpha(mpf(args.nu), mpf(args.alpha))
    return LegendreParams.from_nu_mu(mpf(args.nu), mpf(args.mu))


def _ctx_from(args) -> PrecisionCtx:
    digits = getattr(args, "precision", 34)
    return PrecisionCtx(working_digits=digits,
                        oracle_digits=max(digits + 16, 50))


def _parse_grid(spec: str) -> list:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (mpf(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad grid component in {spec!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"empty grid {spec!r}")
    grid = []
    k = 0
    while True:
        t = start + k * step
        if t > stop + step / mpf(10) ** 9:
            break
        grid.append(t)
        k += 1
    if not grid:
        raise UsageError(f"empty grid {spec!r}")
    if any(abs(t - 1) <= mpf("1e-12") for t in grid):
        raise UsageError("grid contains the excluded point t = 1")
    return grid


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _cmd_eval(args) -> int:
    params = _params_from(args)
    ctx = _ctx_from(args)
    if (args.t is None) == (args.x is None):
        raise UsageError("exactly one of --t / --x must be given")
    fn = _FUNCTIONS[args.fn]
    arg = mpf(args.t if args.t is not None else args.x)
    if args.fn in ("ferrersP", "ferrersQ") and args.t is None:
        raise UsageError(f"{args.fn} takes --t in [0,1)")
    if args.fn in ("legendreP", "legendreQ") and args.x is None:
        raise UsageError(f"{args.fn} takes --x in (1,oo)")
    res = fn(params, arg, args.terms, ctx)
    print(f"fn={args.fn} value={_fmt(res.value)} log_scale={_fmt(res.log_scale)} "
          f"n_terms={res.n_terms} region={res.region.value} "
          f"fallback={res.fallback_used}")
    return 0


def _cmd_table(args) -> int:
    params = _params_from(args)
    ctx = _ctx_from(args)
    grid = _parse_grid(args.grid)
    fn = _FUNCTIONS[args.fn]
    cut = args.fn in ("legendreP", "legendreQ")
    out, close = _open_out(args.output)
    try:
        out.write("t,value,log_scale,region,fallback\n")
        for t in grid:
            if cut and not t > 1 or not cut and not 0 <= t < 1:
                raise UsageError(f"grid point {t} outside the domain of {args.fn}")
            res = fn(params, t, args.terms, ctx)
            out.write(f"{_fmt(t)},{_fmt(res.value)},{_fmt(res.log_scale)},"
                      f"{res.region.value},{int(res.fallback_used)}\n")
    finally:
        if close:
            out.close()
    return 0


def _cmd_error_curve(args) -> int:
    params = _params_from(args)
    ctx = _ctx_from(args)
    grid = _parse_grid(args.grid)
    if any(not 0 <= t < 1 for t in grid):
        raise UsageError("error-curve grid must lie inside [0, 1)")
    out, close = _open_out(args.output)
    try:
        out.write("t,reference,approx,envelope,omega\n")
        for t in grid:
            row = omega_error(params, t, args.terms, ctx)
            out.write(f"{_fmt(row.t)},{_fmt(row.reference)},{_fmt(row.approx)},"
                      f"{_fmt(row.envelope)},{_fmt(row.omega)}\n")
    finally:
        if close:
            out.close()
    return 0


def _cmd_coeffs(args) -> int:
    if args.alpha is None and args.mu is None:
        raise UsageError("give --alpha (or --nu with --mu)")
    params = _params_from(args)
    ctx = _ctx_from(args)
    if not 1 <= args.smax <= 12:
        raise UsageError(f"--smax must lie in [1, 12], got {args.smax}")
    s_max = max(args.smax, 4)
    table = lgcoeff.CoeffTable.build(params.alpha, s_max, ctx)
    with ctx.working():
        for s in range(1, args.smax + 1):
            print(f"# E_{s}")
            print(table.E[s].dump())
        for i, lam in enumerate(table.lambda_odd):
            if 2 * i + 1 <= args.smax:
                print(f"# lambda_{2 * i + 1}")
                print(_fmt(lam))
        for name, fam in (("e", table.e), ("e_tilde", table.e_tilde)):
            for s in range(1, args.smax + 1):
                print(f"# {name}_{s}")
                print(fam[s].dump())
    return 0


def _cmd_selftest(args) -> int:
    digits = args.precision
    ctx = PrecisionCtx(working_digits=digits,
                       oracle_digits=max(digits + 10, 50 if digits >= 34 else
                                         digits + 10))
    results = selftest.run(quick=args.quick, ctx=ctx)
    failures = [r for r in results if not r.ok]
    if failures:
        print(f"FAILED: {failures[0].name}: {failures[0].detail}",
              file=sys.stderr)
        return 2
    print(f"all {len(results)} suites passed")
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "table": _cmd_table,
    "error-curve": _cmd_error_curve,
    "coeffs": _cmd_coeffs,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except LegasymError as exc:
        print(f"numeric failure [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
