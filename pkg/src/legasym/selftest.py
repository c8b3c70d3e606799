"""Built-in invariant suites behind the CLI selftest subcommand.

Each check returns quietly or raises; the runner reports one line per check.
The quick tier covers the coefficient identities only; the full tier adds
mapping, Bessel, turning-point, oracle, and assembled-solution checks at
reduced grid sizes (the pytest acceptance suite runs the full-size ones).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import mpmath as mp
from mpmath import mpf

from . import lgcoeff, mapping, oracle
from .bessel import BesselKind, cyl
from .legendre import ferrers_p, ferrers_q
from .numerics import DEFAULT_CTX, Bracket, PrecisionCtx, log_gamma, solve_root

__all__ = ["run", "CheckResult", "QUICK_CHECKS", "FULL_CHECKS"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def _rel(a, b):
    scale = max(abs(a), abs(b), mpf("1e-300"))
    return abs(a - b) / scale


def _require(cond: bool, msg: str):
    if not cond:
        raise AssertionError(msg)


def _tol(ctx: PrecisionCtx, contract_exp: int, margin: int):
    """Contract tolerance, relaxed when the context is below the supported
    precision floor (the designed-failure path must reach the fallback)."""
    return max(mpf(10) ** contract_exp, mpf(10) ** (-(ctx.working_digits - margin)))


def check_root_solver(ctx: PrecisionCtx):
    f = lambda x: x * x - 4
    root = solve_root(f, Bracket.from_fn(f, 0, 3), mpf("1e-25"))
    _require(abs(root - 2) < mpf("1e-20"), f"x^2-4 root came out {root}")
    g = lambda r: (2 * mp.sqrt(r + 1) + mp.log(r)
                   - mp.log(r + 2 * mp.sqrt(r + 1) + 2))
    with ctx.working():
        rho = solve_root(g, Bracket.from_fn(g, mpf("0.1"), 1),
                         _tol(ctx, -20, 4))
    _require(abs(rho - mpf("0.4392288399")) < max(mpf("1e-9"), _tol(ctx, -9, 4)),
             f"canonical root came out {rho}")


def check_log_gamma(ctx: PrecisionCtx):
    with ctx.working():
        _require(abs(log_gamma(1, ctx)) < _tol(ctx, -30, 2),
                 "log_gamma(1) != 0")
        for x in (mpf("0.5"), mpf(3), mpf(25.75), mpf(120)):
            lhs = log_gamma(x + 1, ctx) - log_gamma(x, ctx)
            _require(_rel(lhs, mp.log(x)) < _tol(ctx, -13, 3),
                     f"recurrence fails at x={x}")


def check_coefficient_identities(ctx: PrecisionCtx):
    tol = _tol(ctx, -18, 10)
    for alpha in ("0", "0.3", "0.5", "0.9"):
        table = lgcoeff.CoeffTable.build(mpf(alpha), 8, ctx)
        with ctx.working():
            lam_i = 0
            for s in range(1, 9):
                es = table.E[s]
                _require(es.substitute_reciprocal().rel_distance(es) < tol,
                         f"palindromy fails for index {s}, alpha={alpha}")
                _require(es.parity() in ("odd" if s % 2 else "even", "zero"),
                         f"parity fails for index {s}, alpha={alpha}")
                scale = max(es.max_abs_coeff(), mpf(1))
                at1 = es.evaluate(mpf(1))
                at_m1 = es.evaluate(mpf(-1))
                if s % 2 == 0:
                    _require(abs(at1) < tol * scale and abs(at_m1) < tol * scale,
                             f"even-index endpoint values nonzero at s={s}")
                else:
                    _require(abs(at1 + at_m1) < tol * scale,
                             f"odd-index endpoint antisymmetry fails at s={s}")
                    _require(_rel(at1, table.lambda_odd[lam_i]) < tol,
                             f"lambda mismatch at s={s}")
                    lam_i += 1
                for fam in (table.e[s], table.e_tilde[s]):
                    _require(max(fam.exponents()) <= -1,
                             f"Bessel-side coefficient {s} fails to vanish "
                             f"at infinity")


def check_mapping(ctx: PrecisionCtx):
    params = mapping.LegendreParams.from_nu_alpha(50, mpf("0.5"))
    with ctx.working():
        sig = params.sigma
        pt = mapping.resolve(params, sig, ctx)
        _require(pt.zeta == params.alpha ** 2 and pt.beta == 0,
                 "turning-point shortcut broken")
        for t in (mpf("0.05"), mpf("0.45"), mpf("0.93"), mpf("1.4"), mpf(2)):
            pt = mapping.resolve(params, t, ctx)
            _require(pt.residual < _tol(ctx, -13, 4),
                     f"residual too big at t={t}")
        p0 = mapping.LegendreParams.from_nu_alpha(50, 0)
        for t in (mpf("0.2"), mpf("0.7")):
            pt = mapping.resolve(p0, t, ctx)
            _require(_rel(pt.zeta, mp.acos(t) ** 2) < _tol(ctx, -12, 4),
                     "alpha=0 closed form fails")


def check_bessel(ctx: PrecisionCtx):
    with ctx.working():
        for mu in (mpf(0), mpf("10.1"), mpf("25.25")):
            for x in (mpf("0.5"), mpf(10), mpf(60)):
                j, jp = cyl(BesselKind.J, mu, x, ctx)
                y, yp = cyl(BesselKind.Y, mu, x, ctx)
                _require(_rel(j * yp - jp * y, 2 / (mp.pi * x))
                         < _tol(ctx, -12, 3),
                         f"J/Y Wronskian fails at mu={mu}, x={x}")
                i, ip = cyl(BesselKind.I, mu, x, ctx)
                k, kp = cyl(BesselKind.K, mu, x, ctx)
                _require(_rel(i * kp - ip * k, -1 / x) < _tol(ctx, -12, 3),
                         f"I/K Wronskian fails at mu={mu}, x={x}")


def check_turning_point(ctx: PrecisionCtx):
    params = mapping.LegendreParams.from_nu_alpha(50, mpf("0.5"))
    table = lgcoeff.CoeffTable.build(params.alpha, 8, ctx)
    with ctx.working():
        pt = mapping.resolve(params, params.sigma, ctx)
        ev = lgcoeff.eval_ab_near_turning(table, pt, params.u, 4, ctx)
        _require(_rel(ev.b[0], mpf(2) / 35) < mpf("1e-8"),
                 f"B_0 turning limit came out {ev.b[0]}")
        t_edge = params.sigma - lgcoeff.FALLBACK_RADIUS
        pt = mapping.resolve(params, t_edge, ctx)
        direct = lgcoeff.eval_ab(table, pt, params.u, 4, ctx)
        near = lgcoeff.eval_ab_near_turning(table, pt, params.u, 4, ctx)
        for d, n in zip(direct.a + direct.b, near.a + near.b):
            _require(_rel(d, n) < mpf("1e-9"), "two-path continuity fails")


def check_oracle(ctx: PrecisionCtx):
    params = mapping.LegendreParams.from_nu_alpha(50, mpf("0.5"))
    with ctx.oracle():
        t = mpf("0.6")
        base = oracle.oracle_ferrers_p(params, +1, t, ctx)
        finer = oracle.oracle_ferrers_p(params, +1, t, ctx, extra=10)
        _require(_rel(base, finer) < mpf(10) ** (-(ctx.oracle_digits - 12)),
                 "P oracle not precision-stable")
        q = oracle.oracle_ferrers_q(params, t, ctx)
        qf = oracle.oracle_ferrers_q(params, t, ctx, extra=10)
        _require(_rel(q, qf) < mpf(10) ** (-(ctx.oracle_digits - 12)),
                 "Q oracle not precision-stable")
        one = oracle.oracle_ferrers_p(
            mapping.LegendreParams.from_nu_alpha(0, 0), +1, mpf("0.37"), ctx)
        _require(_rel(one, mpf(1)) < mpf("1e-30"), "P(nu=0,mu=0) != 1")


def check_assembled(ctx: PrecisionCtx):
    params = mapping.LegendreParams.from_nu_alpha(50, mpf("0.5"))
    with ctx.working():
        for t in (mpf("0.3"), mpf("0.55"), mpf("0.91"), mpf("0.97")):
            approx = ferrers_p(params, t, 4, ctx).full()
            ref = oracle.oracle_ferrers_p(params, +1, t, ctx)
            env = oracle.envelope_m(params, t, ctx)
            _require(abs(approx - ref) / env < mpf("1e-10"),
                     f"P accuracy fails at t={t}")
        t = mpf("0.4")
        q4 = ferrers_q(params, t, 4, ctx).full()
        qref = oracle.oracle_ferrers_q(params, t, ctx)
        _require(_rel(q4, qref) < mpf("1e-10"), "Q accuracy fails")


QUICK_CHECKS = [
    ("coefficient-identities", check_coefficient_identities),
]

FULL_CHECKS = QUICK_CHECKS + [
    ("root-solver", check_root_solver),
    ("log-gamma", check_log_gamma),
    ("mapping", check_mapping),
    ("bessel", check_bessel),
    ("turning-point", check_turning_point),
    ("oracle", check_oracle),
    ("assembled-solutions", check_assembled),
]


def run(quick: bool = False, ctx: PrecisionCtx = DEFAULT_CTX,
        report=print) -> list[CheckResult]:
    checks = QUICK_CHECKS if quick else FULL_CHECKS
    results = []
    for name, fn in checks:
        start = time.monotonic()
        try:
            fn(ctx)
            res = CheckResult(name, True, time.monotonic() - start)
        except Exception as exc:  # report and keep the first failure visible
            res = CheckResult(name, False, time.monotonic() - start,
                              f"{type(exc).__name__}: {exc}")
        results.append(res)
        status = "PASS" if res.ok else "FAIL"
        line = f"{status}  {name:24s} {res.seconds:7.2f}s"
        if res.detail:
            line += f"  {res.detail}"
        report(line)
    return results
