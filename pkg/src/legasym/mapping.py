"""Evaluation-point resolution for the uniform Legendre asymptotics.

Given parameters (nu, mu) and a real argument t on [0,1) or (1,oo), this
module computes the comparison-equation variable zeta by solving the implicit
matching equations of the three real regions, together with the two algebraic
helper variables

    beta     = sqrt((t - sigma)/(t + sigma)),
    beta_hat = sqrt(alpha**2 - zeta),

with branches fixed so that both are negative imaginary on the oscillatory
side t < sigma and positive real beyond the turning point.  Near t = sigma
the equations behave like a cube in beta_hat, so the solver works in the
square-root variable where they are well conditioned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath as mp
from mpmath import mpf, mpc

from .errors import (AlphaOutOfRange, DomainError, FitFailure, NoSignChange,
                     SingularPoint, SolveFailure)
from .numerics import DEFAULT_CTX, Bracket, PrecisionCtx, solve_root

__all__ = [
    "ALPHA_MAX",
    "Region",
    "LegendreParams",
    "MapPoint",
    "resolve",
    "beta_hat_series_check",
    "SeriesCheckReport",
]

# alpha <= 1 - delta keeps the two turning points t = +-sigma separated.
ALPHA_MAX = mpf("0.95")

TURNING_POINT_SNAP = mpf("1e-14")
SINGULAR_GUARD = mpf("1e-12")
_PARAM_DPS = 50


class Region(enum.Enum):
    OSCILLATORY = "oscillatory"   # 0 <= t < sigma
    MONOTONE = "monotone"         # sigma <= t < 1
    CUT = "cut"                   # t > 1


@dataclass(frozen=True)
class LegendreParams:
    """Degree/order bundle: u = nu + 1/2, alpha = mu/u, sigma = sqrt(1-alpha^2)."""

    nu: mpf
    mu: mpf
    u: mpf
    alpha: mpf
    sigma: mpf
    z_t: mpf

    @classmethod
    def from_nu_alpha(cls, nu, alpha) -> "LegendreParams":
        with mp.workdps(_PARAM_DPS):
            nu, alpha = mpf(nu), mpf(alpha)
            _check_alpha(alpha)
            if nu < 0:
                raise DomainError(f"degree nu must be >= 0, got {nu}")
            u = nu + mpf("0.5")
            sigma = mp.sqrt(1 - alpha ** 2)
            return cls(nu=nu, mu=u * alpha, u=u, alpha=alpha, sigma=sigma,
                       z_t=1 - sigma)

    @classmethod
    def from_nu_mu(cls, nu, mu) -> "LegendreParams":
        with mp.workdps(_PARAM_DPS):
            nu, mu = mpf(nu), mpf(mu)
            if mu < 0:
                raise DomainError(f"order mu must be >= 0, got {mu}")
            u = nu + mpf("0.5")
            return cls.from_nu_alpha(nu, mu / u)


def _check_alpha(alpha):
    if not (0 <= alpha <= ALPHA_MAX):
        raise AlphaOutOfRange(
            f"alpha must lie in [0, {ALPHA_MAX}], got {alpha}")


@dataclass(frozen=True)
class MapPoint:
    """A fully resolved evaluation point with branch bookkeeping."""

    t: mpf
    region: Region
    beta: mpc
    zeta: mpf
    beta_hat: mpc
    residual: mpf


def _sigma(alpha):
    return mp.sqrt((1 - alpha) * (1 + alpha))


def _clamped_acos(x):
    return mp.acos(min(mpf(1), max(mpf(-1), x)))


def _rhs_oscillatory(alpha, sig, t):
    # arccos(t/sigma) - alpha*arccos(alpha*t/(sigma*sqrt(1-t^2)))
    if t == 0:
        return (1 - alpha) * mp.pi / 2
    return (_clamped_acos(t / sig)
            - alpha * _clamped_acos(alpha * t / (sig * mp.sqrt(1 - t ** 2))))


def _rhs_monotone(alpha, sig, t):
    # alpha*arctanh(sqrt(t^2-sigma^2)/(alpha t)) - arccosh(t/sigma), t in (sigma,1)
    w = mp.sqrt((t - sig) * (t + sig)) / (alpha * t)
    return alpha * mp.atanh(w) - mp.acosh(t / sig)


def _rhs_cut(alpha, sig, t):
    # real part of the same expression continued across t = 1
    w = mp.sqrt((t - sig) * (t + sig)) / (alpha * t)
    return alpha * mp.atanh(1 / w) - mp.acosh(t / sig)


def _expand_bracket(f, lo, hi, grow_hi, attempts=60):
    """Bracket [lo, hi], growing hi via grow_hi until the sign changes."""
    flo = f(lo)
    if flo == 0:
        return Bracket(lo, lo + mpf("1e-50"), 1, -1), True
    for _ in range(attempts):
        fhi = f(hi)
        if mp.sign(fhi) != mp.sign(flo) or fhi == 0:
            return Bracket.from_fn(f, lo, hi), False
        hi = grow_hi(hi)
    raise SolveFailure(f"could not bracket the mapping equation (lo={lo}, hi={hi})")


def _iteration_cap(dps: int) -> int:
    # bracket collapse is bisection-paced in the worst case: ~3.4 iterations
    # per decimal digit of tolerance
    return max(200, 8 * dps)


def _solve_increasing(f, lo, hi_guess, tol, dps):
    """Root of f on [lo, oo) with f(lo) <= 0, f increasing at large scale."""
    try:
        br, exact = _expand_bracket(f, lo, hi_guess, lambda h: lo + 2 * (h - lo))
    except NoSignChange as exc:
        raise SolveFailure(str(exc)) from exc
    if exact:
        return br.lo
    return solve_root(f, br, tol, max_iter=_iteration_cap(dps))


def resolve(params: LegendreParams, t, ctx: PrecisionCtx = DEFAULT_CTX, *,
            dps: int | None = None) -> MapPoint:
    """Resolve t into (region, beta, zeta, beta_hat) with solver residual.

    dps overrides the working precision of the solve; the near-turning
    evaluation path uses this to re-resolve points at raised precision.
    """
    dps = ctx.working_digits if dps is None else dps
    with mp.workdps(dps + 5):
        t = mpf(t)
        alpha = mpf(params.alpha)
        if t < 0:
            raise DomainError(f"t must be >= 0, got {t}")
        if abs(t - 1) <= SINGULAR_GUARD:
            raise SingularPoint("t = 1 is a singular point of the equation")
        sig = _sigma(alpha)
        tol = mpf(10) ** (-(dps - 2))

        if abs(t - sig) <= TURNING_POINT_SNAP:
            return MapPoint(t=t, region=Region.MONOTONE, beta=mpc(0),
                            zeta=alpha ** 2, beta_hat=mpc(0), residual=mpf(0))

        if t < sig:
            region = Region.OSCILLATORY
            rhs = _rhs_oscillatory(alpha, sig, t)
            if alpha == 0:
                w = rhs
            else:
                f = lambda w: w - alpha * mp.atan(w / alpha) - rhs
                w = _solve_increasing(f, mpf(0), mp.pi * (1 - alpha) / 2 + 1,
                                      tol, dps)
            zeta = alpha ** 2 + w ** 2
            beta = -1j * mp.sqrt((sig - t) / (sig + t))
            beta_hat = mpc(0, -1) * w
        elif t < 1:
            region = Region.MONOTONE
            rhs = _rhs_monotone(alpha, sig, t)
            f = lambda v: alpha * mp.atanh(v / alpha) - v - rhs
            try:
                br = Bracket.from_fn(f, mpf(0), alpha * (1 - mpf(10) ** (-dps)))
                v = solve_root(f, br, tol, max_iter=_iteration_cap(dps))
            except NoSignChange as exc:
                raise SolveFailure(str(exc)) from exc
            zeta = (alpha - v) * (alpha + v)
            beta = mp.sqrt((t - sig) / (t + sig))
            beta_hat = mpc(v)
        else:
            region = Region.CUT
            if alpha == 0:
                y = mp.acosh(t)
            else:
                rhs = _rhs_cut(alpha, sig, t)
                f = lambda y: alpha * mp.atanh(alpha / y) - y - rhs
                lo = alpha * (1 + mpf(10) ** (-(dps - 1)))
                try:
                    br, exact = _expand_bracket(
                        lambda y: -f(y), lo, alpha + 2 * (mp.log(4 * t / sig) + 1),
                        lambda h: alpha + 2 * (h - alpha))
                    y = br.lo if exact else solve_root(
                        f, br, tol, max_iter=_iteration_cap(dps))
                except NoSignChange as exc:
                    raise SolveFailure(str(exc)) from exc
            zeta = (alpha - y) * (alpha + y)
            beta = mp.sqrt((t - sig) / (t + sig))
            beta_hat = mpc(y)

        residual = _residual(alpha, sig, t, zeta, region, ctx)
        return MapPoint(t=t, region=region, beta=mpc(beta), zeta=zeta,
                        beta_hat=mpc(beta_hat), residual=residual)


def _residual(alpha, sig, t, zeta, region: Region, ctx: PrecisionCtx):
    """Defining-equation residual, re-evaluated at oracle precision."""
    with ctx.oracle():
        alpha, t, zeta = mpf(alpha), mpf(t), mpf(zeta)
        sig = _sigma(alpha)
        if region is Region.OSCILLATORY:
            lhs = mp.sqrt(zeta - alpha ** 2)
            if alpha > 0:
                lhs -= alpha * _clamped_acos(alpha / mp.sqrt(zeta))
            return abs(lhs - _rhs_oscillatory(alpha, sig, t))
        if region is Region.MONOTONE:
            v = mp.sqrt(alpha ** 2 - zeta)
            lhs = alpha * mp.log(v + alpha) - v - alpha * mp.log(zeta) / 2
            return abs(lhs - _rhs_monotone(alpha, sig, t))
        y = mp.sqrt(alpha ** 2 - zeta)   # zeta < 0 on the cut
        if alpha == 0:
            return abs(y - mp.acosh(t))
        lhs = -y + alpha * mp.log(-zeta) / 2 - alpha * mp.log(y - alpha)
        w = mp.sqrt((t - sig) * (t + sig)) / (alpha * t)
        rhs = alpha * mp.log((w + 1) / (w - 1)) / 2 - mp.acosh(t / sig)
        return abs(lhs - rhs)


# --- near-turning series verification -------------------------------------

@dataclass(frozen=True)
class SeriesCheckReport:
    """Fitted beta_hat(beta) odd-series coefficients vs the closed forms."""

    fitted: tuple
    expected: tuple
    rel_errors: tuple
    ok: bool
    tolerance: float


def expected_beta_hat_coeffs(alpha) -> tuple:
    """Leading odd-series coefficients of beta_hat(beta) at the turning point.

    kappa = 2*sigma^(2/3); the cubic and quintic coefficients follow from the
    turning-point matching.  At alpha = 0 the series is 2*arctanh(beta), so
    the coefficients are 2/(2k+1).
    """
    alpha = mpf(alpha)
    if alpha == 0:
        return (mpf(2), mpf(2) / 3, mpf(2) / 5)
    s2 = 1 - alpha ** 2
    kap = 2 * mp.cbrt(s2)
    c3 = ((3 + s2) * kap - 8 * s2) / (5 * alpha ** 2)
    c5 = (3 * kap ** 5 + (s2 + 3) * ((43 * s2 + 29) * kap - 168 * s2)) \
        / (175 * alpha ** 4)
    return (kap, c3, c5)


def beta_hat_series_check(params: LegendreParams,
                          ctx: PrecisionCtx = DEFAULT_CTX,
                          tolerance: float = 1e-6) -> SeriesCheckReport:
    """Fit beta_hat as an odd series in beta from resolved points near t=sigma
    and compare the leading coefficients against their closed forms."""
    n_fit = 8
    with ctx.oracle(10):
        alpha = mpf(params.alpha)
        sig = _sigma(alpha)
        if alpha > 0:
            # monotone side: both variables real positive; keep t < 1
            bmax = min(mpf("0.12"), (1 - sig) / alpha / 3)
        else:
            bmax = mpf("0.12")
        bs = [bmax * mpf(i) / n_fit for i in range(1, n_fit + 1)]
        ratios = []
        for b in bs:
            if alpha > 0:
                tv = sig * (1 + b ** 2) / (1 - b ** 2)
                pt = resolve(params, tv, ctx, dps=ctx.oracle_digits + 10)
                ratios.append(mp.re(pt.beta_hat) / b)
            else:
                tv = (1 - b ** 2) / (1 + b ** 2)
                pt = resolve(params, tv, ctx, dps=ctx.oracle_digits + 10)
                # beta = -i b, beta_hat = -i w: w/b = sum (-1)^m c_{2m+1} b^{2m}
                ratios.append(-mp.im(pt.beta_hat) / b)
        A = mp.matrix(n_fit, n_fit)
        for i, b in enumerate(bs):
            for j in range(n_fit):
                A[i, j] = b ** (2 * j)
        try:
            sol = mp.lu_solve(A, mp.matrix(ratios))
        except ZeroDivisionError as exc:
            raise FitFailure("degenerate fit system") from exc
        signs = [1, 1, 1] if alpha > 0 else [1, -1, 1]
        fitted = tuple(signs[j] * sol[j] for j in range(3))
        expected = expected_beta_hat_coeffs(alpha)
        rel = tuple(abs(f - e) / abs(e) for f, e in zip(fitted, expected))
        if any(not mp.isfinite(r) for r in rel):
            raise FitFailure("non-finite fit residuals")
        ok = all(r <= mpf(tolerance) for r in rel)
        return SeriesCheckReport(fitted=fitted, expected=expected,
                                 rel_errors=rel, ok=ok, tolerance=tolerance)
