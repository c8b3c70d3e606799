"""Uniform asymptotic evaluation of Ferrers and Legendre functions of large
degree.

Each of the four targets is one assembly

    value = prefactor * quarter * exp(lambda_sum)
            * [ C(u*sqrt(|zeta|)) * (1 + sum_s A_s/u^(2s))
                + (sqrt(|zeta|)/u) * C'(u*sqrt(|zeta|)) * sum_s B_s/u^(2s) ]

with C one of J, Y (Ferrers P, Q on [0,1)) or I, K (P and bold Q on (1,oo)),
the quarter-power amplitude ((zeta-alpha^2)/(sigma^2-t^2))^(1/4) computed in
the always-positive form (beta_hat/beta)^2/(t+sigma)^2, and the Gamma
prefactors assembled in log space so degrees up to ~1e4 cannot overflow.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass

import mpmath as mp
from mpmath import mpf

from .bessel import BesselKind, cyl
from .errors import DomainError, SingularPoint
from .lgcoeff import (FALLBACK_RADIUS, CoeffEval, CoeffTable, eval_ab,
                      eval_ab_near_turning)
from .mapping import LegendreParams, MapPoint, Region, resolve
from .numerics import DEFAULT_CTX, PrecisionCtx

__all__ = [
    "EvalResult",
    "TruncationWarning",
    "ferrers_p",
    "ferrers_q",
    "legendre_p_cut",
    "legendre_q_bold",
    "coeff_table_for",
]

# |log(value)| beyond which results are reported in mantissa/log_scale form
# even when scaling was not requested (floats would overflow).
AUTO_SCALE_LOG = 600.0

TRUNCATION_RATIO_LIMIT = 1e-3


class TruncationWarning(UserWarning):
    """Last retained series term is not small; the expansion is degrading."""


@dataclass(frozen=True)
class EvalResult:
    """A function value with evaluation diagnostics.

    value is a float; when log_scale != 0 the represented number is
    value * exp(log_scale).  mp_value carries the full working-precision
    result (mantissa only, same scaling convention).
    """

    value: float
    log_scale: float
    n_terms: int
    region: Region
    fallback_used: bool
    last_term_ratio: float
    mp_value: mpf
    mp_log_scale: mpf

    def full(self) -> mpf:
        """The unscaled working-precision value."""
        if self.mp_log_scale == 0:
            return self.mp_value
        return self.mp_value * mp.e ** self.mp_log_scale


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


def coeff_table_for(alpha, s_max: int = 8,
                    ctx: PrecisionCtx = DEFAULT_CTX) -> CoeffTable:
    """Coefficient table for this alpha, memoized per (alpha, s_max, digits)."""
    with ctx.working():
        key = (mpf(alpha), s_max, ctx.working_digits)
    with _TABLE_LOCK:
        table = _TABLE_CACHE.get(key)
    if table is None:
        table = CoeffTable.build(alpha, s_max, ctx)
        with _TABLE_LOCK:
            _TABLE_CACHE[key] = table
    return table


def _coeffs_at(table: CoeffTable, point: MapPoint, u, n_terms: int,
               ctx: PrecisionCtx) -> CoeffEval:
    with ctx.working():
        sigma = mp.sqrt((1 - table.alpha) * (1 + table.alpha))
        near = abs(point.t - sigma) < FALLBACK_RADIUS
    if near:
        return eval_ab_near_turning(table, point, u, n_terms, ctx)
    return eval_ab(table, point, u, n_terms, ctx)


def _quarter_amplitude(table: CoeffTable, point: MapPoint, ctx: PrecisionCtx):
    """((zeta-alpha^2)/(sigma^2-t^2))^(1/4) as a positive real.

    Numerator and denominator change sign together across t = sigma, so the
    ratio equals (beta_hat/beta)^2/(t+sigma)^2 > 0, a form that stays well
    conditioned at the turning point.
    """
    alpha = table.alpha
    sigma = mp.sqrt((1 - alpha) * (1 + alpha))
    if point.beta == 0:
        ratio = (2 * mp.cbrt(1 - alpha ** 2)) ** 2 / (2 * sigma) ** 2
    else:
        rb = point.beta_hat / point.beta
        if abs(rb.imag) > mpf("1e-20") * abs(rb):
            raise ArithmeticError(f"beta_hat/beta not real: {rb}")
        ratio = rb.real ** 2 / (point.t + sigma) ** 2
    return ratio ** mpf("0.25")


def _series_sums(ev: CoeffEval, u, n_terms: int):
    u = mpf(u)
    s_a = mpf(1)
    for s in range(1, n_terms):
        s_a += ev.a[s - 1] / u ** (2 * s)
    s_b = mpf(0)
    for s in range(n_terms):
        s_b += ev.b[s] / u ** (2 * s)
    if n_terms == 1:
        return s_a, s_b, mpf(0)   # single term, nothing to compare against
    last = abs(ev.b[n_terms - 1]) / u ** (2 * (n_terms - 1)) \
        / max(abs(ev.b[0]), mpf("1e-30"))
    last = max(last, abs(ev.a[n_terms - 2]) / u ** (2 * (n_terms - 1)))
    return s_a, s_b, last


def _assemble(params: LegendreParams, t, n_terms: int, kind: BesselKind,
              with_gamma_ratio: bool, negative_half_pi: bool,
              ctx: PrecisionCtx, scaled: bool) -> EvalResult:
    if not 1 <= n_terms <= 4:
        raise ValueError("n_terms must lie in [1, 4]")
    point = resolve(params, t, ctx)
    table = coeff_table_for(params.alpha, ctx=ctx)
    ev = _coeffs_at(table, point, params.u, n_terms, ctx)
    with ctx.working():
        u, mu, alpha = mpf(params.u), mpf(params.mu), mpf(params.alpha)
        sigma = mp.sqrt((1 - alpha) * (1 + alpha))
        zeta_abs = abs(point.zeta)
        x = u * mp.sqrt(zeta_abs)
        if not x <= mpf("1e8"):
            raise DomainError(f"Bessel argument {x} exceeds the cyl contract")
        cval, cder = cyl(kind, mu, x, ctx)
        outer_factor = -mp.pi / 2 if negative_half_pi else mpf(1)
        s_a, s_b, last_ratio = _series_sums(ev, u, n_terms)
        core = cval * s_a + mp.sqrt(zeta_abs) / u * cder * s_b
        log_pref = (mp.log(u) / 2 + mu * mp.log(sigma / (1 + alpha))
                    - u * mp.log(sigma) - mp.loggamma(u + 1))
        if with_gamma_ratio:
            log_pref += mp.loggamma(u - mu + mpf("0.5"))
        log_pref += ev.lambda_sum
        quarter = _quarter_amplitude(table, point, ctx)
        full = outer_factor * quarter * core * mp.e ** log_pref
        if full != 0 and (scaled or abs(mp.log(abs(full))) > AUTO_SCALE_LOG):
            # integer log offset: exp(-log_scale) then costs no precision
            log_scale = mp.nint(mp.log(abs(full)))
            value = full * mp.e ** (-log_scale)
        else:
            log_scale = mpf(0)
            value = full
        if last_ratio > TRUNCATION_RATIO_LIMIT:
            warnings.warn(
                f"last series term ratio {mp.nstr(last_ratio, 3)} exceeds "
                f"{TRUNCATION_RATIO_LIMIT}; truncated expansion is degrading",
                TruncationWarning, stacklevel=3)
        return EvalResult(value=float(value), log_scale=float(log_scale),
                          n_terms=n_terms, region=point.region,
                          fallback_used=ev.fallback_used,
                          last_term_ratio=float(last_ratio), mp_value=value,
                          mp_log_scale=log_scale)


def ferrers_p(params: LegendreParams, t, n_terms: int = 4,
              ctx: PrecisionCtx = DEFAULT_CTX, *, scaled: bool = False
              ) -> EvalResult:
    """Ferrers function of the first kind, order -mu, on t in [0, 1)."""
    _check_unit_interval(t)
    return _assemble(params, t, n_terms, BesselKind.J, True, False, ctx,
                     scaled)


def ferrers_q(params: LegendreParams, t, n_terms: int = 4,
              ctx: PrecisionCtx = DEFAULT_CTX, *, scaled: bool = False
              ) -> EvalResult:
    """Ferrers function of the second kind, order -mu, on t in [0, 1)."""
    _check_unit_interval(t)
    return _assemble(params, t, n_terms, BesselKind.Y, True, True, ctx,
                     scaled)


def legendre_p_cut(params: LegendreParams, x, n_terms: int = 4,
                   ctx: PrecisionCtx = DEFAULT_CTX, *, scaled: bool = False
                   ) -> EvalResult:
    """Legendre function P of order -mu on the real cut x > 1."""
    _check_cut(x)
    return _assemble(params, x, n_terms, BesselKind.I, True, False, ctx,
                     scaled)


def legendre_q_bold(params: LegendreParams, x, n_terms: int = 4,
                    ctx: PrecisionCtx = DEFAULT_CTX, *, scaled: bool = False
                    ) -> EvalResult:
    """Olver-normalized Legendre Q (recessive at infinity) on x > 1."""
    _check_cut(x)
    return _assemble(params, x, n_terms, BesselKind.K, False, False, ctx,
                     scaled)


def _check_unit_interval(t):
    tv = mpf(t)
    if abs(tv - 1) <= mpf("1e-12"):
        raise SingularPoint("t = 1 is the singular point of the equation")
    if not 0 <= tv < 1:
        raise DomainError(f"t must lie in [0, 1), got {t}")


def _check_cut(x):
    xv = mpf(x)
    if abs(xv - 1) <= mpf("1e-12"):
        raise SingularPoint("x = 1 is the singular point of the equation")
    if not xv > 1:
        raise DomainError(f"x must lie in (1, oo), got {x}")
