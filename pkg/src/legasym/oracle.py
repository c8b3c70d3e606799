"""Independent high-precision reference values for the Ferrers/Legendre
functions, the envelope amplitude, and the log-relative-error functional.

The P oracle sums the Gamma-scaled Gauss hypergeometric series

    P(-mu) = ((1-t)/(1+t))^(mu/2) * sum_k (nu+1)_k (-nu)_k x^k / (Gamma(1+mu+k) k!),

with x = (1-t)/2, which converges geometrically on [0,1) and terminates for
integer degree.  The Q oracle solves the 2x2 connection system linking
P^(+mu), P^(-mu) to the two solutions recessive at t -> oo +- i0 and then
recombines them into the real companion function; the system determinant is
proportional to sin(mu*pi), so mu must stay away from integers.

Everything here runs at the oracle precision of the supplied context and is
deliberately independent of the asymptotic evaluation path.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
from mpmath import mpf, mpc

from .errors import NearIntegerOrder, ParameterPole, ZeroNotFound
from .legendre import ferrers_p
from .mapping import LegendreParams
from .numerics import DEFAULT_CTX, PrecisionCtx

__all__ = [
    "ErrorRow",
    "scaled_hyp2f1",
    "oracle_ferrers_p",
    "oracle_ferrers_q",
    "oracle_p_cut",
    "envelope_m",
    "largest_q_zero",
    "omega_error",
    "omega_from",
]

OMEGA_FLOOR = -18.0
INTEGER_ORDER_GAP = mpf("1e-3")
ZERO_SCAN_POINTS = 200


def scaled_hyp2f1(a, b, c, x, ctx: PrecisionCtx, extra: int = 0):
    """sum_k (a)_k (b)_k x^k / (Gamma(c+k) k!) at oracle precision.

    The 1/Gamma(c) scaling removes the parameter poles at nonpositive
    integer c; noninteger c keeps every term finite.  Terms are generated by
    the ratio recurrence and summation stops once a geometric tail bound
    drops below 10^(5-digits) of the largest magnitude seen.

    In the oscillatory regime the sum is exponentially smaller than its
    largest term, so the summation measures that cancellation on a first
    pass and re-runs with matching guard digits: the returned value carries
    the full requested precision.
    """
    digits = ctx.oracle_digits + extra
    guard = 10
    for _ in range(3):
        with mp.workdps(digits + guard):
            total, largest = _hyp_sum(mpf(a), mpf(b), mpf(c), mpf(x),
                                      digits + guard)
        if total == 0:
            return total
        cancel = int(mp.log10(largest / abs(total))) + 1 if largest > abs(total) else 0
        if cancel + 8 <= guard:
            with mp.workdps(digits):
                return +total
        guard = cancel + 12
    raise ParameterPole("hypergeometric cancellation estimate did not settle")


def _hyp_sum(a, b, c, x, digits):
    if abs(x) >= 1:
        raise ParameterPole(f"series argument |x| = {abs(x)} >= 1")
    if c <= 0 and c == mp.floor(c):
        # 1/Gamma(c) = 0: the scaled series still makes sense, but the
        # leading terms vanish; this oracle never needs that case.
        raise ParameterPole(f"scaled series at nonpositive integer c = {c}"
                            " is not needed by this oracle")
    cutoff = mpf(10) ** (-(digits - 5))
    term = 1 / mp.gamma(c)
    total = term
    largest = abs(term)
    k = 0
    cap = 200 + 10 * (digits + int(abs(a)) + int(abs(b)))
    while k < cap:
        ratio = (a + k) * (b + k) * x / ((c + k) * (k + 1))
        term = term * ratio
        total += term
        largest = max(largest, abs(term))
        k += 1
        if term == 0:
            break
        r = abs(x) * (abs(a + k) / (k + 1)) * (abs(b + k) / abs(c + k))
        if r < mpf("0.9") and abs(term) * r / (1 - r) < cutoff * largest:
            break
    else:
        raise ParameterPole("hypergeometric series failed to terminate")
    return total, largest


def _p_value(params: LegendreParams, order_sign: int, t, ctx: PrecisionCtx,
             extra: int = 0):
    """Ferrers P of order -order_sign*mu via the scaled series."""
    with ctx.oracle(extra):
        nu, mu, t = mpf(params.nu), mpf(params.mu), mpf(t)
        x = (1 - t) / 2
        half = order_sign * mu / 2
        pref = ((1 - t) / (1 + t)) ** half
        return pref * scaled_hyp2f1(nu + 1, -nu, 1 + order_sign * mu, x,
                                    ctx, extra)


def oracle_ferrers_p(params: LegendreParams, order_sign: int, t,
                     ctx: PrecisionCtx = DEFAULT_CTX, *, extra: int = 0):
    """Reference Ferrers P at oracle precision.

    order_sign = +1 gives the order -mu target function; order_sign = -1
    gives the order +mu companion used by the connection system (its series
    parameter 1 - mu must then stay away from nonpositive integers).
    """
    if order_sign not in (+1, -1):
        raise ValueError("order_sign must be +1 or -1")
    if not 0 <= t < 1:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    return _p_value(params, order_sign, t, ctx, extra)


def _check_order_not_integer(mu):
    if abs(mu - mp.nint(mu)) < INTEGER_ORDER_GAP:
        raise NearIntegerOrder(
            f"mu = {mu} is within {INTEGER_ORDER_GAP} of an integer; the "
            "connection system degenerates (determinant ~ sin(mu*pi))")


def oracle_ferrers_q(params: LegendreParams, t,
                     ctx: PrecisionCtx = DEFAULT_CTX, *, extra: int = 0):
    """Reference Ferrers Q of order -mu via the 2x2 connection system."""
    if not 0 <= t < 1:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    with ctx.oracle(extra):
        nu, mu = mpf(params.nu), mpf(params.mu)
        _check_order_not_integer(mu)
        p_plus = _p_value(params, -1, t, ctx, extra)
        p_minus = _p_value(params, +1, t, ctx, extra)
        q1, q2 = _recessive_pair(nu, mu, p_plus, p_minus)
        phase = mp.expjpi(mu / 2)
        half_gamma = mp.gamma(nu - mu + 1) / 2
        val = half_gamma * (phase * q1 + q2 / phase)
        # the natural magnitude of the combination, for the residue check
        # (val itself vanishes at the zeros of Q)
        scale = half_gamma * (abs(q1) + abs(q2))
        digits = ctx.oracle_digits + extra
        if abs(val.imag) > mpf(10) ** (-(digits - 8)) * max(scale, mpf("1e-300")):
            raise ParameterPole(
                f"Q oracle imaginary residue {mp.nstr(val.imag, 6)} too large")
        return val.real


def _recessive_pair(nu, mu, p_plus, p_minus):
    """Solve the connection system for the two solutions recessive at
    t -> oo +- i0, given the oracle P of order +mu and -mu."""
    phase = mp.expjpi(mu / 2)
    r1 = mp.pi * p_plus / (mpc(0, 1) * mp.gamma(nu + mu + 1))
    r2 = mp.pi * p_minus / (mpc(0, 1) * mp.gamma(nu - mu + 1))
    det = 2j * mp.sinpi(mu)
    q1 = (-r1 / phase + phase * r2) / det
    q2 = (r2 / phase - phase * r1) / det
    return q1, q2


def oracle_p_cut(params: LegendreParams, x,
                 ctx: PrecisionCtx = DEFAULT_CTX, *, extra: int = 0):
    """Reference Legendre P of order -mu on the cut, 1 < x < 3.

    Same scaled series continued to negative argument (1-x)/2 with the real
    prefactor ((x-1)/(x+1))^(mu/2); the series radius limits x to below 3.
    """
    with ctx.oracle(extra):
        nu, mu, x = mpf(params.nu), mpf(params.mu), mpf(x)
        if not 1 < x < 3:
            raise ValueError(f"x must lie in (1, 3), got {x}")
        pref = ((x - 1) / (x + 1)) ** (mu / 2)
        return pref * scaled_hyp2f1(nu + 1, -nu, 1 + mu, (1 - x) / 2, ctx,
                                    extra)


_Q_ZERO_CACHE: dict = {}


def largest_q_zero(params: LegendreParams, ctx: PrecisionCtx = DEFAULT_CTX):
    """Largest zero of the oracle Q on (0, 1): sign scan plus bisection."""
    key = (params, ctx)
    hit = _Q_ZERO_CACHE.get(key)
    if hit is not None:
        return hit
    with ctx.oracle():
        grid = [mpf(i) / (ZERO_SCAN_POINTS + 1)
                for i in range(1, ZERO_SCAN_POINTS + 1)]
        vals = [oracle_ferrers_q(params, t, ctx) for t in grid]
        bracket = None
        for i in range(len(grid) - 1, 0, -1):
            if mp.sign(vals[i]) != mp.sign(vals[i - 1]):
                bracket = (grid[i - 1], grid[i])
                break
        if bracket is None:
            raise ZeroNotFound("oracle Q has no sign change on the scan grid")
        lo, hi = bracket
        flo = oracle_ferrers_q(params, lo, ctx)
        while hi - lo > mpf("1e-12"):
            mid = (lo + hi) / 2
            fm = oracle_ferrers_q(params, mid, ctx)
            if mp.sign(fm) == mp.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        zero = (lo + hi) / 2
    _Q_ZERO_CACHE[key] = zero
    return zero


def envelope_m(params: LegendreParams, t, ctx: PrecisionCtx = DEFAULT_CTX):
    """Smooth positive amplitude: sqrt(P^2 + (2Q/pi)^2) up to the largest
    Q zero, P itself beyond it."""
    with ctx.oracle():
        t = mpf(t)
        q1 = largest_q_zero(params, ctx)
        p = oracle_ferrers_p(params, +1, t, ctx)
        if t > q1:
            return p
        q = oracle_ferrers_q(params, t, ctx)
        return mp.sqrt(p ** 2 + (2 * q / mp.pi) ** 2)


@dataclass(frozen=True)
class ErrorRow:
    """One point of the error-curve experiment."""

    t: float
    reference: float
    approx: float
    envelope: float
    omega: float


def omega_from(reference, approx, envelope) -> float:
    """log10 of envelope-relative error, floored at -18 for exact hits."""
    with mp.workdps(30):
        diff = abs(mpf(reference) - mpf(approx))
        if diff == 0:
            return OMEGA_FLOOR
        val = float(mp.log10(diff / mpf(envelope)))
        return max(val, OMEGA_FLOOR)


def omega_error(params: LegendreParams, t, n_terms: int = 4,
                ctx: PrecisionCtx = DEFAULT_CTX) -> ErrorRow:
    """Reference vs n-term asymptotic value at one t, as an ErrorRow."""
    reference = oracle_ferrers_p(params, +1, t, ctx)
    envelope = envelope_m(params, t, ctx)
    approx = ferrers_p(params, t, n_terms, ctx).full()
    return ErrorRow(t=float(t), reference=float(reference),
                    approx=float(approx), envelope=float(envelope),
                    omega=omega_from(reference, approx, envelope))
