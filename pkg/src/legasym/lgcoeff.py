"""Coefficient machinery for the uniform Bessel-type expansions.

Two families of Liouville-Green coefficients are generated as sparse Laurent
polynomials at a fixed order ratio alpha:

  * the Legendre-side family E_s(beta) with odd-index constants lambda_{2s+1},
    generated by a derivative/antiderivative recursion driven by the kernel
    G(beta) = (beta^2-1)(alpha^2(beta^2+1)^2 - 4 beta^2)/(8 sigma^2 beta^2);

  * the Bessel-side families e_s(beta_hat) and e~_s(beta_hat), generated by
    the analogous recursion whose integration constants make every
    coefficient vanish at infinity (negative exponents only).

From these, the slowly varying series coefficients multiplying the Bessel
value (the A_s) and the Bessel derivative (the B_s) are evaluated at a
resolved point.  Each ingredient blows up like beta**(-3s) at the turning
point while the combined A_s, B_s stay finite, so evaluation near t = sigma
runs either at raised precision or through Maclaurin series in beta in which
the blow-up cancels exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import mpmath as mp
from mpmath import mpf, mpc

from ._series import TruncLaurent, beta_hat_odd_series, ps_inv
from .errors import (AlphaOutOfRange, ImaginaryResidue, NearTurningPoint,
                     PrecisionExhausted)
from .laurent import LaurentPoly, VarTag
from .mapping import ALPHA_MAX, MapPoint, LegendreParams, resolve
from .numerics import DEFAULT_CTX, PrecisionCtx

__all__ = [
    "FALLBACK_RADIUS",
    "CoeffTable",
    "CoeffEval",
    "gen_legendre_coeffs",
    "gen_bessel_coeffs",
    "eval_ab",
    "eval_ab_near_turning",
    "a1_turning_limit",
    "b0_turning_limit",
]

# |t - sigma| below which direct evaluation of the A_s, B_s is left to the
# near-turning path.
FALLBACK_RADIUS = mpf("0.08")

# |beta| below which the near-turning path switches from raised-precision
# direct evaluation to the Maclaurin series (series radius is ~0.9 or larger
# for every admissible alpha, so 0.1 keeps the tail negligible).
SERIES_BETA_MAX = mpf("0.1")
SERIES_TOP = 44

S_MAX_CAP = 12
IMAG_RESIDUE_TOL = mpf("1e-10")


def _check_alpha(alpha):
    if not (0 <= alpha <= ALPHA_MAX):
        raise AlphaOutOfRange(f"alpha must lie in [0, {ALPHA_MAX}], got {alpha}")


def _check_smax(s_max: int):
    if not 4 <= s_max <= S_MAX_CAP:
        raise ValueError(f"s_max must lie in [4, {S_MAX_CAP}], got {s_max}")


def _kernel_g(alpha, sigma2) -> LaurentPoly:
    """G(beta) = (beta^2-1)(alpha^2(beta^2+1)^2 - 4beta^2)/(8 sigma^2 beta^2)."""
    a2 = alpha ** 2
    return LaurentPoly({4: a2, 2: a2 - 4, 0: 4 - a2, -2: -a2},
                       VarTag.BETA).scale(1 / (8 * sigma2))


def _seed_e1(alpha, sigma2) -> LaurentPoly:
    """E_1(beta) expanded to Laurent form."""
    a2 = alpha ** 2
    return LaurentPoly({3: -5 * a2, 1: 12 - 3 * a2, -1: 12 - 3 * a2,
                        -3: -5 * a2}, VarTag.BETA).scale(1 / (192 * sigma2))


def gen_legendre_coeffs(alpha, s_max: int, ctx: PrecisionCtx = DEFAULT_CTX
                        ) -> tuple[list, list]:
    """Generate E_1..E_{s_max} plus the constants lambda_1, lambda_3, ...

    Returns (E, lambda_odd) where E[s] is E_s (E[0] is None) and
    lambda_odd[k] is lambda_{2k+1}.  Odd-index coefficients are odd Laurent
    polynomials (no constant term) with lambda read off at beta = 1;
    even-index ones are fixed to vanish at beta = +1, with a check that this
    forces the value at beta = -1 to vanish as well.
    """
    with ctx.working():
        alpha = mpf(alpha)
        _check_alpha(alpha)
        _check_smax(s_max)
        sigma2 = (1 - alpha) * (1 + alpha)
        g = _kernel_g(alpha, sigma2)
        e = [None, _seed_e1(alpha, sigma2)]
        lambda_odd = [e[1].evaluate(mpf(1))]
        check_tol = mpf(10) ** (-(ctx.working_digits - 8))
        for s in range(1, s_max):
            first = (g * e[s].differentiate()).scale(mpf("-0.5"))
            conv = None
            for j in range(1, s):
                term = e[j].differentiate() * e[s - j].differentiate()
                conv = term if conv is None else conv + term
            if conv is not None:
                integral = (g * conv).antiderivative()
                nxt = first + integral.scale(mpf("-0.5"))
            else:
                nxt = first
            if (s + 1) % 2 == 0:
                shift = nxt.evaluate(mpf(1))
                nxt = nxt + LaurentPoly({0: -shift}, VarTag.BETA)
                other_end = nxt.evaluate(mpf(-1))
                if abs(other_end) > check_tol * max(nxt.max_abs_coeff(), mpf(1)):
                    raise ArithmeticError(
                        f"E_{s+1} does not vanish at beta=-1: {other_end}")
            else:
                nxt = LaurentPoly({k: c for k, c in nxt.terms.items() if k != 0},
                                  VarTag.BETA)
                lambda_odd.append(nxt.evaluate(mpf(1)))
            e.append(nxt)
        return e, lambda_odd


def gen_bessel_coeffs(alpha, s_max: int, ctx: PrecisionCtx = DEFAULT_CTX
                      ) -> tuple[list, list]:
    """Generate e_1..e_{s_max} and e~_1..e~_{s_max} in beta_hat.

    Both families satisfy the same recursion; all integration constants are
    zero so that every coefficient vanishes at beta_hat = infinity.
    """
    with ctx.working():
        alpha = mpf(alpha)
        _check_alpha(alpha)
        _check_smax(s_max)
        a2 = alpha ** 2
        half_kernel = LaurentPoly({-2: a2 / 2, 0: mpf("-0.5")}, VarTag.BETA_HAT)
        kernel = LaurentPoly({-2: a2, 0: mpf(-1)}, VarTag.BETA_HAT)

        def run(seed: LaurentPoly) -> list:
            fam = [None, seed]
            for s in range(1, s_max):
                first = half_kernel * fam[s].differentiate()
                conv = None
                for j in range(1, s):
                    term = fam[j].differentiate() * fam[s - j].differentiate()
                    conv = term if conv is None else conv + term
                if conv is not None:
                    nxt = first + (kernel * conv).antiderivative().scale(mpf("0.5"))
                else:
                    nxt = first
                if nxt.terms and max(nxt.terms) > -1:
                    raise ArithmeticError(
                        f"coefficient {s+1} has a nonnegative exponent")
                fam.append(nxt)
            return fam

        e1 = LaurentPoly({-1: mpf(1) / 8, -3: -5 * a2 / 24}, VarTag.BETA_HAT)
        et1 = LaurentPoly({-1: mpf(-3) / 8, -3: 7 * a2 / 24}, VarTag.BETA_HAT)
        return run(e1), run(et1)


@dataclass(eq=False)
class CoeffTable:
    """Generated coefficient families for one alpha, up to index s_max."""

    alpha: mpf
    s_max: int
    E: list
    lambda_odd: list
    e: list
    e_tilde: list
    digits: int
    _near_cache: dict = field(default_factory=dict, repr=False)
    _near_lock: threading.Lock = field(default_factory=threading.Lock,
                                       repr=False)

    @classmethod
    def build(cls, alpha, s_max: int = 8,
              ctx: PrecisionCtx = DEFAULT_CTX) -> "CoeffTable":
        with ctx.working():
            alpha = mpf(alpha)
        E, lam = gen_legendre_coeffs(alpha, s_max, ctx)
        e, et = gen_bessel_coeffs(alpha, s_max, ctx)
        return cls(alpha=alpha, s_max=s_max, E=E, lambda_odd=lam, e=e,
                   e_tilde=et, digits=ctx.working_digits)

    def lambda_sum(self, u, n_terms: int):
        u = mpf(u)
        return sum(self.lambda_odd[s] / u ** (2 * s + 1)
                   for s in range(n_terms))

    def near_series(self, n_terms: int, ctx: PrecisionCtx) -> "_NearSeries":
        key = (n_terms, ctx.working_digits, ctx.oracle_digits)
        with self._near_lock:
            hit = self._near_cache.get(key)
            if hit is None:
                hit = _build_near_series(self, n_terms, ctx)
                self._near_cache[key] = hit
            return hit


@dataclass(frozen=True)
class CoeffEval:
    """A_1..A_m and B_0..B_m evaluated at one point, plus the lambda sum."""

    a: list
    b: list
    lambda_sum: mpf
    fallback_used: bool


def _check_n_terms(table: CoeffTable, n_terms: int):
    if not 1 <= n_terms <= table.s_max // 2:
        raise ValueError(
            f"n_terms must lie in [1, s_max/2 = {table.s_max // 2}]")


def _q_recursion(vals: list, top: int) -> list:
    """q_s = val_s + (1/s) sum_{j<s} j * val_j * q_{s-j} (empty sum at s=1)."""
    q = [None] * (top + 1)
    for s in range(1, top + 1):
        total = vals[s]
        for j in range(1, s):
            total = total + vals[j] * q[s - j] * (mpf(j) / s)
        q[s] = total
    return q


def _eval_ab_raw(table: CoeffTable, beta, beta_hat, n_terms: int):
    """A_s, B_s at (beta, beta_hat) in complex arithmetic at ambient dps."""
    top = 2 * n_terms - 1
    ce = [None]
    cet = [None]
    for s in range(1, top + 1):
        es = table.E[s].evaluate(beta)
        sign = -1 if s % 2 else 1
        ce.append(es + sign * table.e[s].evaluate(beta_hat))
        cet.append(es + sign * table.e_tilde[s].evaluate(beta_hat))
    q = _q_recursion(ce, top)
    qt = _q_recursion(cet, top - 1)
    a = [qt[2 * s] for s in range(1, n_terms)]
    b = [q[2 * s + 1] / beta_hat for s in range(n_terms)]
    return a, b


def _realize(values, what: str):
    out = []
    for v in values:
        v = mpc(v)
        if abs(v.imag) > IMAG_RESIDUE_TOL * abs(v):
            raise ImaginaryResidue(
                f"{what} has imaginary residue {mp.nstr(v.imag, 6)} "
                f"(|value| = {mp.nstr(abs(v), 6)}); branch error suspected")
        out.append(v.real)
    return out


def eval_ab(table: CoeffTable, point: MapPoint, u, n_terms: int,
            ctx: PrecisionCtx = DEFAULT_CTX) -> CoeffEval:
    """Evaluate A_1..A_{n-1}, B_0..B_{n-1} directly at a resolved point.

    Raises NearTurningPoint when the point is inside the fallback radius,
    where this direct path would lose accuracy to cancellation; use
    eval_ab_near_turning there.
    """
    _check_n_terms(table, n_terms)
    with ctx.working():
        sigma = mp.sqrt((1 - table.alpha) * (1 + table.alpha))
        if abs(point.t - sigma) < FALLBACK_RADIUS:
            raise NearTurningPoint(
                f"|t - sigma| = {mp.nstr(abs(point.t - sigma), 6)} is inside "
                f"the fallback radius {FALLBACK_RADIUS}")
        a, b = _eval_ab_raw(table, point.beta, point.beta_hat, n_terms)
        return CoeffEval(a=_realize(a, "A"), b=_realize(b, "B"),
                         lambda_sum=table.lambda_sum(u, n_terms),
                         fallback_used=False)


def _cancellation_digits(beta_abs, n_terms: int) -> int:
    """Decimal digits lost to the beta**(-3s) blow-up at this |beta|."""
    worst_power = 3 * (2 * n_terms - 1) + 1
    scale = max(float(beta_abs), float(SERIES_BETA_MAX))
    return math.ceil(worst_power * math.log10(1 / scale))


def eval_ab_near_turning(table: CoeffTable, point: MapPoint, u, n_terms: int,
                         ctx: PrecisionCtx = DEFAULT_CTX) -> CoeffEval:
    """A_s, B_s inside the turning-point fallback radius.

    For |beta| >= 0.1 the point is re-resolved and evaluated directly at a
    precision raised by the estimated cancellation; below that (including
    t = sigma exactly, beta = 0) the cached Maclaurin series in beta are
    used, in which the blow-up cancels coefficient-wise.
    """
    _check_n_terms(table, n_terms)
    est = _cancellation_digits(abs(point.beta), n_terms)
    if est > ctx.oracle_digits - 15:
        raise PrecisionExhausted(
            f"estimated cancellation of {est} digits exceeds the oracle "
            f"budget {ctx.oracle_digits} - 15")
    if abs(point.beta) < SERIES_BETA_MAX:
        series = table.near_series(n_terms, ctx)
        with ctx.working():
            y = (point.beta * point.beta).real
            a = [series.eval_a(s, y) for s in range(1, n_terms)]
            b = [series.eval_b(s, y) for s in range(n_terms)]
            return CoeffEval(a=a, b=b,
                             lambda_sum=table.lambda_sum(u, n_terms),
                             fallback_used=True)
    dps_hi = ctx.working_digits + est + 10
    params = LegendreParams.from_nu_alpha(mpf(u) - mpf("0.5"), table.alpha)
    refined = resolve(params, point.t, ctx, dps=dps_hi)
    with mp.workdps(dps_hi):
        a, b = _eval_ab_raw(table, refined.beta, refined.beta_hat, n_terms)
        a = _realize(a, "A")
        b = _realize(b, "B")
    with ctx.working():
        return CoeffEval(a=[+x for x in a], b=[+x for x in b],
                         lambda_sum=table.lambda_sum(u, n_terms),
                         fallback_used=True)


# --- turning-point limits and Maclaurin series ------------------------------

def b0_turning_limit(alpha):
    """Limit of B_0 at t = sigma, for alpha > 0."""
    alpha = mpf(alpha)
    s2 = (1 - alpha) * (1 + alpha)
    kap = 2 * mp.cbrt(s2)
    return (2 * s2 * kap + (s2 + 3) * (3 - 4 * s2)) / (140 * alpha ** 2 * s2 * kap)


def a1_turning_limit(alpha):
    """Limit of A_1 at t = sigma, for alpha > 0."""
    alpha = mpf(alpha)
    s2 = (1 - alpha) * (1 + alpha)
    kap = 2 * mp.cbrt(s2)
    return (9 * (s2 + 3) * (3 - 4 * s2) * kap ** 2
            + 224 * s2 ** 3 - 276 * s2 ** 2 + 588 * s2 - 392) \
        / (50400 * alpha ** 2 * s2 ** 2)


class _NearSeries:
    """Even Maclaurin series (in y = beta^2) of the A_s and B_s."""

    def __init__(self, a_coeffs: list, b_coeffs: list):
        self.a_coeffs = a_coeffs   # a_coeffs[s-1][m] multiplies y^m in A_s
        self.b_coeffs = b_coeffs   # b_coeffs[s][m]   multiplies y^m in B_s

    def eval_a(self, s: int, y):
        return _horner(self.a_coeffs[s - 1], y)

    def eval_b(self, s: int, y):
        return _horner(self.b_coeffs[s], y)


def _horner(coeffs: list, y):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def _build_near_series(table: CoeffTable, n_terms: int,
                       ctx: PrecisionCtx) -> _NearSeries:
    top = 2 * n_terms - 1
    dps = max(ctx.oracle_digits, ctx.working_digits + 30) + 15
    resid_tol = mpf(10) ** (-(dps - 12))
    # regenerate the families at construction precision: the blow-up only
    # cancels to the accuracy of the ingredient coefficients
    hi_ctx = PrecisionCtx(dps, dps + 10)
    legendre_hi, _ = gen_legendre_coeffs(table.alpha, table.s_max, hi_ctx)
    bessel_hi, bessel_tilde_hi = gen_bessel_coeffs(table.alpha, table.s_max,
                                                   hi_ctx)
    with mp.workdps(dps):
        alpha = mpf(table.alpha)
        h = beta_hat_odd_series(alpha, SERIES_TOP // 2 + 2)
        w_inner = ps_inv(h, len(h))
        vhat_inv = TruncLaurent(-1, _interleave(w_inner), SERIES_TOP)
        w_pow = {1: vhat_inv}
        for j in range(2, 3 * top + 1):
            w_pow[j] = w_pow[j - 1] * vhat_inv

        def compose(poly: LaurentPoly) -> TruncLaurent:
            out = None
            for k, c in poly.terms.items():
                term = w_pow[-k] * c
                out = term if out is None else out + term
            if out is None:
                return TruncLaurent(0, [mpf(0)], SERIES_TOP)
            return out

        ce = [None]
        cet = [None]
        for s in range(1, top + 1):
            es = TruncLaurent.from_laurent(legendre_hi[s], SERIES_TOP)
            sign = mpf(-1 if s % 2 else 1)
            ce.append(es + compose(bessel_hi[s]) * sign)
            cet.append(es + compose(bessel_tilde_hi[s]) * sign)
        q = _q_recursion(ce, top)
        qt = _q_recursion(cet, top - 1)

        def extract(tl: TruncLaurent, what: str) -> list:
            scale = max(tl.max_abs(), mpf(1))
            bad = max([abs(tl.coeff(k)) for k in range(tl.min_exp, 0)],
                      default=mpf(0))
            bad = max(bad, tl.even_part_error(0))
            if bad > resid_tol * scale:
                raise PrecisionExhausted(
                    f"turning-point series for {what} left a residue of "
                    f"relative size {mp.nstr(bad / scale, 6)}; raise the "
                    f"precision context")
            return [tl.coeff(2 * m) for m in range(SERIES_TOP // 2 + 1)]

        a_coeffs = [extract(qt[2 * s], f"A_{s}") for s in range(1, n_terms)]
        b_coeffs = [extract(q[2 * s + 1] * vhat_inv, f"B_{s}")
                    for s in range(n_terms)]

        if alpha > 0:
            limit_tol = mpf(10) ** (-(ctx.working_digits - 12))
            pairs = [(b_coeffs[0][0], b0_turning_limit(alpha), "B_0")]
            if n_terms >= 2:
                pairs.append((a_coeffs[0][0], a1_turning_limit(alpha), "A_1"))
            for got, want, what in pairs:
                if abs(got - want) > limit_tol * max(abs(want), mpf(1)):
                    raise PrecisionExhausted(
                        f"turning-point limit cross-check failed for {what}: "
                        f"series gives {mp.nstr(got, 20)}, closed form "
                        f"{mp.nstr(want, 20)}")
        return _NearSeries(a_coeffs, b_coeffs)


def _interleave(odd_coeffs: list) -> list:
    out = []
    for c in odd_coeffs:
        out.extend([c, mpf(0)])
    return out
