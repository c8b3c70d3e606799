"""Internal truncated-series helpers for the turning-point neighborhood.

The combined coefficient sequences are analytic at the turning point beta = 0
although every ingredient blows up like beta**(-3s) there.  This module
carries the series-space construction that makes the blow-up cancel exactly:

  * dense power-series arithmetic (lists of mpf coefficients),
  * the odd series beta_hat(beta) obtained by reverting the turning-point
    matching equation,
  * truncated Laurent series (bounded negative exponents) used to assemble
    the coefficient sequences as Maclaurin series in beta.

Everything here is private to lgcoeff.
"""

from __future__ import annotations

import mpmath as mp
from mpmath import mpf

from .laurent import LaurentPoly


# --- dense power series: p[k] is the coefficient of y**k -------------------

def ps_mul(a: list, b: list, n: int) -> list:
    out = [mpf(0)] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def ps_inv(a: list, n: int) -> list:
    """Reciprocal of a power series with a[0] != 0."""
    out = [mpf(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        s = mpf(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            s += a[j] * out[k - j]
        out[k] = -s * out[0]
    return out


def _horner_compose(outer: list, inner: list, n: int) -> list:
    """outer(inner(y)) for inner with zero constant term."""
    acc = [outer[-1]] + [mpf(0)] * (n - 1)
    for c in reversed(outer[:-1]):
        acc = ps_mul(acc, inner, n)
        acc[0] += c
    return acc


def beta_hat_odd_series(alpha, n: int) -> list:
    """Coefficients h[m] of beta_hat = sum_m h[m] * beta**(2m+1).

    Obtained by reverting the turning-point matching relation.  Writing
    y = beta**2 and beta_hat = beta*h(y), the relation reads

        h(y)**3 * Phi(y*h(y)**2) = P(y),

    where Phi collects the odd mapping kernel and P the argument side; a
    series Newton iteration solves it.  At alpha = 0 the relation closes to
    beta_hat = 2*arctanh(beta).
    """
    alpha = mpf(alpha)
    if alpha == 0:
        return [2 / mpf(2 * m + 1) for m in range(n)]

    ny = n + 4
    # Argument side R(beta), written through its derivative to avoid series
    # composition: dR/dbeta = 2 a^2 (1-y)/(a^2(1+y)^2 - 4y) - 2/(1-y), y=beta^2,
    # so the y-expansion is a rational-series division with no cancellation.
    den = [alpha ** 2, 2 * alpha ** 2 - 4, alpha ** 2]
    dr = ps_mul([2 * alpha ** 2, -2 * alpha ** 2], ps_inv(den, ny + 2), ny + 2)
    for m in range(ny + 2):
        dr[m] -= 2
    r = [dr[m] / (2 * m + 1) for m in range(ny + 2)]   # R = sum r[m] beta^(2m+1)
    assert abs(r[0]) == 0 or abs(r[0]) < mpf(10) ** (-mp.mp.dps + 6)
    p_arg = r[1:]

    phi = [1 / ((2 * m + 3) * alpha ** (2 * m + 2)) for m in range(ny + 1)]
    h = [mp.cbrt(3 * alpha ** 2 * p_arg[0])] + [mpf(0)] * (ny - 1)
    target = [p_arg[m] if m < len(p_arg) else mpf(0) for m in range(ny)]
    for _ in range(2 * ny):
        h2 = ps_mul(h, h, ny)
        yh2 = [mpf(0)] + h2[: ny - 1]
        phi_c = _horner_compose(phi, yh2, ny)
        f = ps_mul(ps_mul(h, h2, ny), phi_c, ny)
        f = [f[m] - target[m] for m in range(ny)]
        # dF/dh = 3 h^2 Phi + 2 y h^4 Phi'
        phi_d = [phi[m] * m for m in range(1, len(phi))]
        phi_dc = _horner_compose(phi_d, yh2, ny)
        h4 = ps_mul(h2, h2, ny)
        yh4 = [mpf(0)] + h4[: ny - 1]
        fp = [3 * a + 2 * b for a, b in
              zip(ps_mul(h2, phi_c, ny), ps_mul(yh4, phi_dc, ny))]
        dh = ps_mul(f, ps_inv(fp, ny), ny)
        h = [h[m] - dh[m] for m in range(ny)]
        if max(abs(d) for d in dh) < mpf(10) ** (-mp.mp.dps + 6):
            break
    return h[:n]


# --- truncated Laurent series in beta ---------------------------------------

class TruncLaurent:
    """sum c_j * beta**(min_exp + j), coefficients kept up to a top order."""

    __slots__ = ("min_exp", "coeffs", "top")

    def __init__(self, min_exp: int, coeffs: list, top: int):
        n_keep = top - min_exp + 1
        self.min_exp = min_exp
        self.coeffs = list(coeffs[:n_keep])
        self.top = top

    def coeff(self, k: int):
        i = k - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return mpf(0)

    def __add__(self, other: "TruncLaurent") -> "TruncLaurent":
        mn = min(self.min_exp, other.min_exp)
        top = min(self.top, other.top)
        cs = [mpf(0)] * (top - mn + 1)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                j = src.min_exp - mn + i
                if 0 <= j < len(cs):
                    cs[j] += c
        return TruncLaurent(mn, cs, top)

    def __mul__(self, other):
        if isinstance(other, TruncLaurent):
            mn = self.min_exp + other.min_exp
            top = min(self.top, other.top)
            cs = [mpf(0)] * max(top - mn + 1, 0)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    k = i + j
                    if k < len(cs):
                        cs[k] += a * b
                    else:
                        break
            return TruncLaurent(mn, cs, top)
        return TruncLaurent(self.min_exp, [c * other for c in self.coeffs],
                            self.top)

    def scale(self, factor):
        return self * mpf(factor)

    def max_abs(self):
        return max((abs(c) for c in self.coeffs), default=mpf(0))

    @classmethod
    def from_laurent(cls, p: LaurentPoly, top: int) -> "TruncLaurent":
        if not p.terms:
            return cls(0, [mpf(0)], top)
        mn = min(p.terms)
        cs = [mpf(0)] * (max(p.terms) - mn + 1)
        for k, c in p.terms.items():
            cs[k - mn] = c
        return cls(mn, cs, top)

    def even_part_error(self, want_parity: int):
        """Largest coefficient at an exponent of the wrong parity."""
        bad = [abs(c) for i, c in enumerate(self.coeffs)
               if (self.min_exp + i) % 2 != want_parity and c != 0]
        return max(bad, default=mpf(0))
