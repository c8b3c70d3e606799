"""Cylinder functions of real nonnegative order: J, Y, I, K and their
argument-derivatives.

Evaluation is delegated to mpmath's arbitrary-precision Bessel routines at
the working precision of the supplied context; derivatives come from the
standard two-term recurrences.  The contract (relative accuracy 1e-13 over
mu <= 1e4, x in [1e-300, 1e8]) is enforced by the Wronskian, recurrence,
and independent series/quadrature cross-checks in the test suite.
"""

from __future__ import annotations

import enum

import mpmath as mp
from mpmath import mpf

from .errors import DomainError
from .numerics import DEFAULT_CTX, PrecisionCtx

__all__ = ["BesselKind", "cyl"]

X_MIN = mpf("1e-300")
X_MAX = mpf("1e8")
MU_MAX = mpf("1e4")


class BesselKind(enum.Enum):
    J = "J"
    Y = "Y"
    I = "I"
    K = "K"


def cyl(kind: BesselKind, mu, x, ctx: PrecisionCtx = DEFAULT_CTX):
    """(value, d/dx value) of the cylinder function of order mu at x > 0.

    J and Y are the oscillatory pair on (0, oo); I and K the modified pair.
    Underflow/overflow cannot occur internally (arbitrary-exponent reals);
    callers that need a bounded dynamic range apply their own log scaling.
    """
    with ctx.working():
        mu, x = mpf(mu), mpf(x)
        if not x > 0:
            raise DomainError(f"cylinder functions need x > 0, got {x}")
        if not X_MIN <= x <= X_MAX:
            raise DomainError(f"x = {x} outside the supported range "
                              f"[{X_MIN}, {X_MAX}]")
        if not 0 <= mu <= MU_MAX:
            raise DomainError(f"order mu = {mu} outside [0, {MU_MAX}]")
        if kind is BesselKind.J:
            f = mp.besselj
            val = f(mu, x)
            der = (f(mu - 1, x) - f(mu + 1, x)) / 2
        elif kind is BesselKind.Y:
            f = mp.bessely
            val = f(mu, x)
            der = (f(mu - 1, x) - f(mu + 1, x)) / 2
        elif kind is BesselKind.I:
            f = mp.besseli
            val = f(mu, x)
            der = (f(mu - 1, x) + f(mu + 1, x)) / 2
        elif kind is BesselKind.K:
            f = mp.besselk
            val = f(mu, x)
            der = -(f(mu - 1, x) + f(mu + 1, x)) / 2
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return val, der
