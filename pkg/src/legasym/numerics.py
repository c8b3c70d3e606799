"""Precision plumbing: working/oracle precision contexts, bracketed root
finding, and log-gamma.

Everything downstream computes with mpmath reals under a PrecisionCtx.  The
working precision (default 34 digits, double-double class) carries all main
evaluations; the oracle precision (default 50 digits) is reserved for
reference values and for re-checking solver residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath as mp
from mpmath import mpf

from .errors import DomainError, NoConvergence, NoSignChange

__all__ = [
    "PrecisionCtx",
    "DEFAULT_CTX",
    "Bracket",
    "solve_root",
    "log_gamma",
]

ROOT_ITERATION_CAP = 200


@dataclass(frozen=True)
class PrecisionCtx:
    """Decimal digit budgets for working and oracle arithmetic.

    The supported regime is working_digits >= 15; lower values are
    constructible so that designed-failure paths (PrecisionExhausted) can be
    exercised, but no accuracy contract holds there.
    """

    working_digits: int = 34
    oracle_digits: int = 50

    def __post_init__(self):
        if self.working_digits < 3:
            raise ValueError("working_digits must be at least 3")
        if self.oracle_digits < self.working_digits + 10:
            raise ValueError("oracle_digits must be >= working_digits + 10")

    def working(self):
        """Context manager running the block at working precision."""
        return mp.workdps(self.working_digits)

    def oracle(self, extra: int = 0):
        """Context manager running the block at oracle precision."""
        return mp.workdps(self.oracle_digits + extra)

    def bumped(self, extra_digits: int) -> "PrecisionCtx":
        """A context with both budgets raised by extra_digits."""
        return PrecisionCtx(self.working_digits + extra_digits,
                            self.oracle_digits + extra_digits)


DEFAULT_CTX = PrecisionCtx()


@dataclass(frozen=True)
class Bracket:
    """A sign-change interval [lo, hi] for a continuous function."""

    lo: mpf
    hi: mpf
    f_lo_sign: int
    f_hi_sign: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bracket requires lo < hi")
        if self.f_lo_sign == self.f_hi_sign:
            raise NoSignChange(
                f"f has the same sign at both endpoints [{self.lo}, {self.hi}]")

    @classmethod
    def from_fn(cls, f: Callable, lo, hi) -> "Bracket":
        lo, hi = mpf(lo), mpf(hi)
        flo, fhi = f(lo), f(hi)
        return cls(lo, hi, _sign(flo), _sign(fhi))


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def solve_root(f: Callable, bracket: Bracket, tol, *,
               max_iter: int = ROOT_ITERATION_CAP) -> mpf:
    """Find the root of f inside a sign-change bracket.

    Bisection-safeguarded secant: a secant step is accepted only if it lands
    strictly inside the current bracket, otherwise the step bisects.  This
    converges even where f behaves like a cube near the root (vanishing
    derivative), which the turning-point mapping equations do.

    Returns x with the final bracket width <= tol.  Deterministic.
    """
    tol = mpf(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = mpf(bracket.lo), mpf(bracket.hi)
    flo, fhi = f(lo), f(hi)
    slo, shi = _sign(flo), _sign(fhi)
    if slo == 0:
        return lo
    if shi == 0:
        return hi
    if slo == shi:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")

    # One-sided secant sequences stall the bracket (pinned far endpoint,
    # or a multiple root), so after two consecutive updates of the same
    # endpoint the iteration drops to pure bisection until the other side
    # moves again.  Bisection alone still converges on anything continuous.
    streak_side = 0
    streak = 0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        x = None
        if streak < 2 and flo != fhi:
            x = lo - flo * (hi - lo) / (fhi - flo)
            width = hi - lo
            # reject secant steps that leave the bracket or hug an edge
            if not (lo + width * mpf("1e-6") < x < hi - width * mpf("1e-6")):
                x = None
        if x is None:
            x = (lo + hi) / 2
        fx = f(x)
        sx = _sign(fx)
        if sx == 0:
            return x
        if sx == slo:
            lo, flo = x, fx
            side = -1
        else:
            hi, fhi = x, fx
            side = +1
        streak = streak + 1 if side == streak_side else 1
        streak_side = side
    else:
        raise NoConvergence(
            f"root iteration cap {max_iter} reached; best bracket "
            f"[{lo}, {hi}]", lo=lo, hi=hi)
    return (lo + hi) / 2


def log_gamma(x, ctx: PrecisionCtx = DEFAULT_CTX) -> mpf:
    """Natural log of Gamma(x) for real x > 0, at working precision."""
    with ctx.working():
        x = mpf(x)
        if not x > 0:
            raise DomainError(f"log_gamma requires x > 0, got {x}")
        return mp.loggamma(x)
