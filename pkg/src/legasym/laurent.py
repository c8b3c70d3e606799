"""Sparse Laurent polynomial arithmetic in one formal variable.

The coefficient recursions all run in this representation: a map from
(possibly negative) integer exponent to a working-precision coefficient,
tagged with the formal variable it lives in (beta on the Legendre side,
beta-hat on the Bessel side).
"""

from __future__ import annotations

import enum
from typing import Iterable, Mapping

import mpmath as mp
from mpmath import mpf

from .errors import ResidueTerm, VarMismatch, ZeroArgument

__all__ = ["VarTag", "LaurentPoly"]

# Relative pruning threshold: coefficients below this fraction of the largest
# one are rounding dust and would otherwise pollute parity through s ~ 8.
PRUNE_REL = mpf("1e-30")

# A 1/x coefficient above this fraction of the largest one is a genuine
# residue (would integrate to a logarithm), not dust.
RESIDUE_REL = mpf("1e-20")


class VarTag(enum.Enum):
    BETA = "beta"
    BETA_HAT = "beta_hat"


class LaurentPoly:
    """Immutable sparse Laurent polynomial sum(c_k * x**k), k in Z."""

    __slots__ = ("terms", "var_tag")

    def __init__(self, terms: Mapping[int, object], var_tag: VarTag = VarTag.BETA,
                 *, prune: bool = True):
        cleaned = {}
        for k, c in terms.items():
            if not isinstance(k, int):
                raise TypeError(f"exponent {k!r} is not an integer")
            c = mp.mpmathify(c)
            if c != 0:
                cleaned[k] = cleaned.get(k, mpf(0)) + c
        if prune and cleaned:
            mx = max(abs(c) for c in cleaned.values())
            cleaned = {k: c for k, c in cleaned.items() if abs(c) > PRUNE_REL * mx}
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "var_tag", var_tag)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # --- basic queries ---

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly)
                and self.var_tag is other.var_tag
                and self.terms == other.terms)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {mp.nstr(c, 8)}"
                         for k, c in sorted(self.terms.items()))
        return f"LaurentPoly({{{body}}}, {self.var_tag.name})"

    def coeff(self, k: int):
        return self.terms.get(k, mpf(0))

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def max_abs_coeff(self):
        return max(abs(c) for c in self.terms.values()) if self.terms else mpf(0)

    def parity(self) -> str:
        """'even', 'odd', 'mixed' exponent parity, or 'zero'."""
        if not self.terms:
            return "zero"
        parities = {k % 2 for k in self.terms}
        if parities == {0}:
            return "even"
        if parities == {1}:
            return "odd"
        return "mixed"

    # --- arithmetic ---

    def _check_tag(self, other: "LaurentPoly"):
        if self.var_tag is not other.var_tag:
            raise VarMismatch(
                f"cannot combine {self.var_tag.name} with {other.var_tag.name}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_tag(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, mpf(0)) + c
        return LaurentPoly(out, self.var_tag)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact convolution of term maps (same formal variable)."""
        self._check_tag(other)
        out: dict[int, object] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                out[k] = out.get(k, mpf(0)) + ca * cb
        return LaurentPoly(out, self.var_tag)

    def scale(self, factor) -> "LaurentPoly":
        factor = mp.mpmathify(factor)
        return LaurentPoly({k: c * factor for k, c in self.terms.items()},
                           self.var_tag, prune=False)

    def differentiate(self) -> "LaurentPoly":
        """Termwise k*x**(k-1); flips exponent parity."""
        return LaurentPoly({k - 1: k * c for k, c in self.terms.items() if k != 0},
                           self.var_tag, prune=False)

    def antiderivative(self) -> "LaurentPoly":
        """Termwise x**(k+1)/(k+1) with zero integration constant.

        The 1/x term has no Laurent antiderivative; a nonnegligible one means
        a coefficient recursion produced a forbidden logarithm.  Analytically
        the recursions cancel that slot exactly, but the cancellation leaves
        precision-sized dust, so below ~30 working digits the threshold
        follows the ambient precision instead of the fixed contract value.
        """
        res = self.terms.get(-1)
        tol = max(RESIDUE_REL, mpf(10) ** (-(mp.mp.dps - 10)))
        if res is not None and abs(res) > tol * self.max_abs_coeff():
            raise ResidueTerm(
                f"1/x coefficient {mp.nstr(res, 8)} exceeds the residue tolerance")
        return LaurentPoly(
            {k + 1: c / (k + 1) for k, c in self.terms.items() if k != -1},
            self.var_tag, prune=False)

    def evaluate(self, x):
        """Value at x != 0; positive and negative parts by separate Horner."""
        x = mp.mpmathify(x)
        if x == 0:
            raise ZeroArgument("Laurent polynomial evaluated at 0")
        pos = sorted((k for k in self.terms if k >= 0), reverse=True)
        neg = sorted((k for k in self.terms if k < 0))
        total = mpf(0)
        if pos:
            acc = mpf(0)
            prev = pos[0]
            for k in pos:
                acc = acc * x ** (prev - k) + self.terms[k]
                prev = k
            total += acc * x ** prev
        if neg:
            w = 1 / x
            acc = mpf(0)
            prev = -neg[0]
            for k in neg:   # ascending k = descending |k|
                acc = acc * w ** (prev + k) + self.terms[k]
                prev = -k
            total += acc * w ** prev
        return total

    def substitute_reciprocal(self) -> "LaurentPoly":
        """Exponent map k -> -k (the palindromy involution)."""
        return LaurentPoly({-k: c for k, c in self.terms.items()},
                           self.var_tag, prune=False)

    # --- diagnostics / io ---

    def rel_distance(self, other: "LaurentPoly"):
        """max |coeff difference| / max |coeff|, over the union of exponents."""
        self._check_tag(other)
        scale = max(self.max_abs_coeff(), other.max_abs_coeff())
        if scale == 0:
            return mpf(0)
        keys = set(self.terms) | set(other.terms)
        return max(abs(self.coeff(k) - other.coeff(k)) for k in keys) / scale

    def dump(self, digits: int = 17) -> str:
        """Debug format: one 'exponent<TAB>coefficient' line per term."""
        return "\n".join(f"{k}\t{mp.nstr(self.terms[k], digits)}"
                         for k in self.exponents())

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, object]],
                   var_tag: VarTag = VarTag.BETA) -> "LaurentPoly":
        return cls(dict(pairs), var_tag)
