"""Exception hierarchy shared by all legasym modules."""


class LegasymError(Exception):
    """Base class for all numeric failures raised by this package."""


# --- numerics ---

class NoSignChange(LegasymError):
    """Bracket endpoints have the same sign; no root is guaranteed inside."""


class NoConvergence(LegasymError):
    """Root iteration hit its cap; carries the best bracket found."""

    def __init__(self, msg, lo=None, hi=None):
        super().__init__(msg)
        self.lo = lo
        self.hi = hi


class DomainError(LegasymError):
    """Argument outside the mathematical domain of the function."""


# --- laurent ---

class VarMismatch(LegasymError):
    """Binary operation on Laurent polynomials in different formal variables."""


class ResidueTerm(LegasymError):
    """Antiderivative of a Laurent polynomial with a nonvanishing 1/x term.

    Signals a violated structure assumption in a coefficient recursion:
    the generated integrands must never produce logarithms.
    """


class ZeroArgument(LegasymError):
    """Laurent polynomial evaluated at zero (negative powers blow up)."""


# --- lgcoeff ---

class AlphaOutOfRange(LegasymError):
    """Order ratio alpha outside [0, 1 - delta]."""


class ImaginaryResidue(LegasymError):
    """A value that must be real came out with a large imaginary part.

    Indicates a branch error in the mapping, not roundoff.
    """


class NearTurningPoint(LegasymError):
    """Advisory: the evaluation point is inside the turning-point fallback
    radius; the caller should use the near-turning evaluation path."""


class PrecisionExhausted(LegasymError):
    """The configured oracle precision cannot absorb the turning-point
    cancellation at the requested point."""


# --- mapping ---

class SolveFailure(LegasymError):
    """The implicit mapping equation could not be bracketed or solved."""


class SingularPoint(LegasymError):
    """Evaluation requested at the singular point t = 1."""


# --- bessel ---

class Overflow(LegasymError):
    """Result exceeds the representable range of the requested output form."""


# --- oracle ---

class ParameterPole(LegasymError):
    """Hypergeometric parameter hit a pole that the scaling cannot remove."""


class NearIntegerOrder(LegasymError):
    """The connection system for the Q oracle degenerates at integer order;
    perturb alpha so that mu = u*alpha is at least 1e-3 from any integer."""


class ZeroNotFound(LegasymError):
    """No sign change of the oracle Q was found on the scan grid."""


class FitFailure(LegasymError):
    """Series fit from resolved mapping points was too noisy to trust."""
