"""Exception types shared across the package.

Every failure mode that callers are expected to catch has its own class so
the CLI can report the error name verbatim.
"""


class HermdensError(Exception):
    """Base class for all package errors."""


class DivisionByZero(HermdensError):
    """Division of a rational function by zero."""


class PoleAtPoint(HermdensError):
    """Evaluation of a rational function at a zero of its denominator."""


class InvalidPrime(HermdensError):
    """Ring model parameter p is not an odd prime, or d < 1."""


class DegenerateGram(HermdensError):
    """A Gram matrix is singular (some elementary divisor vanishes)."""


class BudgetExceeded(HermdensError):
    """An enumeration would visit more states than the configured budget."""


class InvalidInvariants(HermdensError):
    """An invariant vector is not a nonincreasing list of integers in range."""


class InvalidProfile(HermdensError):
    """A profile (a, b, c) is out of range for the requested constant."""


class IndexOutOfRange(HermdensError):
    """A coefficient index lies outside its defining range."""


class UnsupportedKind(HermdensError):
    """Unknown dispatch tag for a closed-form self-density value."""


class ParityMismatch(HermdensError):
    """A lattice-level density was requested with val(L) of the wrong parity."""


class EmptyStratum(HermdensError):
    """A coset stratum is empty for the given invariants."""


class InvalidCase(HermdensError):
    """Unknown stratum label, or a label incompatible with the shell valuation."""


class InvalidParity(HermdensError):
    """A transform argument violates the parity constraint |lambda| + v = h + 1 (mod 2)."""


class PrecisionLoss(HermdensError):
    """Oracle input cannot be reduced exactly into the working ring."""


class NotStabilized(HermdensError):
    """Normalized counts at consecutive depths disagree."""


class UnderdeterminedFit(HermdensError):
    """Polynomial interpolation check point does not match the fit."""
