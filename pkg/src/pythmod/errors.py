"""Exception types shared across the toolkit."""


class PythmodError(Exception):
    """Base class for all toolkit errors."""


class NotInvertible(PythmodError):
    """Requested an inverse of a residue divisible by p."""


class UnitRequired(PythmodError):
    """Operation needs an argument coprime to p."""


class DenominatorNotUnit(PythmodError):
    """Rational function denominator vanishes mod p at the evaluation point."""


class InadmissibleParameter(PythmodError):
    """Circle parameter t with t(1-t^2)(1+t^2) not a unit."""


class InvalidPoint(PythmodError):
    """Pair (y1, y2) is not a unit point on the circle mod p^n."""


class InvalidSolution(PythmodError):
    """Triple fails x1^2 + x2^2 - x3^2 = 0 mod p^n or the unit condition."""


class TooLarge(PythmodError):
    """Input exceeds the feasibility bound of an exhaustive method."""


class HypothesisViolated(PythmodError):
    """Closed-form evaluation hypotheses fail; fall back to brute force."""


class NotResidue(PythmodError):
    """Needed a quadratic residue, got a non-residue (or a non-unit)."""


class SmallPrime(PythmodError):
    """Counting requires p > 5: no unit solutions exist mod 2, 3, 5."""


class RangeViolation(PythmodError):
    """Box size out of the range required by the operation."""
