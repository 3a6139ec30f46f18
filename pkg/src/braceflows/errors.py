"""Exception types shared across the toolkit."""


class AlgebraError(Exception):
    """Base class for all toolkit errors."""


class NotInvertible(AlgebraError):
    """Element has no multiplicative inverse modulo p^n."""


class InvalidPrime(AlgebraError):
    """Argument must be an odd prime."""


class FactorialNotInvertible(AlgebraError):
    """m! is divisible by p, so it has no inverse modulo p^n."""


class EnumerationBoundExceeded(AlgebraError):
    """A brute-force enumeration would exceed the configured bound."""


class HypothesisViolated(AlgebraError):
    """A theorem hypothesis (such as k < p or n+1 < p) does not hold."""


class NotStronglyNilpotent(AlgebraError):
    """Operation requires a strongly nilpotent brace or ring."""


class NotNilpotent(AlgebraError):
    """Operation requires a nilpotent series that failed to terminate."""


class NotAnIdeal(AlgebraError):
    """Subgroup argument fails its ideal check."""


class NotAutomorphism(AlgebraError):
    """Map argument is not an additive automorphism."""


class ParseError(AlgebraError):
    """Malformed serialized document.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvariantViolation(AlgebraError):
    """Document is well-formed but its payload dimensions are inconsistent."""
