"""Exception types shared across the package.

Exit-code mapping used by the CLI: usage/input problems map to 1,
numerical failures (NumericalError subtree) to 2, I/O errors to 3.
"""


class GpcquadError(Exception):
    """Base class for all package errors."""


class ModelSyntaxError(GpcquadError):
    """Malformed model source. Carries 1-based line/column of the offense."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvaluationError(GpcquadError):
    """Model evaluation produced a non-finite value or hit a domain error."""


class DegenerateSamplesError(GpcquadError):
    """Sample set has zero range (all values equal) or too few values."""


class SelectionError(GpcquadError):
    """Interpolation-point selection cannot satisfy the step constraint."""


class InvariantViolation(GpcquadError):
    """A constructed object failed its own consistency checks."""


class NumericalError(GpcquadError):
    """Numerical failure that invalidates downstream results."""


class KappaNotPositiveError(NumericalError):
    """Recurrence normalization ratio came out non-positive.

    This is the moment-corruption tripwire: the ratio is a quotient of
    integrals of squares against a non-negative density, so a non-positive
    value means the moment vector is inconsistent with any density.
    """

    def __init__(self, index: int, value: float):
        super().__init__(
            f"kappa_{index} = {value:.6e} is not positive; "
            f"moment sequence is corrupted or degree is too high"
        )
        self.index = index
        self.value = value


class EigenConvergenceError(NumericalError):
    """Tridiagonal QL iteration failed to converge within the sweep cap."""
