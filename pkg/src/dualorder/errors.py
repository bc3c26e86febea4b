"""Exception hierarchy.

Errors split in two groups: input errors (bad shapes, unmet preconditions),
which callers are expected to handle, and bug signals (a verified identity or
a proven equivalence failed at runtime), which should never fire.
"""

from __future__ import annotations


class DualOrderError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatch(DualOrderError, ValueError):
    pass


class NotSquare(DualOrderError, ValueError):
    pass


class SingularMatrix(DualOrderError, ValueError):
    pass


class IndexNotOne(DualOrderError, ValueError):
    """The matrix is not group invertible (rk(E^2) != rk(E))."""


class DmpgiDoesNotExist(DualOrderError, ValueError):
    def __init__(self, message: str, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class DggiDoesNotExist(DualOrderError, ValueError):
    def __init__(self, message: str, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class PreconditionUnmet(DualOrderError, ValueError):
    """An order is undefined on the given inputs.

    Distinct from a false verdict: the pair is not comparable at all.
    ``precondition`` names the failing requirement.
    """

    def __init__(self, precondition: str, detail: str = ""):
        msg = precondition if not detail else f"{precondition}: {detail}"
        super().__init__(msg)
        self.precondition = precondition
        self.detail = detail


class NonInvertibleBlock(DualOrderError, ValueError):
    pass


class BlockNotPerturbable(DualOrderError, ValueError):
    pass


class InvalidTrials(DualOrderError, ValueError):
    pass


class MatrixParseError(DualOrderError, ValueError):
    """Raised by the matrix file reader; carries a location when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


# Bug signals: a proven identity failed. These indicate an implementation defect.


class InternalVerificationFailure(DualOrderError, AssertionError):
    pass


class CharacterizationMismatch(DualOrderError, AssertionError):
    def __init__(self, message: str, routes=None):
        super().__init__(message)
        self.routes = routes


class TheoremViolation(DualOrderError, AssertionError):
    pass
