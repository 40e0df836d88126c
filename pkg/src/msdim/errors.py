"""Exception types raised across the package."""

from __future__ import annotations


class MsDimError(Exception):
    """Base class for all errors raised by msdim."""


class InvalidEdge(MsDimError, ValueError):
    pass


class DisconnectedGraph(MsDimError, ValueError):
    pass


class InvalidDescriptor(MsDimError, ValueError):
    pass


class ParseError(MsDimError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyLandmarkSet(MsDimError, ValueError):
    pass


class InvalidParam(MsDimError, ValueError):
    pass


class PremiseViolation(MsDimError, ValueError):
    pass


class InvalidFormula(MsDimError, ValueError):
    pass


class NotStructured(MsDimError, ValueError):
    pass


class SearchBudgetExceeded(MsDimError):
    """The candidate budget ran out before the search could finish.

    ``partial`` carries whatever the search had established so far: an
    interval-valued :class:`~msdim.solvers.DimensionResult` for dimension
    searches, or the partial catalog for the tree search.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DepthLimitExceeded(MsDimError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
