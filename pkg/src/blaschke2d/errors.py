"""Exception hierarchy.

Every error carries a stable string ``code`` (used in JSON reports) and an
``exit_code`` shared by its error class, so the CLI can map failures to
process exit statuses without inspecting messages.
"""

from __future__ import annotations


class BlaschkeError(Exception):
    code = "Error"
    exit_code = 1


# -- configuration ---------------------------------------------------------

class ParseError(BlaschkeError):
    code = "ParseError"
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(BlaschkeError):
    code = "ValidationError"
    exit_code = 3

    def __init__(self, message: str, invariant: str | None = None):
        self.invariant = invariant
        super().__init__(message)


# -- map construction ------------------------------------------------------

class MapError(ValidationError):
    pass


class ZeroOutsideDisc(MapError):
    code = "ZeroOutsideDisc"


class DegenerateDeterminant(MapError):
    code = "DegenerateDeterminant"


class EmptyFactor(MapError):
    code = "EmptyFactor"


# -- resources -------------------------------------------------------------

class ResourceBudget(BlaschkeError):
    code = "ResourceBudget"
    exit_code = 4


class RefinementBudget(ResourceBudget):
    code = "RefinementBudget"


# -- numerics --------------------------------------------------------------

class NumericError(BlaschkeError):
    exit_code = 5


class NonConvergence(NumericError):
    code = "NonConvergence"


class DegenerateSystem(NumericError):
    code = "DegenerateSystem"


class SolverDeficiency(NumericError):
    code = "SolverDeficiency"


class LiftDiscontinuity(NumericError):
    code = "LiftDiscontinuity"


# -- geometry --------------------------------------------------------------

class GeometryError(BlaschkeError):
    exit_code = 6


class ZeroAtOrigin(GeometryError):
    code = "ZeroAtOrigin"


class CoincidentZeros(GeometryError):
    code = "CoincidentZeros"


class DegenerateConfiguration(GeometryError):
    code = "DegenerateConfiguration"


class DegenerateConfigurationWarning(UserWarning):
    """Emitted when a computation falls back to best-effort on repeated/zero zeros."""


# -- classification --------------------------------------------------------

class InvariantViolation(BlaschkeError):
    code = "InvariantViolation"
    exit_code = 7
