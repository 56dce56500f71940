"""Exception hierarchy shared by the library and mapped to CLI exit codes."""


class GonalityError(RuntimeError):
    """Base class for every error raised by the gonality package."""

    exit_code = 1


class GraphFormatError(GonalityError):
    """A graph or morphism file could not be parsed."""

    exit_code = 2


class InvalidInputError(GonalityError):
    """Unknown ids, disconnected graphs, loops where forbidden, bad parameters."""

    exit_code = 2


class NotHarmonicError(GonalityError):
    """A morphism failed harmonicity where a harmonic one was required."""

    exit_code = 1


class SizeCapError(InvalidInputError):
    """An exact algorithm was asked to run beyond its configured size cap."""


class BudgetExhaustedError(GonalityError):
    """A budgeted search ended without a feasible witness."""

    exit_code = 3


class PreconditionError(GonalityError):
    """A rebuild precondition does not hold; `culprit` names the vertex or edge."""

    exit_code = 4

    def __init__(self, message: str, culprit: str | None = None) -> None:
        super().__init__(message)
        self.culprit = culprit


class RebuildError(GonalityError):
    """The rebuild construction could not meet one of its postconditions."""

    exit_code = 1
