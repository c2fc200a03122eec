"""Exception hierarchy shared by all submodules."""


class MetricMahlerError(Exception):
    """Base class for every error raised by this package."""


class InputSyntaxError(MetricMahlerError, ValueError):
    """A text input could not be parsed.

    Carries the offending position (0-based character offset) when known.
    """

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DomainInputError(MetricMahlerError, ValueError):
    """A value violates a documented precondition (zero element, composite
    prime argument, negative tolerance, ...)."""


class NonSquarefreeError(DomainInputError):
    """Root certification was asked for a polynomial with repeated roots."""


class PrecisionError(MetricMahlerError, ArithmeticError):
    """The requested tolerance could not be certified below the precision cap."""


class HeightAxiomError(DomainInputError):
    """A height table violates one of the defining axioms; names the axiom."""

    def __init__(self, axiom, detail):
        self.axiom = axiom
        super().__init__(f"height axiom violated [{axiom}]: {detail}")


class EmptySearchError(MetricMahlerError, LookupError):
    """A bounded search produced no admissible candidate."""


class InvariantViolation(MetricMahlerError, AssertionError):
    """An internal cross-check failed; indicates a bug, not a bad input."""
