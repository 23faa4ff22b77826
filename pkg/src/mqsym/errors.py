"""Exception hierarchy shared across the package.

Every error that can be traced back to a position in a DSL script carries an
optional ``span`` of the form ``(line, column, length)`` (1-based line and
column) so the CLI can point at the offending source text.
"""

from __future__ import annotations

Span = tuple[int, int, int]


class MeasurementAlgebraError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span


# --- registry ---------------------------------------------------------------

class RegistryFrozen(MeasurementAlgebraError):
    pass


class DuplicateName(MeasurementAlgebraError):
    pass


class DuplicateLabel(MeasurementAlgebraError):
    pass


class ValueCountMismatch(MeasurementAlgebraError):
    pass


class UnknownObservable(MeasurementAlgebraError):
    pass


class UnknownLabel(MeasurementAlgebraError):
    pass


class IndexOutOfRange(MeasurementAlgebraError):
    pass


class UnknownComponent(MeasurementAlgebraError):
    pass


class DuplicateComponent(MeasurementAlgebraError):
    pass


# --- functionals ------------------------------------------------------------

class MissingDimension(MeasurementAlgebraError):
    pass


class MissingEigenvalues(MeasurementAlgebraError):
    pass


# --- parsing (DSL scripts and basis files) ----------------------------------

class ParseError(MeasurementAlgebraError):
    """Syntax error. For DSL sources ``expected`` lists the token kinds that
    would have been accepted at ``span``."""

    def __init__(self, message: str, span: Span | None = None,
                 expected: tuple[str, ...] = ()):
        super().__init__(message, span)
        self.expected = expected


class UnboundVariable(MeasurementAlgebraError):
    pass


# --- realization ------------------------------------------------------------

class DimensionMismatch(MeasurementAlgebraError):
    pass


class NotUnitary(MeasurementAlgebraError):
    def __init__(self, observable: str, residual: float):
        super().__init__(
            f"basis for observable {observable!r} is not unitary "
            f"(max |U†U - I| = {residual:.3e})")
        self.observable = observable
        self.residual = residual
