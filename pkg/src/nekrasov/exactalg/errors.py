"""Exceptions raised by the exact arithmetic kernel."""


class ZeroFormError(ValueError):
    """A linear form that must be nonzero is identically zero."""


class DivideByZeroScalarError(ZeroDivisionError):
    """Division of a factored rational by one with zero scalar."""


class DivideByZeroError(ZeroDivisionError):
    """Division of a rational function by the zero function."""


class ZeroDenominatorAfterSubstitutionError(ZeroDivisionError):
    """A substitution sent a denominator to the zero polynomial."""


class InadmissiblePointError(ZeroDivisionError):
    """A denominator vanishes at the requested evaluation point."""


class SamplingExhaustedError(RuntimeError):
    """No admissible evaluation point was found within the redraw budget."""


class VariableMismatchError(ValueError):
    """Operands live over different variable lists."""
