"""Exception hierarchy shared across the package."""


class BetanumError(Exception):
    """Base class for all betanum errors."""


class DegenerateInput(BetanumError):
    """Polynomial input is structurally unusable (non-monic, zero, reducible)."""


class NotPisot(BetanumError):
    """The polynomial does not define a Pisot number."""


class FieldMismatch(BetanumError):
    """Operands belong to different fields."""


class DivisionByZero(BetanumError):
    """Inversion of the zero element."""


class OutOfRange(BetanumError):
    """Argument outside the required real range."""


class OrbitBudgetExceeded(BetanumError):
    """No cycle detected within the step budget; raise the budget and retry."""


class InadmissibleWord(BetanumError):
    """Digit word violates the admissibility condition."""


class IndexOutOfRange(BetanumError):
    """Integer outside the range representable by the numeration system."""


class UnsupportedRamification(BetanumError):
    """p-adic factor structure outside the certified cases."""


class PrecisionExhausted(BetanumError):
    """Requested precision cannot be met (e.g. p-power denominators too deep)."""


class FloorUndecidable(BetanumError):
    """Interval straddles an integer beyond the refinement budget."""


class NoPlottableAxes(BetanumError):
    """Fewer than two plottable axes available for rendering."""
