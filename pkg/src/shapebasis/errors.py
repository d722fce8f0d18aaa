"""Exception hierarchy for shapebasis."""


class ShapeBasisError(Exception):
    """Base class for all library errors."""


class NonPositiveCheck(ShapeBasisError):
    """The inscribed axis-parallel rectangle degenerates (shape too large)."""


class DegenerateShape(ShapeBasisError, ValueError):
    """sigma is at or beyond the critical shape for the given (t, theta)."""


class Infeasible(ShapeBasisError, ValueError):
    """No shape in the admissible range reaches the requested ratio."""


class EmptyInput(ShapeBasisError, ValueError):
    pass


class IndexOutOfRange(ShapeBasisError, IndexError):
    pass


class PreconditionViolated(ShapeBasisError, ValueError):
    pass


class WindowTooSmall(ShapeBasisError, ValueError):
    """A family member is not contained in the sampling window."""


class ContainmentFailed(ShapeBasisError):
    """The test set is not contained in every rectangle of a block family."""


class PhiMassZero(ShapeBasisError, ValueError):
    """The Young-function mass of the test function vanishes."""
