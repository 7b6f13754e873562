"""Exception hierarchy shared by every module."""


class QuadCountError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(QuadCountError, ValueError):
    """Malformed or out-of-domain input."""


class SingularForm(InvalidInput):
    pass


class BadDimension(InvalidInput):
    pass


class NotPrimitive(InvalidInput):
    pass


class ZeroInput(InvalidInput):
    pass


class NonClassical(InvalidInput):
    """An integer-only routine received a form whose Gram matrix is not integral."""


class DegenerateEllipsoid(InvalidInput):
    pass


class ConstraintUnsatisfiable(QuadCountError):
    pass


class TooLarge(QuadCountError):
    """An enumeration would exceed its configured budget."""


class HeightRegimeError(InvalidInput):
    """The form's height is too large relative to B for the bound to apply."""


class InvariantViolation(QuadCountError, AssertionError):
    pass
