"""Exception hierarchy shared by every module."""


class SympInvError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SympInvError, ValueError):
    pass


class DegenerateFormError(SympInvError, ValueError):
    """The skew form has zero Pfaffian where a nondegenerate one is required."""


class NotSymplecticError(SympInvError, ValueError):
    pass


class BasisError(SympInvError, ValueError):
    pass


class SingularBasisError(BasisError):
    pass


class BasisValuesMismatchError(BasisError):
    def __init__(self, index, left, right):
        self.index = index
        self.left = left
        self.right = right
        super().__init__(
            f"basis-values differ at index {index} (1-based): {left} vs {right}"
        )


class ScalarMultipleError(SympInvError, ValueError):
    """A = +-sqrt(p) J forms a singleton orbit and cannot be reduced."""


class DifferentOrbitError(SympInvError, ValueError):
    pass


class GeometryDomainError(SympInvError, ValueError):
    pass


class ConstraintViolationError(SympInvError, ValueError):
    pass


class InternalConsistencyError(SympInvError, RuntimeError):
    """A self-check failed; this indicates a bug or numerical breakdown."""


class VanishingCoefficientError(SympInvError, ValueError):
    def __init__(self, index, point, value):
        self.index = index
        self.point = point
        self.value = value
        super().__init__(
            f"coefficient f{index} vanishes at grid point {list(point)} (value {value!r})"
        )


class FormError(SympInvError, ValueError):
    """Malformed form definition (bad line, missing slot, cross-pair variable)."""
