"""Exception and warning types raised by the package."""


class LauricellaError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(LauricellaError, ValueError):
    """Objects with different numbers of variables were combined."""


class CapExceededError(LauricellaError, ValueError):
    """The number of variables exceeds the supported maximum."""


class SingularParameterError(LauricellaError, ZeroDivisionError):
    """A parameter combination that appears in a denominator vanishes."""


class NonGenericError(LauricellaError, ValueError):
    """Raised under strict mode when parameters are (nearly) integral."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"non-generic parameters: {report.summary()}")


class DomainError(LauricellaError, ValueError):
    """The series was asked for a point outside its convergence domain."""


class SingularLocusError(LauricellaError, ValueError):
    """A point lies on, or numerically too close to, the singular locus."""

    def __init__(self, message, component=None, point=None):
        self.component = component
        self.point = point
        super().__init__(message)


class ClearanceError(SingularLocusError):
    """A continuation path came closer to the singular locus than allowed."""


class StepUnderflowError(LauricellaError, RuntimeError):
    """The adaptive integrator could not make progress."""


class NonGenericWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    pass
