"""Exception types raised across the package."""


class LorspinError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 3


class InputError(LorspinError):
    exit_code = 2


class NumericalFailure(LorspinError):
    exit_code = 3


class InverseOfZeroDivisor(NumericalFailure, ZeroDivisionError):
    pass


class NegativeSquareRoot(NumericalFailure, ValueError):
    pass


class NotUnitSpinor(NumericalFailure, ValueError):
    pass


class NotNormalized(NotUnitSpinor):
    pass


class DegenerateMetric(NumericalFailure, ValueError):
    pass


class GaussMapNotRegular(NumericalFailure, ValueError):
    pass


class NotClosed(NumericalFailure, ValueError):
    pass


class IntegrabilityViolated(NumericalFailure, ValueError):
    pass


class ZeroCrossing(NumericalFailure, ValueError):
    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class SingularSystem(NumericalFailure, ValueError):
    pass


class NonConvergent(NumericalFailure, ValueError):
    pass


class DegenerateRuling(NumericalFailure, ValueError):
    pass


class NoSolution(NumericalFailure, ValueError):
    pass


class IntrinsicEquationViolated(NumericalFailure, ValueError):
    pass


class SchemaError(InputError, ValueError):
    pass
