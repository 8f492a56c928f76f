class ScribleError(Exception):
    """Base class for every error raised by the scrible package."""


class ArgumentError(ScribleError, ValueError):
    """Malformed input: asymmetric matrices, invalid graphs, empty or unbounded bodies."""


class DomainError(ScribleError, ValueError):
    """A barrier quantity was requested at a point outside the open body."""


class NumericError(ScribleError, ArithmeticError):
    """A matrix expected to be positive definite was not."""


class ConvergenceError(ScribleError, ArithmeticError):
    def __init__(self, message: str, last_decrement: float = None):
        super().__init__(message)
        self.last_decrement = last_decrement

    def __reduce__(self):
        return self.__class__, (str(self), self.last_decrement)


class SizeError(ScribleError):
    """A desk-scale enumeration guard was exceeded."""


class ConfigError(ScribleError):
    pass


class ContractViolationError(ScribleError):
    """An environment or theorem contract (loss bound, path delay, eta * ||f~||* <= 1/4) failed."""


class GeometryError(ScribleError):
    """A sampled prediction left the closed body, which signals a broken barrier or basis."""


class RunAbortedError(ScribleError):
    def __init__(self, message: str, trace=None, replication: int = None):
        super().__init__(message)
        self.trace = trace
        self.replication = replication

    def __reduce__(self):
        # the partial trace stays in the worker process
        return self.__class__, (str(self), None, self.replication)


class TheoremConditionWarning(UserWarning):
    """The horizon is too short for the regret theorem's learning rate (T / log T <= 8 theta)."""
