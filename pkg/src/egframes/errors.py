"""Exception hierarchy shared by every module."""


class EGFrameError(Exception):
    """Base class for all package errors."""


class ShapeError(EGFrameError, ValueError):
    """Operand dimensions do not agree."""


class DomainError(EGFrameError, ValueError):
    """An argument lies outside the admissible set (e.g. non-Hermitian input, alpha >= 1/2)."""


class SingularityError(EGFrameError, ArithmeticError):
    """A matrix that must be positive definite is not.

    ``min_eigenvalue`` carries the offending smallest eigenvalue.
    """

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = float(min_eigenvalue)


class PreconditionError(EGFrameError):
    """A numerical precondition of an operation failed.

    ``value`` carries the measured quantity that violated it (a lower frame
    bound, an operator norm, an overlap, ...).
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = None if value is None else float(value)


class ScenarioError(EGFrameError, ValueError):
    """A scenario file failed to parse or validate.

    ``path`` points at the offending key, e.g. ``checks[1].alpha``.
    """

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message
