"""Base exception classes for the cdekf toolkit"""


class CdekfException(Exception):
    """Base exception for all cdekf exceptions"""
    pass


class NotPositiveDefinite(CdekfException):
    """Raised when a Cholesky factorization meets a non-positive or non-finite pivot"""
    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(f"Matrix is not positive definite (pivot {pivot})")


class RankDeficient(CdekfException):
    """Raised when a triangularized factor has a vanishing diagonal entry"""
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Triangular factor is rank deficient (diagonal {index})")


class SingularFactor(CdekfException):
    """Raised when a triangular solve meets a zero or non-finite diagonal"""
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Triangular factor is singular (diagonal {index})")


class IntegrationError(CdekfException):
    """Base class for failures inside the ODE integrators"""
    def __init__(self, message: str, t: float):
        self.t = t
        super().__init__(message)


class RhsFailure(IntegrationError):
    """Raised when the right-hand side cannot be evaluated at time t"""
    def __init__(self, t: float, cause: Exception):
        self.cause = cause
        super().__init__(f"Right-hand side failed at t={t:.6g}: {cause}", t)


class StepUnderflow(IntegrationError):
    """Raised when the step size controller drives h below the resolvable limit"""
    def __init__(self, t: float, h: float):
        self.h = h
        super().__init__(f"Step size underflow at t={t:.6g} (h={h:.3e})", t)


class StepLimitExceeded(IntegrationError):
    """Raised when one interval needs more steps than OdeOptions.max_steps allows"""
    def __init__(self, t: float, steps: int):
        self.steps = steps
        super().__init__(f"Step limit of {steps} exceeded at t={t:.6g}", t)


class Divergence(CdekfException):
    """Raised when a filter can no longer produce a valid belief"""
    def __init__(self, time: float, cause: str):
        self.time = time
        self.cause = cause
        super().__init__(f"Filter diverged at t={time:.6g}: {cause}")


class NonFiniteState(CdekfException):
    """Raised when a simulated trajectory leaves the finite range"""
    def __init__(self, t: float):
        self.t = t
        super().__init__(f"Trajectory became non-finite at t={t:.6g}")


class ShapeMismatch(CdekfException):
    """Raised when arrays that must agree in shape do not"""
    pass


class ConfigError(CdekfException):
    """Raised when experiment or model configuration is invalid"""
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)


class ReportIoError(CdekfException):
    """Raised when a report or plot cannot be written"""
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Cannot write '{path}': {reason}")


def root_cause_name(exc: BaseException) -> str:
    """Name of the innermost cdekf error behind an integration failure"""
    while isinstance(exc, RhsFailure):
        exc = exc.cause
    return type(exc).__name__
