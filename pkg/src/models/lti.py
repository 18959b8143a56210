"""Linear time-invariant model with analytic Jacobians"""
import numpy as np
from numpy.typing import NDArray
from pydantic import Field, field_validator, model_validator

from src.models.base import ModelSpec, readonly


class LtiModel(ModelSpec):
    """
    dx = A x dt + G dw,  z_k = H x_k + v_k.

    Every derivative-free variant is exact on this model, so it serves as the oracle
    for the discrete Kalman filter comparisons. The default is a lightly damped
    oscillator observed through its position.
    """
    name: str = "lti-test"
    a: np.ndarray = Field(default_factory=lambda: np.array([[0.0, 1.0], [-1.0, -0.2]]))
    h: np.ndarray = Field(default_factory=lambda: np.array([[1.0, 0.0]]))

    diffusion_g: np.ndarray = Field(default_factory=lambda: np.eye(2))
    noise_q: np.ndarray = Field(default_factory=lambda: 0.1 * np.eye(2))
    meas_r: np.ndarray = Field(default_factory=lambda: np.array([[0.1]]))
    x0_mean: np.ndarray = Field(default_factory=lambda: np.array([1.0, 0.0]))
    x0_cov: np.ndarray = Field(default_factory=lambda: np.eye(2))

    @field_validator("a", "h", mode="before")
    @classmethod
    def as_system_matrix(cls, v):
        return readonly(v, ndmin=2)

    @model_validator(mode="after")
    def check_system(self):
        n = self.x0_mean.size
        if self.a.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}, got {self.a.shape}")
        if self.h.shape[1] != n:
            raise ValueError(f"H must have {n} columns, got {self.h.shape}")
        return self

    def drift(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.a @ x

    def drift_jacobian(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array(self.a)

    def measurement(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.h @ x

    def measurement_jacobian(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array(self.h)


def lti_oracle_model(a, h, **kwargs) -> LtiModel:
    """LTI model with drift A x and measurement H x; remaining fields as keywords"""
    a = np.array(a, dtype=float, ndmin=2)
    h = np.array(h, dtype=float, ndmin=2)
    n, m = a.shape[0], h.shape[0]
    kwargs.setdefault("diffusion_g", np.eye(n))
    kwargs.setdefault("noise_q", 0.1 * np.eye(n))
    kwargs.setdefault("meas_r", 0.1 * np.eye(m))
    kwargs.setdefault("x0_mean", np.zeros(n))
    kwargs.setdefault("x0_cov", np.eye(n))
    return LtiModel(a=a, h=h, **kwargs)
