"""Stochastic Van der Pol oscillator"""
import numpy as np
from numpy.typing import NDArray
from pydantic import Field, field_validator

from src.models.base import ModelSpec


VDP_MEAS_MATRIX = np.array([[1.0, 1.0]])


class VanDerPolModel(ModelSpec):
    """
    x1' = x2,  x2' = lam * ((1 - x1^2) x2 - x1) + noise.

    Noise enters the second component only (G = diag(0, 1), Q = I). lam sets the
    stiffness; large values defeat explicit integrators.
    """
    name: str = "vdp"
    lam: float = Field(default=1.0, ge=0)

    diffusion_g: np.ndarray = Field(default_factory=lambda: np.diag([0.0, 1.0]))
    noise_q: np.ndarray = Field(default_factory=lambda: np.eye(2))
    meas_r: np.ndarray = Field(default_factory=lambda: np.array([[0.04]]))
    x0_mean: np.ndarray = Field(default_factory=lambda: np.array([2.0, 0.0]))
    x0_cov: np.ndarray = Field(default_factory=lambda: np.diag([0.1, 0.1]))

    @field_validator("lam")
    @classmethod
    def finite_lam(cls, v: float) -> float:
        if not np.isfinite(v):
            raise ValueError("lam must be finite")
        return v

    def drift(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x1, x2 = x
        return np.array([x2, self.lam * ((1.0 - x1 ** 2) * x2 - x1)])

    def drift_jacobian(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x1, x2 = x
        return np.array([
            [0.0, 1.0],
            [-self.lam * (2.0 * x1 * x2 + 1.0), self.lam * (1.0 - x1 ** 2)],
        ])

    def measurement(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return VDP_MEAS_MATRIX @ x

    def measurement_jacobian(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return VDP_MEAS_MATRIX
