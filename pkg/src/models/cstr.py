"""Isothermal gas-phase CSTR: A <-> B + C, 2B <-> C (three species, two reversible reactions)"""
import numpy as np
from numpy.typing import NDArray
from pydantic import Field, model_validator

from src.models.base import ModelSpec


CSTR_FEED = (0.5, 0.05, 0.0)
# Rows are reactions, columns species A, B, C
STOICHIOMETRY = np.array([[-1.0, 1.0, 1.0], [0.0, -2.0, 1.0]])
# Continuous-time process noise intensity; times a 1e-3 s truth step gives 1e-6 per step
CSTR_PROCESS_NOISE = 1e-3
CSTR_MEAS_STD = 0.25


class CstrModel(ModelSpec):
    """Well-mixed reactor with total pressure measured through RT * (cA + cB + cC)"""
    name: str = "cstr"

    k1: float = 0.5
    k2: float = 0.05
    k3: float = 0.2
    k4: float = 0.01
    flow_in: float = Field(default=1.0, gt=0)
    flow_out: float = Field(default=1.0, gt=0)
    volume: float = Field(default=100.0, gt=0)
    rt: float = 32.84

    diffusion_g: np.ndarray = Field(default_factory=lambda: np.eye(3))
    noise_q: np.ndarray = Field(default_factory=lambda: CSTR_PROCESS_NOISE * np.eye(3))
    meas_r: np.ndarray = Field(default_factory=lambda: np.array([[CSTR_MEAS_STD ** 2]]))
    x0_mean: np.ndarray = Field(default_factory=lambda: np.array(CSTR_FEED))
    x0_cov: np.ndarray = Field(default_factory=lambda: np.eye(3))

    def rates(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        ca, cb, cc = x
        return np.array([
            self.k1 * ca - self.k2 * cb * cc,
            self.k3 * cb ** 2 - self.k4 * cc,
        ])

    def drift(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        # Feed concentration is the nominal initial mean
        inflow = (self.flow_in / self.volume) * self.x0_mean
        outflow = (self.flow_out / self.volume) * x
        return inflow - outflow + STOICHIOMETRY.T @ self.rates(x)

    def drift_jacobian(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        ca, cb, cc = x
        rate_jac = np.array([
            [self.k1, -self.k2 * cc, -self.k2 * cb],
            [0.0, 2.0 * self.k3 * cb, -self.k4],
        ])
        return -(self.flow_out / self.volume) * np.eye(3) + STOICHIOMETRY.T @ rate_jac

    @property
    def meas_matrix(self) -> NDArray[np.float64]:
        return self.rt * np.ones((1, 3))

    def measurement(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.meas_matrix @ x

    def measurement_jacobian(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.meas_matrix


class CstrIllCondModel(CstrModel):
    """
    CSTR with a second, nearly collinear pressure channel.

    H = RT * [[1, 1, 1], [1, 1, 1 + delta]] and R = delta^2 * I; small delta drives
    the innovation covariance toward singularity.
    """
    name: str = "cstr-ill"
    delta: float = Field(default=1e-3, ge=0)

    @model_validator(mode="before")
    @classmethod
    def default_meas_cov(cls, data):
        if isinstance(data, dict) and "meas_r" not in data:
            delta = float(data.get("delta", 1e-3))
            data = {**data, "meas_r": delta ** 2 * np.eye(2)}
        return data

    @property
    def meas_matrix(self) -> NDArray[np.float64]:
        return self.rt * np.array([[1.0, 1.0, 1.0], [1.0, 1.0, 1.0 + self.delta]])
