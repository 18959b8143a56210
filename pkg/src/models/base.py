"""Continuous-discrete model contract"""
from abc import abstractmethod
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.optimize import approx_fprime

from src.exceptions.base import NotPositiveDefinite
from src.linalg.factor import cholesky_lower, psd_factor


FD_STEP = np.sqrt(np.finfo(float).eps)
SYMMETRY_TOLERANCE = 1e-12


def readonly(a: Any, ndmin: int) -> NDArray[np.float64]:
    arr = np.array(a, dtype=float, ndmin=ndmin)
    arr.setflags(write=False)
    return arr


def fd_jacobian(fun, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Forward-difference Jacobian with increments sqrt(eps) * max(|x_i|, 1)"""
    x = np.asarray(x, dtype=float)
    eps = FD_STEP * np.maximum(np.abs(x), 1.0)
    jac = approx_fprime(x, fun, eps)
    return np.atleast_2d(jac).reshape(-1, x.size)


class ModelSpec(BaseModel):
    """
    dx = f(t, x) dt + G dw,  E[dw dw^T] = Q dt
    z_k = h(k, x(t_k)) + v_k,  v_k ~ N(0, R)
    x(0) ~ N(x0_mean, x0_cov)

    Q and R may be singular (positive semidefinite); x0_cov must be positive
    definite. Measurement indices k are 1-based.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, validate_default=True)

    name: str
    diffusion_g: np.ndarray
    noise_q: np.ndarray
    meas_r: np.ndarray
    x0_mean: np.ndarray
    x0_cov: np.ndarray

    @field_validator("diffusion_g", "noise_q", "meas_r", "x0_cov", mode="before")
    @classmethod
    def as_matrix(cls, v):
        return readonly(v, ndmin=2)

    @field_validator("x0_mean", mode="before")
    @classmethod
    def as_vector(cls, v):
        return readonly(np.ravel(v), ndmin=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        """Dimensions must agree and covariances must be admissible"""
        n, (rows, q) = self.x0_mean.size, self.diffusion_g.shape
        if rows != n:
            raise ValueError(f"G has {rows} rows, state has {n} components")
        if self.noise_q.shape != (q, q):
            raise ValueError(f"Q must be {q}x{q}, got {self.noise_q.shape}")
        if self.x0_cov.shape != (n, n):
            raise ValueError(f"x0_cov must be {n}x{n}, got {self.x0_cov.shape}")
        m = self.meas_r.shape[0]
        if self.meas_r.shape != (m, m):
            raise ValueError(f"R must be square, got {self.meas_r.shape}")

        for label, mat in (("Q", self.noise_q), ("R", self.meas_r), ("x0_cov", self.x0_cov)):
            scale = max(np.abs(mat).max(), 1.0)
            if np.abs(mat - mat.T).max() > SYMMETRY_TOLERANCE * scale:
                raise ValueError(f"{label} must be symmetric")
            if label != "x0_cov" and np.linalg.eigvalsh(mat).min() < -SYMMETRY_TOLERANCE * scale:
                raise ValueError(f"{label} must be positive semidefinite")
        try:
            cholesky_lower(self.x0_cov)
        except NotPositiveDefinite as e:
            raise ValueError(f"x0_cov must be positive definite: {e}") from e

        z_nominal = self.measurement(1, self.x0_mean)
        if np.shape(z_nominal) != (m,):
            raise ValueError(f"Measurement returns shape {np.shape(z_nominal)}, R is {m}x{m}")
        return self

    @property
    def dim_x(self) -> int:
        return self.x0_mean.size

    @property
    def dim_z(self) -> int:
        return self.meas_r.shape[0]

    @property
    def process_noise_cov(self) -> NDArray[np.float64]:
        """G Q G^T"""
        return self.diffusion_g @ self.noise_q @ self.diffusion_g.T

    @property
    def meas_cov_sqrt(self) -> NDArray[np.float64]:
        """Square factor of R; the Cholesky factor whenever R is positive definite"""
        return psd_factor(self.meas_r)

    @abstractmethod
    def drift(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """f(t, x)"""

    @abstractmethod
    def measurement(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """h(k, x)"""

    def drift_jacobian(self, t: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return fd_jacobian(lambda v: self.drift(t, v), x)

    def measurement_jacobian(self, k: int, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return fd_jacobian(lambda v: self.measurement(k, v), x)

    def drift_points(self, t: float, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Drift applied to every column of an n x N point matrix"""
        return np.column_stack([self.drift(t, points[:, i]) for i in range(points.shape[1])])

    def measurement_points(self, k: int, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.column_stack([self.measurement(k, points[:, i]) for i in range(points.shape[1])])
