"""Belief and sample-point value types"""
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.linalg.factor import cholesky_lower


class GaussianBelief(BaseModel):
    """
    Mean and covariance at one time.

    Conventional filters carry cov; square-root filters carry chol with
    chol @ chol.T as the implied covariance. Exactly one of the two is set.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    time: float
    mean: np.ndarray
    cov: Optional[np.ndarray] = None
    chol: Optional[np.ndarray] = None

    @field_validator("mean", mode="before")
    @classmethod
    def as_vector(cls, v):
        return np.array(v, dtype=float).ravel()

    @field_validator("cov", "chol", mode="before")
    @classmethod
    def as_matrix(cls, v):
        return None if v is None else np.array(v, dtype=float, ndmin=2)

    @model_validator(mode="after")
    def one_representation(self):
        if (self.cov is None) == (self.chol is None):
            raise ValueError("Exactly one of cov and chol must be given")
        n = self.mean.size
        mat = self.cov if self.cov is not None else self.chol
        if mat.shape != (n, n):
            raise ValueError(f"Covariance representation must be {n}x{n}, got {mat.shape}")
        return self

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def square_root(self) -> bool:
        return self.chol is not None

    @property
    def covariance(self) -> NDArray[np.float64]:
        return self.cov if self.cov is not None else self.chol @ self.chol.T

    def factor(self) -> NDArray[np.float64]:
        """Lower Cholesky factor; raises NotPositiveDefinite for an invalid cov"""
        return self.chol if self.chol is not None else cholesky_lower(self.cov)


class SamplePointSet(BaseModel):
    """n x n point matrix, one point per column, spread (sqrt(n) / alpha) * P^{1/2} about mean"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    mean: np.ndarray
    alpha: float

    @model_validator(mode="after")
    def square_points(self):
        n = self.mean.size
        if self.points.shape != (n, n):
            raise ValueError(f"Point matrix must be {n}x{n}, got {self.points.shape}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        return self

    @property
    def scale(self) -> float:
        """alpha / sqrt(n)"""
        return self.alpha / np.sqrt(self.mean.size)

    def offsets(self) -> NDArray[np.float64]:
        return self.points - self.mean[:, None]

    def recovered_factor(self) -> tuple[NDArray[np.float64], float]:
        return recover_factor(self.points, self.mean, self.alpha)


def recover_factor(
    points: NDArray[np.float64],
    mean: NDArray[np.float64],
    alpha: float,
) -> tuple[NDArray[np.float64], float]:
    """
    (alpha / sqrt(n)) * tril(points - mean 1^T) and the max-norm of the
    strictly-upper part that tril discards. No validation; used inside rhs calls.
    """
    centered = (alpha / np.sqrt(mean.size)) * (points - mean[:, None])
    upper = np.triu(centered, 1)
    residue = float(np.abs(upper).max()) if upper.size else 0.0
    return np.tril(centered), residue
