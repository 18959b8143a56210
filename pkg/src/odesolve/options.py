"""Integrator options and statistics"""
from enum import Enum
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import settings


# A scalar, or one entry per state component
Tolerance = Union[float, tuple[float, ...]]


class OdeMethod(str, Enum):
    """
    Integration method.

    NONSTIFF_RK45 is the Dormand-Prince 5(4) pair;
    STIFF_IMPLICIT is a linearly implicit Rosenbrock 2(3) pair for stiff drifts.
    """
    NONSTIFF_RK45 = "nonstiff-rk45"
    STIFF_IMPLICIT = "stiff-implicit"


class OdeOptions(BaseModel):
    """
    Mixed absolute/relative local error control settings.

    abs_tol and rel_tol are scalars or per-component tuples matching the state length.
    """
    model_config = ConfigDict(frozen=True)

    abs_tol: Tolerance = settings.let_tol
    rel_tol: Tolerance = settings.let_tol
    max_step: float = Field(default=settings.max_step, gt=0)
    initial_step: Optional[float] = Field(default=None, gt=0)
    method: OdeMethod = OdeMethod.NONSTIFF_RK45
    max_steps: int = Field(default=settings.max_steps, ge=1)

    @field_validator("abs_tol", "rel_tol")
    @classmethod
    def positive_tolerance(cls, v):
        values = v if isinstance(v, tuple) else (v,)
        if not values or not all(x > 0 for x in values):
            raise ValueError("Tolerances must be positive")
        return v

    def scaled(self, weights: ArrayLike) -> "OdeOptions":
        """Per-component tolerances abs_tol * w_i and rel_tol * w_i"""
        weights = np.asarray(weights, dtype=float).ravel()
        if not (weights > 0).all():
            raise ValueError("Tolerance weights must be positive")
        abs_tol = np.broadcast_to(np.asarray(self.abs_tol, dtype=float), weights.shape) * weights
        rel_tol = np.broadcast_to(np.asarray(self.rel_tol, dtype=float), weights.shape) * weights
        return self.model_copy(update={"abs_tol": tuple(abs_tol.tolist()), "rel_tol": tuple(rel_tol.tolist())})

    @classmethod
    def from_let(
        cls,
        let: float,
        max_step: float = settings.max_step,
        method: OdeMethod = OdeMethod.NONSTIFF_RK45,
    ) -> "OdeOptions":
        """AbsTol = RelTol = LET, as the filters are configured"""
        return cls(abs_tol=let, rel_tol=let, max_step=max_step, method=method)


class OdeStats(BaseModel):
    """Step and evaluation counters of one or more integrations"""
    accepted_steps: int = Field(default=0, ge=0)
    rejected_steps: int = Field(default=0, ge=0)
    rhs_evaluations: int = Field(default=0, ge=0)
    jacobian_evaluations: int = Field(default=0, ge=0)

    @property
    def total_steps(self) -> int:
        return self.accepted_steps + self.rejected_steps

    def __add__(self, other: "OdeStats") -> "OdeStats":
        return OdeStats(
            accepted_steps=self.accepted_steps + other.accepted_steps,
            rejected_steps=self.rejected_steps + other.rejected_steps,
            rhs_evaluations=self.rhs_evaluations + other.rhs_evaluations,
            jacobian_evaluations=self.jacobian_evaluations + other.jacobian_evaluations,
        )
