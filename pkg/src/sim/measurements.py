"""Noisy measurements sampled from a truth trajectory"""
import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.linalg.factor import psd_factor
from src.models.base import ModelSpec
from src.sim.random import MEASUREMENT_NOISE_STREAM, make_rng
from src.sim.truth import Trajectory, grid_steps


class MeasurementRecord(BaseModel):
    """One measurement; index is the 1-based k passed to h(k, x)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    time: float
    index: int = Field(ge=1)
    value: np.ndarray

    @field_validator("value", mode="before")
    @classmethod
    def freeze(cls, v):
        arr = np.array(v, dtype=float).ravel()
        arr.setflags(write=False)
        return arr


def synthesize_measurements(
    truth: Trajectory,
    model: ModelSpec,
    period: float,
    rng_seed: int,
) -> list[MeasurementRecord]:
    """
    z_k = h(k, x(t_k)) + R^{1/2} v_k at t_k = t_0 + k * period, k = 1..K.

    Raises:
        ConfigError: period is not a multiple of the truth step
    """
    stride = grid_steps(period, truth.dt, what="period")
    grid = np.arange(stride, truth.times.size, stride)
    r_sqrt = psd_factor(model.meas_r)
    rng = make_rng(rng_seed, MEASUREMENT_NOISE_STREAM)
    noise = rng.standard_normal((grid.size, model.dim_z)) @ r_sqrt.T

    return [
        MeasurementRecord(
            time=float(truth.times[j]),
            index=k,
            value=model.measurement(k, truth.states[j]) + noise[k - 1],
        )
        for k, j in enumerate(grid, start=1)
    ]


def stack_values(records: list[MeasurementRecord]) -> NDArray[np.float64]:
    """K x m matrix of measurement values"""
    if not records:
        return np.empty((0, 0))
    return np.vstack([r.value for r in records])
