"""Euler-Maruyama truth trajectories"""
import csv
import logging
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.exceptions.base import ConfigError, NonFiniteState, ReportIoError
from src.linalg.factor import psd_factor
from src.models.base import ModelSpec
from src.sim.random import INITIAL_STATE_STREAM, PROCESS_NOISE_STREAM, make_rng


logger = logging.getLogger(__name__)

# Relative slack when checking that a step divides an interval
GRID_TOLERANCE = 1e-9


def grid_steps(length: float, step: float, what: str = "horizon") -> int:
    """Number of steps of size step in length; they must divide within rounding"""
    if step <= 0 or length <= 0:
        raise ConfigError(f"Step and {what} must be positive", field=what)
    count = int(round(length / step))
    if count < 1 or abs(count * step - length) > GRID_TOLERANCE * length:
        raise ConfigError(f"{what} {length} is not a multiple of {step}", field=what)
    return count


class Trajectory(BaseModel):
    """States on a uniform time grid; arrays are read-only"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    states: np.ndarray

    @field_validator("times", "states", mode="before")
    @classmethod
    def freeze(cls, v):
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def equal_lengths(self):
        if self.states.ndim != 2 or self.states.shape[0] != self.times.size:
            raise ValueError(f"{self.times.size} times but states of shape {self.states.shape}")
        return self

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if self.times.size > 1 else 0.0

    def index_of(self, t: float) -> int:
        """Grid index of time t"""
        return int(round((t - self.times[0]) / self.dt))

    def at_times(self, times) -> NDArray[np.float64]:
        """States at the given grid times, one row each"""
        return self.states[[self.index_of(t) for t in times]]

    def to_csv(self, path: str | Path) -> None:
        """Write columns t, x1..xn"""
        n = self.states.shape[1]
        try:
            with open(path, "w", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(["t"] + [f"x{i + 1}" for i in range(n)])
                for t, x in zip(self.times, self.states):
                    writer.writerow([repr(float(t))] + [repr(float(v)) for v in x])
        except OSError as e:
            raise ReportIoError(str(path), e.strerror or str(e)) from e


def initial_state(model: ModelSpec, seed: int, sample: bool = False) -> NDArray[np.float64]:
    """x(0): the prior mean, or a draw from N(x0_mean, x0_cov) when sample is set"""
    if not sample:
        return np.array(model.x0_mean)
    rng = make_rng(seed, INITIAL_STATE_STREAM)
    return model.x0_mean + psd_factor(model.x0_cov) @ rng.standard_normal(model.dim_x)


def euler_maruyama(
    model: ModelSpec,
    x0: NDArray[np.float64],
    dt: float,
    horizon: float,
    rng_seed: int,
    t0: float = 0.0,
) -> Trajectory:
    """
    x_{j+1} = x_j + f(t_j, x_j) dt + G (Q dt)^{1/2} w_j on [t0, t0 + horizon].

    Raises:
        NonFiniteState: the state overflowed
        ConfigError: dt does not divide horizon
    """
    steps = grid_steps(horizon, dt)
    noise_sqrt = model.diffusion_g @ psd_factor(model.noise_q * dt)
    rng = make_rng(rng_seed, PROCESS_NOISE_STREAM)
    noise = rng.standard_normal((steps, noise_sqrt.shape[1])) @ noise_sqrt.T

    times = t0 + dt * np.arange(steps + 1)
    states = np.empty((steps + 1, model.dim_x))
    x = np.array(x0, dtype=float)
    states[0] = x
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(steps):
            x = x + model.drift(times[j], x) * dt + noise[j]
            if not np.isfinite(x).all():
                raise NonFiniteState(float(times[j + 1]))
            states[j + 1] = x
    return Trajectory(times=times, states=states)


def simulate_truth(
    model: ModelSpec,
    dt: float,
    horizon: float,
    rng_seed: int,
    sample_initial_state: bool = False,
    refinements: int = 0,
) -> Trajectory:
    """
    Truth trajectory with an optional dt fallback.

    On NonFiniteState the step is divided by 10 and the run repeated, at most
    refinements times.
    """
    x0 = initial_state(model, rng_seed, sample_initial_state)
    attempt_dt = dt
    for attempt in range(refinements + 1):
        try:
            return euler_maruyama(model, x0, attempt_dt, horizon, rng_seed)
        except NonFiniteState as e:
            if attempt == refinements:
                raise
            logger.warning(f"{model.name}: truth diverged at t={e.t:.4g} with dt={attempt_dt:g}, retrying with dt={attempt_dt / 10:g}")
            attempt_dt /= 10
