"""Adaptive step-size driver shared by the embedded pairs"""
from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from src.exceptions.base import ShapeMismatch, StepLimitExceeded, StepUnderflow
from src.odesolve.options import OdeOptions, OdeStats


RhsFunction = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]
StepHook = Callable[[float, float], None]

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# Smallest admissible step, relative to the interval length
UNDERFLOW_RATIO = 1e-14


class AdaptiveIntegrator(ABC):
    """
    One integration of y' = rhs(t, y) over [t_a, t_b].

    Subclasses supply a trial step returning (y_new, error_estimate). The driver
    accepts a step when the RMS of err_i / (abs_tol_i + rel_tol_i * max(|y_i|, |y_new_i|))
    is at most 1 and never lets h exceed opts.max_step. A trial whose stage
    argument or stage derivative is not finite is rejected like one with a large
    error. Instances are single use.
    """

    error_exponent: float = 0.2

    def __init__(
        self,
        rhs: RhsFunction,
        y0: NDArray[np.float64],
        t_span: tuple[float, float],
        opts: OdeOptions,
        step_hook: Optional[StepHook] = None,
    ):
        self.rhs = rhs
        self.y0 = np.array(y0, dtype=float)
        self.t_a, self.t_b = float(t_span[0]), float(t_span[1])
        self.opts = opts
        self.step_hook = step_hook
        self.abs_tol = self._tolerance(opts.abs_tol, "abs_tol")
        self.rel_tol = self._tolerance(opts.rel_tol, "rel_tol")

        self.accepted_steps = 0
        self.rejected_steps = 0
        self.rhs_evaluations = 0
        self.jacobian_evaluations = 0

    def _tolerance(self, tol, label: str) -> NDArray[np.float64]:
        arr = np.asarray(tol, dtype=float)
        if arr.ndim and arr.shape != self.y0.shape:
            raise ShapeMismatch(f"{label} has {arr.size} entries, state has {self.y0.size}")
        return arr

    def eval_rhs(self, t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Counted right-hand side evaluation"""
        self.rhs_evaluations += 1
        return np.asarray(self.rhs(t, y), dtype=float)

    def eval_stage(self, t: float, y: NDArray[np.float64]) -> Optional[NDArray[np.float64]]:
        """Rhs at a trial stage; None when the argument or the derivative is not finite"""
        if not np.isfinite(y).all():
            return None
        f = self.eval_rhs(t, y)
        return f if np.isfinite(f).all() else None

    @staticmethod
    def rejected_trial(y: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return y, np.full(y.size, np.inf)

    def error_norm(self, err: NDArray[np.float64], y: NDArray[np.float64], y_new: NDArray[np.float64]) -> float:
        scale = self.abs_tol + self.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        return norm if np.isfinite(norm) else np.inf

    def step_factor(self, err_norm: float) -> float:
        if err_norm == 0.0:
            return MAX_FACTOR
        if not np.isfinite(err_norm):
            return MIN_FACTOR
        return min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err_norm ** (-self.error_exponent)))

    @abstractmethod
    def start(self, t: float, y: NDArray[np.float64]) -> None:
        """Prepare per-point data at a new accepted point"""

    @abstractmethod
    def attempt(self, t: float, y: NDArray[np.float64], h: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Trial step of length h; returns (y_new, local error estimate)"""

    @abstractmethod
    def accept(self, t_new: float, y_new: NDArray[np.float64]) -> None:
        """Carry data from an accepted trial into the next step"""

    def stats(self) -> OdeStats:
        return OdeStats(
            accepted_steps=self.accepted_steps,
            rejected_steps=self.rejected_steps,
            rhs_evaluations=self.rhs_evaluations,
            jacobian_evaluations=self.jacobian_evaluations,
        )

    def solve(self) -> tuple[NDArray[np.float64], OdeStats]:
        t, y = self.t_a, self.y0.copy()
        span = self.t_b - self.t_a
        h_min = UNDERFLOW_RATIO * span
        h = self.opts.initial_step or min(self.opts.max_step, 0.01 * span)
        rejected_last = False

        self.start(t, y)
        while t < self.t_b:
            if self.accepted_steps + self.rejected_steps >= self.opts.max_steps:
                raise StepLimitExceeded(t, self.opts.max_steps)

            h = min(h, self.opts.max_step)
            remaining = self.t_b - t
            last = h >= remaining or remaining - h < h_min
            if last:
                h = remaining
            if h < h_min:
                raise StepUnderflow(t, h)

            y_new, err = self.attempt(t, y, h)
            err_norm = self.error_norm(err, y, y_new)

            if err_norm <= 1.0:
                t_new = self.t_b if last else t + h
                self.accepted_steps += 1
                if self.step_hook is not None:
                    self.step_hook(t, h)
                t, y = t_new, y_new
                self.accept(t, y)

                factor = self.step_factor(err_norm)
                if rejected_last:
                    factor = min(factor, 1.0)
                rejected_last = False
            else:
                self.rejected_steps += 1
                factor = min(self.step_factor(err_norm), 1.0)
                rejected_last = True
            h *= factor

        return y, self.stats()
