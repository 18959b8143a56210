"""
Linearly implicit Rosenbrock 2(3) pair for stiff problems.

The method is L-stable; each step solves three linear systems with the same
iteration matrix W = I - h*d*J. J and the time derivative of the rhs are formed by
forward differences once per accepted point and reused across rejected trials.
"""
import numpy as np
from numpy.typing import NDArray
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import approx_fprime

from src.odesolve.stepper import AdaptiveIntegrator


D = 1.0 / (2.0 + np.sqrt(2.0))
E32 = 6.0 + np.sqrt(2.0)
# Forward-difference increment relative to max(|y_i|, 1)
FD_STEP = np.sqrt(np.finfo(float).eps)


class Rosenbrock23(AdaptiveIntegrator):
    """Second-order solution with a third-order error estimate"""

    error_exponent = 1 / 3

    def start(self, t: float, y: NDArray[np.float64]) -> None:
        self._f = self.eval_rhs(t, y)
        self._linearize(t, y)

    def _linearize(self, t: float, y: NDArray[np.float64]) -> None:
        eps = FD_STEP * np.maximum(np.abs(y), 1.0)
        jac = approx_fprime(y, lambda v: self.eval_rhs(t, v), eps)
        self._jac = np.atleast_2d(jac).reshape(y.size, y.size)

        dt = FD_STEP * max(abs(t), 1.0)
        self._dfdt = (self.eval_rhs(t + dt, y) - self._f) / dt
        self.jacobian_evaluations += 1

    def attempt(self, t: float, y: NDArray[np.float64], h: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        n = y.size
        w = np.eye(n) - h * D * self._jac
        if not np.isfinite(w).all():
            return self.rejected_trial(y)
        lu = lu_factor(w, check_finite=False)

        f0 = self._f
        k1 = lu_solve(lu, f0 + h * D * self._dfdt, check_finite=False)
        f1 = self.eval_stage(t + 0.5 * h, y + 0.5 * h * k1)
        if f1 is None:
            return self.rejected_trial(y)
        k2 = lu_solve(lu, f1 - k1, check_finite=False) + k1
        y_new = y + h * k2
        f2 = self.eval_stage(t + h, y_new)
        if f2 is None:
            return self.rejected_trial(y)
        k3 = lu_solve(
            lu,
            f2 - E32 * (k2 - f1) - 2.0 * (k1 - f0) + h * D * self._dfdt,
            check_finite=False,
        )
        self._f_new = f2
        return y_new, (h / 6.0) * (k1 - 2.0 * k2 + k3)

    def accept(self, t_new: float, y_new: NDArray[np.float64]) -> None:
        self._f = self._f_new
        if t_new < self.t_b:
            self._linearize(t_new, y_new)
