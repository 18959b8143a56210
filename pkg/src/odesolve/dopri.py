"""Dormand-Prince 5(4) embedded explicit Runge-Kutta pair"""
import numpy as np
from numpy.typing import NDArray

from src.odesolve.stepper import AdaptiveIntegrator


# Butcher tableau; the propagating solution is 5th order, the embedded one 4th order
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# Difference of the 5th and 4th order weights (last entry multiplies the FSAL stage)
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])


class DormandPrince45(AdaptiveIntegrator):
    """Seven-stage pair with the first-same-as-last property"""

    error_exponent = 1 / 5

    def start(self, t: float, y: NDArray[np.float64]) -> None:
        self._f = self.eval_rhs(t, y)

    def attempt(self, t: float, y: NDArray[np.float64], h: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        k = np.empty((7, y.size))
        k[0] = self._f
        for i in range(1, 6):
            stage = self.eval_stage(t + C[i] * h, y + h * (A[i] @ k[:i]))
            if stage is None:
                return self.rejected_trial(y)
            k[i] = stage
        y_new = y + h * (B @ k[:6])
        last = self.eval_stage(t + h, y_new)
        if last is None:
            return self.rejected_trial(y)
        k[6] = self._f_new = last
        return y_new, h * (E @ k)

    def accept(self, t_new: float, y_new: NDArray[np.float64]) -> None:
        self._f = self._f_new
