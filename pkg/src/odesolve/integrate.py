"""Single-interval integration entry point"""
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from src.exceptions.base import ShapeMismatch
from src.odesolve.dopri import DormandPrince45
from src.odesolve.options import OdeMethod, OdeOptions, OdeStats
from src.odesolve.rosenbrock import Rosenbrock23
from src.odesolve.stepper import AdaptiveIntegrator, RhsFunction, StepHook


INTEGRATORS: dict[OdeMethod, type[AdaptiveIntegrator]] = {
    OdeMethod.NONSTIFF_RK45: DormandPrince45,
    OdeMethod.STIFF_IMPLICIT: Rosenbrock23,
}


def integrate(
    rhs: RhsFunction,
    y0: NDArray[np.float64],
    t_span: tuple[float, float],
    opts: Optional[OdeOptions] = None,
    step_hook: Optional[StepHook] = None,
) -> tuple[NDArray[np.float64], OdeStats]:
    """
    Integrate y' = rhs(t, y) from t_span[0] to t_span[1].

    Args:
        rhs: Right-hand side; exceptions it raises propagate unchanged
        y0: Finite initial state (flat vector)
        t_span: (t_a, t_b) with t_b > t_a
        opts: Tolerances, step caps and method
        step_hook: Called as step_hook(t, h) for every accepted step

    Returns:
        Tuple of (state at t_b, step statistics)

    Raises:
        StepUnderflow: Step size driven below 1e-14 * (t_b - t_a)
        StepLimitExceeded: More than opts.max_steps trial steps
    """
    opts = opts or OdeOptions()
    y0 = np.asarray(y0, dtype=float)
    if y0.ndim != 1:
        raise ShapeMismatch(f"Initial state must be a flat vector, got shape {y0.shape}")
    if not np.isfinite(y0).all():
        raise ValueError("Initial state must be finite")
    if not t_span[1] > t_span[0]:
        raise ValueError(f"Empty integration interval {t_span}")

    integrator = INTEGRATORS[opts.method](rhs, y0, t_span, opts, step_hook)
    return integrator.solve()
