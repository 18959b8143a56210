"""Unit tests for the adaptive integrators"""
import numpy as np
import pytest
from pydantic import ValidationError

from src.exceptions.base import RhsFailure, ShapeMismatch, StepLimitExceeded, StepUnderflow
from src.odesolve.integrate import integrate
from src.odesolve.options import OdeMethod, OdeOptions, OdeStats


STIFF_RATE = 1e4


def stiff_rhs(t, y):
    return -STIFF_RATE * (y - np.cos(t))


@pytest.mark.parametrize("method", list(OdeMethod))
def test_constant_solution(method):
    """Test y' = 0 keeps y0"""
    opts = OdeOptions(method=method)
    y_end, stats = integrate(lambda t, y: np.zeros_like(y), np.array([1.0, 2.0, 3.0]), (0.0, 2.5), opts)
    np.testing.assert_array_equal(y_end, [1.0, 2.0, 3.0])
    assert stats.accepted_steps >= 1


def test_exponential_decay():
    """Test y' = -y against e^{-1}"""
    y_end, stats = integrate(lambda t, y: -y, np.array([1.0]), (0.0, 1.0), OdeOptions.from_let(1e-8))
    assert abs(y_end[0] - np.exp(-1.0)) <= 1e-6
    assert stats.rhs_evaluations == 1 + 6 * stats.total_steps


@pytest.mark.parametrize("let", [1e-4, 1e-6, 1e-8])
def test_exponential_error_bounded_by_tolerance(let):
    """Test terminal error <= 100 LET"""
    y_end, _ = integrate(lambda t, y: -y, np.array([1.0]), (0.0, 1.0), OdeOptions.from_let(let))
    assert abs(y_end[0] - np.exp(-1.0)) <= 100 * let


def test_tolerance_monotonicity():
    """Test tightening LET never makes the terminal error more than twice as large"""
    errors = []
    for let in [10.0 ** -p for p in range(3, 11)]:
        y_end, _ = integrate(lambda t, y: -y, np.array([1.0]), (0.0, 1.0), OdeOptions.from_let(let))
        errors.append(abs(y_end[0] - np.exp(-1.0)))
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= 2.0 * coarse + 1e-15


def test_rotation():
    """Test y' = A y with a rotation generator over half a turn"""
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    y_end, _ = integrate(lambda t, y: a @ y, np.array([1.0, 0.0]), (0.0, np.pi), OdeOptions.from_let(1e-8))
    np.testing.assert_allclose(y_end, [-1.0, 0.0], atol=1e-5)


@pytest.mark.parametrize("method", list(OdeMethod))
def test_max_step_compliance(method):
    """Test every accepted step respects max_step"""
    steps = []
    opts = OdeOptions.from_let(1e-3, max_step=0.05, method=method)
    integrate(lambda t, y: -y, np.array([1.0]), (0.0, 2.0), opts, step_hook=lambda t, h: steps.append(h))
    assert len(steps) >= 40
    assert max(steps) <= 0.05 + 1e-15


def test_initial_step_is_conservative():
    """Test the first step is min(max_step, 1% of the interval)"""
    steps = []
    integrate(lambda t, y: np.zeros_like(y), np.ones(1), (0.0, 1.0), OdeOptions(),
              step_hook=lambda t, h: steps.append((t, h)))
    assert steps[0] == (0.0, pytest.approx(0.01))


def test_stiff_problem_prefers_implicit_method():
    """Test the Rosenbrock pair needs far fewer steps than the explicit pair on a stiff problem"""
    y0 = np.array([1.0])
    y_stiff, stiff_stats = integrate(stiff_rhs, y0, (0.0, 1.0), OdeOptions.from_let(1e-4, method=OdeMethod.STIFF_IMPLICIT))
    y_rk, rk_stats = integrate(stiff_rhs, y0, (0.0, 1.0), OdeOptions.from_let(1e-4))

    assert stiff_stats.accepted_steps < 500
    assert stiff_stats.jacobian_evaluations >= 1
    assert rk_stats.total_steps > 10 * stiff_stats.total_steps
    assert abs(y_stiff[0] - np.cos(1.0)) < 1e-3
    assert abs(y_rk[0] - np.cos(1.0)) < 1e-3


def test_rosenbrock_accuracy_on_smooth_problem():
    """Test the stiff method on the exponential"""
    y_end, _ = integrate(lambda t, y: -y, np.array([1.0]), (0.0, 1.0),
                         OdeOptions.from_let(1e-6, method=OdeMethod.STIFF_IMPLICIT))
    assert abs(y_end[0] - np.exp(-1.0)) <= 1e-4


def test_rhs_failure_propagates():
    """Test exceptions from the rhs are not swallowed"""
    def failing(t, y):
        if t > 0.5:
            raise RhsFailure(t, ValueError("boom"))
        return -y

    with pytest.raises(RhsFailure) as exc_info:
        integrate(failing, np.array([1.0]), (0.0, 1.0))
    assert exc_info.value.t > 0.5


@pytest.mark.parametrize("method", list(OdeMethod))
def test_non_finite_stage_rejects_the_trial(method):
    """Test a NaN derivative at a trial stage shrinks the step instead of aborting"""
    poisoned = []

    def once_nan(t, y):
        if t > 0.3 and not poisoned:
            poisoned.append(t)
            return np.full_like(y, np.nan)
        return -y

    y_end, stats = integrate(once_nan, np.array([1.0]), (0.0, 1.0), OdeOptions.from_let(1e-8, method=method))
    assert len(poisoned) == 1
    assert stats.rejected_steps >= 1
    assert abs(y_end[0] - np.exp(-1.0)) <= 1e-6


def test_step_underflow_on_finite_time_blowup():
    """Test y' = y^2 from y = 1 cannot be continued past t = 1"""
    with pytest.raises(StepUnderflow):
        integrate(lambda t, y: y ** 2, np.array([1.0]), (0.0, 2.0),
                  OdeOptions(abs_tol=1e-6, rel_tol=1e-6, max_steps=1_000_000))


def test_step_limit():
    """Test the per-call trial step guard"""
    with pytest.raises(StepLimitExceeded) as exc_info:
        integrate(stiff_rhs, np.array([1.0]), (0.0, 1.0), OdeOptions(max_steps=50))
    assert exc_info.value.steps == 50


def test_rejects_bad_input():
    """Test empty interval, non-finite state and invalid options"""
    with pytest.raises(ValueError):
        integrate(lambda t, y: y, np.ones(1), (1.0, 1.0))
    with pytest.raises(ValueError):
        integrate(lambda t, y: y, np.array([np.nan]), (0.0, 1.0))
    with pytest.raises(ValidationError):
        OdeOptions(abs_tol=0.0)


def test_stats_addition():
    """Test counters add component-wise"""
    total = OdeStats(accepted_steps=2, rejected_steps=1) + OdeStats(accepted_steps=3, rhs_evaluations=7)
    assert total.accepted_steps == 5
    assert total.rejected_steps == 1
    assert total.rhs_evaluations == 7
    assert total.total_steps == 6


def test_per_component_tolerances():
    """Test a tighter tolerance on one component tightens that component's error"""
    opts = OdeOptions.from_let(1e-4).scaled([1.0, 1e-4])
    assert opts.abs_tol == pytest.approx((1e-4, 1e-8))
    assert opts.rel_tol == pytest.approx((1e-4, 1e-8))

    y_end, _ = integrate(lambda t, y: -y, np.array([1.0, 1.0]), (0.0, 1.0), opts)
    assert abs(y_end[1] - np.exp(-1.0)) <= 1e-6


def test_tolerance_vector_must_match_state():
    opts = OdeOptions(abs_tol=(1e-6, 1e-6), rel_tol=1e-6)
    with pytest.raises(ShapeMismatch):
        integrate(lambda t, y: -y, np.ones(3), (0.0, 1.0), opts)
    with pytest.raises(ValidationError):
        OdeOptions(abs_tol=(1e-6, 0.0))
    with pytest.raises(ValueError):
        OdeOptions().scaled([1.0, -1.0])
