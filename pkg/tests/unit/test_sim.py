"""Unit tests for truth simulation and measurement synthesis"""
import csv

import numpy as np
import pytest
from scipy.linalg import expm

from src.exceptions.base import ConfigError, NonFiniteState, ReportIoError
from src.models.cstr import CstrModel
from src.models.lti import lti_oracle_model
from src.sim.measurements import MeasurementRecord, stack_values, synthesize_measurements
from src.sim.random import INITIAL_STATE_STREAM, MEASUREMENT_NOISE_STREAM, make_rng, run_seed
from src.sim.truth import Trajectory, euler_maruyama, grid_steps, initial_state, simulate_truth


def noiseless(a, h=None, **kwargs):
    """Linear model with Q = 0 and R = 0"""
    n = np.shape(a)[0]
    h = np.eye(n)[:1] if h is None else h
    return lti_oracle_model(a=a, h=h, noise_q=np.zeros((n, n)), meas_r=np.zeros((len(h), len(h))), **kwargs)


def test_frozen_dynamics_give_constant_trajectory():
    """Test f = 0 and Q = 0"""
    model = noiseless(np.zeros((2, 2)))
    truth = euler_maruyama(model, np.array([1.0, -2.0]), 0.01, 1.0, rng_seed=3)
    assert truth.times.size == 101
    np.testing.assert_array_equal(truth.states, np.tile([1.0, -2.0], (101, 1)))


def test_linear_dynamics_match_matrix_exponential():
    """Test the Euler scheme converges to e^{A t} x0 for dt = 1e-5"""
    a = np.array([[0.0, 1.0], [-1.0, -0.2]])
    truth = euler_maruyama(noiseless(a), np.array([1.0, 0.0]), 1e-5, 1.0, rng_seed=0)
    expected = expm(a) @ np.array([1.0, 0.0])
    assert np.linalg.norm(truth.states[-1] - expected) <= 1e-3 * np.linalg.norm(expected)
    assert truth.times[-1] == pytest.approx(1.0)


def test_brownian_increments_have_unit_variance():
    """Test f = 0, Q = 1 gives Var x(1) = 1 across seeds"""
    model = lti_oracle_model(a=[[0.0]], h=[[1.0]], noise_q=[[1.0]])
    finals = np.array([euler_maruyama(model, np.zeros(1), 0.01, 1.0, rng_seed=s).states[-1, 0] for s in range(2000)])
    assert abs(finals.mean()) < 0.1
    assert finals.var() == pytest.approx(1.0, abs=0.1)


def test_same_seed_same_trajectory(cstr_model):
    """Test reproducibility and stream separation"""
    first = simulate_truth(cstr_model, 1e-3, 1.0, rng_seed=11)
    second = simulate_truth(cstr_model, 1e-3, 1.0, rng_seed=11)
    other = simulate_truth(cstr_model, 1e-3, 1.0, rng_seed=12)
    np.testing.assert_array_equal(first.states, second.states)
    assert not np.array_equal(first.states, other.states)


def test_streams_are_independent():
    a = make_rng(5, MEASUREMENT_NOISE_STREAM).standard_normal(4)
    b = make_rng(5, INITIAL_STATE_STREAM).standard_normal(4)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(a, make_rng(5, MEASUREMENT_NOISE_STREAM).standard_normal(4))
    assert run_seed(42, 3) == 45


def test_initial_state_default_and_sampled(cstr_model):
    """Test the prior mean unless sampling is requested"""
    np.testing.assert_array_equal(initial_state(cstr_model, 1), cstr_model.x0_mean)
    sampled = initial_state(cstr_model, 1, sample=True)
    assert sampled.shape == (3,)
    assert not np.array_equal(sampled, cstr_model.x0_mean)
    np.testing.assert_array_equal(sampled, initial_state(cstr_model, 1, sample=True))


def test_trajectory_arrays_are_read_only(cstr_model):
    truth = simulate_truth(cstr_model, 1e-2, 0.1, rng_seed=0)
    with pytest.raises(ValueError):
        truth.states[0, 0] = 1.0


def test_blowup_raises_non_finite_state():
    """Test unbounded exponential growth overflows"""
    model = noiseless(np.array([[1e3]]))
    with pytest.raises(NonFiniteState):
        euler_maruyama(model, np.array([1.0]), 0.1, 100.0, rng_seed=0)


def test_refinement_retries_with_smaller_step(caplog):
    """Test the dt fallback: a step that is unstable at dt passes at dt / 10"""
    # Explicit Euler on x' = -300 x is unstable for dt = 0.01, stable for 0.001
    model = noiseless(np.array([[-300.0]]))
    with pytest.raises(NonFiniteState):
        simulate_truth(model, 0.01, 20.0, rng_seed=0)
    truth = simulate_truth(model, 0.01, 20.0, rng_seed=0, refinements=1)
    assert truth.dt == pytest.approx(0.001)
    assert "retrying" in caplog.text


def test_grid_must_divide_horizon():
    assert grid_steps(30.0, 5.0) == 6
    with pytest.raises(ConfigError):
        grid_steps(1.0, 0.3)
    with pytest.raises(ConfigError):
        grid_steps(1.0, 0.0)


def test_noise_free_measurements_are_exact():
    """Test R = 0 gives z_k = h(k, x(t_k))"""
    model = noiseless(np.array([[0.0, 1.0], [-1.0, 0.0]]), x0_mean=[1.0, 0.0])
    truth = euler_maruyama(model, model.x0_mean, 1e-3, 1.0, rng_seed=0)
    records = synthesize_measurements(truth, model, 0.1, rng_seed=0)
    for record in records:
        np.testing.assert_array_equal(record.value, truth.at_times([record.time])[0][:1])


def test_cstr_noise_free_measurement():
    """Test the reactor pressure at the feed state"""
    model = CstrModel(noise_q=np.zeros((3, 3)), meas_r=[[0.0]])
    truth = Trajectory(times=[0.0, 1.0], states=[[0.5, 0.05, 0.0], [0.5, 0.05, 0.0]])
    records = synthesize_measurements(truth, model, 1.0, rng_seed=0)
    assert len(records) == 1
    np.testing.assert_allclose(records[0].value, [18.062])


def test_measurement_count_and_indices(cstr_model):
    """Test horizon 30 s at a 5 s period gives k = 1..6 at 5, 10, ..., 30"""
    truth = simulate_truth(cstr_model, 1e-3, 30.0, rng_seed=1)
    records = synthesize_measurements(truth, cstr_model, 5.0, rng_seed=1)
    assert [r.index for r in records] == [1, 2, 3, 4, 5, 6]
    np.testing.assert_allclose([r.time for r in records], [5.0, 10.0, 15.0, 20.0, 25.0, 30.0])
    assert stack_values(records).shape == (6, 1)


def test_measurement_period_must_fit_grid(cstr_model):
    truth = simulate_truth(cstr_model, 1e-2, 1.0, rng_seed=1)
    with pytest.raises(ConfigError):
        synthesize_measurements(truth, cstr_model, 0.015, rng_seed=1)


def test_measurement_record_validation():
    with pytest.raises(ValueError):
        MeasurementRecord(time=1.0, index=0, value=[1.0])
    assert stack_values([]).shape == (0, 0)


def test_trajectory_csv_export(tmp_path, cstr_model):
    """Test the t, x1..xn columns"""
    truth = simulate_truth(cstr_model, 1e-2, 0.05, rng_seed=2)
    path = tmp_path / "truth.csv"
    truth.to_csv(path)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["t", "x1", "x2", "x3"]
    assert len(rows) == 7
    assert float(rows[-1][1]) == truth.states[-1, 0]

    with pytest.raises(ReportIoError):
        truth.to_csv(tmp_path / "missing" / "truth.csv")
