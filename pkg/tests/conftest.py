"""pytest configuration and fixtures"""
import numpy as np
import pytest

from src.models.cstr import CstrModel
from src.models.lti import LtiModel, lti_oracle_model
from src.odesolve.options import OdeOptions
from src.sim.measurements import synthesize_measurements
from src.sim.truth import simulate_truth


@pytest.fixture(name="rng")
def rng_fixture() -> np.random.Generator:
    """Deterministic generator for random test instances"""
    return np.random.default_rng(20240607)


@pytest.fixture(name="spd_matrix")
def spd_matrix_fixture(rng):
    """Factory for well-conditioned SPD matrices B B^T + 3 I"""
    def make(n: int) -> np.ndarray:
        b = rng.standard_normal((n, n))
        return b @ b.T + 3.0 * np.eye(n)
    return make


@pytest.fixture(name="lower_factor")
def lower_factor_fixture(rng):
    """Factory for lower triangular factors with diagonal in [1, 2]"""
    def make(n: int) -> np.ndarray:
        s = np.tril(rng.standard_normal((n, n)), -1)
        return s + np.diag(1.0 + rng.random(n))
    return make


@pytest.fixture(name="lti_model")
def lti_model_fixture() -> LtiModel:
    """Default damped oscillator"""
    return LtiModel()


@pytest.fixture(name="drift_free_model")
def drift_free_model_fixture() -> LtiModel:
    """Scalar random walk: f = 0, G Q G^T = 1"""
    return lti_oracle_model(a=[[0.0]], h=[[1.0]], noise_q=[[1.0]], meas_r=[[0.5]], x0_cov=[[1.0]])


@pytest.fixture(name="cstr_model")
def cstr_model_fixture() -> CstrModel:
    return CstrModel()


@pytest.fixture(name="precise_opts")
def precise_opts_fixture() -> OdeOptions:
    """LET = 1e-8"""
    return OdeOptions.from_let(1e-8)


@pytest.fixture(name="lti_data")
def lti_data_fixture(lti_model):
    """Truth and 50 measurements of the default LTI model (period 0.1 s)"""
    truth = simulate_truth(lti_model, 1e-3, 5.0, rng_seed=7)
    return truth, synthesize_measurements(truth, lti_model, 0.1, rng_seed=7)
