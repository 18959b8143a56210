"""Unit tests for the benchmark models"""
import numpy as np
import pytest
from pydantic import ValidationError

from src.exceptions.base import ConfigError
from src.models.base import fd_jacobian
from src.models.cstr import CstrIllCondModel, CstrModel
from src.models.lti import LtiModel, lti_oracle_model
from src.models.registry import build_model
from src.models.vanderpol import VanDerPolModel


def test_cstr_drift_at_feed(cstr_model):
    """Test the drift at the nominal mean, where the flow terms cancel"""
    np.testing.assert_allclose(cstr_model.drift(0.0, np.array([0.5, 0.05, 0.0])), [-0.25, 0.249, 0.2505])


def test_cstr_drift_at_origin_is_pure_inflow(cstr_model):
    """Test r(0) = 0 leaves (F/V) c_f"""
    np.testing.assert_allclose(cstr_model.drift(0.0, np.zeros(3)), [0.005, 0.0005, 0.0], atol=1e-15)


def test_cstr_rate_signs(cstr_model):
    """Test the reaction rates at [0, 1, 1]"""
    x = np.array([0.0, 1.0, 1.0])
    np.testing.assert_allclose(cstr_model.rates(x), [-0.05, 0.19])
    expected = np.array([0.005, 0.0005 - 0.01, -0.01]) + np.array([0.05, -0.05 - 0.38, -0.05 + 0.19])
    np.testing.assert_allclose(cstr_model.drift(0.0, x), expected)


@pytest.mark.parametrize("rates, x, expected", [
    ({"k2": 0.0, "k3": 0.0, "k4": 0.0}, [1.0, 0.0, 0.0], [-0.505, 0.5005, 0.5]),
    ({"k1": 0.0, "k2": 0.0, "k4": 0.0}, [0.0, 1.0, 0.0], [0.005, -0.4095, 0.2]),
])
def test_cstr_reactions(rates, x, expected):
    """Test A -> B + C and 2B -> C each on their own"""
    np.testing.assert_allclose(CstrModel(**rates).drift(0.0, np.array(x)), expected)


def test_cstr_measurement(cstr_model):
    """Test total pressure RT (cA + cB + cC)"""
    np.testing.assert_allclose(cstr_model.measurement(1, np.array([0.5, 0.05, 0.0])), [18.062])
    np.testing.assert_array_equal(cstr_model.measurement(1, np.zeros(3)), [0.0])


def test_cstr_model_shape(cstr_model):
    """Test dimensions and noise defaults"""
    assert cstr_model.dim_x == 3
    assert cstr_model.dim_z == 1
    np.testing.assert_allclose(cstr_model.process_noise_cov, 1e-3 * np.eye(3))
    np.testing.assert_allclose(cstr_model.meas_cov_sqrt, [[0.25]])


def test_illcond_measurement():
    """Test the nearly collinear pressure channels"""
    rt = CstrModel().rt
    np.testing.assert_allclose(CstrIllCondModel(delta=1.0).measurement(1, np.array([1.0, 0.0, 0.0])), [rt, rt])
    np.testing.assert_allclose(
        CstrIllCondModel(delta=1e-3).measurement(1, np.array([0.0, 0.0, 1.0])), [32.84, 32.87284]
    )


def test_illcond_measurement_covariance_tracks_delta():
    """Test R = delta^2 I when R is not given"""
    model = CstrIllCondModel(delta=1e-2)
    np.testing.assert_allclose(model.meas_r, 1e-4 * np.eye(2))
    assert model.dim_z == 2


def test_illcond_drift_matches_cstr():
    """Test the second channel changes only the measurement"""
    x = np.array([0.3, 0.1, 0.2])
    np.testing.assert_array_equal(CstrIllCondModel(delta=1e-6).drift(0.0, x), CstrModel().drift(0.0, x))


@pytest.mark.parametrize(
    "x, lam, expected",
    [
        ([2.0, 0.0], 1.0, [0.0, -2.0]),
        ([0.0, 0.0], 1.0, [0.0, 0.0]),
        ([0.0, 1.0], 10.0, [1.0, 10.0]),
    ],
)
def test_vanderpol_drift(x, lam, expected):
    """Test Van der Pol drift values"""
    np.testing.assert_allclose(VanDerPolModel(lam=lam).drift(0.0, np.array(x)), expected)


def test_vanderpol_noise_enters_second_component():
    """Test G = diag(0, 1) zeroes the first row of G Q G^T"""
    np.testing.assert_array_equal(VanDerPolModel().process_noise_cov, np.diag([0.0, 1.0]))


def test_vanderpol_rejects_bad_lambda():
    """Test negative and infinite stiffness parameters"""
    with pytest.raises(ValidationError):
        VanDerPolModel(lam=-1.0)
    with pytest.raises(ValidationError):
        VanDerPolModel(lam=float("inf"))


def test_lti_oracle_models():
    """Test the random walk and rotation models"""
    walk = lti_oracle_model(a=np.zeros((2, 2)), h=np.eye(2))
    np.testing.assert_array_equal(walk.drift(0.0, np.array([3.0, -1.0])), [0.0, 0.0])
    assert walk.dim_z == 2

    rotation = lti_oracle_model(a=[[0.0, 1.0], [-1.0, 0.0]], h=[[1.0, 0.0]])
    np.testing.assert_array_equal(rotation.drift(0.0, np.array([1.0, 0.0])), [0.0, -1.0])


@pytest.mark.parametrize(
    "model, x",
    [
        (CstrModel(), np.array([0.4, 0.2, 0.1])),
        (CstrIllCondModel(delta=1e-3), np.array([0.5, 0.05, 0.3])),
        (VanDerPolModel(lam=3.0), np.array([1.5, -0.5])),
        (LtiModel(), np.array([0.3, -0.7])),
    ],
)
def test_analytic_jacobians_match_finite_differences(model, x):
    """Test the analytic Jacobians against the forward-difference fallback"""
    np.testing.assert_allclose(
        model.drift_jacobian(0.0, x), fd_jacobian(lambda v: model.drift(0.0, v), x), rtol=1e-5, atol=1e-6
    )
    np.testing.assert_allclose(
        model.measurement_jacobian(1, x), fd_jacobian(lambda v: model.measurement(1, v), x), rtol=1e-5, atol=1e-5
    )


def test_point_evaluation_is_columnwise(cstr_model):
    """Test drift_points and measurement_points apply the model per column"""
    points = np.array([[0.5, 0.0], [0.05, 1.0], [0.0, 1.0]])
    f_points = cstr_model.drift_points(0.0, points)
    assert f_points.shape == (3, 2)
    np.testing.assert_allclose(f_points[:, 0], [-0.25, 0.249, 0.2505])
    np.testing.assert_allclose(cstr_model.measurement_points(1, points), [[18.062, 65.68]])


def test_model_arrays_are_read_only(lti_model):
    """Test model matrices cannot be mutated in place"""
    with pytest.raises(ValueError):
        lti_model.x0_cov[0, 0] = 5.0


class TestModelValidation:
    """Test construction-time checks"""

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], x0_cov=np.eye(3))

    def test_asymmetric_noise(self):
        with pytest.raises(ValidationError):
            lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], noise_q=[[1.0, 0.5], [0.0, 1.0]])

    def test_indefinite_measurement_covariance(self):
        with pytest.raises(ValidationError):
            lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], meas_r=[[-1.0]])

    def test_singular_initial_covariance(self):
        with pytest.raises(ValidationError):
            lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], x0_cov=np.diag([1.0, 0.0]))

    def test_measurement_shape_must_match_r(self):
        with pytest.raises(ValidationError):
            lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], meas_r=np.eye(2))

    def test_singular_noise_is_allowed(self):
        model = lti_oracle_model(a=np.eye(2), h=[[1.0, 0.0]], noise_q=np.zeros((2, 2)), meas_r=[[0.0]])
        np.testing.assert_array_equal(model.process_noise_cov, np.zeros((2, 2)))


def test_registry_builds_models():
    """Test lookup by name with and without a parameter"""
    assert build_model("cstr").name == "cstr"
    assert build_model("cstr-ill", 1e-5).delta == 1e-5
    assert build_model("vdp", 100.0).lam == 100.0
    assert isinstance(build_model("lti-test"), LtiModel)


def test_registry_errors():
    """Test unknown names and invalid parameters become configuration errors"""
    with pytest.raises(ConfigError) as exc_info:
        build_model("pendulum")
    assert exc_info.value.field == "model"
    with pytest.raises(ConfigError) as exc_info:
        build_model("vdp", -3.0)
    assert exc_info.value.field == "param"
