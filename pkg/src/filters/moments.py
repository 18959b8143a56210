"""
Right-hand sides of the prediction equations.

Every function returns the time derivative of the variant's state; linear-algebra
failures (NotPositiveDefinite, SingularFactor) propagate to the caller.
"""
import numpy as np
from numpy.typing import NDArray

from src.filters.belief import recover_factor
from src.filters.sample_points import point_matrix
from src.linalg.factor import cholesky_lower, phi, solve_lower, symmetrize
from src.models.base import ModelSpec


def moment_matrix(
    t: float,
    mean: NDArray[np.float64],
    chol: NDArray[np.float64],
    model: ModelSpec,
    alpha: float,
    points: NDArray[np.float64] | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Mean drift f(t, mean) and M = (alpha/sqrt(n)) (S Fbar^T + Fbar S^T) + G Q G^T.

    Fbar holds f(t, point_i) - f(t, mean) column by column; points default to
    those generated from (mean, chol).
    """
    n = mean.size
    if points is None:
        points = point_matrix(mean, chol, alpha)
    f_mean = model.drift(t, mean)
    f_bar = model.drift_points(t, points) - f_mean[:, None]
    scale = alpha / np.sqrt(n)
    cross = scale * (chol @ f_bar.T)
    return f_mean, cross + cross.T + model.process_noise_cov


def factor_derivative(chol: NDArray[np.float64], m: NDArray[np.float64]) -> NDArray[np.float64]:
    """S Phi(S^{-1} M S^{-T}), the derivative of a lower factor whose square moves with M"""
    inner = solve_lower(chol, solve_lower(chol, m).T)
    return chol @ phi(inner)


def mde_rhs(
    t: float,
    mean: NDArray[np.float64],
    cov: NDArray[np.float64],
    model: ModelSpec,
    alpha: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Derivative-free moment equations; the covariance is factored on every call"""
    chol = cholesky_lower(cov)
    return moment_matrix(t, mean, chol, model, alpha)


def sr_mde_rhs(
    t: float,
    mean: NDArray[np.float64],
    chol: NDArray[np.float64],
    model: ModelSpec,
    alpha: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Square-root moment equations on the lower factor"""
    f_mean, m = moment_matrix(t, mean, chol, model, alpha)
    return f_mean, factor_derivative(chol, m)


def spde_rhs(
    t: float,
    mean: NDArray[np.float64],
    points: NDArray[np.float64],
    model: ModelSpec,
    alpha: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64], float]:
    """
    Sample-point equations.

    The factor is recovered as (alpha/sqrt(n)) tril(points - mean 1^T); the
    returned float is the max-norm of the strictly-upper part tril discarded.
    """
    chol, residue = recover_factor(points, mean, alpha)
    f_mean, m = moment_matrix(t, mean, chol, model, alpha, points=points)
    d_points = f_mean[:, None] + (np.sqrt(mean.size) / alpha) * factor_derivative(chol, m)
    return f_mean, d_points, residue


def std_ekf_rhs(
    t: float,
    mean: NDArray[np.float64],
    cov: NDArray[np.float64],
    model: ModelSpec,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Classic linearized covariance equation F P + P F^T + G Q G^T"""
    jac = model.drift_jacobian(t, mean)
    return model.drift(t, mean), symmetrize(jac @ cov + cov @ jac.T) + model.process_noise_cov

