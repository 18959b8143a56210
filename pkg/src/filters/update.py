"""
Measurement updates.

Gains are formed with triangular solves against the factor of the innovation
covariance; no explicit inverse is computed. A linear-algebra failure is reported
as Divergence at the measurement time.
"""
from contextlib import contextmanager
from typing import Iterator, Optional

import numpy as np
from numpy.typing import NDArray

from src.exceptions.base import Divergence, NotPositiveDefinite, RankDeficient, SingularFactor
from src.filters.belief import GaussianBelief, SamplePointSet
from src.filters.sample_points import center_scale_x, center_scale_z, generate_sample_points
from src.linalg.factor import block_triangularize, cholesky_lower, solve_lower, symmetrize, triangularize_lower
from src.models.base import ModelSpec


# Roundoff allowance on the posterior spectrum of the conventional derivative-free update
POSITIVITY_TOLERANCE = 1e-12


@contextmanager
def diverges_at(time: float) -> Iterator[None]:
    """Re-raise factorization failures as Divergence(time, cause)"""
    try:
        yield
    except (NotPositiveDefinite, RankDeficient, SingularFactor) as e:
        raise Divergence(time, type(e).__name__) from e


def _gain(re_sqrt: NDArray[np.float64], pxz: NDArray[np.float64]) -> NDArray[np.float64]:
    """K = Pxz Re^{-1} with Re = re_sqrt re_sqrt^T"""
    return solve_lower(re_sqrt, solve_lower(re_sqrt, pxz.T), transpose=True).T


def _scaled_arrays(
    prior: GaussianBelief,
    k: int,
    model: ModelSpec,
    alpha: float,
    points: Optional[SamplePointSet],
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """(Xbar, Zbar, z_hat) about the prior mean"""
    if points is None:
        points = generate_sample_points(prior.mean, prior.factor(), alpha)
    z_hat = model.measurement(k, prior.mean)
    x_bar = center_scale_x(points)
    z_bar = center_scale_z(model.measurement_points(k, points.points), z_hat, alpha)
    return x_bar, z_bar, z_hat


def mu_conventional(
    prior: GaussianBelief,
    z: NDArray[np.float64],
    k: int,
    model: ModelSpec,
    alpha: float,
    points: Optional[SamplePointSet] = None,
) -> GaussianBelief:
    """
    Derivative-free update on the full covariance.

    Args:
        prior: Predicted belief carrying cov
        z: Measurement vector
        k: 1-based measurement index
        points: Sample points already available from the time update; generated
            from the prior otherwise

    Raises:
        Divergence: Re or the posterior covariance is not positive definite
    """
    with diverges_at(prior.time):
        x_bar, z_bar, z_hat = _scaled_arrays(prior, k, model, alpha, points)
        re = z_bar @ z_bar.T + model.meas_r
        re_sqrt = cholesky_lower(re)
        gain = _gain(re_sqrt, x_bar @ z_bar.T)

        mean = prior.mean + gain @ (z - z_hat)
        cov = symmetrize(prior.covariance - gain @ re @ gain.T)
        _check_positive(cov)
    return GaussianBelief(time=prior.time, mean=mean, cov=cov)


def mu_sr_two_qr(
    prior: GaussianBelief,
    z: NDArray[np.float64],
    k: int,
    model: ModelSpec,
    alpha: float,
    points: Optional[SamplePointSet] = None,
) -> GaussianBelief:
    """Square-root update with separate triangularizations for Re^{1/2} and P^{1/2}"""
    with diverges_at(prior.time):
        x_bar, z_bar, z_hat = _scaled_arrays(prior, k, model, alpha, points)
        r_sqrt = model.meas_cov_sqrt
        re_sqrt = triangularize_lower(np.hstack((z_bar, r_sqrt)))
        gain = _gain(re_sqrt, x_bar @ z_bar.T)

        mean = prior.mean + gain @ (z - z_hat)
        chol = triangularize_lower(np.hstack((x_bar - gain @ z_bar, gain @ r_sqrt)))
    return GaussianBelief(time=prior.time, mean=mean, chol=chol)


def mu_sr_block_qr(
    prior: GaussianBelief,
    z: NDArray[np.float64],
    k: int,
    model: ModelSpec,
    alpha: float,
    points: Optional[SamplePointSet] = None,
) -> GaussianBelief:
    """Square-root update read off one block triangularization; K = pxz_bar Re^{-1/2}"""
    with diverges_at(prior.time):
        x_bar, z_bar, z_hat = _scaled_arrays(prior, k, model, alpha, points)
        re_sqrt, pxz_bar, chol = block_triangularize(z_bar, x_bar, model.meas_cov_sqrt)
        gain = solve_lower(re_sqrt, pxz_bar.T, transpose=True).T

        mean = prior.mean + gain @ (z - z_hat)
    return GaussianBelief(time=prior.time, mean=mean, chol=chol)


def mu_std_ekf(
    prior: GaussianBelief,
    z: NDArray[np.float64],
    k: int,
    model: ModelSpec,
) -> GaussianBelief:
    """
    Classic EKF update linearized with the measurement Jacobian at the prior mean.

    Only the posterior variances are checked; a posterior that is indefinite off
    the diagonal is carried on until Re has no Cholesky factor.
    """
    with diverges_at(prior.time):
        h = model.measurement_jacobian(k, prior.mean)
        cov = prior.covariance
        re = h @ cov @ h.T + model.meas_r
        re_sqrt = cholesky_lower(re)
        gain = _gain(re_sqrt, cov @ h.T)

        mean = prior.mean + gain @ (z - model.measurement(k, prior.mean))
        cov = symmetrize(cov - gain @ re @ gain.T)
        _check_diagonal(cov)
    return GaussianBelief(time=prior.time, mean=mean, cov=cov)


def _check_diagonal(cov: NDArray[np.float64]) -> None:
    """A covariance with a negative or non-finite variance cannot be valid"""
    diag = np.diag(cov)
    bad = ~np.isfinite(diag) | (diag < 0.0)
    if bad.any() or not np.isfinite(cov).all():
        raise NotPositiveDefinite(int(np.argmax(bad)))


def _check_positive(cov: NDArray[np.float64]) -> None:
    """Smallest eigenvalue may dip below zero by at most POSITIVITY_TOLERANCE times the largest"""
    _check_diagonal(cov)
    eigs = np.linalg.eigvalsh(cov)
    if eigs[0] < -POSITIVITY_TOLERANCE * abs(eigs[-1]):
        raise NotPositiveDefinite(int(np.argmin(np.diag(cov))))
