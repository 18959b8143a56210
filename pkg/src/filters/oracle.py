"""Exact discrete Kalman filter for linear time-invariant models"""
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from src.filters.belief import GaussianBelief
from src.linalg.factor import cholesky_lower, solve_lower, symmetrize
from src.models.lti import LtiModel
from src.sim.measurements import MeasurementRecord


def discretize_lti(
    a: NDArray[np.float64],
    gqg: NDArray[np.float64],
    dt: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Transition matrix and process noise covariance of dx = A x dt + G dw over dt.

    Uses one exponential of the block matrix [[-A, GQG^T], [0, A^T]] dt.
    """
    n = a.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -a
    block[:n, n:] = gqg
    block[n:, n:] = a.T
    e = expm(block * dt)
    transition = e[n:, n:].T
    return transition, symmetrize(transition @ e[:n, n:])


def predict_lti(belief: GaussianBelief, model: LtiModel, t_end: float) -> GaussianBelief:
    """Closed-form mean and covariance at t_end"""
    transition, q_d = discretize_lti(model.a, model.process_noise_cov, t_end - belief.time)
    cov = symmetrize(transition @ belief.covariance @ transition.T + q_d)
    return GaussianBelief(time=t_end, mean=transition @ belief.mean, cov=cov)


def exact_kalman_filter(
    model: LtiModel,
    measurements: Sequence[MeasurementRecord],
    t0: float = 0.0,
) -> list[GaussianBelief]:
    """Posterior beliefs, initial belief first, as run_filter orders them"""
    belief = GaussianBelief(time=t0, mean=model.x0_mean, cov=model.x0_cov)
    beliefs = [belief]
    for record in measurements:
        prior = predict_lti(belief, model, record.time)
        cov = prior.covariance
        re = model.h @ cov @ model.h.T + model.meas_r
        re_sqrt = cholesky_lower(re)
        gain = solve_lower(re_sqrt, solve_lower(re_sqrt, model.h @ cov), transpose=True).T
        mean = prior.mean + gain @ (record.value - model.h @ prior.mean)
        belief = GaussianBelief(time=record.time, mean=mean, cov=symmetrize(cov - gain @ re @ gain.T))
        beliefs.append(belief)
    return beliefs
