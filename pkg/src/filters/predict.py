"""Time update: integrate the variant's packed state over one sampling interval"""
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from src.exceptions.base import (
    CdekfException,
    Divergence,
    IntegrationError,
    NotPositiveDefinite,
    RhsFailure,
    root_cause_name,
)
from src.filters.belief import GaussianBelief, SamplePointSet
from src.filters.moments import mde_rhs, spde_rhs, sr_mde_rhs, std_ekf_rhs
from src.filters.sample_points import generate_sample_points
from src.filters.variant import FilterVariant, PredictionEncoding
from src.linalg.factor import symmetrize
from src.linalg.reshape import pack_columns, unpack_columns
from src.models.base import ModelSpec
from src.odesolve.integrate import integrate
from src.odesolve.options import OdeOptions, OdeStats


class Prediction(BaseModel):
    """Predicted belief plus the sample points the update may reuse"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    belief: GaussianBelief
    points: Optional[SamplePointSet] = None
    stats: OdeStats = OdeStats()
    tril_residue: float = 0.0


def _packed_rhs(
    encoding: PredictionEncoding,
    model: ModelSpec,
    alpha: float,
    n: int,
) -> Callable[[float, NDArray[np.float64]], NDArray[np.float64]]:
    """Flat-vector rhs for the integrator; factorization failures become RhsFailure"""

    def rhs(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        mean, mat = unpack_columns(y, n)
        try:
            if encoding is PredictionEncoding.COVARIANCE_JACOBIAN:
                d_mean, d_mat = std_ekf_rhs(t, mean, mat, model)
            elif encoding is PredictionEncoding.COVARIANCE:
                d_mean, d_mat = mde_rhs(t, mean, mat, model, alpha)
            elif encoding is PredictionEncoding.CHOLESKY:
                d_mean, d_mat = sr_mde_rhs(t, mean, mat, model, alpha)
            else:
                d_mean, d_mat, _ = spde_rhs(t, mean, mat, model, alpha)
        except CdekfException as e:
            raise RhsFailure(t, e) from e
        return pack_columns(d_mean, d_mat)

    return rhs


def point_tolerance_weights(n: int, alpha: float) -> NDArray[np.float64]:
    """
    Tolerance weights for a packed [mean | points] state.

    Point offsets are the factor shrunk by sqrt(n) / alpha, so the point columns
    get tolerances shrunk by the same amount; the factor recovered from them
    is then held to the accuracy of a directly integrated factor.
    """
    return np.concatenate((np.ones(n), np.full(n * n, np.sqrt(n) / alpha)))


def predict(
    variant: FilterVariant,
    belief: GaussianBelief,
    t_span: tuple[float, float],
    model: ModelSpec,
    alpha: float,
    opts: OdeOptions,
) -> Prediction:
    """
    Propagate a belief from t_span[0] to t_span[1].

    Sample-point variants return the propagated point matrix so the measurement
    update can use it without another factorization; their belief carries the
    factor recovered with tril (square-root) or its square (conventional).

    Raises:
        Divergence: Integration failed or the starting covariance has no factor
    """
    t_a, t_b = t_span
    encoding = variant.encoding
    n = belief.dim

    try:
        if encoding is PredictionEncoding.SAMPLE_POINTS:
            start = generate_sample_points(belief.mean, belief.factor(), alpha).points
        elif encoding is PredictionEncoding.CHOLESKY:
            start = belief.factor()
        else:
            start = belief.covariance
    except NotPositiveDefinite as e:
        raise Divergence(t_a, type(e).__name__) from e

    if t_b <= t_a:
        points = SamplePointSet(points=start, mean=belief.mean, alpha=alpha) \
            if encoding is PredictionEncoding.SAMPLE_POINTS else None
        return Prediction(belief=belief, points=points)

    rhs = _packed_rhs(encoding, model, alpha, n)
    if encoding is PredictionEncoding.SAMPLE_POINTS:
        opts = opts.scaled(point_tolerance_weights(n, alpha))
    try:
        y_end, stats = integrate(rhs, pack_columns(belief.mean, start), (t_a, t_b), opts)
    except IntegrationError as e:
        raise Divergence(e.t, root_cause_name(e)) from e

    mean, mat = unpack_columns(y_end, n)
    if not np.isfinite(y_end).all():
        raise Divergence(t_b, "NonFiniteEstimate")

    if encoding is PredictionEncoding.SAMPLE_POINTS:
        points = SamplePointSet(points=mat.copy(), mean=mean.copy(), alpha=alpha)
        chol, residue = points.recovered_factor()
        if variant.square_root:
            predicted = GaussianBelief(time=t_b, mean=mean, chol=chol)
        else:
            predicted = GaussianBelief(time=t_b, mean=mean, cov=chol @ chol.T)
        return Prediction(belief=predicted, points=points, stats=stats, tril_residue=residue)

    if encoding is PredictionEncoding.CHOLESKY:
        predicted = GaussianBelief(time=t_b, mean=mean, chol=np.tril(mat))
    else:
        predicted = GaussianBelief(time=t_b, mean=mean, cov=symmetrize(mat))
    return Prediction(belief=predicted, stats=stats)
