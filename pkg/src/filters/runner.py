"""Filter loop over a measurement sequence"""
import logging
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from src.config import settings
from src.exceptions.base import Divergence
from src.filters.belief import GaussianBelief
from src.filters.predict import predict
from src.filters.update import mu_conventional, mu_sr_block_qr, mu_sr_two_qr, mu_std_ekf
from src.filters.variant import FilterVariant, UpdateKernel
from src.linalg.factor import cholesky_lower
from src.models.base import ModelSpec
from src.odesolve.options import OdeOptions, OdeStats
from src.sim.measurements import MeasurementRecord


logger = logging.getLogger(__name__)


class FailureRecord(BaseModel):
    """Where and why a filter run stopped"""
    model_config = ConfigDict(frozen=True)

    time: float
    cause: str


class FilterRun(BaseModel):
    """Beliefs of one filter pass; beliefs[0] is the initial belief"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variant: FilterVariant
    beliefs: list[GaussianBelief]
    failure: Optional[FailureRecord] = None
    stats: OdeStats = OdeStats()
    max_tril_residue: float = 0.0

    @property
    def completed(self) -> bool:
        return self.failure is None

    @property
    def posteriors(self) -> list[GaussianBelief]:
        return self.beliefs[1:]

    def posterior_means(self) -> NDArray[np.float64]:
        """K x n matrix of the filtered means at the measurement times"""
        if len(self.beliefs) < 2:
            return np.empty((0, self.beliefs[0].dim))
        return np.vstack([b.mean for b in self.posteriors])


def initial_belief(variant: FilterVariant, model: ModelSpec, t0: float = 0.0) -> GaussianBelief:
    """(x0_mean, x0_cov), factored for the square-root variants"""
    if variant.square_root:
        return GaussianBelief(time=t0, mean=model.x0_mean, chol=cholesky_lower(model.x0_cov))
    return GaussianBelief(time=t0, mean=model.x0_mean, cov=model.x0_cov)


def run_filter(
    variant: FilterVariant,
    model: ModelSpec,
    measurements: Sequence[MeasurementRecord],
    alpha: float = settings.alpha,
    opts: Optional[OdeOptions] = None,
    t0: float = 0.0,
) -> FilterRun:
    """
    Alternate time and measurement updates starting from the model's prior.

    A Divergence ends the pass early; the beliefs computed so far are returned with
    the failure time and cause instead of raising.

    Raises:
        ValueError: Measurement times not strictly increasing after t0
    """
    opts = opts or OdeOptions()
    times = [t0] + [m.time for m in measurements]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("Measurement times must be strictly increasing after t0")

    belief = initial_belief(variant, model, t0)
    beliefs = [belief]
    stats = OdeStats()
    max_residue = 0.0
    failure = None

    for record in measurements:
        try:
            prediction = predict(variant, belief, (belief.time, record.time), model, alpha, opts)
            stats = stats + prediction.stats
            max_residue = max(max_residue, prediction.tril_residue)

            prior = prediction.belief
            if variant.kernel is UpdateKernel.JACOBIAN:
                belief = mu_std_ekf(prior, record.value, record.index, model)
            elif variant.kernel is UpdateKernel.CONVENTIONAL:
                belief = mu_conventional(prior, record.value, record.index, model, alpha, prediction.points)
            elif variant.kernel is UpdateKernel.TWO_QR:
                belief = mu_sr_two_qr(prior, record.value, record.index, model, alpha, prediction.points)
            else:
                belief = mu_sr_block_qr(prior, record.value, record.index, model, alpha, prediction.points)

            if not np.isfinite(belief.mean).all():
                raise Divergence(record.time, "NonFiniteEstimate")
        except Divergence as e:
            failure = FailureRecord(time=e.time, cause=e.cause)
            logger.warning(f"{variant.value} on {model.name} diverged at t={e.time:.4g}: {e.cause}")
            break
        beliefs.append(belief)

    return FilterRun(
        variant=variant,
        beliefs=beliefs,
        failure=failure,
        stats=stats,
        max_tril_residue=max_residue,
    )
