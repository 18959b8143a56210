"""Accuracy metrics"""
import numpy as np
from numpy.typing import ArrayLike

from src.exceptions.base import ShapeMismatch


def armse(truth_runs: ArrayLike, estimate_runs: ArrayLike) -> float:
    """
    Accumulated root mean square error over M runs and K instants.

    sqrt(sum over runs, instants and components of squared errors / (M * K)).
    Components are summed, not averaged.

    Args:
        truth_runs: M x K x n true states at the measurement instants
        estimate_runs: M x K x n filtered means

    Raises:
        ShapeMismatch: Shapes differ or are not three-dimensional
    """
    truth = np.asarray(truth_runs, dtype=float)
    estimates = np.asarray(estimate_runs, dtype=float)
    if truth.ndim != 3 or truth.shape != estimates.shape:
        raise ShapeMismatch(f"Expected matching M x K x n arrays, got {truth.shape} and {estimates.shape}")
    runs, instants, _ = truth.shape
    if runs * instants == 0:
        raise ShapeMismatch("No runs or instants to average over")
    return float(np.sqrt(np.sum((truth - estimates) ** 2) / (runs * instants)))
