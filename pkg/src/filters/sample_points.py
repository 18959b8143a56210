"""Sample-point generation and the mean-adjusted, scaled point matrices"""
import numpy as np
from numpy.typing import NDArray

from src.exceptions.base import ShapeMismatch
from src.filters.belief import SamplePointSet


def generate_sample_points(mean: NDArray[np.float64], chol: NDArray[np.float64], alpha: float) -> SamplePointSet:
    """Points mean 1^T + (sqrt(n) / alpha) * chol, one per column"""
    mean = np.asarray(mean, dtype=float)
    chol = np.asarray(chol, dtype=float)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n = mean.size
    if chol.shape != (n, n):
        raise ShapeMismatch(f"Factor must be {n}x{n}, got {chol.shape}")
    return SamplePointSet(points=point_matrix(mean, chol, alpha), mean=mean, alpha=alpha)


def point_matrix(mean: NDArray[np.float64], chol: NDArray[np.float64], alpha: float) -> NDArray[np.float64]:
    """The bare n x n point matrix; inputs are not checked"""
    return mean[:, None] + (np.sqrt(mean.size) / alpha) * chol


def center_scale_x(points: SamplePointSet) -> NDArray[np.float64]:
    """(alpha / sqrt(n)) * (points - mean 1^T); equals the generating factor exactly"""
    return points.scale * points.offsets()


def center_scale_z(z_points: NDArray[np.float64], z_mean: NDArray[np.float64], alpha: float) -> NDArray[np.float64]:
    """(alpha / sqrt(n)) * (z_points - z_mean 1^T) for an m x n matrix of predicted measurements"""
    z_points = np.atleast_2d(np.asarray(z_points, dtype=float))
    z_mean = np.asarray(z_mean, dtype=float).ravel()
    if z_points.shape[0] != z_mean.size:
        raise ShapeMismatch(f"{z_points.shape[0]} measurement rows, {z_mean.size} mean components")
    n = z_points.shape[1]
    return (alpha / np.sqrt(n)) * (z_points - z_mean[:, None])
