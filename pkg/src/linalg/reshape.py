"""Column-major flatten/unflatten and the [mean | matrix] state stacking"""
import numpy as np
from numpy.typing import NDArray

from src.exceptions.base import ShapeMismatch


Matrix = NDArray[np.float64]
# Lower triangular with nonnegative diagonal; strictly-upper part exactly zero
LowerTriangular = NDArray[np.float64]


def flatten(a: Matrix) -> NDArray[np.float64]:
    """Stack the columns of a into one vector (MATLAB A(:))"""
    return np.asarray(a, dtype=float).reshape(-1, order="F")


def unflatten(v: NDArray[np.float64], rows: int, cols: int) -> Matrix:
    """Inverse of flatten for a rows x cols matrix"""
    v = np.asarray(v, dtype=float)
    if v.size != rows * cols:
        raise ShapeMismatch(f"Cannot reshape {v.size} entries into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def pack_columns(mean: NDArray[np.float64], mat: Matrix) -> NDArray[np.float64]:
    """Flatten [mean, mat] with the mean as the first column"""
    return flatten(np.column_stack((mean, mat)))


def unpack_columns(y: NDArray[np.float64], n: int) -> tuple[NDArray[np.float64], Matrix]:
    """Split a packed n x (n+1) state back into (mean, mat)"""
    stacked = unflatten(y, n, n + 1)
    return stacked[:, 0], stacked[:, 1:]
