"""
Factorization kernels: Cholesky, orthogonal triangularization of pre-arrays,
triangular solves and the Phi operator.

All factors are lower triangular with a nonnegative diagonal. Inverses of factors
are never formed; every gain goes through solve_lower / solve_upper.
"""
import numpy as np
from numpy.typing import NDArray
from scipy.linalg import lapack, solve_triangular

from src.exceptions.base import NotPositiveDefinite, RankDeficient, ShapeMismatch, SingularFactor
from src.linalg.reshape import LowerTriangular, Matrix


# Diagonal entries of a triangularized factor below this are treated as zero
RANK_TOLERANCE = 1e-300


def _require_square(a: Matrix, name: str = "a") -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {a.shape}")


def symmetrize(a: Matrix) -> Matrix:
    """Return (a + a^T) / 2"""
    return 0.5 * (a + a.T)


def cholesky_lower(a: Matrix) -> LowerTriangular:
    """
    Lower Cholesky factor S with S S^T = a.

    Only the lower triangle of a is read.

    Raises:
        NotPositiveDefinite: leading pivot <= 0 or a non-finite entry (0-based pivot index)
    """
    a = np.asarray(a, dtype=float)
    _require_square(a)
    finite_rows = np.isfinite(np.tril(a)).all(axis=1)
    if not finite_rows.all():
        raise NotPositiveDefinite(int(np.argmin(finite_rows)))

    c, info = lapack.dpotrf(a, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefinite(info - 1)
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}")
    return c


def psd_factor(a: Matrix) -> Matrix:
    """
    Square factor F with F F^T = a for a symmetric positive semidefinite a.

    Uses the Cholesky factor when it exists; singular matrices (e.g. a zero noise
    intensity) fall back to an eigenvalue-clipped factor.
    """
    a = np.asarray(a, dtype=float)
    try:
        return cholesky_lower(a)
    except NotPositiveDefinite:
        w, v = np.linalg.eigh(symmetrize(a))
        return v * np.sqrt(np.clip(w, 0.0, None))


def _normalized_lower(pre: Matrix) -> Matrix:
    """Lower factor of pre pre^T from a QR of pre^T, columns flipped to a nonnegative diagonal"""
    r = np.linalg.qr(pre.T, mode="r")
    lower = r.T
    signs = np.where(np.diag(lower) < 0.0, -1.0, 1.0)
    return lower * signs


def _check_rank(lower: Matrix) -> None:
    diag = np.abs(np.diag(lower))
    bad = ~np.isfinite(diag) | (diag < RANK_TOLERANCE)
    if bad.any():
        raise RankDeficient(int(np.argmax(bad)))


def triangularize_lower(pre: Matrix) -> LowerTriangular:
    """
    Lower triangular L with L L^T = pre pre^T for an n x m pre-array, m >= n.

    Raises:
        RankDeficient: a diagonal entry of L vanishes (below 1e-300) or is non-finite
    """
    pre = np.asarray(pre, dtype=float)
    n, m = pre.shape
    if n < 1 or m < n:
        raise ShapeMismatch(f"Pre-array must be n x m with m >= n >= 1, got {pre.shape}")
    finite_rows = np.isfinite(pre).all(axis=1)
    if not finite_rows.all():
        raise RankDeficient(int(np.argmin(finite_rows)))

    lower = _normalized_lower(pre)
    _check_rank(lower)
    return lower


def block_triangularize(
    z_block: Matrix,
    x_block: Matrix,
    r_sqrt: LowerTriangular,
) -> tuple[LowerTriangular, Matrix, LowerTriangular]:
    """
    Triangularize the pre-array [[Zbar, R^{1/2}], [Xbar, 0]] in one QR.

    Returns:
        (re_sqrt, pxz_bar, p_sqrt) read off the block lower triangular post-array
        [[Re^{1/2}, 0], [Pxz Re^{-T/2}, P^{1/2}]]
    """
    z_block = np.asarray(z_block, dtype=float)
    x_block = np.asarray(x_block, dtype=float)
    r_sqrt = np.asarray(r_sqrt, dtype=float)
    m, n = z_block.shape
    if x_block.shape != (n, n) or r_sqrt.shape != (m, m):
        raise ShapeMismatch(
            f"Blocks not conformable: Zbar {z_block.shape}, Xbar {x_block.shape}, R^1/2 {r_sqrt.shape}"
        )

    pre = np.block([[z_block, r_sqrt], [x_block, np.zeros((n, m))]])
    post = triangularize_lower(pre)
    return post[:m, :m], post[m:, :m], post[m:, m:]


def phi(a: Matrix) -> LowerTriangular:
    """Strictly lower part of a plus half its diagonal"""
    a = np.asarray(a, dtype=float)
    _require_square(a)
    return np.tril(a, -1) + 0.5 * np.diag(np.diag(a))


def _check_diagonal(t: Matrix) -> None:
    _require_square(t, "factor")
    diag = np.diag(t)
    bad = ~np.isfinite(diag) | (diag == 0.0)
    if bad.any():
        raise SingularFactor(int(np.argmax(bad)))


def solve_lower(l: LowerTriangular, b: NDArray[np.float64], transpose: bool = False) -> NDArray[np.float64]:
    """
    Solve l x = b (or l^T x = b when transpose) for lower triangular l.

    Raises:
        SingularFactor: zero or non-finite diagonal entry
    """
    l = np.asarray(l, dtype=float)
    _check_diagonal(l)
    return solve_triangular(l, b, lower=True, trans="T" if transpose else "N", check_finite=False)


def solve_upper(u: Matrix, b: NDArray[np.float64]) -> NDArray[np.float64]:
    """Solve u x = b for upper triangular u"""
    u = np.asarray(u, dtype=float)
    _check_diagonal(u)
    return solve_triangular(u, b, lower=False, check_finite=False)
