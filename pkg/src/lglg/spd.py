"""Matrix-function kernels and distance measures on SPD matrices.

All matrices are plain float64 ndarrays; symmetry is the caller's contract
and is re-enforced numerically (``(A + A.T) / 2``) before decomposition.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NonFinite, NotPositiveDefinite

#: Relative eigenvalue floor applied inside :func:`matrix_log` by default.
DEFAULT_LOG_FLOOR_REL = 1e-12


class EigenDecomposition(NamedTuple):
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _symmetrize(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return 0.5 * (A + A.T)


def sym_eig(A: np.ndarray) -> EigenDecomposition:
    """Eigendecompose a symmetric matrix, eigenvalues sorted descending."""
    A = _symmetrize(A)
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix contains NaN or Inf")
    w, V = np.linalg.eigh(A)
    return EigenDecomposition(w[::-1].copy(), V[:, ::-1].copy())


def matrix_log(A: np.ndarray, floor: float | None = None) -> np.ndarray:
    """Matrix logarithm of a symmetric (near-)SPD matrix.

    Eigenvalues are clamped at ``floor`` before taking logs; by default the
    floor is ``1e-12`` times the largest eigenvalue, which keeps numerically
    singular covariance estimates usable.
    """
    w, V = sym_eig(A)
    if floor is None:
        floor = DEFAULT_LOG_FLOOR_REL * max(float(w[0]), 0.0)
    if floor <= 0.0 and w[-1] <= 0.0:
        raise NotPositiveDefinite("matrix has a non-positive eigenvalue and no floor")
    w = np.maximum(w, floor)
    if np.any(w <= 0.0):
        raise NotPositiveDefinite("matrix not positive definite after flooring")
    return _symmetrize((V * np.log(w)) @ V.T)


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix via eigendecomposition."""
    w, V = sym_eig(A)
    with np.errstate(over="ignore"):
        E = np.exp(w)
    if not np.all(np.isfinite(E)):
        raise NonFinite("matrix exponential overflowed")
    return _symmetrize((V * E) @ V.T)


def matrix_sqrt(A: np.ndarray) -> np.ndarray:
    """Principal square root of an SPD matrix."""
    w, V = sym_eig(A)
    if w[-1] <= 0.0:
        raise NotPositiveDefinite("matrix_sqrt requires a positive-definite input")
    return _symmetrize((V * np.sqrt(w)) @ V.T)


def _check_pair(C1: np.ndarray, C2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    C1 = _symmetrize(C1)
    C2 = _symmetrize(C2)
    if C1.shape != C2.shape:
        raise DimensionMismatch(f"shapes differ: {C1.shape} vs {C2.shape}")
    return C1, C2


def riemannian_distance(C1: np.ndarray, C2: np.ndarray) -> float:
    """Affine-invariant distance sqrt(sum ln^2 lambda_i) over generalized
    eigenvalues of (C1, C2).

    The generalized problem is solved by Cholesky whitening of C2, avoiding
    explicit inverses.
    """
    C1, C2 = _check_pair(C1, C2)
    try:
        L = np.linalg.cholesky(C2)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("second argument is not SPD") from exc
    # L^{-1} C1 L^{-T}: symmetric, same generalized eigenvalues as (C1, C2)
    Y = solve_triangular(L, C1, lower=True)
    M = solve_triangular(L, Y.T, lower=True).T
    w = np.linalg.eigvalsh(_symmetrize(M))
    if w[0] <= 0.0:
        raise NotPositiveDefinite("first argument is not SPD")
    return float(math.sqrt(np.sum(np.log(w) ** 2)))


def log_euclidean_distance(C1: np.ndarray, C2: np.ndarray) -> float:
    """Frobenius distance between matrix logarithms."""
    C1, C2 = _check_pair(C1, C2)
    return float(np.linalg.norm(matrix_log(C1) - matrix_log(C2), "fro"))


def embed_gaussian(mu: np.ndarray, C: np.ndarray, floor: float | None = None) -> np.ndarray:
    """Embed a Gaussian (mu, C) as the symmetric (d+1)x(d+1) matrix

        B = log(M^{1/2}),  M = [[C + mu mu^T, mu], [mu^T, 1]],

    computed as B = (1/2) log M (identical for SPD M, one decomposition).
    """
    mu = np.asarray(mu, dtype=np.float64).ravel()
    C = _symmetrize(C)
    d = mu.shape[0]
    if C.shape != (d, d):
        raise DimensionMismatch(f"mean has dim {d} but covariance is {C.shape}")
    if not np.all(np.isfinite(mu)):
        raise NonFinite("mean contains NaN or Inf")
    M = np.empty((d + 1, d + 1))
    M[:d, :d] = C + np.outer(mu, mu)
    M[:d, d] = mu
    M[d, :d] = mu
    M[d, d] = 1.0
    return 0.5 * matrix_log(M, floor=floor)


def half_vectorize(A: np.ndarray) -> np.ndarray:
    """Upper-triangular vectorization (column-major scan) with sqrt(2)-scaled
    off-diagonals.

    Preserves the Frobenius inner product, so Euclidean distances between
    half-vectorized matrices equal Frobenius distances between the matrices.
    """
    A = _symmetrize(A)
    n = A.shape[0]
    # column-major upper triangle == row-major lower triangle for symmetric A
    il = np.tril_indices(n)
    v = A[il].copy()
    v[il[0] != il[1]] *= math.sqrt(2.0)
    return v
