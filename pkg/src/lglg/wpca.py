"""Whitening PCA: fit on gallery features, project and z-score queries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTrainingSet, DegenerateVector, DimensionMismatch

#: Eigenvalues below this fraction of the largest are treated as rank-deficient.
RANK_CUTOFF_REL = 1e-10

#: Minimum per-vector standard deviation accepted by :func:`zscore`.
ZSCORE_STD_FLOOR = 1e-14


@dataclass(frozen=True)
class ProjectionModel:
    """Training mean, orthonormal basis and eigenvalues of a fitted WPCA."""

    train_mean: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)      # input_dim x k, orthonormal columns
    eigvals: np.ndarray = field(repr=False)    # length k, positive, descending

    @property
    def input_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def output_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def whitened(self) -> np.ndarray:
        """W = U D^{-1/2}; projection with W whitens the training set."""
        return self.basis / np.sqrt(self.eigvals)


def fit(features: np.ndarray, k_requested: int) -> ProjectionModel:
    """Fit on an N x input_dim matrix, keeping at most k_requested components.

    When input_dim exceeds N the N x N Gram matrix is eigendecomposed instead
    of the full covariance. Components with eigenvalues below
    ``RANK_CUTOFF_REL`` times the largest are dropped, so k never exceeds the
    numerical rank of the centered data (at most N - 1).
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DegenerateTrainingSet("need at least 2 training rows")
    if not np.all(np.isfinite(X)):
        raise DegenerateTrainingSet("training features contain NaN or Inf")
    n, dim = X.shape
    mean = X.mean(axis=0)
    Xc = X - mean

    if dim > n:
        gram = Xc @ Xc.T / n
        w, v = np.linalg.eigh(0.5 * (gram + gram.T))
        w = w[::-1]
        v = v[:, ::-1]
    else:
        cov = Xc.T @ Xc / n
        w, v = np.linalg.eigh(0.5 * (cov + cov.T))
        w = w[::-1]
        v = v[:, ::-1]

    if w[0] <= 0.0:
        raise DegenerateTrainingSet("training features have rank 0")
    rank = int(np.sum(w > RANK_CUTOFF_REL * w[0]))
    if rank == 0:
        raise DegenerateTrainingSet("training features have rank 0")
    k = min(k_requested, rank)
    w = w[:k]
    if dim > n:
        # columns of Xc^T v / sqrt(n w) are the unit covariance eigenvectors
        basis = Xc.T @ v[:, :k] / np.sqrt(n * w)
    else:
        basis = v[:, :k]
    return ProjectionModel(train_mean=mean, basis=basis, eigvals=w.copy())


def project(model: ProjectionModel, x: np.ndarray) -> np.ndarray:
    """y = W^T (x - train_mean)."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.input_dim:
        raise DimensionMismatch(f"vector has dim {x.shape[0]}, model expects {model.input_dim}")
    return model.whitened.T @ (x - model.train_mean)


def zscore(y: np.ndarray) -> np.ndarray:
    """Per-vector standardization with population (divisor k) std."""
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] < 2:
        raise DegenerateVector("z-score needs at least 2 components")
    std = float(y.std())
    if std <= ZSCORE_STD_FLOOR:
        raise DegenerateVector("vector has (near-)zero standard deviation")
    return (y - y.mean()) / std
