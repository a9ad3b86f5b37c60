"""Principal components of a standardized panel and Bai-Ng factor-count selection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PCAResult:
    scores: np.ndarray  # T x r
    loadings: np.ndarray  # N x r, orthonormal columns
    variances: np.ndarray  # r, non-increasing
    singular_values: np.ndarray


def pca_reduce(X) -> PCAResult:
    """Thin SVD of X (rows = months, columns = variables), X assumed centered.

    Each component is signed so its largest-magnitude loading is positive.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("pca_reduce needs a 2-D array with at least 2 rows")
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    loadings = vt.T.copy()
    for k in range(loadings.shape[1]):
        j = int(np.argmax(np.abs(loadings[:, k])))
        if loadings[j, k] < 0:
            loadings[:, k] = -loadings[:, k]
    scores = X @ loadings
    variances = s**2 / (X.shape[0] - 1)
    return PCAResult(scores, loadings, variances, s)


def bai_ng_criteria(X, kmax: int = 8, pca: PCAResult | None = None) -> np.ndarray:
    """IC(k) = log V(k) + k (N+T)/(NT) log(min(N, T)) for k = 1..kmax.

    V(k) is the mean squared residual of the k-component approximation; a
    residual that vanishes relative to the total gives -inf.
    """
    X = np.asarray(X, dtype=float)
    T, N = X.shape
    if not 1 <= kmax <= min(N, T):
        raise ValueError(f"kmax must be in 1..{min(N, T)}, got {kmax}")
    pca = pca if pca is not None else pca_reduce(X)
    sq = pca.singular_values**2
    total = float(sq.sum())
    penalty = (N + T) / (N * T) * math.log(min(N, T))
    out = np.empty(kmax)
    for k in range(1, kmax + 1):
        resid = float(sq[k:].sum())
        if resid <= 1e-12 * total:
            out[k - 1] = -math.inf
        else:
            out[k - 1] = math.log(resid / (N * T)) + k * penalty
    return out


def bai_ng_select(X, kmax: int = 8, pca: PCAResult | None = None) -> int:
    ic = bai_ng_criteria(X, kmax, pca)
    return int(np.argmin(ic)) + 1  # argmin returns the first minimum: ties go to smaller k
