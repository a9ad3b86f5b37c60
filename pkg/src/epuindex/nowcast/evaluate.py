"""Forecast accuracy metrics and the Diebold-Mariano test."""

from __future__ import annotations

import math

import numpy as np

from epuindex.errors import NumericalError


def metrics(errors) -> tuple[float, float]:
    """(RMSFE, MAFE) of a forecast error vector."""
    e = np.asarray(errors, dtype=float)
    if e.size == 0:
        raise ValueError("metrics of an empty error vector")
    a = np.abs(e)
    scale = float(a.max())
    if scale == 0.0 or not math.isfinite(scale):
        return scale, float(np.mean(a))
    # scaled so that tiny errors do not underflow when squared
    return scale * math.sqrt(float(np.mean((a / scale) ** 2))), float(np.mean(a))


def dm_bandwidth(n: int) -> int:
    return int(math.floor(1.5 * n ** (1.0 / 3.0)))


def bartlett_lrv(d: np.ndarray, bandwidth: int) -> float:
    n = len(d)
    dc = d - d.mean()
    lrv = float(dc @ dc) / n
    for k in range(1, min(bandwidth, n - 1) + 1):
        gamma = float(dc[k:] @ dc[:-k]) / n
        lrv += 2.0 * (1.0 - k / (bandwidth + 1)) * gamma
    return lrv


def _upper_tail(z: float) -> float:
    # computed from |z| so that p(-z) == 1 - p(z) holds exactly
    tail = 0.5 * math.erfc(abs(z) / math.sqrt(2.0))
    return tail if z >= 0 else 1.0 - tail


def dm_test(errors_a, errors_b, loss: str = "squared") -> tuple[float, float]:
    """One-sided test that forecast ``a`` is more accurate than ``b``.

    Loss differential d_t = L(e_b) - L(e_a); small p means ``a`` wins. The
    long-run variance uses a Bartlett kernel with bandwidth floor(1.5 n^(1/3)).
    """
    a = np.asarray(errors_a, dtype=float)
    b = np.asarray(errors_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("error vectors must be 1-D and of equal length")
    if len(a) < 10:
        raise ValueError(f"dm_test needs at least 10 observations, got {len(a)}")
    if loss == "squared":
        d = b * b - a * a
    elif loss == "absolute":
        d = np.abs(b) - np.abs(a)
    else:
        raise ValueError(f"loss must be 'squared' or 'absolute', got {loss!r}")
    if not np.any(d):
        return 0.0, 0.5
    n = len(d)
    lrv = bartlett_lrv(d, dm_bandwidth(n))
    if not lrv > 0:
        raise NumericalError("zero long-run variance with a nonzero loss differential")
    stat = float(d.mean()) / math.sqrt(lrv / n)
    return stat, _upper_tail(stat)
