"""Elastic-net by cyclic coordinate descent, with BIC-type (alpha, lambda) selection.

Objective, with the intercept unpenalized::

    (1/2n) ||y - b0 - X b||^2 + lam * (alpha ||b||_1 + (1 - alpha)/2 ||b||^2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from epuindex.errors import ConfigError, NumericalError


@dataclass(frozen=True)
class EnetConfig:
    alpha_grid: tuple[float, ...] = (0.1, 0.5, 0.9, 1.0)
    n_lambda: int = 100
    lambda_min_ratio: float = 1e-3
    tol: float = 1e-7
    max_iter: int = 10_000
    # Selection guards for p > n, where n log(RSS/n) is unbounded below as
    # the path approaches interpolation: a path ends once this share of the
    # centered sum of squares is explained, and fits with more than
    # max_df_ratio * n nonzero slopes are not eligible.
    dev_ratio_stop: float = 0.999
    max_df_ratio: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        if not self.alpha_grid or any(not 0 < a <= 1 for a in self.alpha_grid):
            raise ConfigError("alpha_grid must be nonempty with values in (0, 1]")
        if self.n_lambda < 1:
            raise ConfigError("n_lambda must be >= 1")
        if not 0 < self.lambda_min_ratio <= 1:
            raise ConfigError("lambda_min_ratio must be in (0, 1]")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if not 0 < self.dev_ratio_stop <= 1:
            raise ConfigError("dev_ratio_stop must be in (0, 1]")
        if not 0 < self.max_df_ratio <= 1:
            raise ConfigError("max_df_ratio must be in (0, 1]")


@dataclass(frozen=True)
class EnetFit:
    intercept: float
    coef: np.ndarray
    n_iter: int
    alpha: float
    lam: float

    def predict(self, X) -> np.ndarray:
        return self.intercept + np.asarray(X, dtype=float) @ self.coef

    @property
    def df(self) -> int:
        return int(np.count_nonzero(self.coef))


@dataclass(frozen=True)
class EnetSelection:
    fit: EnetFit
    bic: float
    rss: float

    @property
    def alpha(self):
        return self.fit.alpha

    @property
    def lam(self):
        return self.fit.lam


@njit(nogil=True, cache=True)
def _sweep(Xc, r, beta, col_sq, l1, l2, active_only):
    n, p = Xc.shape
    max_change = 0.0
    for j in range(p):
        if active_only and beta[j] == 0.0:
            continue
        denom = col_sq[j] + l2
        if denom == 0.0:
            continue
        bj = beta[j]
        rho = 0.0
        for i in range(n):
            rho += Xc[i, j] * r[i]
        rho = rho / n + col_sq[j] * bj
        if rho > l1:
            new = (rho - l1) / denom
        elif rho < -l1:
            new = (rho + l1) / denom
        else:
            new = 0.0
        delta = new - bj
        if delta != 0.0:
            for i in range(n):
                r[i] -= Xc[i, j] * delta
            beta[j] = new
            if abs(delta) > max_change:
                max_change = abs(delta)
    return max_change


@njit(nogil=True, cache=True)
def _coordinate_descent(Xc, yc, beta, lam, alpha, tol, max_iter):
    """Cyclic coordinate descent in column order, updating ``beta`` in place.

    After each full sweep that changes something, the nonzero coefficients
    are cycled alone until they settle; convergence is only declared on a
    full sweep whose largest change is below ``tol``. Xc and yc must be
    centered. Returns (sweeps run, converged).
    """
    n, p = Xc.shape
    col_sq = np.empty(p)
    for j in range(p):
        s = 0.0
        for i in range(n):
            s += Xc[i, j] * Xc[i, j]
        col_sq[j] = s / n
    r = yc.copy()
    for j in range(p):
        if beta[j] != 0.0:
            for i in range(n):
                r[i] -= Xc[i, j] * beta[j]
    l1 = lam * alpha
    l2 = lam * (1.0 - alpha)
    sweeps = 0
    while sweeps < max_iter:
        sweeps += 1
        if _sweep(Xc, r, beta, col_sq, l1, l2, False) < tol:
            return sweeps, True
        while sweeps < max_iter:
            sweeps += 1
            if _sweep(Xc, r, beta, col_sq, l1, l2, True) < tol:
                break
    return sweeps, False


def _center(X, y):
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    xm = X.mean(axis=0)
    ym = float(y.mean())
    return X - xm, y - ym, xm, ym


# relative margin so that rounding in the sweep cannot leave a 1-ulp coefficient at lambda_max
_LMAX_MARGIN = 1e-12


def _lambda_max_centered(Xc, yc, alpha) -> float:
    if not Xc.shape[1]:
        return 0.0
    return float(np.max(np.abs(Xc.T @ yc))) / (len(yc) * alpha) * (1 + _LMAX_MARGIN)


def lambda_max(X, y, alpha: float) -> float:
    """Smallest lambda at which every penalized coefficient is zero."""
    Xc, yc, _, _ = _center(X, y)
    return _lambda_max_centered(Xc, yc, alpha)


def objective(X, y, intercept, coef, alpha, lam) -> float:
    r = np.asarray(y) - intercept - np.asarray(X) @ coef
    n = len(r)
    return float(r @ r / (2 * n) + lam * (alpha * np.abs(coef).sum() + (1 - alpha) / 2 * coef @ coef))


def _fit_centered(Xc, yc, xm, ym, alpha, lam, cfg, beta0=None) -> EnetFit:
    beta = np.zeros(Xc.shape[1]) if beta0 is None else np.array(beta0, dtype=float)
    n_iter, ok = _coordinate_descent(Xc, yc, beta, float(lam), float(alpha), cfg.tol, cfg.max_iter)
    if not ok:
        raise NumericalError(
            f"elastic-net did not converge in {cfg.max_iter} sweeps (alpha={alpha}, lambda={lam})",
            last_iterate=beta,
        )
    return EnetFit(ym - float(xm @ beta), beta, n_iter, float(alpha), float(lam))


def enet_fit(X, y, alpha: float, lam: float, cfg: EnetConfig = EnetConfig(), beta0=None) -> EnetFit:
    if lam < 0 or not 0 <= alpha <= 1:
        raise ValueError(f"need lam >= 0 and alpha in [0, 1], got {lam}, {alpha}")
    Xc, yc, xm, ym = _center(X, y)
    return _fit_centered(Xc, yc, xm, ym, alpha, lam, cfg, beta0)


def lambda_path(lmax: float, cfg: EnetConfig) -> np.ndarray:
    if lmax <= 0:
        return np.zeros(1)
    if cfg.n_lambda == 1:
        return np.array([lmax])
    return np.geomspace(lmax, lmax * cfg.lambda_min_ratio, cfg.n_lambda)


def bic(rss: float, df: int, n: int) -> float:
    if rss <= 0:
        return -math.inf
    return n * math.log(rss / n) + df * math.log(n)


def enet_select(X, y, cfg: EnetConfig = EnetConfig()) -> EnetSelection:
    """Grid search minimizing n log(RSS/n) + df log(n), df = nonzero slopes.

    Each alpha runs a warm-started path from its lambda_max down, ending early
    once ``cfg.dev_ratio_stop`` of the variance is explained. Fits with more
    than ``cfg.max_df_ratio * n`` nonzero slopes, or saturated fits (zero RSS
    with no residual degrees of freedom), are not eligible. Ties go to the
    larger lambda, then the larger alpha.
    """
    Xc, yc, xm, ym = _center(X, y)
    n = len(yc)
    tss = float(yc @ yc)
    max_df = int(math.floor(cfg.max_df_ratio * n))
    best = None
    best_key = None
    for alpha in cfg.alpha_grid:
        lmax = _lambda_max_centered(Xc, yc, alpha)
        beta = np.zeros(Xc.shape[1])
        for lam in lambda_path(lmax, cfg):
            fit = _fit_centered(Xc, yc, xm, ym, alpha, lam, cfg, beta)
            beta = fit.coef
            resid = yc - Xc @ fit.coef
            rss = float(resid @ resid)
            df = fit.df
            saturated = df > 0 and df >= n - 1 and rss <= 0
            if df <= max_df and not saturated:
                crit = bic(rss, df, n)
                key = (crit, -lam, -alpha)
                if best_key is None or key < best_key:
                    best_key = key
                    best = EnetSelection(fit, crit, rss)
            if saturated or (tss > 0 and rss <= (1 - cfg.dev_ratio_stop) * tss):
                break
    if best is None:
        raise NumericalError("all elastic-net fits are degenerate (zero RSS with saturated support)")
    return best
