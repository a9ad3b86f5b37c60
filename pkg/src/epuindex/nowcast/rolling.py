"""Rolling-window out-of-sample nowcasts.

For target month s the regressors are the lagged target y[s-1], the
same-month EPU (model variants M0 and M2 only) and every other panel series
lagged one month. Each evaluation month t is fitted on the ``window`` target
months t-window .. t-1 and predicted from its own regressor row.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from epuindex.errors import ConfigError, DataError, EpuError
from epuindex.months import format_month
from epuindex.nowcast.enet import EnetConfig, enet_select
from epuindex.nowcast.evaluate import dm_test, metrics
from epuindex.nowcast.panel import MacroPanel
from epuindex.nowcast.pca import bai_ng_select, pca_reduce

log = logging.getLogger(__name__)

VARIANTS = ("M0", "M1", "M2")
ESTIMATORS = ("enet", "pca")


@dataclass(frozen=True)
class ModelVariant:
    """M0: own EPU; M1: no EPU; M2: an alternative EPU. ``epu`` is on the panel axis."""

    tag: str
    epu: np.ndarray | None = None

    def __post_init__(self):
        if self.tag not in VARIANTS:
            raise ConfigError(f"unknown model variant {self.tag!r}")
        if self.tag == "M1" and self.epu is not None:
            raise ConfigError("variant M1 takes no EPU series")
        if self.tag != "M1" and self.epu is None:
            raise ConfigError(f"variant {self.tag} requires an EPU series")

    @property
    def uses_epu(self) -> bool:
        return self.epu is not None


@dataclass
class Design:
    y: np.ndarray
    X: np.ndarray  # standardized, no intercept column
    x_now: np.ndarray | None
    columns: list[str]
    center: np.ndarray
    scale: np.ndarray
    dropped: list[str] = field(default_factory=list)

    @property
    def macro_columns(self) -> list[int]:
        return [j for j, c in enumerate(self.columns) if c not in ("y_lag", "epu")]


def predictor_names(panel: MacroPanel, target: str, variant: ModelVariant) -> list[str]:
    return ["y_lag"] + (["epu"] if variant.uses_epu else []) + [c for c in panel.names if c != target]


def _row(panel: MacroPanel, target: str, variant: ModelVariant, month: int) -> np.ndarray:
    i = panel.position(month)
    if i < 1 or i >= len(panel.months):
        raise DataError(f"month {format_month(month)} and its lag are not both inside the panel")
    vals = [panel.columns[target][i - 1]]
    if variant.uses_epu:
        vals.append(variant.epu[i])
    vals += [panel.columns[c][i - 1] for c in panel.names if c != target]
    return np.array(vals, dtype=float)


def _check_finite(row, names, month, lagged_from):
    bad = np.flatnonzero(~np.isfinite(row))
    if bad.size:
        name = names[bad[0]]
        at = month if name == "epu" else lagged_from
        raise DataError(f"missing value for {name!r} in {format_month(at)}")


def build_design(panel: MacroPanel, target: str, variant: ModelVariant, start: int, end: int,
                 now: int | None = None) -> Design:
    """Training design for target months ``start..end`` (inclusive) plus the row for ``now``.

    Non-intercept predictors are standardized inside the window; constant
    ones are dropped with a warning. The same affine maps apply to the row
    for ``now``.
    """
    if target not in panel.columns:
        raise ConfigError(f"target {target!r} is not a panel column")
    names = predictor_names(panel, target, variant)
    rows, ys = [], []
    for mo in range(start, end + 1):
        r = _row(panel, target, variant, mo)
        _check_finite(r, names, mo, mo - 1)
        yv = panel.columns[target][panel.position(mo)]
        if not math.isfinite(yv):
            raise DataError(f"missing value for {target!r} in {format_month(mo)}")
        rows.append(r)
        ys.append(yv)
    X = np.array(rows, dtype=float).reshape(len(rows), len(names))
    y = np.array(ys, dtype=float)
    keep = np.ptp(X, axis=0) > 0
    dropped = [n for n, k in zip(names, keep) if not k]
    for n in dropped:
        log.warning("zero variance predictor %r in window %s..%s: dropped", n,
                    format_month(start), format_month(end))
    X = X[:, keep]
    cols = [n for n, k in zip(names, keep) if k]
    center = X.mean(axis=0)
    scale = X.std(axis=0)
    Xs = (X - center) / scale
    x_now = None
    if now is not None:
        r = _row(panel, target, variant, now)
        _check_finite(r, names, now, now - 1)
        x_now = (r[keep] - center) / scale
    return Design(y, Xs, x_now, cols, center, scale, dropped)


def fit_predict(design: Design, estimator: str, enet_cfg: EnetConfig = EnetConfig(),
                kmax: int = 8) -> tuple[float, dict]:
    if estimator == "enet":
        sel = enet_select(design.X, design.y, enet_cfg)
        pred = float(sel.fit.predict(design.x_now))
        return pred, {"alpha": sel.alpha, "lambda": sel.lam, "df": sel.fit.df}
    if estimator == "pca":
        macro = design.macro_columns
        other = [j for j in range(len(design.columns)) if j not in macro]
        n = len(design.y)
        k = 0
        Z, z_now = design.X[:, other], design.x_now[other]
        if macro:
            block = design.X[:, macro]
            pca = pca_reduce(block)
            kcap = min(kmax, block.shape[0], block.shape[1], n - 2 - len(other))
            if kcap >= 1:
                k = bai_ng_select(block, kcap, pca)
                Z = np.hstack([Z, pca.scores[:, :k]])
                z_now = np.concatenate([z_now, design.x_now[macro] @ pca.loadings[:, :k]])
        A = np.hstack([np.ones((n, 1)), Z])
        coef, *_ = np.linalg.lstsq(A, design.y, rcond=None)
        pred = float(coef[0] + z_now @ coef[1:])
        return pred, {"k": k}
    raise ConfigError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")


@dataclass
class NowcastRun:
    variant: str
    estimator: str
    window: int
    months: np.ndarray
    realized: np.ndarray
    predicted: np.ndarray
    details: list[dict] = field(default_factory=list)

    @property
    def errors(self) -> np.ndarray:
        return self.realized - self.predicted

    @property
    def rmsfe(self) -> float:
        return metrics(self.errors)[0]

    @property
    def mafe(self) -> float:
        return metrics(self.errors)[1]


def evaluation_range(panel: MacroPanel, target: str, window: int,
                     eval_start: int | None, eval_end: int | None) -> tuple[int, int]:
    y = panel.columns[target]
    valid = np.flatnonzero(np.isfinite(y))
    if valid.size == 0:
        raise DataError(f"target {target!r} has no observations")
    # first month whose target and lagged regressors are all observed
    lagged_ok = np.all(np.isfinite(np.column_stack(list(panel.columns.values()))), axis=1)
    usable = np.flatnonzero(np.isfinite(y[1:]) & lagged_ok[:-1]) + 1
    if usable.size == 0:
        raise DataError(f"no month has {target!r} together with all lagged regressors")
    first_target = int(panel.months[usable[0]])
    start = first_target + window if eval_start is None else eval_start
    end = int(panel.months[valid[-1]]) if eval_end is None else eval_end
    if eval_start is None and end < start:
        raise DataError(f"window of {window} months is larger than the available sample "
                        f"({format_month(first_target)}..{format_month(end)})")
    if end < start:
        raise DataError(f"evaluation range {format_month(start)}..{format_month(end)} is empty")
    if start - window < int(panel.months[0]) + 1:
        raise DataError(f"window of {window} months before {format_month(start)} "
                        "is larger than the available sample")
    if end > int(panel.months[-1]):
        raise DataError(f"evaluation end {format_month(end)} is beyond the panel")
    return start, end


def rolling_nowcast(panel: MacroPanel, target: str, variant: ModelVariant, estimator: str,
                    window: int = 60, eval_start: int | None = None, eval_end: int | None = None,
                    enet_cfg: EnetConfig = EnetConfig(), kmax: int = 8, threads: int = 1) -> NowcastRun:
    if window < 2:
        raise ConfigError("window must be at least 2 months")
    if estimator not in ESTIMATORS:
        raise ConfigError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    start, end = evaluation_range(panel, target, window, eval_start, eval_end)
    months = list(range(start, end + 1))

    def one(t):
        try:
            design = build_design(panel, target, variant, t - window, t - 1, now=t)
            pred, info = fit_predict(design, estimator, enet_cfg, kmax)
        except EpuError as exc:
            raise type(exc)(f"nowcast month {format_month(t)}: {exc}") from exc
        realized = panel.columns[target][panel.position(t)]
        if not math.isfinite(realized):
            raise DataError(f"missing value for {target!r} in {format_month(t)}")
        return realized, pred, info

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, months))
    else:
        results = [one(t) for t in months]
    return NowcastRun(
        variant=variant.tag,
        estimator=estimator,
        window=window,
        months=np.array(months, dtype=np.int64),
        realized=np.array([r[0] for r in results]),
        predicted=np.array([r[1] for r in results]),
        details=[r[2] for r in results],
    )


def compare(base: NowcastRun, other: NowcastRun) -> dict[str, tuple[float, float]]:
    """DM statistics and p-values for ``base`` outperforming ``other``, by loss."""
    if not np.array_equal(base.months, other.months):
        raise DataError("runs cover different months")
    return {loss: dm_test(base.errors, other.errors, loss) for loss in ("squared", "absolute")}


def summarize(runs: Sequence[NowcastRun], baseline: str = "M0") -> list[dict]:
    """One row per run; DM columns compare the baseline variant of the same estimator."""
    by_key = {(r.estimator, r.variant): r for r in runs}
    rows = []
    for r in runs:
        row = {"estimator": r.estimator, "variant": r.variant, "n": len(r.months),
               "rmsfe": r.rmsfe, "mafe": r.mafe}
        base = by_key.get((r.estimator, baseline))
        if base is not None and r.variant != baseline:
            cmp = compare(base, r)
            row["dm_stat_squared"], row["dm_p_squared"] = cmp["squared"]
            row["dm_stat_absolute"], row["dm_p_absolute"] = cmp["absolute"]
        rows.append(row)
    return rows
