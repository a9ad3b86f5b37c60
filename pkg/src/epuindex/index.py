"""Monthly source frequencies, dynamic normalization and cross-source aggregation.

Missing values are NaN throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from epuindex.errors import ConfigError, DataError
from epuindex.months import format_month


@dataclass(frozen=True)
class NormalizationParams:
    m: int = 36
    min_coverage: float = 0.8
    ddof: int = 1
    # Alternate readings kept for sensitivity analysis:
    # include_current puts month t itself into its window (t-m+1 .. t);
    # rescale_past divides past F by the current month's sigma instead of
    # averaging each past month's own G.
    include_current: bool = False
    rescale_past: bool = False

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ConfigError(f"window length m must be an integer >= 2, got {self.m!r}")
        if not 0 < self.min_coverage <= 1:
            raise ConfigError(f"min_coverage must be in (0, 1], got {self.min_coverage!r}")

    @property
    def required(self) -> int:
        """Minimum number of non-missing months in a window."""
        return max(2, math.ceil(self.min_coverage * self.m - 1e-9))


@dataclass
class MonthlySourceSeries:
    source: str
    months: np.ndarray  # contiguous month ordinals
    triple_sum: np.ndarray
    token_sum: np.ndarray
    doc_count: np.ndarray
    F: np.ndarray
    G: np.ndarray = None
    epu: np.ndarray = None

    def __post_init__(self):
        n = len(self.months)
        if n and np.any(np.diff(self.months) != 1):
            raise DataError(f"source {self.source}: months must be contiguous and increasing")
        if self.G is None:
            self.G = np.full(n, np.nan)
        if self.epu is None:
            self.epu = np.full(n, np.nan)


@dataclass
class EpuIndex:
    months: np.ndarray
    epu: np.ndarray
    n_sources: np.ndarray
    contributors: list[tuple[str, ...]] = field(default_factory=list)


def monthly_frequency(docs: Iterable[tuple[int, int]]) -> float:
    """Sum of triples over sum of tokens for one (source, month); NaN if no docs."""
    docs = list(docs)
    if not docs:
        return math.nan
    tri = sum(d[0] for d in docs)
    tok = sum(d[1] for d in docs)
    if tok == 0:
        raise DataError("empty documents in month: zero total tokens")
    return tri / tok


def source_series(source: str, months: Sequence[int],
                  counts: Mapping[int, Sequence[tuple[int, int]]]) -> MonthlySourceSeries:
    """Build the F series on the given month axis from per-document (Tri, Tok) pairs."""
    months = np.asarray(months, dtype=np.int64)
    n = len(months)
    tri = np.zeros(n, dtype=np.int64)
    tok = np.zeros(n, dtype=np.int64)
    ndoc = np.zeros(n, dtype=np.int64)
    F = np.full(n, np.nan)
    for i, mo in enumerate(months.tolist()):
        docs = counts.get(mo, ())
        if not docs:
            continue
        tri[i] = sum(d[0] for d in docs)
        tok[i] = sum(d[1] for d in docs)
        ndoc[i] = len(docs)
        try:
            F[i] = monthly_frequency(docs)
        except DataError:
            raise DataError(f"source {source}: empty documents in month {format_month(mo)}") from None
    return MonthlySourceSeries(source, months, tri, tok, ndoc, F)


def _window(i: int, params: NormalizationParams) -> slice:
    hi = i + 1 if params.include_current else i
    return slice(max(0, hi - params.m), hi)


def _sample_std(vals: np.ndarray, ddof: int) -> float:
    if vals.max() == vals.min():
        return 0.0
    return float(np.std(vals, ddof=ddof))


def normalize_source(series: MonthlySourceSeries, params: NormalizationParams = NormalizationParams()
                     ) -> MonthlySourceSeries:
    """Fill G (F over trailing std) and EPU (G over trailing mean of G).

    A value is missing whenever its window has fewer than
    ``params.required`` observed months, zero spread, or a non-positive mean.
    """
    F = series.F
    n = len(F)
    need = params.required
    G = np.full(n, np.nan)
    sigma = np.full(n, np.nan)
    for i in range(n):
        w = F[_window(i, params)]
        w = w[~np.isnan(w)]
        if len(w) < need:
            continue
        s = _sample_std(w, params.ddof)
        if s > 0:
            sigma[i] = s
            if not np.isnan(F[i]):
                G[i] = F[i] / s
    epu = np.full(n, np.nan)
    for i in range(n):
        if np.isnan(G[i]):
            continue
        if params.rescale_past:
            w = F[_window(i, params)]
            w = w[~np.isnan(w)] / sigma[i]
        else:
            w = G[_window(i, params)]
            w = w[~np.isnan(w)]
        if len(w) < need:
            continue
        mean = float(np.mean(w))
        if mean > 0:
            epu[i] = G[i] / mean
    return replace(series, G=G, epu=epu)


def aggregate_index(series: Sequence[MonthlySourceSeries] | Mapping[str, MonthlySourceSeries]
                    ) -> EpuIndex:
    """Average the defined per-source EPU values month by month.

    Series may sit on different month ranges; the result spans their union.
    """
    if isinstance(series, Mapping):
        series = list(series.values())
    if not series:
        return EpuIndex(np.zeros(0, dtype=np.int64), np.zeros(0), np.zeros(0, dtype=np.int64), [])
    lo = min(int(s.months[0]) for s in series if len(s.months))
    hi = max(int(s.months[-1]) for s in series if len(s.months))
    months = np.arange(lo, hi + 1, dtype=np.int64)
    values: list[list[tuple[str, float]]] = [[] for _ in months]
    for s in series:
        for mo, v in zip(s.months.tolist(), s.epu.tolist()):
            if not math.isnan(v):
                values[mo - lo].append((s.source, v))
    epu = np.full(len(months), np.nan)
    n_src = np.zeros(len(months), dtype=np.int64)
    contributors = []
    for i, vals in enumerate(values):
        contributors.append(tuple(sorted(name for name, _ in vals)))
        if vals:
            n_src[i] = len(vals)
            # fsum is exactly rounded, so source order cannot change the result
            epu[i] = math.fsum(v for _, v in vals) / len(vals)
    return EpuIndex(months, epu, n_src, contributors)
