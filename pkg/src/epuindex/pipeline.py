"""Corpus files to EPU index: per-document counts, monthly series, CSV output."""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from epuindex.corpus import Document, TokenizerConfig, parse_corpus, tokenize
from epuindex.errors import DataError
from epuindex.index import (
    EpuIndex,
    MonthlySourceSeries,
    NormalizationParams,
    aggregate_index,
    normalize_source,
    source_series,
)
from epuindex.lexicon import Lexicon
from epuindex.months import format_month, month_of, parse_month
from epuindex.triples import TripleParams, count_triples

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DocCount:
    id: str
    source: str
    month: int
    triples: int
    tokens: int


def count_document(doc: Document, tokenizer: TokenizerConfig, lexicon: Lexicon,
                   params: TripleParams) -> DocCount:
    tokens = tokenize(doc.text, tokenizer)
    sel = count_triples(tokens, lexicon, params, doc.source)
    return DocCount(doc.id, doc.source, month_of(doc.date), sel.count, len(tokens))


_worker_state = None


def _init_worker(state):
    global _worker_state
    _worker_state = state


def _count_in_worker(doc):
    return count_document(doc, *_worker_state)


def count_documents(docs: Iterable[Document], tokenizer: TokenizerConfig, lexicon: Lexicon,
                    params: TripleParams, threads: int = 1) -> list[DocCount]:
    """Counts in input order; ``threads > 1`` fans documents out to worker processes."""
    if threads <= 1:
        return [count_document(d, tokenizer, lexicon, params) for d in docs]
    docs = list(docs)
    with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker,
                             initargs=((tokenizer, lexicon, params),)) as pool:
        return list(pool.map(_count_in_worker, docs, chunksize=max(1, len(docs) // (threads * 8))))


def read_corpora(paths: Mapping[str, Sequence[Path]]) -> list[Document]:
    """Read every configured corpus file, checking records against their source."""
    docs = []
    for source in sorted(paths):
        for path in paths[source]:
            for doc in parse_corpus(path):
                if doc.source != source:
                    raise DataError(f"{path}: document {doc.id!r} has source {doc.source!r}, "
                                    f"expected {source!r}")
                docs.append(doc)
    return docs


def build_series(counts: Iterable[DocCount], sources: Sequence[str], start: int | None = None,
                 end: int | None = None) -> dict[str, MonthlySourceSeries]:
    """Monthly F series per source on a shared month axis ``start..end``."""
    counts = list(counts)
    if start is None or end is None:
        if not counts:
            raise DataError("no documents and no date range: cannot define the month axis")
        start = min(c.month for c in counts) if start is None else start
        end = max(c.month for c in counts) if end is None else end
    grouped: dict[str, dict[int, list[tuple[int, int]]]] = {s: defaultdict(list) for s in sources}
    for c in counts:
        if start <= c.month <= end:
            grouped.setdefault(c.source, defaultdict(list))[c.month].append((c.triples, c.tokens))
    months = list(range(start, end + 1))
    return {s: source_series(s, months, grouped[s]) for s in sorted(grouped)}


def _clip(s: MonthlySourceSeries, start: int, end: int) -> MonthlySourceSeries:
    keep = slice(start - int(s.months[0]), end - int(s.months[0]) + 1)
    return MonthlySourceSeries(s.source, s.months[keep], s.triple_sum[keep], s.token_sum[keep],
                               s.doc_count[keep], s.F[keep], s.G[keep], s.epu[keep])


def build_index(docs: Iterable[Document], tokenizer: TokenizerConfig, lexicon: Lexicon,
                params: TripleParams = TripleParams(), norm: NormalizationParams = NormalizationParams(),
                start: int | None = None, end: int | None = None, threads: int = 1,
                sources: Sequence[str] = ()) -> tuple[EpuIndex, dict[str, MonthlySourceSeries]]:
    """Index and per-source series on ``start..end`` (default: the documents' range).

    Documents dated before ``start`` still feed the trailing normalization
    windows; documents after ``end`` are ignored.
    """
    counts = count_documents(docs, tokenizer, lexicon, params, threads)
    if end is not None:
        counts = [c for c in counts if c.month <= end]
    first = min((c.month for c in counts), default=start)
    axis_start = first if start is None or (first is not None and first < start) else start
    series = build_series(counts, sources, axis_start, end)
    series = {s: normalize_source(v, norm) for s, v in series.items()}
    lo = axis_start if start is None else start
    hi = max(int(v.months[-1]) for v in series.values()) if end is None and series else end
    if series and lo != axis_start:
        series = {s: _clip(v, lo, hi) for s, v in series.items()}
    return aggregate_index(list(series.values())), series


def _fmt(x) -> str:
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def write_index_csv(index: EpuIndex, path, series: Mapping[str, MonthlySourceSeries] | None = None):
    """``month,epu,n_sources`` plus one EPU column per source when given."""
    names = sorted(series) if series else []
    lookup = {}
    for name in names:
        s = series[name]
        lookup[name] = dict(zip(s.months.tolist(), s.epu.tolist()))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["month", "epu", "n_sources", *names])
        for i, mo in enumerate(index.months.tolist()):
            row = [format_month(mo), _fmt(index.epu[i]), str(int(index.n_sources[i]))]
            row += [_fmt(lookup[n].get(mo, math.nan)) for n in names]
            w.writerow(row)


def read_index_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Month ordinals and EPU values (NaN where empty) from an index CSV."""
    months, vals = [], []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:2] != ["month", "epu"]:
            raise DataError(f"{path}: expected header starting with 'month,epu'")
        for lineno, row in enumerate(reader, start=2):
            try:
                months.append(parse_month(row[0]))
                vals.append(float(row[1]) if row[1] != "" else math.nan)
            except (ValueError, IndexError):
                raise DataError(f"{path}: bad row at line {lineno}") from None
    return np.asarray(months, dtype=np.int64), np.asarray(vals, dtype=float)


DIAGNOSTIC_COLUMNS = ["month", "doc_count", "triple_sum", "token_sum", "F", "G", "epu"]


def write_diagnostics(series: Mapping[str, MonthlySourceSeries], directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(series):
        s = series[name]
        path = directory / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(DIAGNOSTIC_COLUMNS)
            for i, mo in enumerate(s.months.tolist()):
                w.writerow([format_month(mo), int(s.doc_count[i]), int(s.triple_sum[i]),
                            int(s.token_sum[i]), _fmt(s.F[i]), _fmt(s.G[i]), _fmt(s.epu[i])])
        written.append(path)
    return written
