"""EPU triple formation and unique-triple counting for one document."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from epuindex.errors import ConfigError, EpuError
from epuindex.lexicon import KeywordOccurrence, Lexicon, match_keywords

DEFAULT_TAU = 125
ORACLE_LIMIT = 24


def parse_tau(value) -> float:
    """Accept a positive integer or ``"inf"``; returns an int or ``math.inf``."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return math.inf
        try:
            value = int(value)
        except ValueError:
            raise ConfigError(f"tau must be a positive integer or 'inf', got {value!r}") from None
    if isinstance(value, float) and math.isinf(value) and value > 0:
        return math.inf
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"tau must be a positive integer or 'inf', got {value!r}")
    return value


@dataclass(frozen=True)
class TripleParams:
    tau: float = DEFAULT_TAU
    overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tau", parse_tau(self.tau))
        object.__setattr__(self, "overrides",
                           {s: parse_tau(t) for s, t in dict(self.overrides).items()})

    def tau_for(self, source: str | None) -> float:
        return self.overrides.get(source, self.tau)


@dataclass(frozen=True)
class CandidateTriple:
    e: KeywordOccurrence
    p: KeywordOccurrence
    u: KeywordOccurrence
    span: int
    occupied: tuple[int, ...]

    def sort_key(self):
        return (self.occupied[-1], self.occupied[0], self.occupied, self._tiebreak())

    def _tiebreak(self):
        return tuple((o.start, len(o.keyword)) for o in (self.e, self.p, self.u))


@dataclass(frozen=True)
class TripleSelection:
    selected: tuple[CandidateTriple, ...]

    @property
    def count(self) -> int:
        return len(self.selected)


def pairwise_distance(a: KeywordOccurrence, b: KeywordOccurrence) -> int:
    """Minimum |p - q| over the positions occupied by ``a`` and ``b``."""
    # both position sets are contiguous ranges
    return max(0, b.start - a.stop, a.start - b.stop)


def _make_triple(e, p, u) -> CandidateTriple | None:
    if e.start <= p.stop and p.start <= e.stop:
        return None
    if e.start <= u.stop and u.start <= e.stop:
        return None
    if p.start <= u.stop and u.start <= p.stop:
        return None
    span = max(pairwise_distance(e, p), pairwise_distance(e, u), pairwise_distance(p, u))
    occupied = tuple(sorted((*e.positions, *p.positions, *u.positions)))
    return CandidateTriple(e, p, u, span, occupied)


class _ByStart:
    """Occurrences of one category, searchable by distance to a position range."""

    def __init__(self, occs):
        self.occs = sorted(occs, key=lambda o: (o.start, len(o.keyword)))
        self.starts = [o.start for o in self.occs]
        self.maxlen = max((len(o.keyword) for o in self.occs), default=1)

    def near(self, occ, tau):
        if math.isinf(tau):
            return self.occs
        lo = bisect_left(self.starts, occ.start - tau - self.maxlen + 1)
        hi = bisect_right(self.starts, occ.stop + tau)
        return [o for o in self.occs[lo:hi] if pairwise_distance(occ, o) <= tau]


def candidate_triples(occs: Sequence[KeywordOccurrence], params: TripleParams | float,
                      source: str | None = None) -> list[CandidateTriple]:
    """All (E, P, U) combinations with span <= tau and no shared position."""
    tau = params.tau_for(source) if isinstance(params, TripleParams) else parse_tau(params)
    es = [o for o in occs if o.category == "E"]
    ps = _ByStart(o for o in occs if o.category == "P")
    us = _ByStart(o for o in occs if o.category == "U")
    if not es or not ps.occs or not us.occs:
        return []
    out = []
    for e in sorted(es, key=lambda o: (o.start, len(o.keyword))):
        for p in ps.near(e, tau):
            near_p = us.near(p, tau)
            if not near_p:
                continue
            for u in near_p:
                if pairwise_distance(e, u) > tau:
                    continue
                t = _make_triple(e, p, u)
                if t is not None:
                    out.append(t)
    out.sort(key=lambda t: (t.occupied[0], t.occupied, t._tiebreak()))
    return out


def select_unique_triples(cands: Sequence[CandidateTriple]) -> TripleSelection:
    """Greedy position-disjoint selection.

    Candidates are scanned by (last position, first position, occupied set)
    and kept when none of their positions is already used.
    """
    used: set[int] = set()
    chosen = []
    for t in sorted(cands, key=CandidateTriple.sort_key):
        if used.isdisjoint(t.occupied):
            used.update(t.occupied)
            chosen.append(t)
    return TripleSelection(tuple(chosen))


def max_disjoint_oracle(cands: Sequence[CandidateTriple]) -> int:
    """Exact maximum number of pairwise-disjoint candidates (exhaustive search)."""
    if len(cands) > ORACLE_LIMIT:
        raise EpuError(
            f"oracle instance too large ({len(cands)} > {ORACLE_LIMIT} candidates); "
            "sample smaller documents"
        )
    masks = sorted({sum(1 << p for p in t.occupied) for t in cands},
                   key=lambda m: bin(m).count("1"))
    n = len(masks)
    best = 0

    def search(i, used, picked):
        nonlocal best
        if picked > best:
            best = picked
        if i == n or picked + (n - i) <= best:
            return
        m = masks[i]
        if not m & used:
            search(i + 1, used | m, picked + 1)
        search(i + 1, used, picked)

    search(0, 0, 0)
    return best


def count_triples(tokens: Sequence[str], lex: Lexicon, params: TripleParams | float,
                  source: str | None = None) -> TripleSelection:
    """Tri for one document: match keywords, form candidates, select greedily."""
    return select_unique_triples(candidate_triples(match_keywords(tokens, lex), params, source))
