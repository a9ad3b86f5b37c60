"""Greedy unique-triple count against the exhaustive optimum.

Two instance families: candidates formed from random token streams (what the
pipeline sees) and arbitrary random triples of positions (adversarial).

    python scripts/greedy_gap.py --n 2000
"""

import argparse
import math

import numpy as np

from epuindex.lexicon import KeywordOccurrence, Lexicon, match_keywords
from epuindex.triples import CandidateTriple, TripleParams, candidate_triples, max_disjoint_oracle, select_unique_triples


def document_instance(rng):
    pool = iter(f"w{i}" for i in range(100))
    entries = {c: [tuple(next(pool) for _ in range(int(rng.integers(1, 3))))
                   for _ in range(int(rng.integers(1, 4)))] for c in "EPU"}
    keywords = [k for c in "EPU" for k in entries[c]]
    tokens = []
    for _ in range(int(rng.integers(10, 40))):
        tokens.extend(keywords[int(rng.integers(len(keywords)))] if rng.random() < 0.45 else ["filler"])
    tau = [2, 3, 5, 8, 12, math.inf][int(rng.integers(6))]
    return candidate_triples(match_keywords(tokens, Lexicon(entries)), TripleParams(tau))


def arbitrary_instance(rng):
    cands = []
    for _ in range(int(rng.integers(2, 16))):
        pos = sorted(int(q) for q in rng.choice(20, 3, replace=False))
        occ = [KeywordOccurrence(c, (c.lower(),), q) for c, q in zip("EPU", pos)]
        cands.append(CandidateTriple(*occ, pos[2] - pos[0], tuple(pos)))
    return cands


def run(make, n, rng):
    ratios, below = [], 0
    while len(ratios) < n:
        cands = make(rng)
        if not cands or len(cands) > 24:
            continue
        g, o = select_unique_triples(cands).count, max_disjoint_oracle(cands)
        below += g < o
        ratios.append(g / o)
    r = np.array(ratios)
    return r.mean(), r.min(), below


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for name, make in (("documents", document_instance), ("arbitrary", arbitrary_instance)):
        mean, worst, below = run(make, args.n, rng)
        print(f"{name:>10}: mean ratio {mean:.4f}, min {worst:.3f}, greedy < optimum in {below}/{args.n}")
