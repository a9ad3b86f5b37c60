"""Planted-event recovery across corpus seeds.

Reports, per seed, whether the planted months are the top index values and
the gap between the last planted value and the best other month.

    python scripts/planted_sweep.py --seeds 10
"""

import argparse

import numpy as np

from epuindex.corpus import TokenizerConfig
from epuindex.index import NormalizationParams
from epuindex.lexicon import load_lexicon
from epuindex.months import format_month, parse_month
from epuindex.pipeline import build_index
from epuindex.synthetic import data_path, planted_corpus
from epuindex.triples import TripleParams

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    tok = TokenizerConfig.from_file(data_path("stopwords_fr.txt"))
    lex = load_lexicon(data_path("lexicon_fr.toml"), tok)
    hits = 0
    for seed in range(args.seeds):
        docs, planted = planted_corpus(seed)
        index, _ = build_index(docs, tok, lex, TripleParams(), NormalizationParams(),
                               parse_month("1980-01"), parse_month("2009-12"),
                               sources=sorted({d.source for d in docs}))
        value = dict(zip(index.months.tolist(), index.epu.tolist()))
        low = min(value[m] for m in planted)
        rival = max((v for m, v in value.items() if m not in planted and not np.isnan(v)))
        rival_month = next(m for m, v in value.items() if v == rival)
        ok = low > rival
        hits += ok
        print(f"seed {seed}: {'ok ' if ok else 'MISS'} lowest planted {low:.2f}, "
              f"best other {rival:.2f} ({format_month(rival_month)})")
    print(f"{hits}/{args.seeds} seeds rank all planted months on top")
