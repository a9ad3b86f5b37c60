"""Seeded synthetic data: planted-event corpora, factor panels, nowcast panels.

Used by the test suite and the demo scripts; the index pipeline itself is
deterministic and draws no random numbers.
"""

from __future__ import annotations

import datetime as dt
import shutil
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from epuindex.corpus import Document
from epuindex.months import format_month, parse_month
from epuindex.nowcast.panel import MacroPanel

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

FILLER = (
    "marché ville hiver route école journal sport culture saison quartier maison rivière "
    "hôpital festival musée usine travail famille province village théâtre récolte neige "
    "printemps été automne élève professeur médecin joueur équipe victoire match concert "
    "spectacle livre auteur histoire montagne forêt lac port navire train avion"
).split()
FILLER_STOP = ("le", "la", "les", "de", "des", "du", "et", "à", "en", "pour", "sur", "dans")


def data_path(name: str):
    return resources.files("epuindex") / "data" / name


def demo_keywords() -> dict[str, list[str]]:
    raw = tomllib.loads(data_path("lexicon_fr.toml").read_text(encoding="utf-8"))
    return {"E": raw["economy"], "P": raw["policy"], "U": raw["uncertainty"]}


@dataclass(frozen=True)
class SourceSpec:
    name: str
    first_year: int  # offset from the corpus start, inclusive
    last_year: int  # offset, exclusive
    triple_rate: float  # background triples per document
    doc_len: int


DEFAULT_SOURCES = (
    SourceSpec("alpha", 0, 28, 2.0, 300),
    SourceSpec("beta", 8, 30, 6.0, 500),
    SourceSpec("gamma", 0, 20, 1.0, 250),
)


def _text(rng, n_words, n_triples, keywords) -> str:
    words = [FILLER[i] for i in rng.integers(0, len(FILLER), n_words)]
    # stop words, numbers and punctuation that the tokenizer must drop
    for _ in range(n_words // 5):
        words.insert(int(rng.integers(0, len(words) + 1)), FILLER_STOP[rng.integers(0, len(FILLER_STOP))])
    for _ in range(n_words // 40):
        words.insert(int(rng.integers(0, len(words) + 1)), f"{rng.integers(1, 2000)},{rng.integers(0, 99)}$")
    slots = sorted(int(s) for s in rng.integers(0, len(words) + 1, n_triples))
    for slot in reversed(slots):
        kws = [keywords[c][rng.integers(0, len(keywords[c]))] for c in "EPU"]
        a, b, c = (kws[i] for i in rng.permutation(3))
        gap1, gap2 = (FILLER[i] for i in rng.integers(0, len(FILLER), 2))
        words[slot:slot] = [a, gap1, b, "l'" + gap2, c]
    sentences, out = [], []
    for i, w in enumerate(words):
        out.append(w.capitalize() if not out else w)
        if len(out) >= 12 and rng.random() < 0.2:
            sentences.append(" ".join(out) + ".")
            out = []
    if out:
        sentences.append(" ".join(out) + ".")
    return " ".join(sentences)


def planted_corpus(seed: int = 0, start: str = "1980-01", years: int = 30,
                   sources=DEFAULT_SOURCES, planted_offsets=(6, 11, 16, 21, 26),
                   planted_triples: int = 40, docs_per_month: int = 2):
    """Documents from several sources with time-varying availability.

    Every available source gets ``planted_triples`` extra EPU triples per
    document in month 6 of each planted year offset. Returns
    ``(documents, planted month ordinals)``.
    """
    rng = np.random.default_rng(seed)
    keywords = demo_keywords()
    m0 = parse_month(start)
    planted = [m0 + 12 * y + 5 for y in planted_offsets]
    docs = []
    for spec in sources:
        for mo in range(m0 + 12 * spec.first_year, m0 + 12 * spec.last_year):
            year, month = divmod(mo, 12)
            for k in range(docs_per_month):
                n_tri = int(rng.poisson(spec.triple_rate)) + int(rng.integers(0, 2))
                if mo in planted:
                    n_tri += planted_triples
                text = _text(rng, spec.doc_len, n_tri, keywords)
                day = int(rng.integers(1, 29))
                docs.append(Document(f"{spec.name}-{format_month(mo)}-{k}", spec.name,
                                     dt.date(year, month + 1, day), text))
    return docs, planted


def factor_panel(seed: int, N: int = 50, T: int = 200, k: int = 3, snr: float = 4.0) -> np.ndarray:
    """T x N standardized panel with ``k`` factors; common:idiosyncratic variance = snr."""
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((T, k))
    L = rng.standard_normal((N, k))
    common = F @ L.T
    noise_sd = np.sqrt(common.var(axis=0).mean() / snr)
    X = common + noise_sd * rng.standard_normal((T, N))
    return (X - X.mean(axis=0)) / X.std(axis=0)


def support_problem(seed: int, n: int = 60, p: int = 50, support=(3, 17), coef=1.0, noise=0.3):
    """Standardized design with y driven by ``support`` columns plus noise."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    X = (X - X.mean(axis=0)) / X.std(axis=0)
    y = sum(coef * (-1) ** i * X[:, j] for i, j in enumerate(support)) + noise * rng.standard_normal(n)
    return X, y


def nowcast_panel(seed: int, start: str = "1984-12", end: str = "2020-06", n_vars: int = 20,
                  epu_coef: float = 0.0, n_factors: int = 2):
    """Target ``y`` plus ``n_vars`` factor-driven predictors, and an EPU series.

    y_t = 0.2 y_{t-1} + epu_coef (epu_t - mean) + 0.5 f_{t-1} + noise, so the
    contemporaneous EPU carries information only when ``epu_coef`` != 0.
    Returns ``(panel, epu)`` with ``epu`` on the panel's month axis.
    """
    rng = np.random.default_rng(seed)
    m0, m1 = parse_month(start), parse_month(end)
    T = m1 - m0 + 1
    f = np.zeros((T, n_factors))
    log_epu = np.zeros(T)
    for t in range(1, T):
        f[t] = 0.5 * f[t - 1] + rng.standard_normal(n_factors)
        log_epu[t] = 0.7 * log_epu[t - 1] + 0.3 * rng.standard_normal()
    epu = np.exp(log_epu)
    L = rng.standard_normal((n_vars, n_factors))
    X = f @ L.T + rng.standard_normal((T, n_vars))
    y = np.zeros(T)
    for t in range(1, T):
        y[t] = 0.2 * y[t - 1] + epu_coef * (epu[t] - 1.0) + 0.5 * f[t - 1, 0] + 0.5 * rng.standard_normal()
    cols = {"y": y, **{f"x{j + 1:03d}": X[:, j] for j in range(n_vars)}}
    return MacroPanel(np.arange(m0, m1 + 1), cols, {c: "none" for c in cols}), epu


DEMO_CONFIG = """\
# Synthetic demo run. Paths are relative to this file.
[run]
output_dir = "out"
start = "{start}"
end = "{end}"

[corpus]
{corpus}

[tokenizer]
stopwords = "stopwords_fr.txt"

[lexicon]
path = "lexicon_fr.toml"

[triples]
tau = 125

[index]
m = 36
min_coverage = 0.8

[nowcast]
panel = "panel.csv"
transforms = "transforms.toml"
target = "y"
window = 60
eval_start = "{eval_start}"
variants = ["M0", "M1", "M2"]
estimators = ["enet", "pca"]
alt_epu = "alt_epu.csv"
"""


def write_demo(directory, seed: int = 0, years: int = 30, epu_coef: float = 1.0,
               n_vars: int = 20) -> Path:
    """Write a self-contained demo (corpus, lexicon, panel, config); returns the config path.

    The panel target is driven by the index the demo corpus produces, so
    the nowcast stage has a real EPU signal to find.
    """
    from epuindex.corpus import TokenizerConfig, write_corpus
    from epuindex.index import NormalizationParams
    from epuindex.lexicon import load_lexicon
    from epuindex.nowcast.panel import write_panel_csv
    from epuindex.pipeline import build_index
    from epuindex.triples import TripleParams

    directory = Path(directory)
    (directory / "corpus").mkdir(parents=True, exist_ok=True)
    docs, planted = planted_corpus(seed, years=years)
    names = sorted({d.source for d in docs})
    for name in names:
        write_corpus([d for d in docs if d.source == name], directory / "corpus" / f"{name}.jsonl")
    for f in ("stopwords_fr.txt", "lexicon_fr.toml"):
        shutil.copyfile(data_path(f), directory / f)

    tok = TokenizerConfig.from_file(directory / "stopwords_fr.txt")
    lex = load_lexicon(directory / "lexicon_fr.toml", tok)
    start, end = min(d.date for d in docs), max(d.date for d in docs)
    m_start, m_end = start.year * 12 + start.month - 1, end.year * 12 + end.month - 1
    index, _ = build_index(docs, tok, lex, TripleParams(), NormalizationParams(), m_start, m_end,
                           sources=names)
    defined = np.flatnonzero(~np.isnan(index.epu))
    first = int(index.months[defined[0]])
    # panel starts one month before the first index value (regressors are lagged)
    panel, _ = nowcast_panel(seed, format_month(first - 1), format_month(m_end), n_vars, 0.0)
    rng = np.random.default_rng(seed + 1)
    epu = np.concatenate([[np.nan], index.epu[defined[0]:]])
    epu_c = np.log(np.where(np.isnan(epu), 1.0, epu))
    y = panel.columns["y"].copy()
    y[1:] += epu_coef * epu_c[1:]
    cols = dict(panel.columns)
    cols["y"] = y
    # one series stored in levels to exercise the log-difference transformation
    cols["ip"] = 100.0 * np.exp(np.cumsum(0.01 * cols.pop("x001")))
    write_panel_csv(panel.months, cols, directory / "panel.csv")
    (directory / "transforms.toml").write_text('ip = "log-difference"\n', encoding="utf-8")

    alt = np.exp(0.3 * rng.standard_normal(len(panel.months)))
    with open(directory / "alt_epu.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("month,epu\n")
        for mo, v in zip(panel.months.tolist(), alt.tolist()):
            fh.write(f"{format_month(mo)},{v!r}\n")

    corpus = "\n".join(f'{n} = "corpus/{n}.jsonl"' for n in names)
    config = directory / "config.toml"
    config.write_text(DEMO_CONFIG.format(start=format_month(m_start), end=format_month(m_end),
                                         corpus=corpus, eval_start=format_month(first + 1 + 60)),
                      encoding="utf-8")
    (directory / "planted_months.txt").write_text(
        "\n".join(format_month(m) for m in planted) + "\n", encoding="utf-8")
    return config
