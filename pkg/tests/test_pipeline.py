import datetime as dt
import json

import numpy as np
import pytest

from epuindex.config import load_config
from epuindex.corpus import Document
from epuindex.errors import ConfigError, DataError
from epuindex.index import NormalizationParams
from epuindex.months import parse_month
from epuindex.pipeline import (
    build_index,
    count_document,
    count_documents,
    read_corpora,
    read_index_csv,
    write_index_csv,
)
from epuindex.synthetic import planted_corpus
from epuindex.triples import TripleParams


@pytest.fixture(scope="module")
def corpus():
    docs, planted = planted_corpus(seed=3, years=10, planted_offsets=(6,))
    return docs, planted


def test_count_document(french, small_lexicon):
    doc = Document("d1", "s", dt.date(2020, 1, 5),
                   "L'incertitude économique liée à la politique. Rien d'autre.")
    c = count_document(doc, french, small_lexicon, TripleParams())
    assert (c.triples, c.month) == (1, parse_month("2020-01"))
    assert c.tokens == len(["incertitude", "économique", "liée", "politique", "rien", "autre"])


def test_process_pool_matches_serial(corpus, french, demo_lexicon):
    docs = corpus[0][:200]
    assert count_documents(docs, french, demo_lexicon, TripleParams(), threads=3) == \
        count_documents(docs, french, demo_lexicon, TripleParams(), threads=1)


def test_start_keeps_warmup_history(corpus, french, demo_lexicon):
    docs, _ = corpus
    lo, hi = parse_month("1980-01"), parse_month("1989-12")
    full, _ = build_index(docs, french, demo_lexicon, start=lo, end=hi, sources=["alpha", "beta", "gamma"])
    late = parse_month("1985-01")
    part, series = build_index(docs, french, demo_lexicon, start=late, end=hi,
                               sources=["alpha", "beta", "gamma"])
    assert part.months[0] == late and part.months[-1] == hi
    assert np.array_equal(part.epu, full.epu[late - lo:], equal_nan=True)
    assert all(int(s.months[0]) == late for s in series.values())


def test_end_truncation_no_lookahead(corpus, french, demo_lexicon):
    docs, _ = corpus
    lo, hi = parse_month("1980-01"), parse_month("1989-12")
    full, _ = build_index(docs, french, demo_lexicon, start=lo, end=hi, sources=["alpha", "beta", "gamma"])
    cut = parse_month("1986-03")
    part, _ = build_index(docs, french, demo_lexicon, start=lo, end=cut, sources=["alpha", "beta", "gamma"])
    assert np.array_equal(part.epu, full.epu[: cut - lo + 1], equal_nan=True)


def test_index_csv_roundtrip(corpus, french, demo_lexicon, tmp_path):
    docs, _ = corpus
    index, series = build_index(docs, french, demo_lexicon, sources=["alpha", "beta", "gamma"])
    write_index_csv(index, tmp_path / "i.csv", series)
    months, values = read_index_csv(tmp_path / "i.csv")
    assert np.array_equal(months, index.months)
    assert np.array_equal(values, index.epu, equal_nan=True)


def test_read_corpora_checks_source(tmp_path):
    path = tmp_path / "a.jsonl"
    path.write_text(json.dumps({"id": "1", "source": "b", "date": "2000-01-01", "text": "x"}) + "\n")
    with pytest.raises(DataError, match="has source 'b', expected 'a'"):
        read_corpora({"a": [path]})


def _config(tmp_path, extra=""):
    for name in ("c.jsonl", "stop.txt", "lex.toml"):
        (tmp_path / name).write_text("x\n" if name != "lex.toml" else
                                     'economy = ["e"]\npolicy = ["p"]\nuncertainty = ["u"]\n')
    path = tmp_path / "run.toml"
    path.write_text('[corpus]\nsrc = "c.jsonl"\n[tokenizer]\nstopwords = "stop.txt"\n'
                    '[lexicon]\npath = "lex.toml"\n' + extra)
    return path


def test_config_defaults_and_paths(tmp_path):
    cfg = load_config(_config(tmp_path))
    assert cfg.corpus == {"src": [tmp_path / "c.jsonl"]}
    assert cfg.output_dir == tmp_path / "out"
    assert cfg.triples.tau == 125 and cfg.norm == NormalizationParams()


@pytest.mark.parametrize("extra, message", [
    ('[triples]\ntau = 0\n', "tau"),
    ('[triples]\noverrides = { other = "inf" }\n', "unconfigured source"),
    ('[index]\nm = 1\n', "window length"),
    ('[index]\nwindow = 3\n', "unknown key 'window'"),
    ('[run]\nstart = "2001-01"\nend = "2000-01"\n', "run.start"),
    ('[run]\nstart = "2001-13"\n', "invalid month"),
    ('[nowcast]\ntarget = "y"\n', "nowcast.panel"),
])
def test_config_errors(tmp_path, extra, message):
    with pytest.raises(ConfigError, match=message):
        load_config(_config(tmp_path, extra))


def test_config_tau_override(tmp_path):
    cfg = load_config(_config(tmp_path, '[triples]\ntau = 50\noverrides = { src = "inf" }\n'))
    assert cfg.triples.tau_for("src") == float("inf") and cfg.triples.tau_for("x") == 50


def test_config_missing_files(tmp_path):
    path = _config(tmp_path)
    (tmp_path / "stop.txt").unlink()
    with pytest.raises(ConfigError, match="stop-word file not found"):
        load_config(path)
