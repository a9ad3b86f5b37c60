import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epuindex.errors import ConfigError
from epuindex.lexicon import KeywordOccurrence, Lexicon, lexicon_from_mapping, load_lexicon, match_keywords


def _write(tmp_path, body):
    p = tmp_path / "lex.toml"
    p.write_text(body, encoding="utf-8")
    return p


def test_load(tmp_path):
    p = _write(tmp_path, 'economy = ["économique"]\npolicy = ["politique", "banque centrale"]\n'
                         'uncertainty = ["incertitude"]\n')
    lex = load_lexicon(p)
    assert len(lex) == 4
    assert sorted(len(k) for c in "EPU" for k in lex.entries[c]) == [1, 1, 1, 2]
    assert ("banque", "centrale") in lex
    assert lex.category_of(["banque", "centrale"]) == "P"


def test_duplicate_across_categories(tmp_path):
    p = _write(tmp_path, 'economy = ["économie"]\npolicy = ["politique"]\nuncertainty = ["Politique"]\n')
    with pytest.raises(ConfigError, match="duplicate keyword across categories"):
        load_lexicon(p)


def test_keyword_normalizes_to_empty():
    with pytest.raises(ConfigError, match="keyword normalizes to empty"):
        lexicon_from_mapping({"economy": ["13,50$"], "policy": ["p"], "uncertainty": ["u"]})


def test_empty_category():
    with pytest.raises(ConfigError, match="missing list 'uncertainty'"):
        lexicon_from_mapping({"economy": ["e"], "policy": ["p"]})
    with pytest.raises(ConfigError, match="category U is empty"):
        lexicon_from_mapping({"economy": ["e"], "policy": ["p"], "uncertainty": []})


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="lexicon file not found"):
        load_lexicon(tmp_path / "none.toml")


def test_stopwords_inside_entries_dropped(french):
    lex = lexicon_from_mapping({"economy": ["e"], "policy": ["Banque du Canada"], "uncertainty": ["u"]},
                               french)
    assert ("banque", "canada") in lex


def test_match_single_tokens(small_lexicon):
    occ = match_keywords(["incertitude", "sur", "politique", "économique"], small_lexicon)
    assert [(o.category, list(o.positions)) for o in occ] == [("U", [0]), ("P", [2]), ("E", [3])]


def test_match_multi_token(small_lexicon):
    occ = match_keywords(["banque", "centrale", "politique"], small_lexicon)
    assert [(o.category, o.keyword, list(o.positions)) for o in occ] == [
        ("P", ("banque", "centrale"), [0, 1]),
        ("P", ("politique",), [2]),
    ]


def test_match_nothing(small_lexicon):
    assert match_keywords(["rien", "ici"], small_lexicon) == []
    assert match_keywords([], small_lexicon) == []


def test_overlapping_occurrences_all_reported():
    lex = Lexicon({"E": [("a",)], "P": [("a", "b")], "U": [("b", "c"), ("c",)]})
    occ = match_keywords(list("abc"), lex)
    assert [(o.category, o.start, len(o.keyword)) for o in occ] == [
        ("E", 0, 1), ("P", 0, 2), ("U", 1, 2), ("U", 2, 1)]


def test_repr():
    o = KeywordOccurrence("P", ("banque", "centrale"), 4)
    assert repr(o) == "P@{4,5}"


VOCAB = list("abcdef")
keyword = st.lists(st.sampled_from(VOCAB), min_size=1, max_size=3).map(tuple)


@st.composite
def lexicons(draw):
    kws = draw(st.lists(keyword, min_size=3, max_size=10, unique=True))
    cats = [draw(st.sampled_from("EPU")) for _ in kws]
    cats[:3] = ["E", "P", "U"]
    return Lexicon({c: [k for k, cc in zip(kws, cats) if cc == c] for c in "EPU"})


def naive_matches(tokens, lex):
    out = []
    for start in range(len(tokens)):
        for cat in "EPU":
            for kw in lex.entries[cat]:
                if tuple(tokens[start:start + len(kw)]) == kw:
                    out.append((start, cat, len(kw), kw))
    return sorted(out)


@settings(max_examples=300, deadline=None)
@given(lexicons(), st.lists(st.sampled_from(VOCAB), max_size=25))
def test_complete_and_sound_against_naive_oracle(lex, tokens):
    occ = match_keywords(tokens, lex)
    for o in occ:
        assert tuple(tokens[i] for i in o.positions) == o.keyword
        assert o.stop < len(tokens)
    got = [(o.start, o.category, len(o.keyword), o.keyword) for o in occ]
    assert got == naive_matches(tokens, lex)


def test_load_idempotent(tmp_path, demo_lexicon, french):
    # writing the normalized entries back out and reloading gives the same lexicon
    names = {"E": "economy", "P": "policy", "U": "uncertainty"}
    body = "".join(
        f'{names[c]} = [{", ".join(repr(" ".join(k)).replace(chr(39), chr(34)) for k in sorted(demo_lexicon.entries[c]))}]\n'
        for c in "EPU")
    again = load_lexicon(_write(tmp_path, body), french)
    assert again == demo_lexicon
