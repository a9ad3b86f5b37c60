"""EPU keyword dictionary: loading and occurrence matching.

The lexicon file is TOML with three string lists::

    economy = ["économie", "économique"]
    policy = ["politique", "banque centrale"]
    uncertainty = ["incertitude"]

Entries are normalized with the document tokenizer, so multi-word keywords
become token sequences and any stop word inside an entry is dropped exactly
as it would be in document text.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from epuindex.corpus import TokenizerConfig, tokenize
from epuindex.errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

CATEGORIES = ("E", "P", "U")
FILE_KEYS = {"economy": "E", "policy": "P", "uncertainty": "U"}


@dataclass(frozen=True)
class KeywordOccurrence:
    category: str
    keyword: tuple[str, ...]
    start: int

    @property
    def positions(self) -> range:
        return range(self.start, self.start + len(self.keyword))

    @property
    def stop(self) -> int:
        """Last occupied position (inclusive)."""
        return self.start + len(self.keyword) - 1

    def __repr__(self):
        return f"{self.category}@{{{','.join(map(str, self.positions))}}}"


class Lexicon:
    """Immutable three-category keyword set, stored as a token trie."""

    def __init__(self, entries: Mapping[str, Sequence[Sequence[str]]]):
        cats: dict[str, frozenset[tuple[str, ...]]] = {}
        owner: dict[tuple[str, ...], str] = {}
        for cat in CATEGORIES:
            kws = frozenset(tuple(k) for k in entries.get(cat, ()))
            if not kws:
                raise ConfigError(f"lexicon category {cat} is empty")
            for kw in sorted(kws):
                if not kw or not all(kw):
                    raise ConfigError(f"empty keyword in category {cat}")
                if kw in owner:
                    raise ConfigError(
                        f"duplicate keyword across categories: {' '.join(kw)!r} "
                        f"in {owner[kw]} and {cat}"
                    )
                owner[kw] = cat
            cats[cat] = kws
        self.entries = cats
        self._owner = owner
        # trie node: (children dict, category or None)
        self._root: dict = {}
        for kw, cat in owner.items():
            node = self._root
            for tok in kw:
                node = node.setdefault(tok, {})
            node[None] = cat

    def __len__(self):
        return len(self._owner)

    def __contains__(self, keyword):
        return tuple(keyword) in self._owner

    def category_of(self, keyword) -> str:
        return self._owner[tuple(keyword)]

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self.entries == other.entries

    def __repr__(self):
        sizes = ", ".join(f"{c}={len(self.entries[c])}" for c in CATEGORIES)
        return f"Lexicon({sizes})"


def load_lexicon(path, tokenizer: TokenizerConfig | None = None) -> Lexicon:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"lexicon file not found: {path}")
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"lexicon file {path}: {exc}") from None
    return lexicon_from_mapping(raw, tokenizer, origin=str(path))


def lexicon_from_mapping(raw: Mapping, tokenizer: TokenizerConfig | None = None,
                         origin: str = "lexicon") -> Lexicon:
    tokenizer = tokenizer or TokenizerConfig()
    entries: dict[str, list[tuple[str, ...]]] = {}
    for key, cat in FILE_KEYS.items():
        items = raw.get(key)
        if items is None:
            raise ConfigError(f"{origin}: missing list {key!r}")
        if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
            raise ConfigError(f"{origin}: {key!r} must be a list of strings")
        kws = []
        for s in items:
            toks = tuple(tokenize(s, tokenizer))
            if not toks:
                raise ConfigError(f"{origin}: keyword normalizes to empty: {s!r}")
            kws.append(toks)
        entries[cat] = kws
    return Lexicon(entries)


def match_keywords(tokens: Sequence[str], lex: Lexicon) -> list[KeywordOccurrence]:
    """All keyword occurrences, overlapping ones included.

    Sorted by (start, category, keyword length).
    """
    out = []
    root = lex._root
    n = len(tokens)
    for i in range(n):
        node = root.get(tokens[i])
        j = i
        while node is not None:
            cat = node.get(None)
            if cat is not None:
                out.append(KeywordOccurrence(cat, tuple(tokens[i:j + 1]), i))
            j += 1
            if j >= n:
                break
            node = node.get(tokens[j])
    out.sort(key=lambda o: (o.start, o.category, len(o.keyword)))
    return out
