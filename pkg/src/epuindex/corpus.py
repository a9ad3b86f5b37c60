"""Document ingestion and tokenization.

Raw text becomes a vector of lowercase, purely alphabetic tokens:

1. apostrophes (straight and typographic) become spaces, so elided clitics
   such as ``l'`` and ``d'`` stand alone and can be dropped as stop words;
2. the text is NFC-normalized and split into words following the Unicode
   word boundary rules (UAX #29);
3. each word is case-folded and NFC-normalized, split at hyphens, and kept
   only if it is alphabetic and not a stop word.
"""

from __future__ import annotations

import datetime as dt
import json
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

from uniseg.wordbreak import words as _uax29_words

from epuindex.errors import ConfigError, DataError

APOSTROPHES = "'\u2019\u2018\u02bc\uff07"
HYPHENS = "-\u00ad\u2010\u2011\u2012\u2013\u2014\u2015\u2212"

_APOSTROPHE_TABLE = str.maketrans({c: " " for c in APOSTROPHES})
_HYPHEN_RE = re.compile(f"[{re.escape(HYPHENS)}]")
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

MIN_DATE = dt.date(1800, 1, 1)
MAX_DATE = dt.date(2100, 12, 31)
RECORD_KEYS = frozenset({"id", "source", "date", "text"})


@dataclass(frozen=True)
class Document:
    id: str
    source: str
    date: dt.date
    text: str

    def __post_init__(self):
        if not self.id:
            raise DataError("document id must be nonempty")
        if not self.source:
            raise DataError(f"document {self.id!r}: source must be nonempty")
        if not MIN_DATE <= self.date <= MAX_DATE:
            raise DataError(f"document {self.id!r}: date {self.date} out of range")

    @property
    def month(self) -> str:
        return f"{self.date.year:04d}-{self.date.month:02d}"


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenizer settings. ``stopwords`` holds already-normalized tokens."""

    stopwords: frozenset[str] = frozenset()
    stopword_path: Path | None = None
    apostrophe_split: bool = True
    unicode_normal_form: str = field(default="NFC", init=False)

    @classmethod
    def from_file(cls, path, apostrophe_split: bool = True) -> "TokenizerConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"stop-word file not found: {path}")
        words = load_stopwords(path, apostrophe_split=apostrophe_split)
        if not words:
            raise ConfigError(f"stop-word file is empty: {path}")
        return cls(stopwords=words, stopword_path=path, apostrophe_split=apostrophe_split)


def load_stopwords(path, apostrophe_split: bool = True) -> frozenset[str]:
    """Read a one-word-per-line file; ``#`` lines are comments.

    Entries go through the same normalization as document text, so a line
    like ``aujourd'hui`` contributes both of its pieces.
    """
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.update(_raw_tokens(line, apostrophe_split))
    return frozenset(words)


@lru_cache(maxsize=1 << 17)
def _segment_chunk(chunk: str) -> tuple[str, ...]:
    # A whitespace-free chunk: word boundaries always fall on both sides of
    # whitespace, so segmenting chunk by chunk gives the same words.
    out = []
    for word in _uax29_words(chunk):
        folded = unicodedata.normalize("NFC", word.casefold())
        for piece in _HYPHEN_RE.split(folded):
            if piece and piece.isalpha() and not any(c.isupper() for c in piece):
                out.append(piece)
    return tuple(out)


def _raw_tokens(text: str, apostrophe_split: bool) -> list[str]:
    if apostrophe_split:
        text = text.translate(_APOSTROPHE_TABLE)
    text = unicodedata.normalize("NFC", text)
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_segment_chunk(chunk))
    return tokens


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    """Turn raw text into the filtered token vector; position = list index."""
    stop = config.stopwords
    return [t for t in _raw_tokens(text, config.apostrophe_split) if t not in stop]


def _parse_record(line: str, lineno: int) -> Document:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed record at line {lineno}: {exc.msg}") from None
    if not isinstance(rec, dict):
        raise DataError(f"malformed record at line {lineno}: expected an object")
    for key in sorted(RECORD_KEYS):
        if key not in rec:
            raise DataError(f"missing field {key!r} at line {lineno}")
        if not isinstance(rec[key], str):
            raise DataError(f"field {key!r} must be a string at line {lineno}")
    extra = sorted(set(rec) - RECORD_KEYS)
    if extra:
        raise DataError(f"unexpected field {extra[0]!r} at line {lineno}")
    raw = rec["date"]
    try:
        if not _DATE_RE.match(raw):
            raise ValueError
        date = dt.date.fromisoformat(raw)
    except ValueError:
        raise DataError(f"invalid date at line {lineno}: {raw!r}") from None
    try:
        return Document(id=rec["id"], source=rec["source"], date=date, text=rec["text"])
    except DataError as exc:
        raise DataError(f"{exc} (line {lineno})") from None


def parse_corpus(path) -> Iterator[Document]:
    """Lazily read a newline-delimited JSON corpus file in file order.

    Blank lines are skipped. Duplicate ids are rejected.
    """
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            doc = _parse_record(line, lineno)
            if doc.id in seen:
                raise DataError(f"duplicate document id {doc.id!r} at line {lineno}")
            seen.add(doc.id)
            yield doc


def write_corpus(docs: Iterable[Document], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in docs:
            rec = {"id": d.id, "source": d.source, "date": d.date.isoformat(), "text": d.text}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
