"""Author-keyword normalization, the stem dictionary and document frequencies."""

from __future__ import annotations

import csv
import re
import string
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .corpus import ArticleRecord
from .stemmer import Stemmer
from .window import TimeWindow

_DELIMITERS = re.compile(r"[:;/]")
_ASCII_PUNCT = frozenset(string.punctuation)
_SEPARATORS = frozenset("-")

_default_stemmer: Stemmer | None = None


def default_stemmer() -> Stemmer:
    global _default_stemmer
    if _default_stemmer is None:
        _default_stemmer = Stemmer()
    return _default_stemmer


def split_raw_keywords(raw_field: str) -> list[str]:
    """Split a delimiter-joined keyword field into lowercased keywords."""
    parts = (p.strip().lower() for p in _DELIMITERS.split(raw_field or ""))
    return [p for p in parts if p]


def _is_separator(ch: str) -> bool:
    if ch in _SEPARATORS or ch.isspace():
        return True
    if ch.isascii():
        return False
    cat = unicodedata.category(ch)
    return cat[0] in "PSZ" or cat == "Cc"


def tokenize_keyword(raw: str) -> list[str]:
    """Lowercase, drop ASCII punctuation and split into word tokens.

    Hyphens, whitespace and any non-ASCII punctuation or symbol (en dash,
    registered sign, ...) separate tokens; other ASCII punctuation is deleted
    in place, so ``"1,3,4"`` becomes ``"134"``.
    """
    text = unicodedata.normalize("NFC", unicodedata.normalize("NFC", raw).casefold())
    chars = []
    for ch in text:
        if _is_separator(ch):
            chars.append(" ")
        elif ch in _ASCII_PUNCT or unicodedata.category(ch) == "Cc":
            continue
        else:
            chars.append(ch)
    return "".join(chars).split()


def normalize_keyword(raw: str, stemmer: Stemmer | None = None) -> str | None:
    """Canonical stemmed form of one keyword, or None if nothing survives.

    >>> normalize_keyword("Neuropathic Pain")
    'neuropath pain'
    """
    stem = (stemmer or default_stemmer()).stem
    tokens = [stem(t) for t in tokenize_keyword(raw)]
    tokens = [t for t in tokens if len(t) > 2]
    return " ".join(tokens) if tokens else None


def normalize_field(raw_field: str, stemmer: Stemmer | None = None) -> tuple[str, ...]:
    """Canonical keywords of one article, first occurrence order, no repeats."""
    seen: dict[str, None] = {}
    for kw in split_raw_keywords(raw_field):
        canon = normalize_keyword(kw, stemmer)
        if canon is not None:
            seen.setdefault(canon)
    return tuple(seen)


def normalize_corpus(
    records: Iterable[ArticleRecord], stemmer: Stemmer | None = None
) -> list[ArticleRecord]:
    """Fill ``keywords`` of every record from its raw keyword field."""
    return [replace(r, keywords=normalize_field(r.raw_keywords, stemmer)) for r in records]


# --- stem dictionary -------------------------------------------------------

StemDictionary = dict[str, set[str]]


def build_dictionary(
    corpus: Iterable[ArticleRecord], stemmer: Stemmer | None = None
) -> StemDictionary:
    entries: dict[str, set[str]] = defaultdict(set)
    for rec in corpus:
        for variant in split_raw_keywords(rec.raw_keywords):
            canon = normalize_keyword(variant, stemmer)
            if canon is not None:
                entries[canon].add(variant)
    return dict(entries)


def write_dictionary(dictionary: StemDictionary, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["canonical", "variant"])
        for canon in sorted(dictionary):
            for variant in sorted(dictionary[canon]):
                w.writerow([canon, variant])


# --- document frequency ----------------------------------------------------

@dataclass
class FrequencyTable:
    window: TimeWindow
    counts: dict[str, int] = field(default_factory=dict)
    article_count: int = 0

    def __getitem__(self, keyword: str) -> int:
        return self.counts.get(keyword, 0)

    def __len__(self) -> int:
        return len(self.counts)


def frequency_table(corpus: Iterable[ArticleRecord], window: TimeWindow) -> FrequencyTable:
    """Number of in-window articles listing each keyword."""
    counts: Counter[str] = Counter()
    n = 0
    for rec in corpus:
        if rec.year in window:
            n += 1
            counts.update(set(rec.keywords))
    return FrequencyTable(window, dict(sorted(counts.items())), n)
