"""Bibliographic records: file import, deduplication and the on-disk corpus store."""

from __future__ import annotations

import csv
import json
import logging
import re
import string
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest"
ARTICLES_NAME = "articles.ndjson"

_ASCII_PUNCT = frozenset(string.punctuation)


class CorpusError(Exception):
    """Fatal problem reading or writing bibliographic data."""


class Source(str, Enum):
    PUBMED = "pubmed"
    WOS = "wos"
    IEEE = "ieee"
    EV = "ev"
    OTHER = "other"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RawArticle:
    source: Source
    external_id: str
    title: str
    year: int
    raw_keyword_field: str = ""

    def __post_init__(self):
        object.__setattr__(self, "source", Source(self.source))
        if not self.title.strip():
            raise ValueError("empty title")
        if not 1000 <= self.year <= 9999:
            raise ValueError(f"year {self.year} is not a four-digit year")


@dataclass(frozen=True)
class ArticleRecord:
    id: int
    title: str
    title_key: str
    year: int
    sources: frozenset[Source]
    keywords: tuple[str, ...] = ()
    raw_keywords: str = ""
    external_ids: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", frozenset(Source(s) for s in self.sources))
        object.__setattr__(self, "keywords", tuple(self.keywords))
        object.__setattr__(self, "external_ids", tuple(self.external_ids))
        if not self.sources:
            raise ValueError("article without a source")
        if len(set(self.keywords)) != len(self.keywords):
            raise ValueError(f"duplicate keywords in article {self.id}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "title_key": self.title_key,
            "year": self.year,
            "sources": sorted(s.value for s in self.sources),
            "keywords": list(self.keywords),
            "raw_keywords": self.raw_keywords,
            "external_ids": list(self.external_ids),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArticleRecord":
        return cls(
            id=int(d["id"]),
            title=d["title"],
            title_key=d["title_key"],
            year=int(d["year"]),
            sources=frozenset(d["sources"]),
            keywords=tuple(d.get("keywords", ())),
            raw_keywords=d.get("raw_keywords", ""),
            external_ids=tuple(d.get("external_ids", ())),
        )


@dataclass
class DedupReport:
    raw_count: int
    removed_count: int
    kept_count: int
    per_source_overlap: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "raw_count": self.raw_count,
            "removed_count": self.removed_count,
            "kept_count": self.kept_count,
            "per_source_overlap": dict(sorted(self.per_source_overlap.items())),
        }

    def summary(self) -> str:
        return (
            f"dedup: {self.raw_count} raw, {self.removed_count} removed, "
            f"{self.kept_count} kept"
        )


def title_key(title: str) -> str:
    """Lowercase, punctuation-free, whitespace-collapsed form of a title."""
    text = unicodedata.normalize("NFC", title).lower()
    text = "".join(
        ch for ch in text
        if ch not in _ASCII_PUNCT and not unicodedata.category(ch).startswith("P")
    )
    return " ".join(text.split())


def _parse_year(text: str | None) -> int | None:
    if not text:
        return None
    m = re.search(r"\b(\d{4})\b", text) or re.match(r"(\d{4})", text.strip())
    return int(m.group(1)) if m else None


# --- file import -----------------------------------------------------------

def import_export_file(
    path: str | Path,
    source: Source | str,
    fmt: str,
    warnings: list[str] | None = None,
) -> list[RawArticle]:
    """Read a CSV or RIS export into raw articles, in file order.

    Rows that cannot be used (no title, no year) are skipped and described in
    ``warnings``. A CSV without one of the required columns is fatal.
    """
    path = Path(path)
    source = Source(source)
    if warnings is None:
        warnings = []
    try:
        if fmt == "csv":
            records = _read_csv(path, source, warnings)
        elif fmt == "ris":
            records = _read_ris(path, source, warnings)
        else:
            raise CorpusError(f"unknown import format {fmt!r}")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    for w in warnings:
        log.warning("%s", w)
    return records


def _read_csv(path: Path, source: Source, warnings: list[str]) -> list[RawArticle]:
    out = []
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CorpusError(f"{path}: empty file, header row required")
        columns = {name.strip().lower(): i for i, name in enumerate(header)}
        for required in ("title", "year", "keywords"):
            if required not in columns:
                raise CorpusError(f"{path}: missing required column {required!r}")
        id_col = columns.get("id")
        for row in reader:
            lineno = reader.line_num
            if not any(cell.strip() for cell in row):
                continue
            try:
                title = row[columns["title"]].strip()
                year = _parse_year(row[columns["year"]])
                keywords = row[columns["keywords"]]
            except IndexError:
                warnings.append(f"{path}:{lineno}: short row, skipped")
                continue
            if not title:
                warnings.append(f"{path}:{lineno}: empty title, skipped")
                continue
            if year is None:
                warnings.append(f"{path}:{lineno}: missing year, skipped")
                continue
            ext_id = row[id_col].strip() if id_col is not None and id_col < len(row) else ""
            out.append(RawArticle(source, ext_id or str(lineno), title, year, keywords))
    return out


_RIS_LINE = re.compile(r"^([A-Z][A-Z0-9])  -(?: (.*))?$")


def _read_ris(path: Path, source: Source, warnings: list[str]) -> list[RawArticle]:
    out = []
    tags: dict[str, list[str]] = defaultdict(list)
    start = 0
    last_tag = None

    def flush():
        title = " ".join((tags.get("TI") or tags.get("T1") or [""])[0].split())
        year = _parse_year((tags.get("PY") or tags.get("Y1") or [""])[0])
        if not title:
            warnings.append(f"{path}:{start}: record without TI, skipped")
        elif year is None:
            warnings.append(f"{path}:{start}: record without PY, skipped")
        else:
            ext = (tags.get("ID") or tags.get("AN") or tags.get("DO") or [str(start)])[0]
            kw = ";".join(k.strip() for k in tags.get("KW", []) if k.strip())
            out.append(RawArticle(source, ext.strip(), title, year, kw))

    with open(path, encoding="utf-8-sig") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            m = _RIS_LINE.match(line)
            if m is None:
                # continuation of a wrapped value
                if line.strip() and last_tag and tags[last_tag]:
                    tags[last_tag][-1] += " " + line.strip()
                continue
            tag, value = m.group(1), (m.group(2) or "").strip()
            if tag == "TY":
                tags = defaultdict(list)
                start = lineno
            elif tag == "ER":
                flush()
                tags = defaultdict(list)
                last_tag = None
                continue
            else:
                if not tags and not start:
                    start = lineno
                tags[tag].append(value)
            last_tag = tag
    if any(tags.values()):
        warnings.append(f"{path}:{start}: record not closed by ER, skipped")
    return out


# --- deduplication ---------------------------------------------------------

def _as_member(rec: RawArticle | ArticleRecord):
    if isinstance(rec, ArticleRecord):
        return (
            rec.title, rec.year, rec.sources, rec.raw_keywords, rec.external_ids,
        )
    return (
        rec.title, rec.year, frozenset([rec.source]), rec.raw_keyword_field,
        (f"{rec.source.value}:{rec.external_id}",),
    )


def dedupe_corpus(
    records: Iterable[RawArticle | ArticleRecord],
) -> tuple[list[ArticleRecord], DedupReport]:
    """Collapse records sharing (title_key, year).

    Accepts raw articles or previously deduplicated records, so the output of
    one run can be fed back in (or merged with new imports).
    """
    groups: dict[tuple[str, int], list] = defaultdict(list)
    raw_count = 0
    for rec in records:
        raw_count += 1
        member = _as_member(rec)
        groups[(title_key(member[0]), member[1])].append(member)

    overlap: Counter[str] = Counter()
    out = []
    for new_id, key in enumerate(sorted(groups), 1):
        members = sorted(
            groups[key],
            key=lambda m: (sorted(s.value for s in m[2]), m[4], m[0], m[3]),
        )
        sources = frozenset().union(*(m[2] for m in members))
        if len(members) > 1:
            labels = sorted(s.value for m in members for s in m[2])
            for a, b in sorted(set(combinations(labels, 2))):
                overlap[f"{a}/{b}"] += 1
        raw_kw = ";".join(m[3] for m in members if m[3].strip())
        ext_ids = tuple(sorted({e for m in members for e in m[4]}))
        out.append(
            ArticleRecord(
                id=new_id,
                title=members[0][0],
                title_key=key[0],
                year=key[1],
                sources=sources,
                raw_keywords=raw_kw,
                external_ids=ext_ids,
            )
        )
    report = DedupReport(raw_count, raw_count - len(out), len(out), dict(overlap))
    return out, report


# --- corpus store ----------------------------------------------------------

def persist_corpus(records: Iterable[ArticleRecord], path: str | Path) -> None:
    path = Path(path)
    records = list(records)
    try:
        path.mkdir(parents=True, exist_ok=True)
        with open(path / ARTICLES_NAME, "w", encoding="utf-8", newline="\n") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True))
                fh.write("\n")
        manifest = {"format_version": FORMAT_VERSION, "count": len(records)}
        (path / MANIFEST_NAME).write_text(
            json.dumps(manifest, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise CorpusError(f"cannot write corpus to {path}: {exc}") from exc


def load_corpus(path: str | Path) -> list[ArticleRecord]:
    path = Path(path)
    try:
        manifest = json.loads((path / MANIFEST_NAME).read_text(encoding="utf-8"))
        data = (path / ARTICLES_NAME).read_bytes()
    except FileNotFoundError as exc:
        raise CorpusError(f"no corpus at {path}: {exc.filename} missing") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"unreadable corpus manifest in {path}: {exc}") from exc

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise CorpusError(
            f"corpus format version {version} in {path}, this build reads {FORMAT_VERSION}"
        )
    expected = int(manifest.get("count", -1))

    records = []
    offset = 0
    for line in data.splitlines(keepends=True):
        if not line.endswith(b"\n"):
            raise CorpusError(f"{path / ARTICLES_NAME}: truncated at byte offset {offset}")
        try:
            records.append(ArticleRecord.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusError(
                f"{path / ARTICLES_NAME}: corrupt record at byte offset {offset}: {exc}"
            ) from exc
        offset += len(line)
    if len(records) < expected:
        raise CorpusError(
            f"{path / ARTICLES_NAME}: truncated at byte offset {offset} "
            f"({len(records)} of {expected} records)"
        )
    if len(records) > expected:
        raise CorpusError(
            f"{path / ARTICLES_NAME}: {len(records)} records but manifest says {expected}"
        )
    return records
