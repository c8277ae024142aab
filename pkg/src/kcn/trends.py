"""Category frequency rankings and emerging/declining verdicts."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from .keywords import FrequencyTable, normalize_keyword
from .stemmer import Stemmer

log = logging.getLogger(__name__)

UNCATEGORIZED = "uncategorized"
KNOWN_CATEGORIES = frozenset({"sensors/methods", "biomedical", "treatment"})
DEFAULT_TOP_N = 20


class CategoryMapError(ValueError):
    pass


class Verdict(str, Enum):
    EMERGING = "emerging"
    DECLINING = "declining"
    STABLE = "stable"
    UNRANKED = "unranked"

    def __str__(self) -> str:
        return self.value


CategoryMap = dict[str, str]


def load_category_map(path: str | Path, stemmer: Stemmer | None = None) -> CategoryMap:
    """Read a two-column ``keyword,category`` CSV into canonical keyword -> label.

    A header row is optional. Two rows whose keywords normalize to the same
    canonical form are an error.
    """
    out: CategoryMap = {}
    seen_at: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not any(c.strip() for c in row):
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["keyword", "category"]:
                continue
            if len(row) < 2 or not row[1].strip():
                raise CategoryMapError(f"{path}:{lineno}: expected 'keyword,category'")
            raw, label = row[0], row[1].strip()
            canon = normalize_keyword(raw, stemmer)
            if canon is None:
                log.warning("%s:%d: keyword %r normalizes to nothing, ignored", path, lineno, raw)
                continue
            if canon in out:
                raise CategoryMapError(
                    f"{path}:{lineno}: keyword {raw!r} ({canon!r}) already "
                    f"categorized on line {seen_at[canon]}"
                )
            if label not in KNOWN_CATEGORIES:
                log.warning("%s:%d: unfamiliar category label %r", path, lineno, label)
            out[canon] = label
            seen_at[canon] = lineno
    return out


@dataclass(frozen=True)
class RankedKeyword:
    keyword: str
    rank: int
    frequency: int


@dataclass
class CategoryRanking:
    """Top-n frequency rankings of one category, per window."""

    category: str
    members: tuple[str, ...]
    top_n: int
    windows: tuple[str, ...]
    lists: dict[str, list[RankedKeyword]] = field(default_factory=dict)

    def position(self, window: str, keyword: str) -> RankedKeyword | None:
        for entry in self.lists.get(window, ()):
            if entry.keyword == keyword:
                return entry
        return None


def _members(tables, cmap, category) -> set[str]:
    if category == UNCATEGORIZED:
        seen = set().union(*(t.counts for t in tables)) if tables else set()
        return {kw for kw in seen if kw not in cmap}
    return {kw for kw, label in cmap.items() if label == category}


def rank_in_category(
    freq_tables: Sequence[FrequencyTable],
    cmap: Mapping[str, str],
    category: str,
    top_n: int = DEFAULT_TOP_N,
) -> CategoryRanking:
    """Rank category members by document frequency inside each window.

    Ties go to the lexicographically smaller keyword. Members absent from a
    window are not ranked there.
    """
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    members = _members(freq_tables, cmap, category)
    ranking = CategoryRanking(
        category, tuple(sorted(members)), top_n, tuple(t.window.label for t in freq_tables)
    )
    for table in freq_tables:
        present = [(kw, table.counts[kw]) for kw in members if table.counts.get(kw, 0) > 0]
        present.sort(key=lambda t: (-t[1], t[0]))
        ranking.lists[table.window.label] = [
            RankedKeyword(kw, r, f) for r, (kw, f) in enumerate(present[:top_n], 1)
        ]
    return ranking


@dataclass(frozen=True)
class TrendVerdict:
    keyword: str
    category: str
    positions: tuple[tuple[str, int | None, int | None], ...]
    verdict: Verdict
    rank_first: int | None = None
    freq_first: int | None = None
    rank_last: int | None = None
    freq_last: int | None = None


def _verdict(first: int | None, last: int | None) -> Verdict:
    if first is not None and last is not None:
        if last < first:
            return Verdict.EMERGING
        if last > first:
            return Verdict.DECLINING
        return Verdict.STABLE
    if last is not None:
        return Verdict.EMERGING
    if first is not None:
        return Verdict.DECLINING
    return Verdict.UNRANKED


def classify_trends(
    ranking: CategoryRanking,
    first_window: str,
    last_window: str,
    top_n: int | None = None,
) -> list[TrendVerdict]:
    """Compare each member's rank in the first and last window.

    A better rank, or entering the top n, is emerging; a worse rank, or
    leaving the top n, is declining. Intermediate windows are reported in
    ``positions`` but never change the verdict.
    """
    if first_window == last_window:
        raise ValueError("first and last window must differ")
    for w in (first_window, last_window):
        if w not in ranking.lists:
            raise KeyError(f"window {w!r} not in ranking")
    top_n = ranking.top_n if top_n is None else min(top_n, ranking.top_n)

    def pos(window, kw):
        entry = ranking.position(window, kw)
        return entry if entry is not None and entry.rank <= top_n else None

    out = []
    for kw in ranking.members:
        first, last = pos(first_window, kw), pos(last_window, kw)
        positions = []
        for w in ranking.windows:
            e = pos(w, kw)
            positions.append((w, e.rank if e else None, e.frequency if e else None))
        out.append(TrendVerdict(
            keyword=kw,
            category=ranking.category,
            positions=tuple(positions),
            verdict=_verdict(first and first.rank, last and last.rank),
            rank_first=first and first.rank,
            freq_first=first and first.frequency,
            rank_last=last and last.rank,
            freq_last=last and last.frequency,
        ))
    return out


VERDICT_COLUMNS = ("keyword", "category", "verdict", "rank_first", "freq_first", "rank_last", "freq_last")


def write_verdicts(verdicts, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(VERDICT_COLUMNS)
        for v in verdicts:
            w.writerow([
                v.keyword, v.category, v.verdict.value,
                "" if v.rank_first is None else v.rank_first,
                "" if v.freq_first is None else v.freq_first,
                "" if v.rank_last is None else v.rank_last,
                "" if v.freq_last is None else v.freq_last,
            ])
