"""Apriori frequent keyword itemsets and association rules."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import ArticleRecord
from .window import TimeWindow

DEFAULT_MIN_SUPPORT = 200
DEFAULT_MIN_CONFIDENCE = 0.55
DEFAULT_MAX_SIZE = 4

Itemset = frozenset


@dataclass(frozen=True)
class Transaction:
    article_id: int
    items: frozenset[str]


def transactions_from_corpus(
    corpus: Iterable[ArticleRecord], window: TimeWindow | None = None
) -> list[Transaction]:
    """One transaction per keyword-bearing article, optionally window-scoped."""
    return [
        Transaction(rec.id, frozenset(rec.keywords))
        for rec in corpus
        if rec.keywords and (window is None or rec.year in window)
    ]


def _itemsets_of(transactions) -> list[frozenset]:
    out = []
    for t in transactions:
        items = t.items if isinstance(t, Transaction) else t
        out.append(frozenset(items))
    return out


def _candidates(frequent: list[tuple[str, ...]], frequent_set: set[frozenset]) -> list[tuple[str, ...]]:
    """Join sorted k-itemsets sharing a (k-1)-prefix, then prune by subsets."""
    out = []
    for a in range(len(frequent)):
        prefix = frequent[a][:-1]
        for b in range(a + 1, len(frequent)):
            if frequent[b][:-1] != prefix:
                break
            cand = frequent[a] + frequent[b][-1:]
            if all(frozenset(sub) in frequent_set for sub in combinations(cand, len(cand) - 1)):
                out.append(cand)
    return out


def mine_frequent_itemsets(
    transactions: Iterable[Transaction] | Iterable[Iterable[str]],
    min_support_count: int,
    max_size: int | None = DEFAULT_MAX_SIZE,
) -> dict[frozenset[str], int]:
    """Every itemset contained in at least ``min_support_count`` transactions.

    Level-wise Apriori: size-k candidates are built only from frequent
    (k-1)-itemsets whose every subset is frequent. ``max_size=None`` removes
    the size cap. The result is ordered by size, then by sorted items.
    """
    if min_support_count < 1:
        raise ValueError("min_support_count must be at least 1")
    baskets = _itemsets_of(transactions)

    counts = Counter(item for basket in baskets for item in basket)
    level = sorted((item,) for item, c in counts.items() if c >= min_support_count)
    result: dict[tuple[str, ...], int] = {t: counts[t[0]] for t in level}

    size = 1
    while level and (max_size is None or size < max_size):
        size += 1
        frequent_set = {frozenset(t) for t in level}
        cands = set(_candidates(level, frequent_set))
        if not cands:
            break
        keep = {t[0] for t in result if len(t) == 1}
        tally: Counter[tuple[str, ...]] = Counter()
        for basket in baskets:
            items = sorted(basket & keep)
            if len(items) < size:
                continue
            for combo in combinations(items, size):
                if combo in cands:
                    tally[combo] += 1
        level = sorted(t for t, c in tally.items() if c >= min_support_count)
        result.update((t, tally[t]) for t in level)

    return {frozenset(t): result[t] for t in sorted(result, key=lambda t: (len(t), t))}


@dataclass(frozen=True)
class AssociationRule:
    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    support_count: int
    confidence: float
    lift: float

    @property
    def below_independence(self) -> bool:
        """Lift under 1: the antecedent makes the consequent less likely."""
        return self.lift < 1.0


def derive_rules(
    itemsets: Mapping[frozenset[str], int],
    min_confidence: float,
    n_transactions: int,
) -> list[AssociationRule]:
    """Rules A -> B for every frequent itemset split into two non-empty parts.

    Sorted by lift, then confidence (both descending), then items.
    """
    if not 0 < min_confidence <= 1:
        raise ValueError("min_confidence must be in (0, 1]")
    rules = []
    for items, support in itemsets.items():
        if len(items) < 2:
            continue
        members = sorted(items)
        for r in range(1, len(members)):
            for ante in combinations(members, r):
                a = frozenset(ante)
                c = items - a
                try:
                    ante_support, cons_support = itemsets[a], itemsets[c]
                except KeyError as exc:
                    raise RuntimeError(
                        f"itemset map not closed under subsets: {sorted(exc.args[0])} missing"
                    ) from None
                confidence = support / ante_support
                if confidence < min_confidence:
                    continue
                lift = confidence * n_transactions / cons_support
                rules.append(AssociationRule(ante, tuple(sorted(c)), support, confidence, lift))
    rules.sort(key=lambda r: (-r.lift, -r.confidence, r.antecedent, r.consequent))
    return rules


RULE_COLUMNS = ("antecedent", "consequent", "support_count", "confidence", "lift")


def write_rules(rules: Iterable[AssociationRule], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RULE_COLUMNS)
        for r in rules:
            w.writerow([";".join(r.antecedent), ";".join(r.consequent),
                        r.support_count, repr(r.confidence), repr(r.lift)])
