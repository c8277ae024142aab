"""Writers for the CSV/JSON reports produced by ``kcn report``.

Every writer is a pure function of its inputs so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

from . import metrics as M
from .graph import WeightedKcn
from .keywords import FrequencyTable, StemDictionary, write_dictionary
from .rules import AssociationRule, write_rules
from .trends import UNCATEGORIZED, classify_trends, rank_in_category, write_verdicts

log = logging.getLogger(__name__)

REPORTS = (
    "summary",             # network statistics per window
    "top_keywords",        # keywords ranked by strength
    "top_pairs",           # keyword pairs ranked by co-occurrence
    "curves",              # weight/endpoint degree, knn/degree, clustering/degree
    "distributions",       # degree, strength and weight quartiles + raw values
    "clustering_leaders",  # highest weighted clustering with neighbours
    "trends",              # category rankings and emerging/declining verdicts
    "rules",               # association rules
    "dictionary",          # canonical keyword -> original variants
)


def _csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _json(path: Path, payload) -> Path:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


def _num(x):
    return repr(float(x)) if isinstance(x, float) else x


def write_summary(graphs: Sequence[WeightedKcn], out: Path) -> list[Path]:
    stats = [(g.window.label, M.network_summary(g)) for g in graphs]
    rows = [[label, *map(_num, s.row())] for label, s in stats]
    payload = [{"window": label, **asdict(s)} for label, s in stats]
    return [
        _csv(out / "summary.csv", ["window", *M.SUMMARY_FIELDS], rows),
        _json(out / "summary.json", payload),
    ]


def write_top_keywords(graphs, out: Path, k: int) -> list[Path]:
    rows = []
    for g in graphs:
        for rank, (kw, s) in enumerate(M.top_keywords_by_strength(g, k), 1):
            rows.append([g.window.label, rank, kw, s])
    return [_csv(out / "top_keywords.csv", ["window", "rank", "keyword", "strength"], rows)]


def write_top_pairs(graphs, out: Path, k: int) -> list[Path]:
    rows = []
    for g in graphs:
        for rank, ((a, b), w) in enumerate(M.top_pairs_by_weight(g, k), 1):
            rows.append([g.window.label, rank, a, b, w])
    return [_csv(out / "top_pairs.csv", ["window", "rank", "keyword_a", "keyword_b", "weight"], rows)]


def write_curves(graphs, out: Path) -> list[Path]:
    payload = {}
    for g in graphs:
        payload[g.window.label] = {
            "avg_weight_vs_endpoint_degree": M.endpoint_degree_curve(g).to_records(),
            "nn_degree_vs_degree": M.nn_degree_vs_degree(g).to_records(),
            "clustering_vs_degree": M.clustering_vs_degree(g).to_records(),
        }
    return [_json(out / "curves.json", payload)]


def write_distributions(graphs, out: Path) -> list[Path]:
    rows, payload = [], {}
    for g in graphs:
        per = payload.setdefault(g.window.label, {})
        for metric in ("degree", "strength", "weight"):
            try:
                d = M.metric_distribution(g, metric)
            except ValueError:
                log.warning("%s: no %s values", g.window.label, metric)
                continue
            quart = [d.min, d.q1, d.median, d.q3, d.max]
            rows.append([g.window.label, metric, *map(_num, quart)])
            per[metric] = {
                "quartiles": dict(zip(("min", "q1", "median", "q3", "max"), quart)),
                "values": sorted(d.values),
            }
    return [
        _csv(out / "distributions.csv", ["window", "metric", "min", "q1", "median", "q3", "max"], rows),
        _json(out / "distributions.json", payload),
    ]


def write_clustering_leaders(graphs, out: Path, k: int, min_degree: int) -> list[Path]:
    rows = []
    for g in graphs:
        for rank, leader in enumerate(M.top_clustering_with_neighbors(g, k, min_degree), 1):
            rows.append([g.window.label, rank, leader.keyword, _num(leader.clustering),
                         leader.degree, ";".join(leader.neighbors)])
    return [_csv(out / "clustering_leaders.csv",
                 ["window", "rank", "keyword", "clustering", "degree", "neighbors"], rows)]


def write_trends(tables: Sequence[FrequencyTable], cmap, out: Path, top_n: int) -> list[Path]:
    if len(tables) < 2:
        raise ValueError("trends need at least two windows")
    first, last = tables[0].window.label, tables[-1].window.label
    categories = sorted(set(cmap.values()))
    verdicts, rank_rows = [], []
    for cat in [*categories, UNCATEGORIZED]:
        ranking = rank_in_category(tables, cmap, cat, top_n)
        for label in ranking.windows:
            for e in ranking.lists[label]:
                rank_rows.append([cat, label, e.rank, e.keyword, e.frequency])
        if cat != UNCATEGORIZED:
            verdicts.extend(classify_trends(ranking, first, last, top_n))
    path = out / "trends.csv"
    write_verdicts(verdicts, path)
    return [path, _csv(out / "trend_rankings.csv",
                       ["category", "window", "rank", "keyword", "frequency"], rank_rows)]


def write_rule_report(rules: Sequence[AssociationRule], path: Path) -> list[Path]:
    write_rules(rules, path)
    return [path]


def write_dictionary_report(dictionary: StemDictionary, out: Path) -> list[Path]:
    path = out / "dictionary.csv"
    write_dictionary(dictionary, path)
    return [path]
