"""Per-window weighted keyword co-occurrence graphs."""

from __future__ import annotations

import csv
import json
import xml.etree.ElementTree as ET
from collections import Counter
from functools import cached_property
from itertools import combinations
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

from .corpus import ArticleRecord
from .window import TimeWindow

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
GRAPH_FORMAT_VERSION = 1


class WeightedKcn:
    """Undirected graph with positive integer edge weights and no self loops.

    Nodes are canonical keywords kept in sorted order; an edge is keyed by the
    index pair ``(i, j)`` with ``i < j`` so symmetry holds by construction.
    """

    def __init__(
        self,
        nodes: Iterable[str],
        edges: Mapping[tuple[int, int], int],
        window: TimeWindow | None = None,
        article_count: int = 0,
    ):
        self.nodes = tuple(nodes)
        self.index = {kw: i for i, kw in enumerate(self.nodes)}
        if len(self.index) != len(self.nodes):
            raise ValueError("duplicate node")
        if list(self.nodes) != sorted(self.nodes):
            raise ValueError("nodes must be sorted")
        n = len(self.nodes)
        clean = {}
        for (i, j), w in edges.items():
            if i == j:
                raise ValueError(f"self loop on {self.nodes[i]!r}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            if w < 1 or int(w) != w:
                raise ValueError(f"edge weight {w} is not a positive integer")
            key = (i, j) if i < j else (j, i)
            if key in clean:
                raise ValueError(f"edge {key} given twice")
            clean[key] = int(w)
        self.edges = MappingProxyType(dict(sorted(clean.items())))
        self.window = window
        self.article_count = article_count

    @classmethod
    def from_weighted_pairs(
        cls,
        pairs: Mapping[tuple[str, str], int],
        nodes: Iterable[str] = (),
        window: TimeWindow | None = None,
        article_count: int = 0,
    ) -> "WeightedKcn":
        """Build from keyword-pair weights; ``nodes`` adds isolated keywords."""
        names = sorted(set(nodes) | {kw for pair in pairs for kw in pair})
        idx = {kw: i for i, kw in enumerate(names)}
        edges: dict[tuple[int, int], int] = {}
        for (a, b), w in pairs.items():
            i, j = sorted((idx[a], idx[b]))
            if (i, j) in edges:
                raise ValueError(f"pair {a!r}, {b!r} given twice")
            edges[(i, j)] = w
        return cls(names, edges, window, article_count)

    def __repr__(self) -> str:
        label = self.window.label if self.window else "-"
        return f"<WeightedKcn {label}: {self.node_count} nodes, {self.link_count} links>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedKcn):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and dict(self.edges) == dict(other.edges)
            and self.window == other.window
            and self.article_count == other.article_count
        )

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def link_count(self) -> int:
        return len(self.edges)

    def weight(self, a: str, b: str) -> int:
        i, j = sorted((self.node_index(a), self.node_index(b)))
        return self.edges.get((i, j), 0)

    def node_index(self, keyword: str) -> int:
        try:
            return self.index[keyword]
        except KeyError:
            raise KeyError(f"unknown keyword {keyword!r}") from None

    def weighted_pairs(self) -> dict[tuple[str, str], int]:
        return {(self.nodes[i], self.nodes[j]): w for (i, j), w in self.edges.items()}

    @cached_property
    def neighbors(self) -> tuple[dict[int, int], ...]:
        """Per node, a map neighbor index -> weight."""
        adj: list[dict[int, int]] = [{} for _ in self.nodes]
        for (i, j), w in self.edges.items():
            adj[i][j] = w
            adj[j][i] = w
        return tuple(adj)

    @cached_property
    def _coo(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        m = len(self.edges)
        rows = np.fromiter((i for i, _ in self.edges), dtype=np.int64, count=m)
        cols = np.fromiter((j for _, j in self.edges), dtype=np.int64, count=m)
        data = np.fromiter(self.edges.values(), dtype=np.int64, count=m)
        return rows, cols, data

    def weighted_adjacency(self) -> sparse.csr_matrix:
        """Symmetric sparse matrix of co-occurrence counts, zero diagonal."""
        rows, cols, data = self._coo
        n = self.node_count
        upper = sparse.coo_matrix((data, (rows, cols)), shape=(n, n))
        return (upper + upper.T).tocsr()

    def adjacency(self) -> sparse.csr_matrix:
        """Binary view: 1 exactly where two keywords co-occur."""
        a = self.weighted_adjacency()
        a.data = np.ones_like(a.data, dtype=np.int8)
        return a.astype(np.int8)

    # --- internal serialization -------------------------------------------

    def to_json(self) -> str:
        doc = {
            "format_version": GRAPH_FORMAT_VERSION,
            "window": None if self.window is None else {
                "label": self.window.label,
                "start_year": self.window.start_year,
                "end_year": self.window.end_year,
            },
            "article_count": self.article_count,
            "nodes": list(self.nodes),
            "edges": [[i, j, w] for (i, j), w in self.edges.items()],
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "WeightedKcn":
        doc = json.loads(text)
        if doc.get("format_version") != GRAPH_FORMAT_VERSION:
            raise ValueError(
                f"graph format version {doc.get('format_version')}, "
                f"expected {GRAPH_FORMAT_VERSION}"
            )
        win = doc.get("window")
        window = None if win is None else TimeWindow(win["start_year"], win["end_year"], win["label"])
        edges = {(i, j): w for i, j, w in doc["edges"]}
        return cls(doc["nodes"], edges, window, doc["article_count"])

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "WeightedKcn":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def build_kcn(corpus: Iterable[ArticleRecord], window: TimeWindow) -> WeightedKcn:
    """Co-occurrence graph of the articles published inside ``window``.

    Each in-window article adds 1 to the weight of every pair of its distinct
    keywords. Keywords of single-keyword articles become isolated nodes.
    """
    in_window = [set(rec.keywords) for rec in corpus if rec.year in window]
    names = sorted(set().union(*in_window)) if in_window else []
    idx = {kw: i for i, kw in enumerate(names)}
    counts: Counter[tuple[int, int]] = Counter()
    for kws in in_window:
        ids = sorted(idx[k] for k in kws)
        counts.update(combinations(ids, 2))
    return WeightedKcn(names, counts, window, len(in_window))


# --- exports ---------------------------------------------------------------

def export_graph(graph: WeightedKcn, path: str | Path, fmt: str) -> Path:
    """Write ``graph`` as ``edge_csv`` or ``graphml``.

    The edge list has no place for isolated keywords; GraphML keeps them.
    """
    path = Path(path)
    try:
        if fmt == "edge_csv":
            _write_edge_csv(graph, path)
        elif fmt == "graphml":
            _write_graphml(graph, path)
        else:
            raise ValueError(f"unknown graph format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write graph to {path}: {exc}") from exc
    return path


def _write_edge_csv(graph: WeightedKcn, path: Path) -> None:
    rows = sorted((graph.nodes[i], graph.nodes[j], w) for (i, j), w in graph.edges.items())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source", "target", "weight"])
        writer.writerows(rows)


def read_edge_csv(path: str | Path, window: TimeWindow | None = None) -> WeightedKcn:
    pairs = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            pairs[(row["source"], row["target"])] = int(row["weight"])
    return WeightedKcn.from_weighted_pairs(pairs, window=window)


def _write_graphml(graph: WeightedKcn, path: Path) -> None:
    root = ET.Element("graphml", {"xmlns": GRAPHML_NS})
    ET.SubElement(root, "key", {
        "id": "weight", "for": "edge", "attr.name": "weight", "attr.type": "int",
    })
    ET.SubElement(root, "key", {
        "id": "article_count", "for": "graph", "attr.name": "article_count", "attr.type": "int",
    })
    g = ET.SubElement(root, "graph", {
        "id": graph.window.label if graph.window else "kcn",
        "edgedefault": "undirected",
    })
    ET.SubElement(g, "data", {"key": "article_count"}).text = str(graph.article_count)
    for kw in graph.nodes:
        ET.SubElement(g, "node", {"id": kw})
    for (i, j), w in graph.edges.items():
        e = ET.SubElement(g, "edge", {"source": graph.nodes[i], "target": graph.nodes[j]})
        ET.SubElement(e, "data", {"key": "weight"}).text = str(w)
    ET.indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)


def read_graphml(path: str | Path, window: TimeWindow | None = None) -> WeightedKcn:
    ns = {"g": GRAPHML_NS}
    root = ET.parse(path).getroot()
    g = root.find("g:graph", ns)
    if g is None:
        raise ValueError(f"{path}: no <graph> element")
    weight_key = "weight"
    for key in root.findall("g:key", ns):
        if key.get("attr.name") == "weight" and key.get("for") == "edge":
            weight_key = key.get("id")
    nodes = [n.get("id") for n in g.findall("g:node", ns)]
    pairs = {}
    for e in g.findall("g:edge", ns):
        data = {d.get("key"): d.text for d in e.findall("g:data", ns)}
        pairs[(e.get("source"), e.get("target"))] = int(data.get(weight_key, 1))
    article_count = 0
    for d in g.findall("g:data", ns):
        if d.get("key") == "article_count":
            article_count = int(d.text)
    return WeightedKcn.from_weighted_pairs(pairs, nodes, window, article_count)
