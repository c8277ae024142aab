"""Node and edge statistics of a weighted co-occurrence graph.

All whole-graph quantities are computed on the sparse weighted adjacency
matrix and cached on the (immutable) graph; per-node accessors read from
that cache.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Mapping

import numpy as np
from scipy import sparse

from .graph import WeightedKcn

_ROW_BLOCK = 2048


@dataclass(frozen=True)
class NodeMetrics:
    keyword: str
    degree: int
    strength: int
    weighted_nn_degree: float
    weighted_clustering: float


@dataclass(frozen=True)
class CurvePoint:
    x: int
    y: float
    count: int


@dataclass
class DegreeBinnedCurve:
    """Mean of a metric over all entities sharing the same x."""

    points: dict[int, CurvePoint] = field(default_factory=dict)

    def __getitem__(self, x: int) -> float:
        return self.points[x].y

    def __contains__(self, x: int) -> bool:
        return x in self.points

    def __len__(self) -> int:
        return len(self.points)

    def to_records(self) -> list[dict]:
        return [asdict(self.points[x]) for x in sorted(self.points)]


SUMMARY_FIELDS = (
    "article_count",
    "node_count",
    "link_count",
    "avg_degree",
    "max_degree",
    "avg_strength",
    "max_strength",
    "avg_weight",
    "max_weight",
)


@dataclass(frozen=True)
class SummaryStats:
    article_count: int
    node_count: int
    link_count: int
    avg_degree: float
    max_degree: int
    avg_strength: float
    max_strength: int
    avg_weight: float
    max_weight: int
    # Not a table column: keywords that never co-occur with another keyword.
    isolated_node_count: int = 0

    def row(self) -> list:
        return [getattr(self, f) for f in SUMMARY_FIELDS]


@dataclass(frozen=True)
class Distribution:
    metric: str
    min: float
    q1: float
    median: float
    q3: float
    max: float
    values: tuple = ()


@dataclass(frozen=True)
class ClusteringLeader:
    keyword: str
    clustering: float
    degree: int
    neighbors: tuple[str, ...]


# --- vector engine ---------------------------------------------------------

@dataclass(frozen=True)
class _Arrays:
    degree: np.ndarray
    strength: np.ndarray
    knn: np.ndarray
    clustering: np.ndarray


def _triangle_sums(c: sparse.csr_matrix) -> np.ndarray:
    """Row sums of ``(C @ C) * C``, i.e. ``diag(C^3)``, block by block."""
    n = c.shape[0]
    out = np.zeros(n)
    for start in range(0, n, _ROW_BLOCK):
        block = c[start:start + _ROW_BLOCK]
        out[start:start + block.shape[0]] = np.asarray(
            (block @ c).multiply(block).sum(axis=1)
        ).ravel()
    return out


def _compute(graph: WeightedKcn) -> _Arrays:
    w = graph.weighted_adjacency()
    n = graph.node_count
    degree = np.diff(w.indptr).astype(np.int64)
    strength = np.asarray(w.sum(axis=1)).ravel().astype(np.int64)

    knn = np.zeros(n)
    if n:
        weighted_k = np.asarray(w @ degree.astype(float)).ravel()
        nz = strength > 0
        knn[nz] = weighted_k[nz] / strength[nz]

    clustering = np.zeros(n)
    if graph.link_count:
        c = w.astype(float)
        c.data = np.cbrt(c.data / c.data.max())
        tri = _triangle_sums(c)
        ok = degree >= 2
        clustering[ok] = tri[ok] / (degree[ok] * (degree[ok] - 1))
        # cube roots of values <= 1 can overshoot 1 by an ulp
        np.clip(clustering, 0.0, 1.0, out=clustering)
    return _Arrays(degree, strength, knn, clustering)


def _arrays(graph: WeightedKcn) -> _Arrays:
    cached = graph.__dict__.get("_metric_arrays")
    if cached is None:
        cached = _compute(graph)
        graph.__dict__["_metric_arrays"] = cached
    return cached


def degree_vector(graph: WeightedKcn) -> np.ndarray:
    return _arrays(graph).degree


def strength_vector(graph: WeightedKcn) -> np.ndarray:
    return _arrays(graph).strength


def nn_degree_vector(graph: WeightedKcn) -> np.ndarray:
    return _arrays(graph).knn


def clustering_vector(graph: WeightedKcn) -> np.ndarray:
    return _arrays(graph).clustering


# --- per node --------------------------------------------------------------

def degree(graph: WeightedKcn, node: str) -> int:
    """Number of keywords ``node`` co-occurs with."""
    return int(degree_vector(graph)[graph.node_index(node)])


def strength(graph: WeightedKcn, node: str) -> int:
    """Sum of the weights of the edges at ``node``."""
    return int(strength_vector(graph)[graph.node_index(node)])


def weighted_nn_degree(graph: WeightedKcn, node: str) -> float:
    """Strength-weighted mean degree of the neighbours; 0 for an isolated node."""
    return float(nn_degree_vector(graph)[graph.node_index(node)])


def weighted_clustering(graph: WeightedKcn, node: str) -> float:
    """Geometric-mean weighted clustering coefficient.

    Weights are divided by the largest weight in the graph, each closed
    triangle contributes the cube root of its three normalized weights, and
    the ordered-pair sum is divided by ``k(k-1)``. Nodes with fewer than two
    neighbours get 0.
    """
    return float(clustering_vector(graph)[graph.node_index(node)])


def node_metrics(graph: WeightedKcn) -> list[NodeMetrics]:
    a = _arrays(graph)
    return [
        NodeMetrics(kw, int(a.degree[i]), int(a.strength[i]), float(a.knn[i]), float(a.clustering[i]))
        for i, kw in enumerate(graph.nodes)
    ]


# --- binned curves ---------------------------------------------------------

def avg_weight_vs_endpoint_degree(
    degree_map: Mapping, weight_map: Mapping[tuple, int]
) -> DegreeBinnedCurve:
    """Mean edge weight grouped by the product of endpoint degrees."""
    totals: dict[int, int] = defaultdict(int)
    counts: dict[int, int] = defaultdict(int)
    for (a, b), w in weight_map.items():
        try:
            x = degree_map[a] * degree_map[b]
        except KeyError as exc:
            raise KeyError(f"no degree for endpoint {exc.args[0]!r}") from None
        totals[x] += w
        counts[x] += 1
    return DegreeBinnedCurve(
        {x: CurvePoint(x, totals[x] / counts[x], counts[x]) for x in sorted(totals)}
    )


def endpoint_degree_curve(graph: WeightedKcn) -> DegreeBinnedCurve:
    """:func:`avg_weight_vs_endpoint_degree` with degrees taken from ``graph``."""
    if not graph.link_count:
        return DegreeBinnedCurve()
    k = degree_vector(graph)
    rows, cols, data = graph._coo
    products = k[rows] * k[cols]
    xs, inverse = np.unique(products, return_inverse=True)
    totals = np.bincount(inverse, weights=data)
    counts = np.bincount(inverse)
    return DegreeBinnedCurve({
        int(x): CurvePoint(int(x), float(t) / int(c), int(c))
        for x, t, c in zip(xs, totals, counts)
    })


def _by_degree(graph: WeightedKcn, values: np.ndarray) -> DegreeBinnedCurve:
    k = degree_vector(graph)
    mask = k > 0
    if not mask.any():
        return DegreeBinnedCurve()
    xs, inverse = np.unique(k[mask], return_inverse=True)
    totals = np.bincount(inverse, weights=values[mask])
    counts = np.bincount(inverse)
    return DegreeBinnedCurve({
        int(x): CurvePoint(int(x), float(t / c), int(c))
        for x, t, c in zip(xs, totals, counts)
    })


def clustering_vs_degree(graph: WeightedKcn) -> DegreeBinnedCurve:
    return _by_degree(graph, clustering_vector(graph))


def nn_degree_vs_degree(graph: WeightedKcn) -> DegreeBinnedCurve:
    return _by_degree(graph, nn_degree_vector(graph))


# --- summaries and rankings ------------------------------------------------

def network_summary(graph: WeightedKcn) -> SummaryStats:
    n, links = graph.node_count, graph.link_count
    if n == 0:
        return SummaryStats(graph.article_count, 0, 0, 0.0, 0, 0.0, 0, 0.0, 0, 0)
    k = degree_vector(graph)
    s = strength_vector(graph)
    total_weight = int(sum(graph.edges.values()))
    return SummaryStats(
        article_count=graph.article_count,
        node_count=n,
        link_count=links,
        avg_degree=2 * links / n,
        max_degree=int(k.max()),
        avg_strength=2 * total_weight / n,
        max_strength=int(s.max()),
        avg_weight=total_weight / links if links else 0.0,
        max_weight=max(graph.edges.values(), default=0),
        isolated_node_count=int((k == 0).sum()),
    )


def top_keywords_by_strength(graph: WeightedKcn, k: int) -> list[tuple[str, int]]:
    if k < 1:
        raise ValueError("k must be at least 1")
    s = strength_vector(graph)
    ranked = sorted(zip(graph.nodes, s.tolist()), key=lambda t: (-t[1], t[0]))
    return ranked[:k]


def top_pairs_by_weight(graph: WeightedKcn, k: int) -> list[tuple[tuple[str, str], int]]:
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(graph.weighted_pairs().items(), key=lambda t: (-t[1], t[0]))
    return ranked[:k]


def top_clustering_with_neighbors(
    graph: WeightedKcn, k: int, min_degree: int = 2
) -> list[ClusteringLeader]:
    """Nodes with the highest weighted clustering, with their neighbours.

    Neighbours are listed by incident edge weight, heaviest first.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    deg = degree_vector(graph)
    c = clustering_vector(graph)
    candidates = [i for i in range(graph.node_count) if deg[i] >= min_degree]
    candidates.sort(key=lambda i: (-c[i], graph.nodes[i]))
    out = []
    for i in candidates[:k]:
        nbrs = sorted(graph.neighbors[i].items(), key=lambda t: (-t[1], graph.nodes[t[0]]))
        out.append(ClusteringLeader(
            graph.nodes[i], float(c[i]), int(deg[i]), tuple(graph.nodes[j] for j, _ in nbrs)
        ))
    return out


def quartiles(values) -> tuple[float, float, float, float, float]:
    """(min, Q1, median, Q3, max); quartiles are medians of the lower and
    upper halves with the overall median left out of both."""
    xs = np.sort(np.asarray(values, dtype=float))
    n = len(xs)
    if n == 0:
        raise ValueError("no values")
    if n == 1:
        v = float(xs[0])
        return v, v, v, v, v
    half = n // 2
    lower, upper = xs[:half], xs[n - half:]
    return (
        float(xs[0]),
        float(np.median(lower)),
        float(np.median(xs)),
        float(np.median(upper)),
        float(xs[-1]),
    )


def metric_distribution(graph: WeightedKcn, metric: str) -> Distribution:
    if metric == "degree":
        values = degree_vector(graph).tolist()
    elif metric == "strength":
        values = strength_vector(graph).tolist()
    elif metric == "weight":
        values = list(graph.edges.values())
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if not values:
        raise ValueError("no values")
    return Distribution(metric, *quartiles(values), values=tuple(values))
