"""Slow, direct-formula reference implementations used only by the tests.

Everything here works on plain Python containers and shares no code with the
package beyond data classes, so a bug in the fast path cannot hide in both.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations


def pair_weights(articles):
    """Count, over all articles, every unordered pair of distinct keywords.

    ``articles`` is an iterable of keyword iterables.
    """
    counts = defaultdict(int)
    for kws in articles:
        kws = list(dict.fromkeys(kws))
        for x in range(len(kws)):
            for y in range(len(kws)):
                a, b = kws[x], kws[y]
                if a < b:
                    counts[(a, b)] += 1
    return dict(counts)


def _w(weights, a, b):
    return weights.get((a, b), weights.get((b, a), 0))


def degrees(nodes, weights):
    return {v: sum(1 for u in nodes if u != v and _w(weights, u, v) > 0) for v in nodes}


def strengths(nodes, weights):
    return {v: sum(_w(weights, u, v) for u in nodes if u != v) for v in nodes}


def knn(nodes, weights):
    k = degrees(nodes, weights)
    s = strengths(nodes, weights)
    out = {}
    for v in nodes:
        if s[v] == 0:
            out[v] = 0.0
            continue
        out[v] = sum(_w(weights, v, u) * k[u] for u in nodes if u != v) / s[v]
    return out


def clustering(nodes, weights):
    wmax = max(weights.values(), default=0)
    k = degrees(nodes, weights)
    out = {}
    for v in nodes:
        if k[v] < 2:
            out[v] = 0.0
            continue
        nbrs = [u for u in nodes if u != v and _w(weights, u, v) > 0]
        total = 0.0
        for j in nbrs:
            for h in nbrs:
                if j == h:
                    continue
                prod = (_w(weights, v, j) / wmax) * (_w(weights, v, h) / wmax) * (_w(weights, j, h) / wmax)
                total += prod ** (1.0 / 3.0)
        out[v] = total / (k[v] * (k[v] - 1))
    return out


def endpoint_curve(degree_of, weights):
    """x = k_a * k_b -> (exact mean weight, group size)."""
    groups = defaultdict(list)
    for (a, b), w in weights.items():
        groups[degree_of[a] * degree_of[b]].append(w)
    return {x: (Fraction(sum(ws), len(ws)), len(ws)) for x, ws in groups.items()}


def binned(values, degree_of):
    groups = defaultdict(list)
    for v, val in values.items():
        if degree_of[v] > 0:
            groups[degree_of[v]].append(val)
    return {x: (sum(vs) / len(vs), len(vs)) for x, vs in groups.items()}


def quartiles(values):
    """Median-of-halves: the median is excluded from both halves."""
    xs = sorted(values)

    def med(seq):
        n = len(seq)
        if n % 2:
            return seq[n // 2]
        return (seq[n // 2 - 1] + seq[n // 2]) / 2

    n = len(xs)
    if n == 1:
        return xs[0], xs[0], xs[0], xs[0], xs[0]
    lower = xs[: n // 2]
    upper = xs[(n + 1) // 2:]
    return xs[0], med(lower), med(xs), med(upper), xs[-1]


def all_itemsets(transactions, min_support, max_size=None):
    """Exhaustive enumeration: count every non-empty subset of every transaction.

    No pruning of any kind, so the result is the full list of itemsets that
    reach ``min_support`` (only feasible for short transactions).
    """
    counts = defaultdict(int)
    for t in transactions:
        items = sorted(set(t))
        top = len(items) if max_size is None else min(max_size, len(items))
        for size in range(1, top + 1):
            for combo in combinations(items, size):
                counts[frozenset(combo)] += 1
    return {s: c for s, c in counts.items() if c >= min_support}


def all_rules(itemsets, n, min_confidence):
    """(antecedent, consequent) -> (support, confidence, lift) by brute force."""
    out = {}
    for items, count in itemsets.items():
        if len(items) < 2:
            continue
        members = sorted(items)
        for r in range(1, len(members)):
            for ante in combinations(members, r):
                a = frozenset(ante)
                c = items - a
                conf = count / itemsets[a]
                if conf >= min_confidence:
                    out[(a, c)] = (count, conf, conf / (itemsets[c] / n))
    return out
