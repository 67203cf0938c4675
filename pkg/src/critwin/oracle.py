"""Brute-force enumeration over every labelled graph on ``n`` vertices.

For each statistic we record, per edge count ``e``, the sum of the statistic
over all graphs with ``e`` edges.  An expectation under ``G(n, p)`` is then
``sum_e S_e p^e (1-p)^(M-e)`` with ``M = binom(n, 2)``, which is exact in
rational arithmetic for any rational ``p``.  Limited to ``n <= 6`` (2^15 graphs).
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache

MAX_N = 6


def _components(n: int, edges: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """``(min_vertex, size, edge_count)`` for each component."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    size = Counter(find(v) for v in range(n))
    ecount = Counter(find(u) for u, _ in edges)
    first = {}
    for v in range(n):
        first.setdefault(find(v), v)
    return [(first[r], size[r], ecount[r]) for r in size]


class EnumerationOracle:
    """Exact component statistics of ``G(n, p)`` by exhaustive enumeration."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"enumeration supports 1 <= n <= {MAX_N}, got {n}")
        self.n = n
        self.M = n * (n - 1) // 2
        pairs = list(itertools.combinations(range(n), 2))
        M = self.M
        tables: dict[tuple, list[int]] = defaultdict(lambda: [0] * (M + 1))
        self.graphs_by_edges = [0] * (M + 1)
        self.connected_by_edges = [0] * (M + 1)
        for mask in range(1 << M):
            edges = [pairs[i] for i in range(M) if mask >> i & 1]
            e = len(edges)
            comps = _components(n, edges)
            self.graphs_by_edges[e] += 1
            if len(comps) == 1:
                self.connected_by_edges[e] += 1
            classes = Counter((s, c - s) for _, s, c in comps)
            sizes = Counter(s for _, s, _ in comps)
            for cls, cnt in classes.items():
                tables[("X", cls)][e] += cnt
            for (ca, na), (cb, nb) in itertools.product(classes.items(), repeat=2):
                tables[("XX", ca, cb)][e] += na * nb
            for s, cnt in sizes.items():
                tables[("Y", s)][e] += cnt
                tables[("Y2", s)][e] += cnt * cnt
                tables[("Yge1", s)][e] += 1
            for s, t in itertools.product(sizes, repeat=2):
                if s < t:
                    tables[("YY", s, t)][e] += sizes[s] * sizes[t]
            v0 = next(c for c in comps if c[0] == 0)
            tables[("CV", v0[1], v0[2] - v0[1])][e] += 1
            tables[("L1", max(sizes))][e] += 1
        self._tables = dict(tables)

    def _expect(self, key: tuple, p: Fraction) -> Fraction:
        row = self._tables.get(key)
        if row is None:
            return Fraction(0)
        p = Fraction(p)
        q = 1 - p
        M = self.M
        return sum((c * p**e * q ** (M - e) for e, c in enumerate(row) if c), Fraction(0))

    def mean_X(self, k: int, l: int, p) -> Fraction:  # noqa: E741
        return self._expect(("X", (k, l)), p)

    def mean_XX(self, j: int, l: int, k: int, l2: int, p) -> Fraction:  # noqa: E741
        return self._expect(("XX", (j, l), (k, l2)), p)

    def mean_Y(self, k: int, p) -> Fraction:
        return self._expect(("Y", k), p)

    def mean_Y2(self, k: int, p) -> Fraction:
        return self._expect(("Y2", k), p)

    def mean_YY(self, j: int, k: int, p) -> Fraction:
        if j == k:
            return self.mean_Y2(k, p)
        return self._expect(("YY", min(j, k), max(j, k)), p)

    def prob_Y_ge1(self, k: int, p) -> Fraction:
        return self._expect(("Yge1", k), p)

    def prob_cv(self, k: int, l: int, p) -> Fraction:  # noqa: E741
        """``P(|C(v)| = k, E(C(v)) = k + l)`` for the vertex ``v = 0``."""
        return self._expect(("CV", k, l), p)

    def prob_cv_size(self, k: int, p) -> Fraction:
        return sum((self.prob_cv(kk, l, p) for (_, kk, l) in self.keys("CV") if kk == k), Fraction(0))

    def prob_L1(self, k: int, p) -> Fraction:
        return self._expect(("L1", k), p)

    def keys(self, kind: str) -> list[tuple]:
        return sorted(key for key in self._tables if key[0] == kind)

    def connected_count(self, m: int) -> int:
        """Number of connected labelled graphs on all ``n`` vertices with ``m`` edges."""
        return self.connected_by_edges[m] if 0 <= m <= self.M else 0


@lru_cache(maxsize=None)
def oracle(n: int) -> EnumerationOracle:
    """Cached :class:`EnumerationOracle` for ``n``."""
    return EnumerationOracle(n)


def connected_count_table(k: int) -> list[int]:
    """Connected-graph counts on ``k`` vertices indexed by edge count."""
    return list(oracle(k).connected_by_edges)


__all__ = ["EnumerationOracle", "MAX_N", "connected_count_table", "oracle"]
