"""Pure-Python sampling kernels.

Same algorithms, same draw order and same floating-point operations as the
compiled core, so both backends give identical results for identical inputs.
"""

from __future__ import annotations

import math

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
GEOM_CAP = 4.0e18
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def stream_key(seed: int, replica: int) -> int:
    return mix64(seed ^ mix64(replica + 1))


class Stream:
    """Counter-based uniform stream for one replica."""

    __slots__ = ("key", "ctr")

    def __init__(self, seed: int, replica: int):
        self.key = stream_key(seed, replica)
        self.ctr = 0

    def uniform(self) -> float:
        """Uniform on the open interval (0, 1)."""
        self.ctr += 1
        x = mix64(self.key + self.ctr * GOLDEN)
        return ((x >> 11) + 0.5) * _INV53

    def geometric(self, log_q: float) -> int:
        """Failures before the first success, with ``log_q = log(1 - p)``."""
        g = math.log(self.uniform()) / log_q
        if g >= GEOM_CAP:
            return int(GEOM_CAP)
        return int(math.floor(g))

    def binomial(self, m: int, p: float) -> int:
        if m <= 0 or p <= 0.0:
            return 0
        if p >= 1.0:
            return m
        if p > 0.5:
            return m - self.binomial(m, 1.0 - p)
        if m * p <= 10.0:
            u = self.uniform()
            r = p / (1.0 - p)
            pr = math.exp(m * math.log1p(-p))
            cdf = pr
            x = 0
            while u > cdf and x < m:
                pr *= (m - x) / (x + 1.0) * r
                cdf += pr
                x += 1
            return x
        log_q = math.log1p(-p)
        count = 0
        pos = self.geometric(log_q)
        while pos < m:
            count += 1
            pos += 1 + self.geometric(log_q)
        return count


def graph_replica(n: int, p: float, seed: int, replica: int) -> tuple[int, int]:
    """``(L1, |C(0)|)`` for one draw of ``G(n, p)``."""
    if n <= 1:
        return n, n
    parent = list(range(n))
    size = [1] * n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rng = Stream(seed, replica)
    if p > 0.0:
        log_q = math.log1p(-p) if p < 1.0 else 0.0
        i, j = 0, 1
        while True:
            if p < 1.0:
                j += rng.geometric(log_q)
            while j >= n:
                i += 1
                if i >= n - 1:
                    break
                j = j - n + i + 1
            if i >= n - 1:
                break
            ri, rj = find(i), find(j)
            if ri != rj:
                if size[ri] < size[rj]:
                    ri, rj = rj, ri
                parent[rj] = ri
                size[ri] += size[rj]
            j += 1
    best = 0
    for v in range(n):
        if parent[v] == v and size[v] > best:
            best = size[v]
    return best, size[find(0)]


def explore_replica(n: int, p: float, seed: int, replica: int, stop_at: int = 0) -> tuple[int, int]:
    """``(|C(v)|, E(C(v)))`` by FIFO exploration from one vertex.

    With ``stop_at > 0`` the walk halts once that many vertices are seen;
    the returned size is then only a lower bound.
    """
    rng = Stream(seed, replica)
    seen = 1
    active = 1
    edges = 0
    while active > 0:
        if 0 < stop_at <= seen:
            break
        back = rng.binomial(active - 1, p)
        new = rng.binomial(n - seen, p)
        edges += back + new
        seen += new
        active += new - 1
    return seen, edges


def graph_block(n, p, seed, start, count, out_l1, out_v0):
    for r in range(count):
        out_l1[r], out_v0[r] = graph_replica(n, p, seed, start + r)


def explore_block(n, p, seed, start, count, stop_at, out_size, out_edges):
    for r in range(count):
        out_size[r], out_edges[r] = explore_replica(n, p, seed, start + r, stop_at)
