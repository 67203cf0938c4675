# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampling kernels; mirrors ``_pycore`` operation for operation."""

from libc.math cimport exp, floor, log, log1p
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double GEOM_CAP = 4.0e18
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef struct Stream:
    uint64_t key
    uint64_t ctr


cdef inline void stream_init(Stream* s, uint64_t seed, uint64_t replica) noexcept nogil:
    s.key = mix64(seed ^ mix64(replica + 1))
    s.ctr = 0


cdef inline double uniform(Stream* s) noexcept nogil:
    s.ctr += 1
    cdef uint64_t x = mix64(s.key + s.ctr * GOLDEN)
    return (<double>(x >> 11) + 0.5) * INV53


cdef inline int64_t geometric(Stream* s, double log_q) noexcept nogil:
    cdef double g = log(uniform(s)) / log_q
    if g >= GEOM_CAP:
        return <int64_t>GEOM_CAP
    return <int64_t>floor(g)


cdef int64_t binomial(Stream* s, int64_t m, double p) noexcept nogil:
    cdef double u, r, pr, cdf, log_q
    cdef int64_t x, count, pos
    if m <= 0 or p <= 0.0:
        return 0
    if p >= 1.0:
        return m
    if p > 0.5:
        return m - binomial(s, m, 1.0 - p)
    if <double>m * p <= 10.0:
        u = uniform(s)
        r = p / (1.0 - p)
        pr = exp(<double>m * log1p(-p))
        cdf = pr
        x = 0
        while u > cdf and x < m:
            pr = pr * (<double>(m - x) / (<double>x + 1.0) * r)
            cdf = cdf + pr
            x += 1
        return x
    log_q = log1p(-p)
    count = 0
    pos = geometric(s, log_q)
    while pos < m:
        count += 1
        pos += 1 + geometric(s, log_q)
    return count


cdef inline int64_t find(int64_t* parent, int64_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void graph_one(int64_t n, double p, uint64_t seed, uint64_t replica,
                    int64_t* parent, int64_t* size,
                    int64_t* l1, int64_t* v0) noexcept nogil:
    cdef Stream s
    cdef int64_t i, j, v, ri, rj, t, best
    cdef double log_q = 0.0
    if n <= 1:
        l1[0] = n
        v0[0] = n
        return
    for v in range(n):
        parent[v] = v
        size[v] = 1
    stream_init(&s, seed, replica)
    if p > 0.0:
        if p < 1.0:
            log_q = log1p(-p)
        i = 0
        j = 1
        while True:
            if p < 1.0:
                j += geometric(&s, log_q)
            while j >= n:
                i += 1
                if i >= n - 1:
                    break
                j = j - n + i + 1
            if i >= n - 1:
                break
            ri = find(parent, i)
            rj = find(parent, j)
            if ri != rj:
                if size[ri] < size[rj]:
                    t = ri
                    ri = rj
                    rj = t
                parent[rj] = ri
                size[ri] += size[rj]
            j += 1
    best = 0
    for v in range(n):
        if parent[v] == v and size[v] > best:
            best = size[v]
    l1[0] = best
    v0[0] = size[find(parent, 0)]


cdef void explore_one(int64_t n, double p, uint64_t seed, uint64_t replica, int64_t stop_at,
                      int64_t* size_out, int64_t* edges_out) noexcept nogil:
    cdef Stream s
    cdef int64_t seen = 1, active = 1, edges = 0, back, new
    stream_init(&s, seed, replica)
    while active > 0:
        if stop_at > 0 and seen >= stop_at:
            break
        back = binomial(&s, active - 1, p)
        new = binomial(&s, n - seen, p)
        edges += back + new
        seen += new
        active += new - 1
    size_out[0] = seen
    edges_out[0] = edges


def graph_block(int64_t n, double p, uint64_t seed, uint64_t start, int64_t count,
                int64_t[::1] out_l1, int64_t[::1] out_v0):
    cdef int64_t r
    cdef int64_t m = n if n > 1 else 1
    cdef int64_t* parent = <int64_t*>malloc(m * sizeof(int64_t))
    cdef int64_t* size = <int64_t*>malloc(m * sizeof(int64_t))
    if parent == NULL or size == NULL:
        free(parent)
        free(size)
        raise MemoryError()
    try:
        with nogil:
            for r in range(count):
                graph_one(n, p, seed, start + <uint64_t>r, parent, size, &out_l1[r], &out_v0[r])
    finally:
        free(parent)
        free(size)


def explore_block(int64_t n, double p, uint64_t seed, uint64_t start, int64_t count, int64_t stop_at,
                  int64_t[::1] out_size, int64_t[::1] out_edges):
    cdef int64_t r
    with nogil:
        for r in range(count):
            explore_one(n, p, seed, start + <uint64_t>r, stop_at, &out_size[r], &out_edges[r])


def graph_replica(int64_t n, double p, uint64_t seed, uint64_t replica):
    import numpy as np
    a = np.zeros(1, dtype=np.int64)
    b = np.zeros(1, dtype=np.int64)
    graph_block(n, p, seed, replica, 1, a, b)
    return int(a[0]), int(b[0])


def explore_replica(int64_t n, double p, uint64_t seed, uint64_t replica, int64_t stop_at=0):
    cdef int64_t size, edges
    explore_one(n, p, seed, replica, stop_at, &size, &edges)
    return size, edges
