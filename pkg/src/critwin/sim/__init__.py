"""Monte Carlo samplers for component sizes and a replica harness.

Two samplers are provided: a full-graph sampler (geometric skipping over the
pair sequence plus union-find) giving ``L1`` and the component of vertex 0,
and an exploration sampler giving ``(|C(v)|, E(C(v)))``.

Each replica draws from its own counter-based stream keyed by
``(seed, replica index)``.  Replicas are processed in fixed-size blocks, so
results never depend on the number of worker threads.

The compiled core is used when available; set ``CRITWIN_BACKEND=python`` to
force the pure-Python kernels.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist
from typing import Callable

import numpy as np

from ..errors import DomainError
from ..window import CriticalWindow
from . import _pycore

if os.environ.get("CRITWIN_BACKEND", "").lower() == "python":
    _kernels = _pycore
else:
    try:
        from . import _core as _kernels
    except ImportError:  # extension not built
        _kernels = _pycore

BACKEND = "compiled" if _kernels is not _pycore else "python"

BLOCK = 4096
_Z95 = NormalDist().inv_cdf(0.975)


class Target(str, Enum):
    L1_GE = "L1_GE"
    L1_EQ = "L1_EQ"
    L1_GT = "L1_GT"
    CV_GE = "CV_GE"
    CV_EQ = "CV_EQ"


@dataclass(frozen=True)
class ExplorationState:
    """Snapshot of the exploration after ``step`` vertices have been processed.

    ``walk`` is the running sum of (new vertices - 1); the queue holds
    ``walk + 1`` vertices, and the walk first hits -1 at ``step = |C(v)|``.
    """

    step: int
    queue_len: int
    seen: int
    walk: int
    edges_internal: int


@dataclass(frozen=True)
class SimulationSummary:
    replicas: int
    seed: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float
    histogram: dict | None = None

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise DomainError("need at least one trial")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    return min(lo, phat), max(hi, phat)


def _check_seed(seed: int) -> int:
    if not 0 <= seed < 1 << 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def _check_replicas(replicas: int) -> int:
    if replicas < 1:
        raise DomainError(f"replicas must be >= 1, got {replicas}")
    return int(replicas)


def default_threads() -> int:
    return os.cpu_count() or 1


def _run_blocks(
    replicas: int, work: Callable[[int, int], object], threads: int | None
) -> list:
    """Apply ``work(start, count)`` to consecutive blocks; results in block order."""
    starts = list(range(0, replicas, BLOCK))
    jobs = [(s, min(BLOCK, replicas - s)) for s in starts]
    threads = threads or default_threads()
    if threads <= 1 or len(jobs) == 1:
        return [work(s, c) for s, c in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: work(*job), jobs))


def _graph_block(w: CriticalWindow, seed: int, start: int, count: int):
    l1 = np.zeros(count, dtype=np.int64)
    v0 = np.zeros(count, dtype=np.int64)
    _kernels.graph_block(w.n, w.p, seed, start, count, l1, v0)
    return l1, v0


def _explore_block(w: CriticalWindow, seed: int, start: int, count: int, stop_at: int = 0):
    size = np.zeros(count, dtype=np.int64)
    edges = np.zeros(count, dtype=np.int64)
    _kernels.explore_block(w.n, w.p, seed, start, count, stop_at, size, edges)
    return size, edges


def sample_graph_L1(w: CriticalWindow, seed: int, replica: int = 0) -> int:
    """Largest component size of one ``G(n, p)`` draw."""
    return _kernels.graph_replica(w.n, w.p, _check_seed(seed), replica)[0]


def sample_graph_components(w: CriticalWindow, seed: int, replica: int = 0) -> tuple[int, int]:
    """``(L1, |C(0)|)`` of one ``G(n, p)`` draw."""
    return tuple(_kernels.graph_replica(w.n, w.p, _check_seed(seed), replica))


def sample_component_of_vertex(w: CriticalWindow, seed: int, replica: int = 0) -> tuple[int, int]:
    """``(size, edges)`` of the component of a fixed vertex, by exploration."""
    return tuple(_kernels.explore_replica(w.n, w.p, _check_seed(seed), replica, 0))


def exploration_trace(w: CriticalWindow, seed: int, replica: int = 0) -> list[ExplorationState]:
    """Every intermediate state of :func:`sample_component_of_vertex`'s walk."""
    rng = _pycore.Stream(_check_seed(seed), replica)
    n, p = w.n, w.p
    seen, active, edges, walk = 1, 1, 0, 0
    states = [ExplorationState(0, active, seen, walk, edges)]
    step = 0
    while active > 0:
        back = rng.binomial(active - 1, p)
        new = rng.binomial(n - seen, p)
        step += 1
        edges += back + new
        seen += new
        active += new - 1
        walk += new - 1
        states.append(ExplorationState(step, active, seen, walk, edges))
    return states


def _summary(successes: int, replicas: int, seed: int, histogram=None) -> SimulationSummary:
    lo, hi = wilson_interval(successes, replicas)
    return SimulationSummary(replicas, seed, successes, successes / replicas, lo, hi, histogram)


def estimate_tail(
    w: CriticalWindow,
    k: int,
    target: Target | str,
    replicas: int,
    seed: int,
    threads: int | None = None,
) -> SimulationSummary:
    """Monte Carlo estimate of a tail or point probability of ``L1`` or ``|C(v)|``.

    ``CV_*`` targets use the exploration sampler, stopped as soon as the
    event is decided; ``L1_*`` targets sample the whole graph.
    """
    target = Target(target)
    replicas = _check_replicas(replicas)
    seed = _check_seed(seed)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")

    if target is Target.CV_GE:
        def work(start, count):
            size, _ = _explore_block(w, seed, start, count, stop_at=k)
            return int(np.count_nonzero(size >= k))
    elif target is Target.CV_EQ:
        def work(start, count):
            size, _ = _explore_block(w, seed, start, count, stop_at=k + 1)
            return int(np.count_nonzero(size == k))
    else:
        test = {
            Target.L1_GE: np.greater_equal,
            Target.L1_EQ: np.equal,
            Target.L1_GT: np.greater,
        }[target]

        def work(start, count):
            l1, _ = _graph_block(w, seed, start, count)
            return int(np.count_nonzero(test(l1, k)))

    successes = sum(_run_blocks(replicas, work, threads))
    return _summary(successes, replicas, seed)


def empirical_pmf(
    w: CriticalWindow,
    mode: str,
    replicas: int,
    seed: int,
    threads: int | None = None,
    via: str = "exploration",
) -> SimulationSummary:
    """Histogram of ``L1`` (``mode="L1"``) or ``|C(v)|`` (``mode="CV"``).

    For ``CV`` the component can come from the exploration sampler
    (``via="exploration"``) or from the full graph (``via="graph"``, vertex 0).
    The summary's ``successes`` equals ``replicas``.
    """
    mode = mode.upper()
    replicas = _check_replicas(replicas)
    seed = _check_seed(seed)
    if mode == "L1":
        def work(start, count):
            return Counter(_graph_block(w, seed, start, count)[0].tolist())
    elif mode == "CV" and via == "exploration":
        def work(start, count):
            return Counter(_explore_block(w, seed, start, count)[0].tolist())
    elif mode == "CV" and via == "graph":
        def work(start, count):
            return Counter(_graph_block(w, seed, start, count)[1].tolist())
    else:
        raise DomainError(f"unknown mode/via combination {mode!r}/{via!r}")
    total = Counter()
    for part in _run_blocks(replicas, work, threads):
        total.update(part)
    return _summary(replicas, replicas, seed, dict(sorted(total.items())))


def joint_histogram(
    w: CriticalWindow, replicas: int, seed: int, threads: int | None = None
) -> dict[tuple[int, int], int]:
    """Counts of ``(size, edges - size)`` for the component of a fixed vertex."""
    replicas = _check_replicas(replicas)
    seed = _check_seed(seed)

    def work(start, count):
        size, edges = _explore_block(w, seed, start, count)
        return Counter(zip(size.tolist(), (edges - size).tolist()))

    total = Counter()
    for part in _run_blocks(replicas, work, threads):
        total.update(part)
    return dict(sorted(total.items()))


__all__ = [
    "BACKEND",
    "ExplorationState",
    "SimulationSummary",
    "Target",
    "empirical_pmf",
    "estimate_tail",
    "exploration_trace",
    "joint_histogram",
    "sample_component_of_vertex",
    "sample_graph_L1",
    "sample_graph_components",
    "wilson_interval",
]
