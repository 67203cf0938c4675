"""Wright's coefficients and counts of connected labelled graphs.

``C(k, m)`` is the number of connected labelled graphs on ``k`` vertices with
``m`` edges.  For fixed excess ``l = m - k`` it behaves like
``gamma_l * k^(k + (3l - 1)/2)``, where the constants ``gamma_l`` are built
from an exactly rational sequence ``d_l`` that increases to ``1/(2 pi)``.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .errors import DomainError, WindowError

__all__ = [
    "WrightTable",
    "ExactCountStore",
    "wright_d",
    "wright_gamma",
    "wright_log_gamma",
    "count_connected_exact",
    "count_connected_asymptotic",
    "count_connected_upper",
    "default_store",
    "default_table",
]

_LOG_PI = math.log(math.pi)


def _scaled_u(L: int) -> list[int]:
    """Integers ``U_l = d_l * l! * 36^l`` for ``l = 0..L`` (``U_0`` unused).

    Multiplying ``d_{l+1} = d_l + sum_i d_i d_{l-i} / ((l+1) binom(l, i))``
    through by ``(l+1)! 36^(l+1)`` gives the integer recurrence
    ``U_{l+1} = 36 ((l+1) U_l + sum_{i=1}^{l-1} U_i U_{l-i})`` with ``U_1 = 5``.
    """
    U = [0, 5]
    for l in range(1, L):  # noqa: E741
        conv = 0
        for i in range(1, (l + 1) // 2):
            conv += U[i] * U[l - i]
        conv *= 2
        if l % 2 == 0:
            conv += U[l // 2] ** 2
        U.append(36 * ((l + 1) * U[l] + conv))
    return U[: L + 1]


def wright_d(L: int) -> list[Fraction]:
    """Exact rationals ``d_1, ..., d_L``."""
    if L < 1:
        raise DomainError(f"L must be >= 1, got {L}")
    U = _scaled_u(L)
    return [Fraction(U[l], math.factorial(l) * 36**l) for l in range(1, L + 1)]


@dataclass
class WrightTable:
    """Exact ``d_1..d_L`` with floating ``gamma_l`` for ``l`` in ``-1..L``."""

    d: tuple[Fraction, ...]
    log_gamma: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        lg = [0.0, 0.5 * math.log(math.pi / 8.0)]
        for l, dl in enumerate(self.d, start=1):  # noqa: E741
            lg.append(_log_gamma_from_d(l, dl))
        self.log_gamma = tuple(lg)

    @classmethod
    def build(cls, L: int) -> WrightTable:
        return cls(tuple(wright_d(L)))

    @property
    def L(self) -> int:
        return len(self.d)

    @property
    def gamma(self) -> tuple[float, ...]:
        """``gamma_l`` for ``l = -1, 0, 1, ..., L`` (index 0 holds ``l = -1``)."""
        return tuple(math.exp(v) for v in self.log_gamma)

    def dl(self, l: int) -> Fraction:  # noqa: E741
        return self.d[l - 1]


def _log_gamma_from_d(l: int, dl: Fraction) -> float:  # noqa: E741
    log_d = math.log(dl.numerator) - math.log(dl.denominator)
    return (
        0.5 * _LOG_PI
        + l * math.log(3.0)
        + math.lgamma(l)
        + log_d
        - (5 * l - 1) / 2 * math.log(2.0)
        - math.lgamma(1.5 * l)
    )


_table_lock = threading.Lock()
_table: WrightTable | None = None


def default_table(L: int = 64) -> WrightTable:
    """Shared table holding at least ``L`` coefficients; grown on demand."""
    global _table
    with _table_lock:
        if _table is None or _table.L < L:
            _table = WrightTable.build(max(L, 2 * _table.L if _table else L))
        return _table


def wright_log_gamma(l: int, table: WrightTable | None = None) -> float:  # noqa: E741
    """``log(gamma_l)``; finite for every ``l >= -1`` the table covers."""
    if l < -1:
        raise DomainError(f"gamma_l is defined for l >= -1, got {l}")
    if table is None:
        table = default_table(max(l, 1))
    if l > table.L:
        raise DomainError(f"table holds d_1..d_{table.L}, need d_{l}")
    return table.log_gamma[l + 1]


def wright_gamma(l: int, table: WrightTable | None = None) -> float:  # noqa: E741
    """Wright's constant ``gamma_l``, with ``gamma_{-1} = 1`` and ``gamma_0 = (pi/8)^(1/2)``.

    Underflows to 0.0 for very large ``l``; use :func:`wright_log_gamma` there.
    """
    return math.exp(wright_log_gamma(l, table))


class ExactCountStore:
    """Memoised exact values of ``C(k, m)``.

    Rows are stored truncated at a common edge bound and extended when a
    query needs more edges.  Reads are lock-free once a row exists; growth
    happens under a lock.
    """

    def __init__(self, k_max: int = 60):
        self.k_max = k_max
        self._rows: dict[int, list[int]] = {1: [1]}
        self._mmax = 0
        self._extra: dict[tuple[int, int], int] = {}
        self._lock = threading.RLock()

    def __contains__(self, key: tuple[int, int]) -> bool:
        k, m = key
        row = self._rows.get(k)
        return (row is not None and m < len(row)) or key in self._extra

    def get(self, k: int, m: int) -> int:
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        if m < k - 1 or m > k * (k - 1) // 2:
            return 0
        hit = self._lookup(k, m)
        if hit is not None:
            return hit
        if k > self.k_max:
            raise DomainError(f"exact counts are capped at k <= {self.k_max} (asked for k={k})")
        with self._lock:
            hit = self._lookup(k, m)
            if hit is None:
                self._grow(k, m)
                hit = self._lookup(k, m)
        return hit

    def _lookup(self, k: int, m: int) -> int | None:
        row = self._rows.get(k)
        if row is not None and m < len(row):
            return row[m]
        return self._extra.get((k, m))

    def _grow(self, k: int, m: int) -> None:
        mmax = max(self._mmax, m)
        if mmax > self._mmax:
            # every row must be recomputed to the new bound
            self._rows = {1: [1]}
            self._mmax = mmax
        for kk in range(2, k + 1):
            if kk not in self._rows:
                self._rows[kk] = self._row(kk, mmax)

    def _row(self, k: int, mmax: int) -> list[int]:
        top = min(mmax, k * (k - 1) // 2)
        M = k * (k - 1) // 2
        row = [math.comb(M, m) for m in range(top + 1)]
        for j in range(1, k):
            cj = self._rows[j]
            Mr = (k - j) * (k - j - 1) // 2
            binr = [math.comb(Mr, t) for t in range(min(Mr, top) + 1)]
            weight = math.comb(k - 1, j - 1)
            lo = j - 1
            for m in range(lo, top + 1):
                s = 0
                for m1 in range(max(lo, m - len(binr) + 1), min(m, len(cj) - 1) + 1):
                    s += cj[m1] * binr[m - m1]
                row[m] -= weight * s
        return row

    def items(self) -> Iterator[tuple[int, int, int]]:
        """Yield stored ``(k, m, C(k, m))`` with ``C`` non-zero."""
        seen = set()
        for k in sorted(self._rows):
            for m, c in enumerate(self._rows[k]):
                if c:
                    seen.add((k, m))
                    yield k, m, c
        for (k, m), c in sorted(self._extra.items()):
            if (k, m) not in seen and c:
                yield k, m, c

    def save(self, path: str | os.PathLike) -> None:
        """Write one ``k m C(k,m)`` line per stored non-zero value."""
        lines = [f"{k} {m} {c}\n" for k, m, c in self.items()]
        Path(path).write_text("".join(lines), encoding="utf-8")

    def load(self, path: str | os.PathLike) -> int:
        """Merge values from a cache file; returns the number of lines read.

        Loaded values are served directly but do not seed the recurrence.
        """
        n = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                k, m, c = line.split()
                self._extra[(int(k), int(m))] = int(c)
                n += 1
        return n


_store = ExactCountStore()


def default_store() -> ExactCountStore:
    return _store


def count_connected_exact(k: int, m: int, store: ExactCountStore | None = None) -> int:
    """Exact number of connected labelled graphs on ``k`` vertices with ``m`` edges.

    Uses the recurrence over the component of a fixed vertex::

        C(k, m) = binom(K, m) - sum_{j=1}^{k-1} binom(k-1, j-1)
                  sum_{m1} C(j, m1) binom(binom(k-j, 2), m - m1)

    with ``K = binom(k, 2)``.  Out-of-range ``m`` gives 0.
    """
    return (store or _store).get(k, m)


def count_connected_asymptotic(k: int, l: int, table: WrightTable | None = None) -> float:  # noqa: E741
    """``log(gamma_l) + (k + (3l - 1)/2) log k``; exact (Cayley) at ``l = -1``.

    Raises:
        WindowError: if ``l > 4 sqrt(k)``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if l > 0 and l * l > 16 * k:
        raise WindowError("requires l <= 4*k^(1/2)")
    return wright_log_gamma(l, table) + (k + (3 * l - 1) / 2) * math.log(k)


def count_connected_upper(k: int, l: int, c: float = 1.0) -> float:  # noqa: E741
    """Log of the envelope ``c (l v 1)^(-l/2) k^(k + (3l - 1)/2)``.

    The constant ``c`` is not known; the default 1 is meant for relative
    comparisons only.
    """
    if k < 1 or l < -1:
        raise DomainError(f"need k >= 1 and l >= -1, got k={k}, l={l}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    lv = max(l, 1)
    return math.log(c) - (l / 2) * math.log(lv) + (k + (3 * l - 1) / 2) * math.log(k)
