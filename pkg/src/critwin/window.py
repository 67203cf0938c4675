"""Critical-window parameterisation, rate functions and error scales.

Everything here is a pure function of immutable values.  The edge probability
is ``p = 1/n + lambda * n^(-4/3)``; the scaled component size is
``a = k / n^(2/3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import DomainError, WindowError

Real = Union[int, float, Fraction]

# Relative slack for float window comparisons, so that e.g. lambda = n**(1/12)
# computed in floating point is still accepted by "|lambda| <= n^(1/12)".
_SLACK = 1e-12


def leq(x: float, bound: float) -> bool:
    """``x <= bound`` up to a relative slack of 1e-12."""
    return x <= bound + _SLACK * max(1.0, abs(bound))


def require(ok: bool, condition: str) -> None:
    """Raise :class:`WindowError` naming ``condition`` unless ``ok``."""
    if not ok:
        raise WindowError(f"requires {condition}")


def iroot4_of_cube(n: int) -> int:
    """Exact ``floor(n^(3/4))`` for a non-negative integer ``n``."""
    return math.isqrt(math.isqrt(n**3))


def _icbrt(n: int) -> int | None:
    c = round(n ** (1.0 / 3.0))
    for cand in (c - 1, c, c + 1):
        if cand >= 0 and cand**3 == n:
            return cand
    return None


@dataclass(frozen=True)
class CriticalWindow:
    """The pair ``(n, lambda)`` with derived edge probability and truncation size."""

    n: int
    lam: Real = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not math.isfinite(float(self.lam)):
            raise DomainError(f"lambda must be finite, got {self.lam!r}")
        p = self.p
        if not 0.0 <= p <= 1.0:
            raise DomainError(
                f"edge probability p = {p!r} outside [0, 1] for n={self.n}, lambda={self.lam}"
            )

    @property
    def p(self) -> float:
        return 1.0 / self.n + float(self.lam) * self.n ** (-4.0 / 3.0)

    @property
    def p_exact(self) -> Fraction:
        """Edge probability as an exact rational.

        Exact whenever ``lambda == 0`` or ``n`` is a perfect cube; otherwise
        this is the exact binary value of :attr:`p`, so that identities
        evaluated with it are still exact for the probability actually used.
        """
        lam = Fraction(self.lam)
        if lam == 0:
            return Fraction(1, self.n)
        c = _icbrt(self.n)
        if c is not None:
            return Fraction(1, self.n) + lam / c**4
        return Fraction(self.p)

    @property
    def N(self) -> int:
        return iroot4_of_cube(self.n)

    def scaled(self, k: int) -> float:
        """``a = k * n^(-2/3)``."""
        return k * self.n ** (-2.0 / 3.0)


@dataclass(frozen=True)
class ComponentQuery:
    """A component of ``k`` vertices and ``k + l`` edges (``l`` is the excess)."""

    k: int
    l: int  # noqa: E741

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if self.l < -1:
            raise DomainError(f"excess l must be >= -1, got {self.l}")

    @property
    def edges(self) -> int:
        return self.k + self.l

    @property
    def possible(self) -> bool:
        return self.l <= math.comb(self.k, 2) - self.k

    def scaled(self, n: int) -> float:
        return self.k * n ** (-2.0 / 3.0)


class BudgetKind(str, Enum):
    M1 = "M1"
    A1 = "A1"
    EX = "EX"
    PM = "PM"


@dataclass(frozen=True)
class ErrorBudget:
    """A diagnostic relative-error scale; not a guaranteed bound."""

    kind: BudgetKind
    value: float

    def __post_init__(self):
        if not self.value >= 0.0:
            raise DomainError(f"budget must be non-negative, got {self.value}")


def edge_probability(w: CriticalWindow) -> float:
    return w.p


def rate_G(lam: float, x: float) -> tuple[float, float]:
    """Return ``(G, G')`` where ``G(x) = x (x - 2 lam)^2 / 8``."""
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    g = x * (x - 2.0 * lam) ** 2 / 8.0
    gp = 3.0 * x * x / 8.0 - lam * x + lam * lam / 2.0
    return g, gp


def rate_F(lam: float, x: float) -> float:
    """``F(x) = x^3/6 - lam x^2/2 + lam^2 x/2``, non-negative for ``x >= 0``."""
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    # x/6 * ((x - 3/2 lam)^2 + 3/4 lam^2): same cubic, no cancellation
    return x / 6.0 * ((x - 1.5 * lam) ** 2 + 0.75 * lam * lam)


def error_term(
    kind: BudgetKind | str,
    k: int | None = None,
    n: int | None = None,
    l: int = 0,  # noqa: E741
    lam: float = 0.0,
) -> ErrorBudget:
    """Sum of the displayed error terms of the given kind.

    ``M1``: k^4/n^3 + |lam|/n^(1/12) + |lam|^3 k/n + n^(2/3)/k + n^(-1/10)
    ``A1``: n^(1/4) exp(-n^(1/4)/80)
    ``EX``: k^4/n^3 + |lam l|/n^(1/3) + k |lam|^3/n + k/n + 1/k
    ``PM``: n/k^(3/2) exp(-G(a) + lam k^2/n^(4/3) - k^3/n^2)
    """
    kind = BudgetKind(kind)
    if n is None or n <= 0:
        raise DomainError("error term requires n >= 1")
    nf = float(n)
    if kind is BudgetKind.A1:
        q = nf**0.25
        return ErrorBudget(kind, q * math.exp(-q / 80.0))
    if k is None or k <= 0:
        raise DomainError("error term requires k >= 1")
    kf = float(k)
    alam = abs(float(lam))
    if kind is BudgetKind.M1:
        v = (
            kf**4 / nf**3
            + alam / nf ** (1.0 / 12.0)
            + alam**3 * kf / nf
            + nf ** (2.0 / 3.0) / kf
            + nf ** (-0.1)
        )
    elif kind is BudgetKind.EX:
        v = kf**4 / nf**3 + alam * abs(l) / nf ** (1.0 / 3.0) + kf * alam**3 / nf + kf / nf + 1.0 / kf
    else:
        a = kf * nf ** (-2.0 / 3.0)
        g, _ = rate_G(float(lam), a)
        v = nf / kf**1.5 * math.exp(-g + float(lam) * kf**2 / nf ** (4.0 / 3.0) - kf**3 / nf**2)
    return ErrorBudget(kind, v)
