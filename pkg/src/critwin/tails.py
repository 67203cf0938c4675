"""Probability estimates for the largest component and the component of a vertex.

Main terms are returned as they are; the relative (``budget_rel``) and
additive (``budget_abs``) error scales travel alongside for display and are
never folded into the value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import DomainError, WindowWarning
from .moments import (
    EXACT_N_MAX,
    _LOG_2PI,
    _LOG_8PI,
    NEG_INF,
    mean_X_exact,
    mean_Y,
    log_fraction,
)
from .window import (
    BudgetKind,
    ComponentQuery,
    CriticalWindow,
    error_term,
    leq,
    rate_F,
    rate_G,
    require,
)
from .wright import WrightTable, wright_log_gamma


class Statement(str, Enum):
    L1_POINT = "L1_POINT"
    L1_TAIL = "L1_TAIL"
    CV_POINT = "CV_POINT"
    CV_TAIL = "CV_TAIL"
    CV_POINT_EDGES_EXACT = "CV_POINT_EDGES_EXACT"
    CV_POINT_EDGES_ASYMPTOTIC = "CV_POINT_EDGES_ASYMPTOTIC"
    EXPLORATION_BOUND = "EXPLORATION_BOUND"


@dataclass(frozen=True)
class TailEstimate:
    """Log of a probability estimate with its diagnostic error scales.

    Values are not clamped to ``[0, 1]``; ``out_of_calibration`` flags
    estimates whose probability exceeds one.
    """

    log_prob: float
    statement: Statement
    budget_rel: float = 0.0
    budget_abs: float = 0.0
    exact: Fraction | None = None

    def __post_init__(self):
        if self.budget_rel < 0 or self.budget_abs < 0:
            raise DomainError("budgets must be non-negative")

    @property
    def prob(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return math.exp(self.log_prob)

    @property
    def out_of_calibration(self) -> bool:
        return self.log_prob > 0.0


def _largest_window(w: CriticalWindow, k: int) -> None:
    """Window shared by the largest-component statements.

    The lower limit on ``k`` is ``min(3 lambda, 1) n^(2/3)``.  Between that
    and ``max(3 lambda, 1) n^(2/3)`` the tail sum of ``exp(-G)`` is outside
    its stated range, so a :class:`WindowWarning` is issued there.
    """
    n = w.n
    lam = float(w.lam)
    root12 = n ** (1.0 / 12.0)
    require(leq(-root12, lam), "-n^(1/12) <= lambda")
    require(leq(lam, root12 / 5.0), "lambda <= n^(1/12)/5")
    n23 = n ** (2.0 / 3.0)
    require(leq(min(3.0 * lam, 1.0) * n23, k), "min(3*lambda, 1)*n^(2/3) <= k")
    require(k**4 <= n**3, "k <= n^(3/4)")
    if not leq(max(3.0 * lam, 1.0) * n23, k):
        warnings.warn(
            f"k={k} lies between min(3*lambda, 1)*n^(2/3) and max(3*lambda, 1)*n^(2/3); "
            "the tail-sum estimate behind this statement is only established above the latter",
            WindowWarning,
            stacklevel=3,
        )


def _budgets(w: CriticalWindow, k: int) -> tuple[float, float]:
    lam = float(w.lam)
    return (
        error_term(BudgetKind.M1, k, w.n, 0, lam).value,
        error_term(BudgetKind.A1, n=w.n).value,
    )


def _positive_slope(lam: float, a: float) -> float:
    _, gp = rate_G(lam, a)
    require(gp > 0, "G'_lambda(a) > 0 (a outside (2*lambda/3, 2*lambda))")
    return gp


def prob_L1_point(w: CriticalWindow, k: int) -> TailEstimate:
    """``P(L1 = k) ~ k^(1/2) / ((8 pi)^(1/2) n) exp(-G(a))``."""
    _largest_window(w, k)
    g, _ = rate_G(float(w.lam), w.scaled(k))
    log_p = 0.5 * math.log(k) - 0.5 * _LOG_8PI - math.log(w.n) - g
    rel, add = _budgets(w, k)
    return TailEstimate(log_p, Statement.L1_POINT, rel, add)


def prob_L1_tail(w: CriticalWindow, k: int) -> TailEstimate:
    """``P(L1 >= k) ~ a^(1/2) exp(-G(a)) / ((8 pi)^(1/2) G'(a))``."""
    _largest_window(w, k)
    lam = float(w.lam)
    a = w.scaled(k)
    gp = _positive_slope(lam, a)
    g, _ = rate_G(lam, a)
    log_p = 0.5 * math.log(a) - 0.5 * _LOG_8PI - math.log(gp) - g
    rel, add = _budgets(w, k)
    return TailEstimate(log_p, Statement.L1_TAIL, rel, add)


def prob_Cv_point(w: CriticalWindow, k: int) -> TailEstimate:
    """``P(|C(v)| = k)``, i.e. ``(k/n)`` times the asymptotic ``E[Y(k)]``."""
    m = mean_Y(w, k, "ASYMPTOTIC")
    log_p = m.log_value + math.log(k / w.n)
    return TailEstimate(log_p, Statement.CV_POINT, m.budget.value, 0.0)


def prob_Cv_tail(w: CriticalWindow, k: int) -> TailEstimate:
    """``P(|C(v)| >= k) ~ a^(3/2) exp(-G(a)) / ((8 pi)^(1/2) n^(1/3) G'(a))``."""
    n = w.n
    require(leq(abs(float(w.lam)), n ** (1.0 / 12.0)), "|lambda| <= n^(1/12)")
    require(k**3 >= n**2, "n^(2/3) <= k")
    _largest_window(w, k)
    lam = float(w.lam)
    a = w.scaled(k)
    gp = _positive_slope(lam, a)
    g, _ = rate_G(lam, a)
    log_p = 1.5 * math.log(a) - 0.5 * _LOG_8PI - math.log(n) / 3.0 - math.log(gp) - g
    rel, add = _budgets(w, k)
    return TailEstimate(log_p, Statement.CV_TAIL, rel, add)


def prob_Cv_point_edges(
    w: CriticalWindow, q: ComponentQuery, mode: str = "EXACT", table: WrightTable | None = None
) -> TailEstimate:
    """``P(|C(v)| = k, E(C(v)) = k + l)``.

    ``EXACT`` uses the identity ``(k/n) E[X(k, k+l)]``, valid for every
    ``n, k, l``.  ``ASYMPTOTIC`` uses
    ``gamma_l k^(3l/2) / ((2 pi)^(1/2) n^(l+1)) exp(-F(a))``.
    """
    n, k, l = w.n, q.k, q.l
    mode = mode.upper()
    if mode == "EXACT":
        m = mean_X_exact(w, q)
        if m.exact is not None:
            val = Fraction(k, n) * m.exact
            return TailEstimate(log_fraction(val), Statement.CV_POINT_EDGES_EXACT, exact=val)
        lp = m.log_value + math.log(k / n) if m.log_value != NEG_INF else NEG_INF
        budget = m.budget.value if m.budget else 0.0
        return TailEstimate(lp, Statement.CV_POINT_EDGES_EXACT, budget)
    if mode != "ASYMPTOTIC":
        raise DomainError(f"unknown mode {mode!r}")
    lam = float(w.lam)
    require(leq(abs(lam), n ** (1.0 / 12.0)), "|lambda| <= n^(1/12)")
    require(1 <= k and k**4 <= n**3, "1 <= k <= n^(3/4)")
    require(l <= 0 or (l * l <= 16 * k and l**4 <= 256 * n), "l <= min(4*k^(1/2), 4*n^(1/4))")
    log_p = (
        wright_log_gamma(l, table)
        + 1.5 * l * math.log(k)
        - 0.5 * _LOG_2PI
        - (l + 1) * math.log(n)
        - rate_F(lam, w.scaled(k))
    )
    budget = (
        error_term(BudgetKind.EX, k, n, l, lam).value
        + l * l / k
        + (l + 1) ** (1.0 / 16.0) / k ** (9.0 / 50.0)
    )
    return TailEstimate(log_p, Statement.CV_POINT_EDGES_ASYMPTOTIC, budget)


def _smallk_shape(w: CriticalWindow, k: int) -> float:
    return k ** (-1.5) * math.exp(-rate_F(float(w.lam), w.scaled(k)))


def prob_Cv_smallk_envelope(w: CriticalWindow, k: int, c1: float, c2: float) -> tuple[float, float]:
    """``(c1, c2) * k^(-3/2) exp(-F(a))``, bracketing ``P(|C(v)| = k)`` for ``k = O(n^(2/3))``.

    The constants are not known in closed form; see
    :func:`calibrate_smallk_constants`.
    """
    if c1 > c2:
        raise DomainError(f"need c1 <= c2, got c1={c1}, c2={c2}")
    require(leq(abs(float(w.lam)), w.n ** (1.0 / 12.0)), "|lambda| <= n^(1/12)")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    s = _smallk_shape(w, k)
    return c1 * s, c2 * s


def calibrate_smallk_constants(w: CriticalWindow, ks: Iterable[int] | None = None) -> tuple[float, float]:
    """Tightest ``(c1, c2)`` for which the small-``k`` envelope holds at ``w``.

    Uses the exact ``P(|C(v)| = k) = (k/n) E[Y(k)]`` (``n <= 12``).  These are
    fitted values, not proven constants.
    """
    require(w.n <= EXACT_N_MAX, f"n <= {EXACT_N_MAX} for exact calibration")
    ks = list(ks) if ks is not None else list(range(1, w.n + 1))
    ratios = []
    for k in ks:
        pk = Fraction(k, w.n) * mean_Y(w, k, "EXACT_SMALL").exact
        ratios.append(float(pk) / _smallk_shape(w, k))
    return min(ratios), max(ratios)


def l1_tail_upper_explore(w: CriticalWindow, k: int) -> float:
    """``min(1, n^(1/4) exp(-k^3/(80 n^2)))``, an upper bound on ``P(L1 > k)``."""
    require(leq(float(w.lam), w.n ** (1.0 / 12.0) / 5.0), "lambda <= n^(1/12)/5")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    n = w.n
    log_b = 0.25 * math.log(n) - k**3 / (80.0 * n**2)
    return 1.0 if log_b >= 0 else math.exp(log_b)


__all__ = [
    "Statement",
    "TailEstimate",
    "calibrate_smallk_constants",
    "l1_tail_upper_explore",
    "prob_Cv_point",
    "prob_Cv_point_edges",
    "prob_Cv_smallk_envelope",
    "prob_Cv_tail",
    "prob_L1_point",
    "prob_L1_tail",
]
