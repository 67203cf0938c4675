"""First and second moments of component counts.

``X(k, k+l)`` counts components with ``k`` vertices and ``k + l`` edges,
``Y(k)`` components with exactly ``k`` vertices and ``Z(k)`` components with
between ``k`` and ``N = floor(n^(3/4))`` vertices.  Each quantity is available
as an exact identity (rational arithmetic for small ``n``, log-space floating
point otherwise) and, where one exists, as an asymptotic main term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.special import xlog1py, xlogy

from .errors import DomainError, WindowError
from .window import (
    BudgetKind,
    ComponentQuery,
    CriticalWindow,
    ErrorBudget,
    error_term,
    leq,
    rate_F,
    rate_G,
    require,
)
from .wright import (
    ExactCountStore,
    WrightTable,
    count_connected_asymptotic,
    default_store,
    wright_log_gamma,
)

EXACT_N_MAX = 12

_LOG_2PI = math.log(2.0 * math.pi)
_LOG_8PI = math.log(8.0 * math.pi)
NEG_INF = float("-inf")


class Method(str, Enum):
    EXACT_RATIONAL = "EXACT_RATIONAL"
    EXACT_LOGSPACE = "EXACT_LOGSPACE"
    ASYMPTOTIC = "ASYMPTOTIC"
    UPPER_BOUND = "UPPER_BOUND"


@dataclass(frozen=True)
class MomentEstimate:
    """An expectation held as its natural log.

    ``exact`` carries the rational value when ``method`` is
    ``EXACT_RATIONAL``; ``additive`` is an absolute error scale that rides
    alongside the relative ``budget``.
    """

    log_value: float
    method: Method
    budget: ErrorBudget | None = None
    exact: Fraction | None = field(default=None, compare=False)
    additive: float = 0.0

    @property
    def value(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return math.exp(self.log_value)


def log_fraction(x: Fraction) -> float:
    if x < 0:
        raise DomainError("log of a negative number")
    if x == 0:
        return NEG_INF
    return math.log(x.numerator) - math.log(x.denominator)


def _from_fraction(x: Fraction, budget: ErrorBudget | None = None) -> MomentEstimate:
    return MomentEstimate(log_fraction(x), Method.EXACT_RATIONAL, budget, exact=x)


def log_binom(n: int, k: int) -> float:
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


# window checks shared by several operations

def _need_abs_lambda(w: CriticalWindow) -> None:
    require(leq(abs(float(w.lam)), w.n ** (1.0 / 12.0)), "|lambda| <= n^(1/12)")


def _need_k_le_n34(w: CriticalWindow, k: int) -> None:
    require(1 <= k and k**4 <= w.n**3, "1 <= k <= n^(3/4)")


def _need_k_ge_n23(w: CriticalWindow, k: int) -> None:
    require(k**3 >= w.n**2, "n^(2/3) <= k")


def _need_k_ge_max(w: CriticalWindow, k: int) -> None:
    lam = float(w.lam)
    require(leq(max(3.0 * lam, 1.0) * w.n ** (2.0 / 3.0), k), "max(3*lambda, 1)*n^(2/3) <= k")


def _check_k(w: CriticalWindow, k: int) -> None:
    if k < 1 or k > w.n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={w.n}")


def _exponent_1mp(n: int, k: int, l: int) -> int:  # noqa: E741
    return math.comb(k, 2) - (k + l) + k * (n - k)


# ---------------------------------------------------------------------------
# X(k, k+l)


def mean_X_exact(
    w: CriticalWindow, q: ComponentQuery, store: ExactCountStore | None = None
) -> MomentEstimate:
    """``E[X(k,k+l)] = binom(n,k) C(k,k+l) p^(k+l) (1-p)^(binom(k,2) - (k+l) + k(n-k))``.

    Rational arithmetic for ``n <= 12``; otherwise the identity is evaluated
    in log space with the exact count when ``k`` is within the count store's
    cap, and with the asymptotic count beyond it (method ``ASYMPTOTIC``).
    """
    n, k, l = w.n, q.k, q.l
    _check_k(w, k)
    store = store or default_store()
    if n <= EXACT_N_MAX:
        if not q.possible:
            return _from_fraction(Fraction(0))
        p = w.p_exact
        c = store.get(k, k + l)
        val = math.comb(n, k) * c * p ** (k + l) * (1 - p) ** _exponent_1mp(n, k, l)
        return _from_fraction(val)
    if not q.possible:
        return MomentEstimate(NEG_INF, Method.EXACT_LOGSPACE)
    p = w.p
    rest = log_binom(n, k) + float(xlogy(k + l, p)) + float(xlog1py(_exponent_1mp(n, k, l), -p))
    if k <= store.k_max:
        c = store.get(k, k + l)
        return MomentEstimate(math.log(c) + rest if c else NEG_INF, Method.EXACT_LOGSPACE)
    log_c = count_connected_asymptotic(k, l)
    budget = l * l / k + (l + 1) ** (1.0 / 16.0) / k ** (9.0 / 50.0)
    return MomentEstimate(log_c + rest, Method.ASYMPTOTIC, ErrorBudget(BudgetKind.EX, budget))


def mean_X_asymptotic(
    w: CriticalWindow, q: ComponentQuery, table: WrightTable | None = None
) -> MomentEstimate:
    """``gamma_l k^(3l/2 - 1) / ((2 pi)^(1/2) n^l) * exp(-F(a))``."""
    n, k, l = w.n, q.k, q.l
    lam = float(w.lam)
    _need_abs_lambda(w)
    _need_k_le_n34(w, k)
    require(l <= 0 or (l**4 <= 256 * n and l * l <= 16 * k), "l <= min(4*n^(1/4), 4*k^(1/2))")
    log_v = (
        wright_log_gamma(l, table)
        + (1.5 * l - 1.0) * math.log(k)
        - 0.5 * _LOG_2PI
        - l * math.log(n)
        - rate_F(lam, w.scaled(k))
    )
    budget = (
        error_term(BudgetKind.EX, k, n, l, lam).value
        + l * l / k
        + (l + 1) ** (1.0 / 16.0) / k ** (9.0 / 50.0)
    )
    return MomentEstimate(log_v, Method.ASYMPTOTIC, ErrorBudget(BudgetKind.EX, budget))


def mean_X_upper(w: CriticalWindow, q: ComponentQuery, c: float = 1.0) -> MomentEstimate:
    """Upper envelope for ``E[X(k,k+l)]`` valid for all ``1 <= k <= n-1``, ``l >= -1``.

    ``(c/k) (k^3 / (n^2 (l v 1)))^(l/2) exp(-F(a) + lam^3 k/(3n))
    ((1 + lam n^(-1/3)) / (1 - 2/n))^l``.  The constant ``c`` is unknown and
    must be supplied.
    """
    n, k, l = w.n, q.k, q.l
    lam = float(w.lam)
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    if n < 3:
        raise DomainError("envelope needs n >= 3 (factor 1 - 2/n must be positive)")
    _need_abs_lambda(w)
    require(1 <= k <= n - 1, "1 <= k <= n-1")
    lv = max(l, 1)
    log_v = (
        math.log(c)
        - math.log(k)
        + (l / 2) * (3 * math.log(k) - 2 * math.log(n) - math.log(lv))
        - rate_F(lam, w.scaled(k))
        + lam**3 * k / (3 * n)
        + l * (math.log1p(lam * n ** (-1.0 / 3.0)) - math.log1p(-2.0 / n))
    )
    return MomentEstimate(log_v, Method.UPPER_BOUND)


# ---------------------------------------------------------------------------
# Y(k) and Z(k)


def mean_Y(w: CriticalWindow, k: int, mode: str = "ASYMPTOTIC") -> MomentEstimate:
    """Expected number of components with exactly ``k`` vertices.

    ``ASYMPTOTIC``: ``k^(1/2) / ((8 pi)^(1/2) n) exp(-G(a))``, valid for
    ``|lambda| <= n^(1/12)`` and ``n^(2/3) <= k <= n^(3/4)``.
    ``EXACT_SMALL``: exact rational sum of ``E[X(k,k+l)]`` over every
    possible excess, for ``n <= 12``.
    """
    mode = mode.upper()
    n = w.n
    if mode == "EXACT_SMALL":
        require(n <= EXACT_N_MAX, f"n <= {EXACT_N_MAX} for EXACT_SMALL")
        _check_k(w, k)
        total = Fraction(0)
        for l in range(-1, math.comb(k, 2) - k + 1):  # noqa: E741
            total += mean_X_exact(w, ComponentQuery(k, l)).exact
        return _from_fraction(total)
    if mode != "ASYMPTOTIC":
        raise DomainError(f"unknown mode {mode!r}")
    lam = float(w.lam)
    _need_abs_lambda(w)
    _need_k_ge_n23(w, k)
    _need_k_le_n34(w, k)
    g, _ = rate_G(lam, w.scaled(k))
    log_v = 0.5 * math.log(k) - 0.5 * _LOG_8PI - math.log(n) - g
    return MomentEstimate(log_v, Method.ASYMPTOTIC, error_term(BudgetKind.M1, k, n, 0, lam))


def mean_Z(w: CriticalWindow, k: int, mode: str = "ASYMPTOTIC") -> MomentEstimate:
    """Expected number of components with between ``k`` and ``N`` vertices.

    ``ASYMPTOTIC``: ``a^(1/2) exp(-G(a)) / ((8 pi)^(1/2) G'(a))`` for
    ``|lambda| <= n^(1/12)`` and ``max(3 lambda, 1) n^(2/3) <= k <= n^(3/4)``,
    with relative budget M1 and additive budget A1.
    ``EXACT_SMALL``: exact rational ``sum_{j=k}^N E[Y(j)]`` for ``n <= 12``.
    """
    mode = mode.upper()
    n = w.n
    if mode == "EXACT_SMALL":
        require(n <= EXACT_N_MAX, f"n <= {EXACT_N_MAX} for EXACT_SMALL")
        _check_k(w, k)
        total = sum((mean_Y(w, j, "EXACT_SMALL").exact for j in range(k, w.N + 1)), Fraction(0))
        return _from_fraction(total)
    if mode != "ASYMPTOTIC":
        raise DomainError(f"unknown mode {mode!r}")
    lam = float(w.lam)
    _need_abs_lambda(w)
    _need_k_ge_max(w, k)
    _need_k_le_n34(w, k)
    a = w.scaled(k)
    g, gp = rate_G(lam, a)
    log_v = 0.5 * math.log(a) - math.log(gp) - g - 0.5 * _LOG_8PI
    return MomentEstimate(
        log_v,
        Method.ASYMPTOTIC,
        error_term(BudgetKind.M1, k, n, 0, lam),
        additive=error_term(BudgetKind.A1, n=n).value,
    )


# ---------------------------------------------------------------------------
# sums over the excess


@dataclass(frozen=True)
class LaplaceWindow:
    """Integer range around the peak ``l ~ a^3/12`` of ``(e a^3 / (12 l))^(l/2)``."""

    a: float
    J_minus: int
    J_plus: int

    @classmethod
    def around(cls, a: float) -> LaplaceWindow:
        if a <= 0:
            raise DomainError(f"a must be positive, got {a}")
        c = a**3 / 12.0
        w = a ** (-4.0 / 3.0)
        return cls(a, math.floor(c * (1 - w)), math.floor(c * (1 + w)))

    def offset(self, x: float) -> float:
        """``y = 12 x / a^3 - 1``."""
        return 12.0 * x / self.a**3 - 1.0


def peak_log_term(a: float, x: float) -> float:
    """``log((e a^3 / (12 x))^(x/2))``."""
    return 0.5 * x * (1.0 + math.log(a**3 / (12.0 * x)))


def peak_log_approx(a: float, x: float) -> float:
    """Quadratic approximation ``a^3/24 - a^3 y^2/48`` to :func:`peak_log_term`."""
    y = 12.0 * x / a**3 - 1.0
    return a**3 / 24.0 - a**3 * y * y / 48.0


def sum_counts_scaled(
    k: int, n: int, L: int, mode: str = "ASYMPTOTIC", store: ExactCountStore | None = None
) -> float:
    """Log of ``sum_{l=-1}^{L} C(k, k+l) / n^l``.

    ``ASYMPTOTIC`` returns ``log(k^(k+1) / (2n)) + k^3/(24 n^2)`` and needs
    ``k >= n^(2/3)`` and ``k^3/n^2 <= L <= 4 k^(1/2)``.  ``EXACT`` sums exact
    counts in rational arithmetic.
    """
    mode = mode.upper()
    if mode == "EXACT":
        store = store or default_store()
        if L < -1:
            raise DomainError(f"L must be >= -1, got {L}")
        top = min(L, math.comb(k, 2) - k)
        total = Fraction(0)
        for l in range(-1, top + 1):  # noqa: E741
            total += Fraction(store.get(k, k + l)) / Fraction(n) ** l
        return log_fraction(total)
    if mode != "ASYMPTOTIC":
        raise DomainError(f"unknown mode {mode!r}")
    require(k**3 >= n**2, "n^(2/3) <= k")
    require(k**3 <= L * n**2 and L * L <= 16 * k, "k^3/n^2 <= L <= 4*k^(1/2)")
    return (k + 1) * math.log(k) - math.log(2 * n) + k**3 / (24.0 * n**2)


def l_tail_bound(w: CriticalWindow, k: int, L: int, c: float = 1.0) -> float:
    """``c exp(-L/2)``, bounding ``sum_{l >= L} E[X(k, k+l)]``."""
    n = w.n
    require(n >= 25, "n >= 25")
    _need_abs_lambda(w)
    _need_k_le_n34(w, k)
    require(leq(min(4.0 * n**0.25, 4.0 * k ** (1.0 / 3.0)), L), "L >= min(4*n^(1/4), 4*k^(1/3))")
    return c * math.exp(-L / 2.0)


# ---------------------------------------------------------------------------
# integrals and sums of exp(-G)


def tail_integral(a: float, lam: float, r: float, mode: str = "ASYMPTOTIC", log: bool = False) -> float:
    """``int_a^inf y^r exp(-G(y)) dy``, either its main term or by quadrature.

    ``ASYMPTOTIC`` gives ``a^r exp(-G(a)) / G'(a)``; ``QUADRATURE``
    integrates adaptively to relative tolerance 1e-10.  With ``log=True`` the
    natural log is returned, which avoids underflow for large ``a``.
    """
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    require(a >= max(1.0, 3.0 * lam), "a >= max(1, 3*lambda)")
    g, gp = rate_G(lam, a)
    mode = mode.upper()
    if mode == "ASYMPTOTIC":
        out = r * math.log(a) - g - math.log(gp)
    elif mode == "QUADRATURE":

        def f(y):
            return y**r * math.exp(-(rate_G(lam, y)[0] - g))

        val, _ = integrate.quad(f, a, math.inf, epsabs=0.0, epsrel=1e-10, limit=200)
        out = math.log(val) - g
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return out if log else math.exp(out)


def _tail_sum_window(k: int, n: int, lam: float) -> None:
    require(leq(abs(lam), n ** (1.0 / 12.0)), "|lambda| <= n^(1/12)")
    require(leq(max(3.0 * lam, 1.0) * n ** (2.0 / 3.0), k), "max(3*lambda, 1)*n^(2/3) <= k")
    require(k**4 <= n**3, "k <= n^(3/4)")


def tail_sum(k: int, n: int, lam: float, r: float, mode: str = "ASYMPTOTIC") -> float:
    """Main term of ``n^(-2/3) sum_{j=k}^N (j/n^(2/3))^r exp(-G(j/n^(2/3)))``.

    ``DIRECT`` evaluates the sum itself term by term.
    """
    _tail_sum_window(k, n, lam)
    mode = mode.upper()
    scale = n ** (-2.0 / 3.0)
    if mode == "ASYMPTOTIC":
        a = k * scale
        g, gp = rate_G(lam, a)
        return a**r * math.exp(-g) / gp
    if mode == "DIRECT":
        N = math.isqrt(math.isqrt(n**3))
        x = np.arange(k, N + 1, dtype=float) * scale
        terms = x**r * np.exp(-x * (x - 2.0 * lam) ** 2 / 8.0)
        return float(math.fsum(terms)) * scale
    raise DomainError(f"unknown mode {mode!r}")


def tail_sum_budget(k: int, n: int, lam: float, r: float) -> tuple[float, float]:
    """``(relative, additive)`` error scales ``n^2/k^3`` and ``n^((r-2)/12) exp(-G(n^(1/12)))``."""
    _tail_sum_window(k, n, lam)
    top = n ** (1.0 / 12.0)
    return n**2 / k**3, n ** ((r - 2.0) / 12.0) * math.exp(-rate_G(lam, top)[0])


# ---------------------------------------------------------------------------
# second moments


def second_moment_pair(
    w: CriticalWindow, j: int, l: int, k: int, l2: int  # noqa: E741
) -> MomentEstimate:
    """``E[X(j, j+l) X(k, k+l2)]`` from the exact product identity.

    Diagonal: ``E[X] + E[X]^2 binom(n-k,k)/binom(n,k) (1-p)^(-k^2)``.
    Otherwise: ``E[X_j] E[X_k] binom(n-j,k)/binom(n,k) (1-p)^(-jk)``, which is
    zero when ``j + k > n``.
    """
    n = w.n
    qa, qb = ComponentQuery(j, l), ComponentQuery(k, l2)
    diag = (j, l) == (k, l2)
    ea, eb = mean_X_exact(w, qa), mean_X_exact(w, qb)
    if n <= EXACT_N_MAX:
        xa, xb = ea.exact, eb.exact
        quot_b = math.comb(n - j, k) if j + k <= n else 0
        if quot_b == 0 or xa == 0 or xb == 0:
            cross = Fraction(0)
        else:
            one_m = 1 - w.p_exact
            cross = xa * xb * Fraction(quot_b, math.comb(n, k)) / one_m ** (j * k)
        return _from_fraction(xa + cross if diag else cross)
    method = Method.ASYMPTOTIC if Method.ASYMPTOTIC in (ea.method, eb.method) else Method.EXACT_LOGSPACE
    if j + k > n or ea.log_value == NEG_INF or eb.log_value == NEG_INF:
        log_cross = NEG_INF
    else:
        log_cross = (
            ea.log_value
            + eb.log_value
            + log_binom(n - j, k)
            - log_binom(n, k)
            - float(xlog1py(j * k, -w.p))
        )
    log_v = float(np.logaddexp(ea.log_value, log_cross)) if diag else log_cross
    return MomentEstimate(log_v, method)


def second_moment_Y_Z(
    w: CriticalWindow, k: int, which: str = "Y", mode: str = "ASYMPTOTIC"
) -> MomentEstimate:
    """Second moment of ``Y(k)`` or ``Z(k)``.

    ``ASYMPTOTIC``: ``E[V] + E[V]^2 exp(lam k^2/n^(4/3) - k^3/n^2)`` with
    ``V = Y(k)`` or ``Z(k)``; for ``Z`` this is an upper bound and is tagged
    ``UPPER_BOUND``.  ``EXACT_SMALL`` assembles the exact value from
    :func:`second_moment_pair` over all excess pairs (``n <= 12``).
    """
    which = which.upper()
    if which not in ("Y", "Z"):
        raise DomainError(f"which must be Y or Z, got {which!r}")
    n = w.n
    lam = float(w.lam)
    if mode.upper() == "EXACT_SMALL":
        require(n <= EXACT_N_MAX, f"n <= {EXACT_N_MAX} for EXACT_SMALL")
        _check_k(w, k)
        sizes = [k] if which == "Y" else list(range(k, w.N + 1))
        total = Fraction(0)
        for i in sizes:
            for j in sizes:
                for li in range(-1, math.comb(i, 2) - i + 1):
                    for lj in range(-1, math.comb(j, 2) - j + 1):
                        total += second_moment_pair(w, i, li, j, lj).exact
        return _from_fraction(total)
    _need_k_le_n34(w, k)
    tilt = lam * k**2 / n ** (4.0 / 3.0) - k**3 / n**2
    if which == "Y":
        m = mean_Y(w, k)
        log_v = float(np.logaddexp(m.log_value, 2 * m.log_value + tilt))
        extra = k / n + k**4 / n**3
        return MomentEstimate(log_v, Method.ASYMPTOTIC, ErrorBudget(BudgetKind.M1, m.budget.value + extra))
    require(leq(lam * n ** (2.0 / 3.0), k), "lambda*n^(2/3) <= k")
    m = mean_Z(w, k)
    log_v = float(np.logaddexp(m.log_value, 2 * m.log_value + tilt))
    return MomentEstimate(
        log_v,
        Method.UPPER_BOUND,
        ErrorBudget(BudgetKind.M1, m.budget.value + n ** (-1.0 / 11.0)),
        additive=m.additive,
    )


__all__ = [
    "EXACT_N_MAX",
    "LaplaceWindow",
    "Method",
    "MomentEstimate",
    "WindowError",
    "l_tail_bound",
    "log_binom",
    "log_fraction",
    "mean_X_asymptotic",
    "mean_X_exact",
    "mean_X_upper",
    "mean_Y",
    "mean_Z",
    "peak_log_approx",
    "peak_log_term",
    "second_moment_pair",
    "second_moment_Y_Z",
    "sum_counts_scaled",
    "tail_integral",
    "tail_sum",
    "tail_sum_budget",
]
