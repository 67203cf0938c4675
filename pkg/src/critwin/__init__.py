"""Component sizes of the Erdos-Renyi graph G(n, p) in the critical window.

``p = 1/n + lambda * n^(-4/3)``.  The package provides exact counts of
connected graphs, exact and asymptotic component-count moments, tail
estimates for the largest component and for the component of a fixed
vertex, and Monte Carlo samplers to check them against.
"""

from .errors import CritwinError, DomainError, WindowError, WindowWarning
from .window import BudgetKind, ComponentQuery, CriticalWindow, ErrorBudget, error_term, rate_F, rate_G
from .wright import (
    ExactCountStore,
    WrightTable,
    count_connected_asymptotic,
    count_connected_exact,
    count_connected_upper,
    wright_d,
    wright_gamma,
)
from .moments import Method, MomentEstimate, mean_X_asymptotic, mean_X_exact, mean_Y, mean_Z
from .tails import (
    Statement,
    TailEstimate,
    l1_tail_upper_explore,
    prob_Cv_point,
    prob_Cv_point_edges,
    prob_Cv_tail,
    prob_L1_point,
    prob_L1_tail,
)

__version__ = "0.1.0"
