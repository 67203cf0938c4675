import pytest

from critwin import CriticalWindow


@pytest.fixture(params=[-1, 0, 1], ids=lambda lam: f"lam{lam}")
def small_windows(request):
    """Windows with 2 <= n <= 6 at the given lambda, skipping invalid p."""
    out = []
    for n in range(2, 7):
        try:
            out.append(CriticalWindow(n, request.param))
        except ValueError:
            pass
    return out
