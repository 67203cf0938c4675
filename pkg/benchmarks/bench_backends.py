"""Compare the compiled and pure-Python sampling kernels.

Both backends produce identical samples; this measures replicas per second
and checks the outputs match on every run.

    python3 benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from critwin import CriticalWindow
from critwin.sim import _pycore

try:
    from critwin.sim import _core
except ImportError:
    _core = None

CASES = [
    ("graph", 10**3, 200),
    ("graph", 10**4, 40),
    ("graph", 10**5, 4),
    ("explore", 10**4, 20000),
    ("explore", 10**6, 20000),
]


def time_block(kernels, kind, n, replicas):
    p = CriticalWindow(n, 0).p
    a = np.zeros(replicas, dtype=np.int64)
    b = np.zeros(replicas, dtype=np.int64)
    t0 = time.perf_counter()
    if kind == "graph":
        kernels.graph_block(n, p, 1, 0, replicas, a, b)
    else:
        kernels.explore_block(n, p, 1, 0, replicas, 0, a, b)
    return time.perf_counter() - t0, (a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="a tenth of the replicas")
    args = ap.parse_args()
    if _core is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    print(f"{'kernel':8} {'n':>8} {'replicas':>8} {'python r/s':>12} {'compiled r/s':>13} {'speed-up':>9}  same")
    for kind, n, replicas in CASES:
        if args.quick:
            replicas = max(1, replicas // 10)
        t_py, out_py = time_block(_pycore, kind, n, replicas)
        t_c, out_c = time_block(_core, kind, n, replicas)
        same = all(np.array_equal(x, y) for x, y in zip(out_py, out_c))
        print(
            f"{kind:8} {n:>8} {replicas:>8} {replicas / t_py:>12.1f} {replicas / t_c:>13.1f} "
            f"{t_py / t_c:>8.1f}x  {same}"
        )


if __name__ == "__main__":
    main()
