"""Compare the compiled hypergeometric kernels with their pure-Python twins.

Run with ``python3 benchmarks/bench_kernels.py``. Reports the best-of-five wall
time per call and the largest relative disagreement between the two.
"""

import argparse
import time

import numpy as np

from jamnet import _pykernels

try:
    from jamnet import _ckernels
except ImportError:
    _ckernels = None

ALPHA = 3.7


def workloads(n):
    y = -np.geomspace(1e-4, 500.0, n)
    s = -np.linspace(0.0, 1.0, n)
    a = -1.0 / ALPHA
    return {
        "hyp1f1 (characteristic functions)": lambda k: k.hyp1f1_array(a, 1.0 + a, y),
        "hyp2f1 (outage closed form)": lambda k: k.hyp2f1_array(1.0, 1.0 - 2.0 / ALPHA, 2.0 - 2.0 / ALPHA, s),
        "hyp1f2 scalar loop": lambda k: np.array([k.hyp1f2(a, 0.5, 1.0 + a, v) for v in y[: n // 10]]),
    }


def best_of(fn, repeat=5):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-n", type=int, default=20000, help="points per workload")
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'workload':38s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn in workloads(args.n).items():
        tp, vp = best_of(lambda: fn(_pykernels))
        if _ckernels is None:
            print(f"{name:38s} {tp:10.4f}")
            continue
        tc, vc = best_of(lambda: fn(_ckernels))
        diff = float(np.max(np.abs(vp - vc) / np.maximum(np.abs(vp), 1e-300)))
        print(f"{name:38s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
