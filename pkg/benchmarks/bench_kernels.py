"""Compare the compiled and pure-Python kernels on counting and sampling.

    python benchmarks/bench_kernels.py [--quick] [--repeat N]
"""
import argparse
import sys
import time

import numpy as np

from forestpat import kernels

COUNT_CASES = [
    # (label, n, patterns, consecutive, trees_only)
    ("213 forests", 7, [(2, 1, 3)], False, False),
    ("213 trees", 8, [(2, 1, 3)], False, True),
    ("123,213 forests", 7, [(1, 2, 3), (2, 1, 3)], False, False),
    ("132,231,321 trees", 8, [(1, 3, 2), (2, 3, 1), (3, 2, 1)], False, True),
    ("213 consecutive", 6, [(2, 1, 3)], True, False),
]
QUICK = [(label, n - 2, *rest) for label, n, *rest in COUNT_CASES]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def run(quick=False, repeat=3, out=sys.stdout):
    try:
        fast = kernels.backend("compiled")
    except ImportError:
        print("compiled extension not available; nothing to compare", file=out)
        return []
    slow = kernels.backend("python")
    rows = []
    for label, n, pats, cons, trees in (QUICK if quick else COUNT_CASES):
        tc, rc = best_of(lambda: fast.count_forests(n, pats, cons, trees), repeat)
        tp, rp = best_of(lambda: slow.count_forests(n, pats, cons, trees), 1 if not quick else repeat)
        if rc != rp:
            raise AssertionError(f"kernels disagree on {label} n={n}")
        rows.append((f"count {label} n={n}", rc[0], tc, tp))
    n, count = (8, 2000) if quick else (10, 50000)
    prufer = np.random.Generator(np.random.PCG64(1)).integers(0, n + 1, size=(count, n - 1))
    pats = [(2, 1, 3)]
    tc, sc = best_of(lambda: fast.sample_batch(n, pats, False, prufer), repeat)
    tp, sp = best_of(lambda: slow.sample_batch(n, pats, False, prufer), 1)
    if sc != sp:
        raise AssertionError("sampling kernels disagree")
    rows.append((f"sample 213 n={n} x{count}", sum(x is not None for x in sc), tc, tp))
    print(f"{'case':34} {'result':>10} {'compiled s':>11} {'python s':>10} {'speedup':>8}", file=out)
    for label, res, tc, tp in rows:
        print(f"{label:34} {res:>10} {tc:>11.4f} {tp:>10.4f} {tp / tc:>8.1f}", file=out)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    run(args.quick, args.repeat)


if __name__ == "__main__":
    main()
