"""Compare the compiled and pure-Python kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from cubepart import kernels
from cubepart.codec import decode_all
from cubepart.partition import TARGET
from cubepart.search import build_extension_instance


def _cover_workload():
    # (1,2) -> (2,2) step of the Q_9 [[0,9],[3,6]] search: one mid-sized instance
    from cubepart.partition import QuotientMatrix
    from cubepart.search import SearchConfig, run_pipeline

    S = QuotientMatrix(0, 9, 3, 6)
    res = run_pipeline(SearchConfig(9, S, stop_after_level=(1, 2)))
    L = res.levels[-1].classes[0]
    inst = build_extension_instance(L, 0, S)
    return [list(r) for r in inst.rows], inst.ncols, list(inst.targets)


def _graph_workload():
    # 5-regular graphs on 10 vertices with the first two neighbourhoods fixed
    free = [(i, j) for i in range(2, 10) for j in range(i + 1, 10)]
    rows = [[i - 2, j - 2] for i, j in free]
    return rows, 8, [4, 4, 4, 4, 3, 3, 3, 3]


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "cython" not in kernels.BACKENDS:
        print("compiled kernels not built; only the pure-Python backend is available")
    P = decode_all()[1]
    chi = P.indicator().astype(np.uint8)
    top = chi.copy()
    top[np.array([x for x in range(1 << 12) if x.bit_count() > 4])] = 0
    cover_a = _cover_workload()
    cover_b = _graph_workload()
    work = {
        "count_cover Q9 step": lambda m: m.count_cover(*cover_a),
        "count_cover graphs": lambda m: m.count_cover(*cover_b),
        "neighbor_counts Q12": lambda m: m.neighbor_counts(chi, 12),
        "complete_upward Q12": lambda m: m.complete_upward(top.copy(), 12, 5, TARGET.s_mp, 16),
    }
    print(f"{'workload':24s} " + " ".join(f"{b:>12s}" for b in kernels.BACKENDS) + "   speedup")
    for name, fn in work.items():
        times = {}
        results = {}
        for b, mod in kernels.BACKENDS.items():
            times[b], results[b] = _time(lambda: fn(mod), args.repeat)
        vals = list(results.values())
        same = all(_same(vals[0], v) for v in vals[1:])
        speed = times["python"] / times["cython"] if "cython" in times and times["cython"] > 0 else float("nan")
        cols = " ".join(f"{times[b] * 1e3:10.2f}ms" for b in kernels.BACKENDS)
        print(f"{name:24s} {cols}   {speed:6.1f}x{'' if same else '  MISMATCH'}")


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


if __name__ == "__main__":
    main()
