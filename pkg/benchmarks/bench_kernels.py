"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]

Both backends get identical inputs and must agree before anything is timed.
The compiled Smith kernel works in int64 and raises OverflowError when
intermediate entries grow too large; those inputs are counted, dropped from
the head-to-head columns, and handled by the dispatcher's Python fallback.
"""

import argparse
import random
import timeit

from toricpairs import _pykernels, kernels

try:
    from toricpairs import _ckernels
except ImportError:
    _ckernels = None


def _accepted(fn, inputs):
    ok, overflow = [], 0
    for args in inputs:
        try:
            fn(*args)
        except OverflowError:
            overflow += 1
        else:
            ok.append(args)
    return ok, overflow


def workloads(rng):
    mats = []
    for _ in range(200):
        m, n = rng.randint(2, 8), rng.randint(2, 8)
        mats.append(([[rng.randint(-50, 50) for _ in range(n)] for _ in range(m)], m, n))
    parts = []
    for k in (8, 9, 10):
        classes = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(k)]
        weights = [rng.randint(1, 4) for _ in range(k)]
        parts.append((classes, weights, 4))
    return [
        ("smith", "smith (<= 8x8, |a| <= 50)", mats),
        ("bareiss_rank", "bareiss_rank (same matrices)", [(A,) for A, _, _ in mats]),
        ("min_partition", "min_partition (k = 8, 9, 10)", parts),
    ]


def _time(fn, inputs, repeat):
    return min(timeit.repeat(lambda: [fn(*a) for a in inputs], number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description="Compare compiled and pure-Python kernels.")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"dispatcher backend: {kernels.BACKEND}")
    if _ckernels is None:
        print("compiled kernels are not built; only the Python timings are shown")
    header = f"{'kernel':<32}{'python':>11}{'cython':>11}{'speedup':>9}{'overflow':>10}{'dispatch':>11}"
    print(header)
    for name, label, inputs in workloads(random.Random(args.seed)):
        py = getattr(_pykernels, name)
        disp = getattr(kernels, name)
        if _ckernels is None:
            t = _time(py, inputs, args.repeat)
            print(f"{label:<32}{t * 1e3:>9.1f}ms{'-':>11}{'-':>9}{'-':>10}{_time(disp, inputs, args.repeat) * 1e3:>9.1f}ms")
            continue
        cy = getattr(_ckernels, name)
        ok, overflow = _accepted(cy, inputs)
        for a in ok:
            assert py(*a) == cy(*a), f"backends disagree on {label}"
        tp, tc = _time(py, ok, args.repeat), _time(cy, ok, args.repeat)
        td = _time(disp, inputs, args.repeat)
        print(
            f"{label:<32}{tp * 1e3:>9.1f}ms{tc * 1e3:>9.1f}ms{tp / tc:>8.1f}x"
            f"{f'{overflow}/{len(inputs)}':>10}{td * 1e3:>9.1f}ms"
        )


if __name__ == "__main__":
    main()
