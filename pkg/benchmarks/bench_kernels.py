"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so one run times both and checks that
they return identical results on the same inputs.
"""

import argparse
import random
import sys
import timeit

from artifact import _fallback

try:
    from artifact import _kernels
except ImportError:
    _kernels = None


def _workloads(rng):
    perms = []
    for _ in range(2000):
        d = rng.randint(2, 9)
        p = list(range(1, d + 1))
        rng.shuffle(p)
        perms.append((tuple(p), [rng.randint(0, 1) for _ in range(d)]))
    splits = [(j, d) for d in range(1, 11) for j in range(1, d + 1)]
    mats = []
    for _ in range(100):
        r, c = rng.randint(1, 20), rng.randint(1, 20)
        entries = [(i, j, rng.randint(-10, 10)) for i in range(r) for j in range(c) if rng.random() < 0.5]
        mats.append((r, c, entries))
    return {
        "koszul_exponent": lambda m: [m.koszul_exponent(p, s) for p, s in perms],
        "reorder_exponent": lambda m: [m.reorder_exponent(p, s) for p, s in perms],
        "perm_parity": lambda m: [m.perm_parity(p) for p, _ in perms],
        "unshuffles": lambda m: [m.unshuffles(j, d) for j, d in splits],
        "invariant_factors_small": lambda m: [m.invariant_factors_small(r, c, e) for r, c, e in mats],
    }


def _norm(x):
    if isinstance(x, (list, tuple)):
        return tuple(_norm(i) for i in x)
    return x


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    loads = _workloads(random.Random(args.seed))
    print(f"{'kernel':26}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, work in loads.items():
        py = min(timeit.repeat(lambda: work(_fallback), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:26}{py:14.2f}{'-':>14}{'-':>10}")
            continue
        if _norm(work(_fallback)) != _norm(work(_kernels)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        cy = min(timeit.repeat(lambda: work(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26}{py:14.2f}{cy:14.2f}{py / cy:9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
