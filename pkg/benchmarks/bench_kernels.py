"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py --d 6 --sets 20
"""

import argparse
import math
import time

import numpy as np

from gbslocc import _pycore
from gbslocc.census import subsets_from_ranks
from gbslocc.criterion import cyclotomic_poly
from gbslocc.oracle import difference_terms, random_unit_vectors

try:
    from gbslocc import _core
except ImportError:
    _core = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(backend, sets, d, restarts, max_iters, repeat):
    phi_poly = cyclotomic_poly(d)
    rng = np.random.default_rng(0)
    prepared = [(s, difference_terms(s), random_unit_vectors(rng, restarts, d)) for s in sets]

    def witnesses():
        for s, _, _ in prepared:
            backend.first_witness(s.ms, s.ns, d)
            backend.vanishing_table(s.ms, s.ns, d, phi_poly)

    def descent():
        for _, (da, db, c), starts in prepared:
            backend.descend_batch(starts, da, db, c, d, max_iters, 1e-9, 0.1, 50, 1e-6, 1e-14)

    return _time(witnesses, repeat), _time(descent, repeat)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--d", type=int, default=6)
    p.add_argument("--sets", type=int, default=20)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    rng = np.random.default_rng(1)
    ranks = np.sort(rng.choice(math.comb(args.d**2, args.d), size=args.sets, replace=False))
    sets = subsets_from_ranks(args.d, args.d, ranks)
    backends = [("python", _pycore)] + ([("cython", _core)] if _core is not None else [])
    results = {}
    print(f"d={args.d}, {args.sets} sets, {args.restarts} restarts x {args.max_iters} iterations")
    print(f"{'backend':<8} {'witness+table':>14} {'descent':>10}")
    for name, mod in backends:
        results[name] = bench(mod, sets, args.d, args.restarts, args.max_iters, args.repeat)
        w, g = results[name]
        print(f"{name:<8} {w * 1e3:>12.1f}ms {g:>9.2f}s")
    if "cython" in results:
        (pw, pg), (cw, cg) = results["python"], results["cython"]
        print(f"speedup  {pw / cw:>13.1f}x {pg / cg:>9.1f}x")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
