"""Time the numba kernels against the numpy fallback on real face orders.

    python benchmarks/bench_kernels.py [--repeat 3] [--k 4]

Both backends are checked for identical output before timing. The first
numba call (compilation or cache load) is reported separately.
"""

import argparse
import time

import numpy as np

from facechains import kernels
from facechains.associahedron import associahedron_polytope
from facechains.permutahedron import permutahedron_polytope


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench(P, k, repeat):
    top, bottom = P.top_codes, P.bottom_codes
    weights = P.dims.astype(np.int64)
    order = np.argsort(P.order_key, kind="stable")
    rows = {}
    results = {}
    for b in kernels.available_backends():
        t0 = time.perf_counter()
        kernels.dominance_csr(top[:2], bottom[:2], backend=b)
        warm = time.perf_counter() - t0

        t_csr, (ptr, ind) = best_of(lambda: kernels.dominance_csr(top, bottom, backend=b), repeat)
        t_dp, table = best_of(lambda: kernels.chain_table(weights, ptr, ind, k, backend=b), repeat)
        t_lc, lc = best_of(lambda: kernels.longest_chain(weights - 1, order, ptr, ind, backend=b), repeat)
        rows[b] = (warm, t_csr, t_dp, t_lc, ind.size)
        results[b] = (ptr, ind, table, *lc)
    ref = next(iter(results.values()))
    for other in results.values():
        assert all(np.array_equal(x, y) for x, y in zip(ref, other)), "backends disagree"
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args()

    cases = [("P6", permutahedron_polytope(6)), ("K8", associahedron_polytope(8))]
    print(f"{'case':<5} {'faces':>6} {'pairs':>9} {'backend':<7} {'warmup':>8} {'csr':>8} {'dp':>8} {'longest':>8}")
    for name, P in cases:
        rows = bench(P, args.k, args.repeat)
        for b, (warm, t_csr, t_dp, t_lc, pairs) in rows.items():
            print(
                f"{name:<5} {len(P):>6} {pairs:>9} {b:<7} {warm:>8.3f} {t_csr:>8.3f} {t_dp:>8.3f} {t_lc:>8.3f}"
            )
        if len(rows) == 2:
            speed = rows["numpy"][1] / rows["numba"][1], rows["numpy"][3] / rows["numba"][3]
            print(f"{name:<5} numba speedup: csr x{speed[0]:.1f}, longest chain x{speed[1]:.1f}")


if __name__ == "__main__":
    main()
