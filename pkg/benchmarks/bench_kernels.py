"""Time the counting kernels under both backends.

    python3 benchmarks/bench_kernels.py [--n 24 32 40] [--repeat 5]

Each kernel is warmed up once (numba compiles on first call), then timed as
the best of ``--repeat`` runs. Results from the two backends are compared
before any timing is reported.
"""
import argparse
import time

import numpy as np

from hypertile import kernels
from hypertile.constructions import random_3graph


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(h):
    adj = h.adj.view(np.uint8)
    quads = kernels.combinations_array(h.n, 4)
    triples = np.array(h.edges, dtype=np.int64)
    return {
        "quad_edge_counts": (kernels.quad_edge_counts_numpy, kernels.quad_edge_counts_numba, (adj, quads)),
        "triple_link": (kernels.triple_link_numpy, kernels.triple_link_numba, (adj, triples)),
        "connector_counts": (kernels.connector_counts_numpy, kernels.connector_counts_numba, (adj,)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[24, 32, 40])
    parser.add_argument("--p", type=float, default=0.7)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'kernel':<18} {'n':>4} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in args.n:
        h = random_3graph(n, args.p, 0)
        for name, (slow, fast, inputs) in cases(h).items():
            want, got = slow(*inputs), fast(*inputs)
            if not np.array_equal(want, got):
                raise SystemExit(f"{name}: backends disagree at n={n}")
            t_np = best_of(lambda: slow(*inputs), args.repeat)
            t_nb = best_of(lambda: fast(*inputs), args.repeat)
            print(f"{name:<18} {n:>4} {1e3 * t_np:>10.2f} {1e3 * t_nb:>10.2f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
