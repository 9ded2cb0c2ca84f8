#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy twins.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--n 300] [--batch 400] [--runs 5]

Each kernel is checked for agreement between the two paths, then timed
(best of --runs after a warmup, so numba compilation never counts).  When
numba is missing only the numpy column appears; SWAPSTABLE_KERNELS does
not matter here because both implementations are imported directly.
"""

import argparse
import time

import numpy as np

from swapstable import _kernels
from swapstable.classic import u_optimal
from swapstable.generators import gen_random
from swapstable.oracle import _variant_rank_rows
from swapstable.profile import _partner_arrays


def matching_args(n, rng):
    p = gen_random(n, n, 1.0, seed=17)
    return _partner_arrays(p, u_optimal(p))


def batch_args(n, k, rng):
    p = gen_random(n, n, 1.0, seed=17)
    pus = np.empty((k, n), dtype=np.int64)
    pws = np.empty((k, n), dtype=np.int64)
    for t in range(k):
        perm = rng.permutation(n).astype(np.int64)
        pus[t] = perm
        pws[t, perm] = np.arange(n, dtype=np.int64)
    return (p.rank_u, p.rank_w, p.len_u, p.len_w, pus, pws)


def product_args(rng):
    # small on purpose: the odometer is exponential in the U side
    p = gen_random(5, 5, 1.0, seed=23)
    ru, cnt_u = _variant_rank_rows(p.u_lists, p.n_w, 1)
    rw, cnt_w = _variant_rank_rows(p.w_lists, p.n_u, 1)
    perm = rng.permutation(5).astype(np.int64)
    pw = np.empty(5, dtype=np.int64)
    pw[perm] = np.arange(5, dtype=np.int64)
    return (ru, rw, p.len_u, p.len_w, cnt_u, cnt_w, perm, pw)


def bench(fn, args, runs):
    fn(*args)
    best = float("inf")
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300, help="side size for the matching kernels")
    ap.add_argument("--batch", type=int, default=400, help="matchings per batch_stable call")
    ap.add_argument("--runs", type=int, default=5, help="timed repetitions per kernel")
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    m_args = matching_args(args.n, rng)
    jobs = [
        ("first_blocking", m_args),
        ("blocking_mask", m_args),
        ("egal_cost", m_args),
        ("count_inversions", (rng.integers(0, 10_000, size=3000).astype(np.int64),)),
        ("batch_stable", batch_args(args.n, args.batch, rng)),
        ("stabilizable_product", product_args(rng)),
    ]

    print("backend available: numba=%s" % _kernels.HAS_NUMBA)
    header = "%-22s %10s %10s %9s" % ("kernel", "numpy", "numba", "speedup")
    print(header)
    print("-" * len(header))
    for name, job in jobs:
        np_fn = getattr(_kernels, name + "_np")
        nb_fn = getattr(_kernels, "_%s_nb" % name, None)
        t_np = bench(np_fn, job, args.runs)
        if nb_fn is None:
            print("%-22s %10.2e %10s %9s" % (name, t_np, "-", "-"))
            continue
        want, got = np_fn(*job), nb_fn(*job)
        if not np.array_equal(np.asarray(want), np.asarray(got)):
            raise SystemExit("%s: numba and numpy paths disagree" % name)
        t_nb = bench(nb_fn, job, args.runs)
        print("%-22s %10.2e %10.2e %8.1fx" % (name, t_np, t_nb, t_np / t_nb))


if __name__ == "__main__":
    main()
