#!/usr/bin/env python3
"""Cross-scheme verification sweep plus oracle query timing.

Runs every labeling scheme against the brute-force oracle on seeded random
instances and reports agreement, then times centralized oracle queries across
sizes (the predecessor search is a binary search, so expect ~log n growth).
"""

import argparse
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from colorfault.generators import gen_random
from colorfault.multi_fault import (
    label_large_f,
    label_recursive,
    query_large_f_ids,
    query_recursive_ids,
)
from colorfault.nca import build_one_fault_oracle, label_nca_connectivity, pair_connected_nca
from colorfault.oracle import brute_force_connected
from colorfault.graph import RemovedVertexError
from colorfault.single_fault import label_single_fault, pair_connected
from colorfault.two_fault import label_two_fault, query_two_fault_ids


def sweep(scheme, trials, seed):
    rng = random.Random(seed)
    agree = total = 0
    for t in range(trials // 50):
        g = gen_random(12 + t % 21, 30 + t % 12, 4 + t % 4, seed=seed + t,
                       connected=True)
        if scheme == "single":
            ls = label_single_fault(g)
            ask = lambda u, v, F: pair_connected(
                ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[F[0]])
            fmax = 1
        elif scheme == "nca":
            ls = label_nca_connectivity(g)
            ask = lambda u, v, F: pair_connected_nca(
                ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[F[0]])
            fmax = 1
        elif scheme == "two-diam":
            ls = label_two_fault(g)
            ask = lambda u, v, F: query_two_fault_ids(
                ls, u, v, F[0], F[-1])
            fmax = 2
        elif scheme == "multi":
            ls = label_recursive(g, f=2, seed=seed + t)
            ask = lambda u, v, F: query_recursive_ids(ls, u, v, F)
            fmax = 2
        else:
            ls = label_large_f(g, seed=seed + t)
            ask = lambda u, v, F: query_large_f_ids(ls, u, v, F)
            fmax = 3
        for _ in range(50):
            u, v = rng.randrange(g.n), rng.randrange(g.n)
            F = rng.sample(range(g.C), rng.randrange(1, fmax + 1))
            try:
                want = brute_force_connected(g, u, v, F)
            except RemovedVertexError:
                continue
            total += 1
            agree += ask(u, v, sorted(F)) == want
    return agree, total


def time_oracle(sizes, seed):
    print("n avg_query_us")
    rng = random.Random(seed)
    for n in sizes:
        g = gen_random(n, 2 * n, max(3, n // 8), seed=seed + n, connected=True)
        oracle = build_one_fault_oracle(g)
        queries = [
            (rng.randrange(n), rng.randrange(n), rng.randrange(g.C))
            for _ in range(4000)
        ]
        t0 = time.perf_counter()
        for u, v, c in queries:
            oracle.query(u, v, c)
        dt = time.perf_counter() - t0
        print(f"{n} {dt / len(queries) * 1e6:.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=int(os.environ.get("CFL_SEED", "0")))
    ap.add_argument("--oracle-sizes", default="64,256,1024,4096")
    args = ap.parse_args()
    for scheme in ("single", "nca", "two-diam", "multi", "large"):
        agree, total = sweep(scheme, args.trials, args.seed)
        print(f"scheme={scheme} agreement={agree}/{total}")
    print()
    time_oracle([int(s) for s in args.oracle_sizes.split(",")], args.seed)


if __name__ == "__main__":
    main()
