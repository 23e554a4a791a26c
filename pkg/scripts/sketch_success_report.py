#!/usr/bin/env python3
"""Empirical success rate of the edge-fault sketch queries.

For each size, builds labels with the default 24 repetitions and fires random
queries with fault sets of up to half the edges, comparing against union-find
ground truth.  The target regime is success >= 1 - 1/n; errors are one-sided
(connected pairs reported as disconnected when no cell isolates a cut edge).
"""

import argparse
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from colorfault.generators import gen_random
from colorfault.graph import UnionFind
from colorfault.sketch import build_edge_fault_labels, query_edge_fault


def run(n, queries, seed, repetitions):
    rng = random.Random(seed)
    g = gen_random(n, 2 * n, 3, seed=seed, connected=True)
    labels = build_edge_fault_labels(g, seed=seed, repetitions=repetitions)
    good = 0
    for _ in range(queries):
        faults = rng.sample(range(g.m), rng.randrange(0, g.m // 2 + 1))
        u, v = rng.randrange(g.n), rng.randrange(g.n)
        got = query_edge_fault(
            labels,
            labels.vertex_labels[u],
            labels.vertex_labels[v],
            [labels.edge_labels[e] for e in faults],
        )
        uf = UnionFind(g.n)
        for eid, (a, b) in enumerate(g.edges):
            if eid not in faults and a != b:
                uf.union(a, b)
        good += got == uf.connected(u, v)
    return good / queries


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="16,32,64,128,256")
    ap.add_argument("--queries", type=int, default=400)
    ap.add_argument("--repetitions", type=int, default=24)
    ap.add_argument("--seed", type=int, default=int(os.environ.get("CFL_SEED", "0")))
    args = ap.parse_args()
    print("n success_rate target(1-1/n)")
    for n in (int(s) for s in args.sizes.split(",")):
        rate = run(n, args.queries, args.seed, args.repetitions)
        print(f"{n} {rate:.4f} {1 - 1 / n:.4f}")


if __name__ == "__main__":
    main()
