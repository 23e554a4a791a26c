#!/usr/bin/env python3
"""Label-size growth experiments.

Measures the maximum canonical label size of the one-fault scheme on paths
(where the packing number is largest) and of the two-fault recursion on dense
random colorings, and fits log-log slopes.  Sizes are reported both in raw
bits and in id-words (bits / ceil(log2 n)); the words column counts stored
entries, which is the guaranteed-growth quantity.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from colorfault.bits import id_width
from colorfault.generators import gen_path, gen_random
from colorfault.labels import loglog_slope
from colorfault.multi_fault import label_recursive
from colorfault.single_fault import label_single_fault


def single_fault_on_paths(sizes):
    print("# one-fault labels on paths (per-edge-unique coloring)")
    print("n max_bits max_words k")
    rows = []
    for n in sizes:
        ls = label_single_fault(gen_path(n))
        w = id_width(max(n, 2))
        rows.append((n, ls.max_label_bits(), ls.max_label_bits() / w))
        print(f"{n} {rows[-1][1]} {rows[-1][2]:.1f} {ls.meta['k']}")
    print(f"slope_bits={loglog_slope([r[0] for r in rows], [r[1] for r in rows]):.4f}")
    print(f"slope_words={loglog_slope([r[0] for r in rows], [r[2] for r in rows]):.4f}")


def recursion_on_dense(sizes, seed):
    import math

    print("# two-fault recursion on dense random colorings (m=4n, C=sqrt(n))")
    print("n max_bits delta prevalent")
    rows = []
    for n in sizes:
        g = gen_random(n, 4 * n, max(2, math.isqrt(n)), seed=seed + n)
        ls = label_recursive(g, f=2, seed=seed)
        man = ls.meta["manifest"]
        rows.append((n, ls.max_label_bits()))
        print(f"{n} {rows[-1][1]} {man['delta']:.2f} {len(man['prevalent_colors'])}")
    print(f"slope_bits={loglog_slope([r[0] for r in rows], [r[1] for r in rows]):.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--path-sizes", default="64,128,256,512,1024,2048,4096")
    ap.add_argument("--dense-sizes", default="64,128,256,512")
    ap.add_argument("--seed", type=int, default=int(os.environ.get("CFL_SEED", "0")))
    args = ap.parse_args()
    single_fault_on_paths([int(s) for s in args.path_sizes.split(",")])
    print()
    recursion_on_dense([int(s) for s in args.dense_sizes.split(",")], args.seed)


if __name__ == "__main__":
    main()
