"""Command-line harness: generators, labeling, queries, verification, routing.

Reports are line-oriented ``key=value`` pairs on stdout; ``--summary FILE``
additionally writes the same report as JSON.  The CFL_SEED environment
variable supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import pickle
import random
import sys

from . import generators
from .bits import id_width
from .encoders import encode_balls, encode_spider, parse_bits
from .graph import (
    EDGE,
    ColoredGraph,
    GraphError,
    RemovedVertexError,
    parse_graph,
    serialize_graph,
)
from .labels import loglog_slope, measure_labels, report_lines
from .multi_fault import (
    label_large_f,
    label_recursive,
    query_large_f_ids,
    query_recursive_ids,
)
from .nca import (
    build_one_fault_oracle,
    dump_oracle,
    label_nca_connectivity,
    load_oracle,
    oracle_file_bits,
    pair_connected_nca,
)
from .oracle import brute_force_connected
from .reduction import ExactSingleSource, build_all_pairs, query_all_pairs_ids
from .routing import UnreachableError, build_routing_scheme, route
from .single_fault import label_single_fault, pair_connected
from .two_fault import label_two_fault, query_two_fault_ids

LABEL_SCHEMES = ("single", "two-diam", "multi", "large", "nca")


def _default_seed() -> int:
    return int(os.environ.get("CFL_SEED", "0"))


def _read_graph(path: str) -> ColoredGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _emit(report: dict, summary: str | None) -> None:
    for line in report_lines(report):
        print(line)
    if summary:
        with open(summary, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, default=str)


def _build_labels(
    g: ColoredGraph,
    scheme: str,
    f: int,
    seed: int,
    repetitions: int = 24,
    checksum_bits: int = 32,
):
    if scheme == "single":
        return label_single_fault(g)
    if scheme == "two-diam":
        return label_two_fault(g)
    if scheme == "multi":
        return label_recursive(g, f=f, seed=seed, repetitions=repetitions,
                               checksum_bits=checksum_bits)
    if scheme == "large":
        return label_large_f(g, seed=seed, repetitions=repetitions,
                             checksum_bits=checksum_bits)
    if scheme == "nca":
        return label_nca_connectivity(g)
    raise GraphError(f"unknown scheme {scheme!r}")


def _query_labels(ls, u: int, v: int, colors: list[int]) -> bool:
    scheme = ls.scheme
    if scheme in ("single-fault", "nca-connectivity") or ls.meta.get("base"):
        if len(colors) != 1:
            raise GraphError(f"scheme {scheme} answers exactly one faulted color")
        c = colors[0]
        if scheme == "nca-connectivity":
            return pair_connected_nca(
                ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[c]
            )
        return pair_connected(
            ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[c]
        )
    if scheme == "two-fault-diam":
        if not 1 <= len(colors) <= 2:
            raise GraphError("two-fault scheme answers one or two faulted colors")
        c = colors[0]
        d = colors[1] if len(colors) > 1 else colors[0]
        return query_two_fault_ids(ls, u, v, c, d)
    if scheme == "multi-fault":
        return query_recursive_ids(ls, u, v, colors)
    if scheme == "large-f":
        return query_large_f_ids(ls, u, v, colors)
    raise GraphError(f"unknown label file scheme {scheme!r}")


# -- subcommands ----------------------------------------------------------------


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    kind = args.kind
    if kind == "random":
        g = generators.gen_random(
            args.n, args.m, args.C, seed=seed, mode=args.mode,
            coloring=args.coloring, simple=not args.multigraph,
            connected=args.connected,
        )
    elif kind == "path":
        g = generators.gen_path(args.n, coloring=args.coloring, C=args.C,
                                seed=seed, mode=args.mode)
    elif kind == "wheel":
        g = generators.gen_wheel(args.n, coloring=args.coloring, C=args.C,
                                 seed=seed, mode=args.mode)
    elif kind == "grid":
        g = generators.gen_grid(args.rows, args.cols, coloring=args.coloring,
                                C=args.C, seed=seed, mode=args.mode)
    elif kind == "tree":
        g = generators.gen_tree(args.n, seed=seed, coloring=args.coloring,
                                C=args.C, mode=args.mode)
    else:
        raise GraphError(f"unknown generator {kind!r}")
    text = serialize_graph(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_label(args) -> int:
    g = _read_graph(args.graph)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.scheme == "two-diam" and not args.force:
        from .graph import bfs_tree, components

        comp = components(g.view())
        depth = 0
        for s in sorted({c for c in comp if c is not None}):
            depth = max(depth, max(d for d in bfs_tree(g, s).depth if d >= 0))
        if depth > math.sqrt(g.n):
            print(
                f"warning: measured depth {depth} exceeds sqrt(n)={math.sqrt(g.n):.1f}; "
                "the length guarantee degrades, refusing (use --force to build anyway)",
                file=sys.stderr,
            )
            return 0
    ls = _build_labels(g, args.scheme, args.f, seed,
                       args.repetitions, args.checksum_bits)
    report = measure_labels(ls)
    if args.scheme == "multi" and "manifest" in ls.meta:
        report["manifest"] = ls.meta["manifest"]
    _emit(report, args.summary)
    if args.output:
        with open(args.output, "wb") as fh:
            pickle.dump(ls, fh)
    return 0


def cmd_query(args) -> int:
    with open(args.labels, "rb") as fh:
        ls = pickle.load(fh)
    colors = [int(c) for c in args.colors.split(",")] if args.colors else []
    try:
        ok = _query_labels(ls, args.u, args.v, colors)
    except RemovedVertexError as exc:
        print(f"error=removed-vertex detail={exc}")
        return 2
    print(f"connected={int(ok)}")
    return 0


def cmd_oracle(args) -> int:
    if args.oracle_command == "build":
        g = _read_graph(args.graph)
        oracle = build_one_fault_oracle(g)
        data = dump_oracle(oracle)
        with open(args.output, "wb") as fh:
            fh.write(data)
        header, body = oracle_file_bits(oracle)
        print(f"bytes={len(data)}")
        print(f"header_bits={header}")
        print(f"body_bits={body}")
        return 0
    with open(args.oracle, "rb") as fh:
        oracle = load_oracle(fh.read())
    try:
        ok = oracle.query(args.u, args.v, args.c)
    except RemovedVertexError as exc:
        print(f"error=removed-vertex detail={exc}")
        return 2
    print(f"connected={int(ok)}")
    return 0


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    seed = args.seed if args.seed is not None else _default_seed()
    ls = _build_labels(g, args.scheme, args.f, seed,
                       args.repetitions, args.checksum_bits)
    rng = random.Random(seed)
    max_faults = {"single": 1, "nca": 1, "two-diam": 2}.get(args.scheme, args.f)
    agree = 0
    skipped = 0
    for _ in range(args.trials):
        u = rng.randrange(g.n)
        v = rng.randrange(g.n)
        size = rng.randrange(1, max_faults + 1)
        F = rng.sample(range(g.C), min(size, g.C))
        try:
            want = brute_force_connected(g, u, v, F)
        except RemovedVertexError:
            skipped += 1
            continue
        got = _query_labels(ls, u, v, sorted(F) if len(F) > 1 else F)
        agree += got == want
    effective = args.trials - skipped
    report = {
        "scheme": args.scheme,
        "trials": args.trials,
        "skipped_removed": skipped,
        "agreement": agree / max(effective, 1),
        "seed": seed,
    }
    _emit(report, args.summary)
    return 0 if agree == effective else 1


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for n in sizes:
        if args.generator == "path":
            g = generators.gen_path(n, coloring=args.coloring, C=args.C, seed=seed)
        else:
            g = generators.gen_random(
                n, int(n * args.density), args.C or max(2, math.isqrt(n)),
                seed=seed, coloring=args.coloring, connected=True,
            )
        ls = _build_labels(g, args.scheme, args.f, seed)
        max_bits = ls.max_label_bits()
        words = max_bits / max(id_width(max(g.n, 2)), 1)
        rows.append((n, max_bits, words))
    report: dict = {"scheme": args.scheme, "generator": args.generator}
    for n, bits, words in rows:
        report[f"n{n}.max_bits"] = bits
        report[f"n{n}.max_words"] = round(words, 2)
    if len(rows) >= 2:
        report["slope_bits"] = round(
            loglog_slope([r[0] for r in rows], [r[1] for r in rows]), 4
        )
        report["slope_words"] = round(
            loglog_slope([r[0] for r in rows], [r[2] for r in rows]), 4
        )
    _emit(report, args.summary)
    return 0


def cmd_route(args) -> int:
    g = _read_graph(args.graph)
    scheme = build_routing_scheme(g)
    try:
        result = route(scheme, args.source, args.target, args.avoid)
    except UnreachableError as exc:
        print(f"error=unreachable detail={exc}")
        return 2
    print(f"delivered=1")
    print(f"hops={result.hops}")
    if args.trace:
        for i, hop in enumerate(result.trace):
            print(
                f"hop {i}: {hop.src} --port {hop.port}--> {hop.dst} "
                f"(edge color {hop.color})"
            )
    return 0


def cmd_reduce(args) -> int:
    g = _read_graph(args.graph)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.inner != "exact":
        raise GraphError("only the exact inner scheme is bundled")
    inner = ExactSingleSource(f=args.f, fault_palette=g.C)
    ls = build_all_pairs(g, f=args.f, inner=inner, alpha=args.alpha, seed=seed)
    rng = random.Random(seed)
    wrong_connected = 0
    wrong_disconnected = 0
    conn = disc = 0
    for _ in range(args.trials):
        u = rng.randrange(g.n)
        w = rng.randrange(g.n)
        F = rng.sample(range(g.C), min(args.f, g.C))
        try:
            want = brute_force_connected(g, u, w, F)
        except RemovedVertexError:
            continue
        got = query_all_pairs_ids(ls, u, w, F)
        if want:
            conn += 1
            wrong_connected += not got
        else:
            disc += 1
            wrong_disconnected += got
    report = {
        "rows": ls.meta["rows"],
        "cols": ls.meta["cols"],
        "alpha": args.alpha,
        "seed": seed,
        "connected_queries": conn,
        "connected_errors": wrong_connected,
        "disconnected_queries": disc,
        "disconnected_errors": wrong_disconnected,
        "max_label_bits": ls.max_label_bits(),
    }
    _emit(report, args.summary)
    return 0 if wrong_connected == 0 else 1


def cmd_encode(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    bits = parse_bits(args.bits)
    if args.encoder == "balls":
        g = _read_graph(args.graph)
        centers = [int(x) for x in args.centers.split(",")] if args.centers else None
        inst = encode_balls(g, bits, centers=centers)
    else:
        inst = encode_spider(args.f, args.q, args.arms, bits,
                             subdivide=args.subdivide)
    if args.decode_with == "oracle":
        decoded = inst.decode_with_oracle()
    else:
        faults = max((len(e.faults) for e in inst.decoder), default=1)
        if faults <= 1:
            ls = label_single_fault(inst.graph)

            def answer(u, v, F):
                (c,) = F
                return pair_connected(
                    ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[c]
                )

        else:
            ls = label_recursive(inst.graph, f=faults, seed=seed)

            def answer(u, v, F):
                return query_recursive_ids(ls, u, v, F)

        decoded = inst.decode(answer)
    matches = sum(a == b for a, b in zip(decoded, bits))
    report = {
        "capacity": inst.capacity,
        "decoded": "".join(str(b) for b in decoded),
        "bit_accuracy": matches / max(len(bits), 1),
        "round_trip": int(decoded == list(bits)),
    }
    _emit(report, args.summary)
    return 0 if decoded == list(bits) else 1


# -- parser ----------------------------------------------------------------------


def _add_common_gen(p) -> None:
    p.add_argument("--coloring", choices=generators.COLORINGS, default="uniform")
    p.add_argument("--C", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=("edge", "vertex"), default=EDGE)
    p.add_argument("-o", "--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfl",
        description="Connectivity labels, oracles and routing under color faults.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    gsub = p.add_subparsers(dest="kind", required=True)
    pr = gsub.add_parser("random")
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--m", type=int, required=True)
    pr.add_argument("--multigraph", action="store_true")
    pr.add_argument("--connected", action="store_true")
    _add_common_gen(pr)
    for kind in ("path", "wheel", "tree"):
        pk = gsub.add_parser(kind)
        pk.add_argument("--n", type=int, required=True)
        if kind == "path":
            pk.set_defaults(coloring="unique")
        _add_common_gen(pk)
    pg = gsub.add_parser("grid")
    pg.add_argument("--rows", type=int, required=True)
    pg.add_argument("--cols", type=int, required=True)
    _add_common_gen(pg)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("label", help="build labels for a graph")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=LABEL_SCHEMES, required=True)
    p.add_argument("--f", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--force", action="store_true",
                   help="build two-diam labels even when depth exceeds sqrt(n)")
    p.add_argument("--repetitions", type=int, default=24,
                   help="sketch repetitions for multi/large schemes")
    p.add_argument("--checksum-bits", type=int, default=32,
                   help="sketch edge-name checksum width")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("query", help="answer a query from a label file")
    p.add_argument("labels")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.add_argument("--colors", default="", help="comma-separated faulted colors")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("oracle", help="centralized one-fault oracle")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    ob = osub.add_parser("build")
    ob.add_argument("graph")
    ob.add_argument("-o", "--output", required=True)
    oq = osub.add_parser("query")
    oq.add_argument("oracle")
    oq.add_argument("u", type=int)
    oq.add_argument("v", type=int)
    oq.add_argument("c", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="compare a scheme against brute force")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=LABEL_SCHEMES, required=True)
    p.add_argument("--f", type=int, default=2)
    p.add_argument("--repetitions", type=int, default=24)
    p.add_argument("--checksum-bits", type=int, default=32)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="measure label sizes across sizes")
    p.add_argument("--scheme", choices=LABEL_SCHEMES, default="single")
    p.add_argument("--sizes", required=True, help="comma-separated n values")
    p.add_argument("--generator", choices=("path", "random"), default="path")
    p.add_argument("--coloring", choices=generators.COLORINGS, default="unique")
    p.add_argument("--C", type=int, default=0)
    p.add_argument("--density", type=float, default=1.6)
    p.add_argument("--f", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("route", help="simulate forbidden-color routing")
    p.add_argument("graph")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--avoid", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("reduce", help="all-pairs labels from a single-source scheme")
    p.add_argument("graph")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inner", choices=("exact",), default="exact")
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("encode", help="lower-bound round-trip encodings")
    esub = p.add_subparsers(dest="encoder", required=True)
    eb = esub.add_parser("balls")
    eb.add_argument("graph")
    eb.add_argument("--bits", required=True)
    eb.add_argument("--centers", default=None)
    eb.add_argument("--decode-with", choices=("oracle", "scheme"), default="oracle")
    eb.add_argument("--seed", type=int, default=None)
    eb.add_argument("--summary", default=None)
    es = esub.add_parser("spider")
    es.add_argument("--f", type=int, required=True)
    es.add_argument("--q", type=int, required=True)
    es.add_argument("--arms", type=int, required=True)
    es.add_argument("--bits", required=True)
    es.add_argument("--subdivide", choices=("edge", "vertex"), default=None)
    es.add_argument("--decode-with", choices=("oracle", "scheme"), default="oracle")
    es.add_argument("--seed", type=int, default=None)
    es.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_encode)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
