"""Command line: canon, oracle, gen and viz subcommands."""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from .config import RunConfig, build_suite, parse_invariants, random_permutation, run
from .core import ResourceError, canonicalize
from .dimacs import DimacsError, format_dimacs, read_dimacs
from .graph import AttributedGraph, apply_permutation
from . import generators as gen
from .instrument import AllocTraceVisitor, StatsVisitor
from .oracle import OracleLimitError, brute_aut, brute_canon

MEMORY_UNITS = {"": 1, "b": 1, "k": 1024, "kib": 1024, "m": 2**20, "mib": 2**20, "g": 2**30, "gib": 2**30}


def parse_memory(text: str) -> int:
    """``"2MiB"``, ``"512k"`` or a plain byte count."""
    t = text.strip().lower()
    num = t.rstrip("abcdefghijklmnopqrstuvwxyz")
    unit = t[len(num):]
    if unit not in MEMORY_UNITS or not num:
        raise argparse.ArgumentTypeError(f"bad memory size {text!r}")
    return int(float(num) * MEMORY_UNITS[unit])


def form_digest(g: AttributedGraph) -> str:
    return hashlib.sha256(repr(g.representation()).encode()).hexdigest()[:16]


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--traversal", choices=["dfs", "bfs-exp", "bfs-exp-m"], default="dfs")
    p.add_argument("--cell", choices=["f", "fl", "flm"], default="f", help="target cell selector")
    p.add_argument("--invariants", default="", help="comma separated subset of pl,q,t")
    p.add_argument("--memory-limit", type=parse_memory, default=None,
                   help="byte budget for bfs-exp-m, e.g. 2MiB")
    p.add_argument("--no-aut-pruner", action="store_true")
    p.add_argument("--no-implicit-size2", action="store_true")
    p.add_argument("--no-degree1", action="store_true")


def _config(args, reps: int = 1, seed: int = 0) -> RunConfig:
    return RunConfig(
        traversal=args.traversal,
        selector=args.cell,
        invariants=parse_invariants(args.invariants),
        aut_pruner=not args.no_aut_pruner,
        implicit_size2=not args.no_implicit_size2,
        degree1=not args.no_degree1,
        memory_limit=args.memory_limit,
        reps=reps,
        seed=seed,
    )


def cmd_canon(args) -> int:
    g = read_dimacs(args.graph)
    config = _config(args, args.reps, args.seed)
    outcome = run(config, g)
    first = outcome.results[0]
    # relate the answer back to the input labelling: v -> gamma -> canonical index
    perm = first.gamma * first.permutation
    print(f"config {config.label()}")
    print(f"canonical permutation {perm.to_cycles()}")
    print(f"canonical form digest {form_digest(first.form)}")
    if args.stats:
        for row in outcome.summary():
            print("rep {rep}: nodes={nodes} max_allocated={max_allocated} leaves={leaves} "
                  "generators={generators} seconds={seconds:.4f}".format(**row))
        for name, values in first.report.stats.items():
            print(f"stats {name} {json.dumps(values, sort_keys=True)}")
    if not outcome.agree:
        ref = form_digest(first.form)
        for i in outcome.mismatches:
            print(f"MISMATCH rep {i}: digest {form_digest(outcome.results[i].form)} != {ref}", file=sys.stderr)
        return 1
    return 0


def cmd_viz(args) -> int:
    g = read_dimacs(args.graph)
    config = _config(args)
    stats, trace = StatsVisitor(), AllocTraceVisitor()
    config.extra_visitors = [stats, trace]
    canonicalize(g, build_suite(config))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(stats.to_dot())
    if args.alloc_trace:
        with open(args.alloc_trace, "w") as fh:
            fh.write(trace.to_text())
    if not args.dot and not args.alloc_trace:
        sys.stdout.write(stats.to_dot())
    return 0


def cmd_oracle(args) -> int:
    g = read_dimacs(args.graph)
    c = brute_canon(g)
    print(f"canonical form digest {form_digest(c)}")
    if g.n <= 8:
        auts = brute_aut(g)
        print(f"automorphisms {len(auts)}")
        for a in auts:
            print(a.to_cycles())
    return 0


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    fam = args.family
    if fam == "gnp":
        g = gen.gnp(args.n, args.p, rng)
    elif fam == "regular":
        g = gen.random_regular(args.n, args.degree, rng)
    elif fam == "circulant":
        g = gen.circulant(args.n, [int(x) for x in args.jumps.split(",")])
    elif fam == "cycle":
        g = gen.cycle(args.n)
    else:
        raise AssertionError(fam)
    if args.copies > 1:
        g = gen.disjoint_union(*[g] * args.copies)
    if args.complement:
        g = gen.complement(g)
    if args.vertex_colours:
        g = gen.with_vertex_attrs(g, args.vertex_colours, rng)
    if args.edge_colours:
        g = gen.with_edge_attrs(g, args.edge_colours, rng)
    if args.shuffle:
        g = apply_permutation(g, random_permutation(g.n, rng))
    sys.stdout.write(format_dimacs(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="canonize", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canon", help="canonize a DIMACS graph")
    p.add_argument("graph")
    _add_config_args(p)
    p.add_argument("--reps", type=int, default=1, help="random relabelings to canonize and compare")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("viz", help="write the search tree as DOT and/or the allocation trace")
    p.add_argument("graph")
    _add_config_args(p)
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--alloc-trace", metavar="PATH")
    p.set_defaults(func=cmd_viz)

    p = sub.add_parser("oracle", help="brute-force canonical form and automorphisms")
    p.add_argument("graph")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated graph in DIMACS format")
    p.add_argument("family", choices=["gnp", "regular", "circulant", "cycle"])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=float, default=0.3)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--jumps", default="1")
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--complement", action="store_true")
    p.add_argument("--vertex-colours", type=int, default=0)
    p.add_argument("--edge-colours", type=int, default=0)
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DimacsError, OracleLimitError, ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
