"""Allocation trace of one canonization: rows of (nodes created, nodes
allocated), e.g. to see bfs-exp-m flatten out at its node budget."""

from __future__ import annotations

import argparse
import random
import sys

from canonize.cli import parse_memory
from canonize.config import RunConfig, build_suite
from canonize.core import canonicalize
from canonize.dimacs import read_dimacs
from canonize.generators import circulant, disjoint_union
from canonize.instrument import AllocTraceVisitor


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graph", nargs="?", help="DIMACS file; default is three copies of C16(1,4)")
    ap.add_argument("--traversal", choices=["dfs", "bfs-exp", "bfs-exp-m"], default="bfs-exp-m")
    ap.add_argument("--memory-limit", type=parse_memory, default=parse_memory("8k"))
    ap.add_argument("--no-aut-pruner", action="store_true")
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()

    g = read_dimacs(args.graph) if args.graph else disjoint_union(*[circulant(16, (1, 4))] * 3)
    trace = AllocTraceVisitor()
    cfg = RunConfig(traversal=args.traversal, aut_pruner=not args.no_aut_pruner,
                    memory_limit=args.memory_limit if args.traversal == "bfs-exp-m" else None,
                    extra_visitors=[trace])
    _, report = canonicalize(g, build_suite(cfg))
    text = trace.to_text()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    print(f"n={g.n} nodes={report.nodes_created} peak={report.max_allocated} "
          f"stats={report.stats.get(args.traversal, {})}", file=sys.stderr)


if __name__ == "__main__":
    main()
