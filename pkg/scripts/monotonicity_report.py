"""Median explored-node counts with and without pruning over the corpus."""

from __future__ import annotations

import argparse
import random

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from canonize.experiments import aut_pruning_rows, invariant_rows
from canonize.generators import corpus


def has_nontrivial_automorphism(g) -> bool:
    G = nx.Graph()
    for v in range(g.n):
        G.add_node(v, a=g.vertex_attrs[v])
    for u, v, a in g.edges:
        G.add_edge(u, v, a=a)
    same = lambda x, y: x["a"] == y["a"]
    return any(any(k != v for k, v in m.items())
               for m in GraphMatcher(G, G, node_match=same, edge_match=same).isomorphisms_iter())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--cap", type=int, default=20000, help="node cap for runs without pruning")
    args = ap.parse_args()

    graphs = list(corpus(random.Random(args.seed)))
    symmetric = {name for name, g in graphs if has_nontrivial_automorphism(g)}
    print(f"{len(graphs)} graphs, {len(symmetric)} with |Aut| > 1, cap {args.cap}")
    for row in aut_pruning_rows(graphs, symmetric, cap=args.cap) + invariant_rows(graphs):
        print(row.line())


if __name__ == "__main__":
    main()
