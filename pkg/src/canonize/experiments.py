"""Configuration grid and the pruning monotonicity report shared by the
acceptance tests and the scripts."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from itertools import combinations, product

from .config import INVARIANT_ORDER, RunConfig, build_suite
from .core import Visitor, canonicalize
from .graph import AttributedGraph, apply_permutation
from .traversal import node_cost_bytes

TRAVERSAL_NAMES = ("dfs", "bfs-exp", "bfs-exp-m")
SELECTOR_NAMES = ("f", "fl", "flm")


def invariant_subsets() -> list[tuple[str, ...]]:
    return [c for r in range(len(INVARIANT_ORDER) + 1) for c in combinations(INVARIANT_ORDER, r)]


def grid(n: int, limit_nodes: float = 8, traversals=TRAVERSAL_NAMES, **kw) -> list[RunConfig]:
    """Every traversal x selector x invariant subset; bfs-exp-m gets room for ``limit_nodes`` nodes."""
    out = []
    for trav, sel, inv in product(traversals, SELECTOR_NAMES, invariant_subsets()):
        limit = limit_nodes * node_cost_bytes(n) if trav == "bfs-exp-m" else None
        out.append(RunConfig(traversal=trav, selector=sel, invariants=inv, memory_limit=limit, **kw))
    return out


def aut_off(config: RunConfig) -> RunConfig:
    return RunConfig(traversal=config.traversal, selector=config.selector, invariants=config.invariants,
                     memory_limit=config.memory_limit, aut_pruner=False, implicit_size2=False,
                     degree1=False)


class NodeCapExceeded(Exception):
    pass


class NodeCap(Visitor):
    """Stops a run once more than ``cap`` nodes have been created."""

    name = "node-cap"

    def __init__(self, cap: int) -> None:
        self.cap = cap

    def tree_node_create_begin(self, node) -> None:
        if self.state.nodes_created > self.cap:
            raise NodeCapExceeded


@dataclass
class Measured:
    nodes: int
    capped: bool
    form: AttributedGraph | None


def measure(g: AttributedGraph, config: RunConfig, cap: int | None = None) -> Measured:
    config.extra_visitors = [NodeCap(cap)] if cap is not None else []
    try:
        perm, report = canonicalize(g, build_suite(config))
    except NodeCapExceeded:
        return Measured(cap, True, None)
    finally:
        config.extra_visitors = []
    return Measured(report.nodes_created, False, apply_permutation(g, perm))


@dataclass
class MonotonicityRow:
    label: str
    compare: str
    median_on: float
    median_off: float
    median_on_symmetric: float | None = None
    median_off_symmetric: float | None = None
    form_changes: list[str] = field(default_factory=list)
    capped: int = 0

    @property
    def monotone(self) -> bool:
        return self.median_on <= self.median_off

    @property
    def strict_on_symmetric(self) -> bool | None:
        if self.median_on_symmetric is None:
            return None
        return self.median_on_symmetric < self.median_off_symmetric

    def line(self) -> str:
        sym = ""
        if self.median_on_symmetric is not None:
            sym = f" |Aut|>1: {self.median_on_symmetric:g} vs {self.median_off_symmetric:g}"
        return (f"{self.label:28s} {self.compare:10s} median {self.median_on:g} vs {self.median_off:g}"
                f"{sym} capped={self.capped} form_changes={len(self.form_changes)}")


def aut_pruning_rows(graphs, symmetric: set[str], cap: int = 20000, limit_nodes: float = 8,
                     invariant_sets=((), INVARIANT_ORDER)) -> list[MonotonicityRow]:
    """Node counts with the automorphism visitors on and off, per (traversal, selector, invariants).

    Runs without pruning stop at ``cap`` nodes; the cap then stands in for the
    true count, which is a lower bound and so keeps ``on <= off`` sound."""
    rows = []
    for trav, sel, inv in product(TRAVERSAL_NAMES, SELECTOR_NAMES, invariant_sets):
        on_all, off_all, on_sym, off_sym, changes, capped = [], [], [], [], [], 0
        for name, g in graphs:
            lim = limit_nodes * node_cost_bytes(g.n) if trav == "bfs-exp-m" else None
            cfg = RunConfig(traversal=trav, selector=sel, invariants=inv, memory_limit=lim)
            on = measure(g, cfg)
            off = measure(g, aut_off(cfg), cap)
            capped += off.capped
            on_all.append(on.nodes)
            off_all.append(off.nodes)
            if name in symmetric:
                on_sym.append(on.nodes)
                off_sym.append(off.nodes)
            if not off.capped and on.form != off.form:
                changes.append(name)
        rows.append(MonotonicityRow(
            f"{trav}/{sel}/{'+'.join(inv) or 'none'}", "aut", statistics.median(on_all),
            statistics.median(off_all), statistics.median(on_sym) if on_sym else None,
            statistics.median(off_sym) if off_sym else None, changes, capped))
    return rows


def invariant_rows(graphs, limit_nodes: float = 8) -> list[MonotonicityRow]:
    """Node counts with all invariants against none, automorphism visitors on."""
    rows = []
    for trav, sel in product(TRAVERSAL_NAMES, SELECTOR_NAMES):
        with_inv, without = [], []
        for _, g in graphs:
            lim = limit_nodes * node_cost_bytes(g.n) if trav == "bfs-exp-m" else None
            with_inv.append(measure(g, RunConfig(traversal=trav, selector=sel,
                                                 invariants=INVARIANT_ORDER, memory_limit=lim)).nodes)
            without.append(measure(g, RunConfig(traversal=trav, selector=sel, memory_limit=lim)).nodes)
        rows.append(MonotonicityRow(f"{trav}/{sel}", "invariants", statistics.median(with_inv),
                                    statistics.median(without)))
    return rows
