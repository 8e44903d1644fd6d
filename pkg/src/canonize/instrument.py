"""Stats and debug visitors: counters, DOT rendering of the search tree,
and the node allocation trace."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .core import TreeNode, Visitor
from .permgroup import Permutation

DOT_COLOURS = {
    "created-pruned": "red",
    "tree-pruned": "purple",
    "worse-leaf": "brown",
    "former-best": "palegreen",
    "canonical": "darkgreen",
    "automorphism": "gray",
    "skipped": "lightgray",
}

DOT_LEGEND = [
    "red: pruned during creation",
    "purple: pruned through prune_tree",
    "brown: leaf worse than the best leaf at the time",
    "palegreen: former best leaf, later discarded",
    "darkgreen: canonical leaf",
    "gray: automorphism (explicit: leaf -> aut -> leaf, implicit: node -> aut)",
    "lightgray dashed: child never created because its slot was pruned",
]


@dataclass
class _NodeRecord:
    id: int
    parent: int | None
    vertex: int | None
    label: str
    leaf: bool
    status: str = ""
    skipped: list[int] = field(default_factory=list)


class StatsVisitor(Visitor):
    """Counts events and records the search tree for DOT output."""

    name = "stats"

    def __init__(self, record_tree: bool = True) -> None:
        self.record_tree = record_tree

    def start(self, state) -> None:
        super().start(state)
        self.counts = {"created": 0, "pruned_in_creation": 0, "tree_pruned": 0, "leaves": 0,
                       "explicit_aut": 0, "implicit_aut": 0, "max_depth": 0}
        self.nodes: dict[int, _NodeRecord] = {}
        self.materialized: set[tuple[int, int]] = set()
        self.auts: list[tuple[str, Permutation, list[int]]] = []
        self.best: list[int] = []

    def stats(self) -> dict[str, Any]:
        return dict(self.counts)

    def tree_node_create_end(self, node: TreeNode) -> None:
        c = self.counts
        c["created"] += 1
        c["max_depth"] = max(c["max_depth"], node.depth)
        if node.is_pruned:
            c["pruned_in_creation"] += 1
        if not self.record_tree:
            return
        parent = node.parent
        rec = _NodeRecord(node.id, None if parent is None else parent.id, node.individualized_vertex,
                          str(node.pi), node.pi.is_discrete(), "created-pruned" if node.is_pruned else "")
        self.nodes[node.id] = rec
        if parent is not None:
            self.materialized.add((parent.id, node.individualized_vertex))

    def tree_pruned(self, node: TreeNode) -> None:
        self.counts["tree_pruned"] += 1
        rec = self.nodes.get(node.id)
        if rec is not None and not rec.status:
            rec.status = "tree-pruned"

    def tree_node_destroy(self, node: TreeNode) -> None:
        if not self.record_tree or node.id not in self.nodes:
            return
        rec = self.nodes[node.id]
        rec.skipped = [w for w in node.target_cell
                       if node.child_pruned.get(w) and (node.id, w) not in self.materialized]

    def leaf_compared(self, leaf: TreeNode, outcome: str) -> None:
        self.counts["leaves"] += 1
        rec = self.nodes.get(leaf.id)
        if outcome in ("first", "better"):
            self.best.append(leaf.id)
        elif outcome == "worse" and rec is not None:
            rec.status = "worse-leaf"

    def isomorphic_leaf(self, leaf: TreeNode) -> None:
        self.counts["explicit_aut"] += 1
        canon = self.state.canon_leaf
        gamma = Permutation([leaf.pi.elems[p] for p in canon.pi.pos])
        self.auts.append(("explicit", gamma, [canon.id, leaf.id]))

    def implicit_automorphism(self, perm: Permutation, node: TreeNode | None, tag: str) -> None:
        self.counts["implicit_aut"] += 1
        self.auts.append((tag, perm, [] if node is None else [node.id]))

    def to_dot(self) -> str:
        final = self.best[-1] if self.best else None
        for i in self.best:
            rec = self.nodes.get(i)
            if rec is not None:
                rec.status = "canonical" if i == final else "former-best"
        out = ["digraph searchtree {"]
        out.extend(f"  // {line}" for line in DOT_LEGEND)
        out.append("  node [shape=box, style=filled, fillcolor=white];")
        for rec in self.nodes.values():
            colour = DOT_COLOURS.get(rec.status, "white")
            label = _quote(f"{rec.id}: {rec.label}")
            font = ', fontcolor=white' if rec.status in ("tree-pruned", "canonical") else ""
            out.append(f"  n{rec.id} [label={label}, fillcolor={colour}{font}];")
            if rec.parent is not None:
                out.append(f"  n{rec.parent} -> n{rec.id} [label={_quote(str(rec.vertex + 1))}];")
            for w in rec.skipped:
                out.append(f"  s{rec.id}_{w} [label={_quote('pruned')}, style=\"filled,dashed\", "
                           f"fillcolor={DOT_COLOURS['skipped']}];")
                out.append(f"  n{rec.id} -> s{rec.id}_{w} [label={_quote(str(w + 1))}, style=dashed];")
        for k, (tag, gamma, ends) in enumerate(self.auts):
            label = _quote(f"aut = {gamma.to_cycles()}" + ("" if tag == "explicit" else f" [{tag}]"))
            out.append(f"  a{k} [label={label}, shape=ellipse, fillcolor={DOT_COLOURS['automorphism']}];")
            if ends:
                out.append(f"  n{ends[0]} -> a{k} [style=dotted];")
            if len(ends) > 1:
                out.append(f"  a{k} -> n{ends[1]} [style=dotted];")
        out.append("}")
        return "\n".join(out) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class AllocTraceVisitor(Visitor):
    """One ``(created, allocated)`` row per node creation."""

    name = "alloc-trace"

    def start(self, state) -> None:
        super().start(state)
        self.rows: list[tuple[int, int]] = []
        self.final_allocated = 0

    def tree_node_create_begin(self, node: TreeNode) -> None:
        self.rows.append((self.state.nodes_created, self.state.nodes_allocated))

    def finish(self) -> None:
        self.final_allocated = self.state.nodes_allocated

    def stats(self) -> dict[str, Any]:
        peak = max((a for _, a in self.rows), default=0)
        return {"rows": len(self.rows), "peak_allocated": peak}

    def to_text(self) -> str:
        lines = ["# created allocated"]
        lines.extend(f"{c} {a}" for c, a in self.rows)
        return "\n".join(lines) + "\n"
