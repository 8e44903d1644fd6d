"""Node invariants: the coordinator that prunes on path traces, and the
cell-splitting (T), quotient graph (Q) and partial leaf (PL) visitors.

A node's trace is the list of ``(visitor index, value)`` pairs emitted while
it is created; paths are compared depth by depth, each trace
lexicographically with a proper prefix counting as smaller.  Values are
compared structurally, never hashed.
"""

from __future__ import annotations

import weakref
from typing import Any

from .core import TreeNode, Visitor


class _CoordData:
    __slots__ = ("leading", "cursor", "trace")

    def __init__(self) -> None:
        self.leading = False
        self.cursor = 0
        self.trace: list = []


class InvariantCoordinator(Visitor):
    """Keeps the best known path trace and prunes nodes that fall behind it.

    ``best[d]`` is the trace of the best path at depth ``d``; ``closed`` is
    set once that path ends in a leaf.  Every live node matches ``best`` on
    its whole path, and ``registry[d]`` holds the created nodes at depth ``d``
    so they can be pruned when a better trace shows up there.
    """

    name = "invariants"
    is_invariant_coordinator = True

    def start(self, state) -> None:
        super().start(state)
        self.best: list[list] = []
        self.closed = False
        self.registry: list[list[weakref.ref]] = []
        self.improvements = 0
        self.pruned_worse = 0

    def finish(self) -> None:
        self.registry = []

    def make_node_data(self) -> _CoordData:
        return _CoordData()

    def stats(self) -> dict[str, Any]:
        return {"improvements": self.improvements, "pruned_worse": self.pruned_worse,
                "best_depth": len(self.best)}

    # helpers ----------------------------------------------------------------
    def _improve(self, node: TreeNode, d: int, closed: bool = False) -> None:
        """``node``'s trace beats everything registered at depth ``d``."""
        self.improvements += 1
        data = node.data[self.index]
        del self.best[d:]
        self.best.append(list(data.trace))
        self.closed = closed
        data.leading = True
        state = self.state
        victims = []
        for level in self.registry[d:]:
            victims.extend(level)
        del self.registry[d:]
        for ref in victims:
            t = ref()
            if t is not None and t is not node and not t.is_pruned:
                state.prune_tree(t)
        state.set_canon_leaf(None)

    def _worse(self, node: TreeNode) -> None:
        self.pruned_worse += 1
        node.is_pruned = True

    def emit(self, node: TreeNode, visitor_index: int, value: Any) -> bool:
        if node.is_pruned:
            return False
        data = node.data[self.index]
        item = (visitor_index, value)
        data.trace.append(item)
        d = node.depth
        if data.leading:
            self.best[d].append(item)
            return True
        if d >= len(self.best):
            # first node to reach this depth on the best path
            self._improve(node, d)
            return True
        ref = self.best[d]
        j = data.cursor
        if j >= len(ref) or item > ref[j]:
            self._worse(node)
            return False
        if item < ref[j]:
            self._improve(node, d)
            return True
        data.cursor = j + 1
        return True

    # events -------------------------------------------------------------------
    def tree_node_create_end(self, node: TreeNode) -> None:
        if node.is_pruned:
            return
        data = node.data[self.index]
        d = node.depth
        leaf = node.pi.is_discrete()
        if not data.leading:
            if d >= len(self.best):
                if d > 0 and self.closed:
                    self._worse(node)
                    return
                self._improve(node, d, closed=leaf)
            elif data.cursor < len(self.best[d]):
                # proper prefix of the best trace
                self._improve(node, d, closed=leaf)
            elif leaf and len(self.best) > d + 1:
                self._improve(node, d, closed=True)
            elif not leaf and self.closed and len(self.best) == d + 1:
                self._worse(node)
                return
        elif leaf:
            self.closed = True
        while len(self.registry) <= d:
            self.registry.append([])
        self.registry[d].append(weakref.ref(node))
        # traces are only needed while the node is being created
        data.trace = []


class _Emitter(Visitor):
    def emit(self, node: TreeNode, value: Any) -> bool:
        return self.state.emit_invariant(node, self, value)


class CellSplitTrace(_Emitter):
    """T: positions of the cells created in each splitter round."""

    name = "inv-t"

    def start(self, state) -> None:
        super().start(state)
        self.buf: list[int] = []

    def tree_node_create_begin(self, node: TreeNode) -> None:
        self.buf = []

    def new_cell(self, node: TreeNode, pos: int) -> None:
        self.buf.append(pos)

    def splitter_done(self, node: TreeNode) -> None:
        if self.buf:
            value, self.buf = tuple(self.buf), []
            self.emit(node, value)

    def tree_node_create_end(self, node: TreeNode) -> None:
        if self.buf and not node.is_pruned:
            self.emit(node, tuple(self.buf))
        self.buf = []


def quotient_summary(g, pi) -> tuple:
    """``(i, j, sorted degrees of cell i into cell j)`` for cells ``i <= j`` joined by an edge."""
    idx = pi.cell_index()
    uniform = g.uniform_edge_attr
    per_pair: dict[tuple[int, int], list] = {}
    for v in range(g.n):
        i = idx[v]
        counts: dict[int, Any] = {}
        for x, a in g.adj[v]:
            j = idx[x]
            if j < i:
                continue
            if uniform:
                counts[j] = counts.get(j, 0) + 1
            else:
                m = counts.setdefault(j, {})
                m[a] = m.get(a, 0) + 1
        for j, c in counts.items():
            per_pair.setdefault((i, j), []).append(c if uniform else tuple(sorted(c.items())))
    return tuple((i, j, tuple(sorted(ds))) for (i, j), ds in sorted(per_pair.items()))


class QuotientTrace(_Emitter):
    """Q: quotient graph summary of the refined partition."""

    name = "inv-q"

    def tree_node_create_end(self, node: TreeNode) -> None:
        if not node.is_pruned:
            self.emit(node, quotient_summary(self.state.g, node.pi))


class PartialLeafTrace(_Emitter):
    """PL: for each new singleton, the positions of adjacent singletons."""

    name = "inv-pl"

    def start(self, state) -> None:
        super().start(state)
        self.cand: list[int] = []
        self.done: set[int] = set()

    def tree_node_create_begin(self, node: TreeNode) -> None:
        self.cand = []
        self.done = set()
        if node.individualized_vertex is not None:
            # the individualized vertex and what is left of its old cell
            p = node.pi.pos[node.individualized_vertex]
            self.cand.extend((p, p + 1))

    def new_cell(self, node: TreeNode, pos: int) -> None:
        self.cand.append(pos)
        self.cand.append(node.pi.cell[node.pi.elems[pos - 1]])

    def _flush(self, node: TreeNode) -> None:
        pi = node.pi
        end, elems, pos, cell = pi.end, pi.elems, pi.pos, pi.cell
        adj = self.state.g.adj
        fresh = sorted({p for p in self.cand if p not in self.done and end[cell[elems[p]]] == p + 1
                        and cell[elems[p]] == p})
        self.cand = []
        for p in fresh:
            self.done.add(p)
            v = elems[p]
            nbrs = tuple(sorted((pos[x], a) for x, a in adj[v] if end[cell[x]] - cell[x] == 1))
            if not self.emit(node, (p, nbrs)):
                return

    def splitter_done(self, node: TreeNode) -> None:
        if self.cand:
            self._flush(node)

    def tree_node_create_end(self, node: TreeNode) -> None:
        if self.cand and not node.is_pruned:
            self._flush(node)
        self.cand = []


INVARIANTS = {
    "t": CellSplitTrace,
    "q": QuotientTrace,
    "pl": PartialLeafTrace,
}
