"""Tree traversal visitors: depth-first, breadth-first with experimental
paths, and the memory-bounded hybrid of the two."""

from __future__ import annotations

import math
from collections import deque

from .core import CanonState, ResourceError, TreeNode, Visitor


def _child(state: CanonState, node: TreeNode, w: int) -> TreeNode | None:
    c = node.get_child(w)
    return c if c is not None else state.make_child(node, w)


def dfs_children(state: CanonState, node: TreeNode, first: int = 0) -> None:
    """Depth-first search over the children of ``node`` from target cell index ``first``.

    Same visiting order as the recursive formulation; the caller has
    already handled ``node`` itself.
    """
    stack = [[node, first]]
    node = None
    while stack:
        frame = stack[-1]
        t, i = frame
        cell = t.target_cell
        if i >= len(cell):
            stack.pop()
            continue
        frame[1] = i + 1
        state.before_descend(t)
        if t.is_pruned:
            stack.pop()
            continue
        w = cell[i]
        if t.child_pruned[w]:
            continue
        c = _child(state, t, w)
        t = frame = None
        if c is None:
            continue
        state.before_descend(c)
        if c.is_pruned:
            continue
        if c.pi.is_discrete():
            state.add_leaf(c)
            continue
        stack.append([c, 0])
        c = None


def visit_dfs(state: CanonState, node: TreeNode) -> None:
    state.before_descend(node)
    if node.is_pruned:
        return
    if node.pi.is_discrete():
        state.add_leaf(node)
        return
    dfs_children(state, node)


class DFSTraversal(Visitor):
    name = "dfs"
    can_traverse = True

    def traverse_tree(self, root: TreeNode) -> None:
        visit_dfs(self.state, root)


class BFSExpTraversal(Visitor):
    """Level-by-level expansion; each level first runs experimental paths.

    Nodes created by an experimental path are held until the breadth-first
    sweep reaches their depth, so their subtrees are still expanded.
    """

    name = "bfs-exp"
    can_traverse = True

    def __init__(self, paths_per_level: int = 1) -> None:
        self.paths_per_level = paths_per_level

    def start(self, state: CanonState) -> None:
        super().start(state)
        self.held: list[TreeNode] = []
        self.experimental_paths = 0
        self.max_level_size = 0

    def finish(self) -> None:
        self.held = []

    def stats(self) -> dict:
        return {"experimental_paths": self.experimental_paths, "max_level_size": self.max_level_size}

    def may_create(self) -> bool:
        return True

    def traverse_tree(self, root: TreeNode) -> None:
        level: deque[TreeNode] = deque([root])
        root = None
        depth = 0
        while level:
            self.max_level_size = max(self.max_level_size, len(level))
            for _ in range(self.paths_per_level):
                self.experimental_path(level)
            nxt: deque[TreeNode] = deque()
            while level:
                p = level.popleft()
                self.expand(p, nxt)
                p = None
            level = nxt
            depth += 1
            self.held = [h for h in self.held if h.depth > depth]
        self.held = []

    def experimental_path(self, level) -> None:
        state = self.state
        node = next((t for t in level if not t.is_pruned and not t.pi.is_discrete()
                     and all(t.get_child(w) is None for w in t.target_cell)), None)
        if node is None:
            return
        self.experimental_paths += 1
        while True:
            state.before_descend(node)
            if node.is_pruned:
                return
            if node.pi.is_discrete():
                state.add_leaf(node)
                return
            nxt = None
            for w in node.target_cell:
                if node.is_pruned:
                    return
                if node.child_pruned[w]:
                    continue
                nxt = node.get_child(w)
                if nxt is None:
                    if not self.may_create():
                        return
                    nxt = state.make_child(node, w)
                    self.created(nxt)
                if nxt is not None:
                    break
            if nxt is None:
                return
            if not nxt.pi.is_discrete():
                self.held.append(nxt)
            node = nxt

    def created(self, node: TreeNode | None) -> None:
        pass

    def expand(self, p: TreeNode, nxt: deque) -> None:
        state = self.state
        state.before_descend(p)
        if p.is_pruned:
            return
        if p.pi.is_discrete():
            state.add_leaf(p)
            return
        cell = p.target_cell
        for i, w in enumerate(cell):
            state.before_descend(p)
            if p.is_pruned:
                return
            if p.child_pruned[w]:
                continue
            c = p.get_child(w)
            if c is None:
                if not self.may_create():
                    self.overflow(p, i)
                    return
                c = state.make_child(p, w)
                self.created(c)
            if c is not None:
                nxt.append(c)

    def overflow(self, p: TreeNode, first: int) -> None:
        raise AssertionError("unbounded traversal cannot overflow")


def node_cost_bytes(n: int, int_bytes: int = 4, arrays: int = 4) -> int:
    return arrays * int_bytes * n


def node_budget(limit_bytes: float, n: int, int_bytes: int = 4, arrays: int = 4) -> float:
    """Number of tree nodes allowed in breadth-first mode."""
    if math.isinf(limit_bytes):
        return math.inf
    return int(limit_bytes // node_cost_bytes(n, int_bytes, arrays))


class BFSExpMTraversal(BFSExpTraversal):
    """Breadth-first with experimental paths while the allocated node count
    stays within the memory budget; children that would exceed it are
    searched depth-first instead."""

    name = "bfs-exp-m"

    def __init__(self, limit_bytes: float, int_bytes: int = 4, paths_per_level: int = 1) -> None:
        super().__init__(paths_per_level)
        self.limit_bytes = limit_bytes
        self.int_bytes = int_bytes

    def start(self, state: CanonState) -> None:
        super().start(state)
        self.budget = node_budget(self.limit_bytes, state.g.n, self.int_bytes)
        if self.budget < 2:
            raise ResourceError(
                f"memory limit {self.limit_bytes} bytes holds {self.budget} nodes of "
                f"{node_cost_bytes(state.g.n, self.int_bytes)} bytes; need at least 2")
        self.dfs_switches = 0
        self.bfs_max_allocated = 0

    def stats(self) -> dict:
        out = super().stats()
        out.update(budget=self.budget, dfs_switches=self.dfs_switches,
                   bfs_max_allocated=self.bfs_max_allocated)
        return out

    def may_create(self) -> bool:
        return self.state.nodes_allocated < self.budget

    def created(self, node: TreeNode | None) -> None:
        allocated = self.state.nodes_allocated
        # hard bound on breadth-first allocation
        assert allocated <= self.budget, f"{allocated} nodes allocated, budget {self.budget}"
        self.bfs_max_allocated = max(self.bfs_max_allocated, allocated)

    def overflow(self, p: TreeNode, first: int) -> None:
        self.dfs_switches += 1
        dfs_children(self.state, p, first)


TRAVERSALS = {
    "dfs": DFSTraversal,
    "bfs-exp": BFSExpTraversal,
    "bfs-exp-m": BFSExpMTraversal,
}
