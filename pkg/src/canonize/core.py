"""Tree nodes, the compound visitor and the canonicalize entry point.

Node lifetime follows CPython reference counting: a node owns its parent,
parents only hold weak references to children, and ``TreeNode.__del__``
runs the destroy protocol (visitor callback, parent's child slot marked
pruned).  Visitors that want a node to survive must keep a reference.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Iterable, Sequence

from .graph import AttributedGraph, GraphError, permuted_representation
from .partition import OrderedPartition, individualize, initial_partition
from .permgroup import Permutation


class RefineStatus(IntEnum):
    NO_CHANGE = 0
    CHANGED = 1
    ABORTED = 2


class SuiteError(ValueError):
    pass


class ResourceError(RuntimeError):
    """A traversal cannot run within its memory limit."""


class Visitor:
    """Base class with no-op callbacks.

    Subclasses override what they need; the compound visitor only dispatches
    to overridden methods.  ``start`` is called once per canonization run and
    must reset any per-tree state.
    """

    name = "visitor"
    can_traverse = False
    can_select_target_cell = False

    index: int = -1
    state: "CanonState"

    def start(self, state: "CanonState") -> None:
        self.state = state

    def finish(self) -> None:
        pass

    def stats(self) -> dict[str, Any]:
        return {}

    def make_node_data(self) -> Any:
        return None

    # tree traversal / target cell
    def traverse_tree(self, root: "TreeNode") -> None:
        raise NotImplementedError

    def select_target_cell(self, node: "TreeNode") -> int:
        raise NotImplementedError

    # node lifecycle
    def tree_node_create_begin(self, node: "TreeNode") -> None:
        pass

    def tree_node_create_end(self, node: "TreeNode") -> None:
        pass

    def tree_node_destroy(self, node: "TreeNode") -> None:
        pass

    # refinement
    def refine(self, node: "TreeNode") -> RefineStatus:
        return RefineStatus.NO_CHANGE

    def refine_abort(self, node: "TreeNode") -> None:
        pass

    def new_cell(self, node: "TreeNode", pos: int) -> None:
        pass

    def splitter_done(self, node: "TreeNode") -> None:
        pass

    # search
    def before_descend(self, node: "TreeNode") -> None:
        pass

    def isomorphic_leaf(self, leaf: "TreeNode") -> None:
        pass

    def implicit_automorphism(self, perm: Permutation, node: "TreeNode | None", tag: str) -> None:
        pass

    def leaf_compared(self, leaf: "TreeNode", outcome: str) -> None:
        pass

    def tree_pruned(self, node: "TreeNode") -> None:
        pass


_EVENTS = (
    "tree_node_create_begin",
    "tree_node_create_end",
    "tree_node_destroy",
    "refine",
    "refine_abort",
    "new_cell",
    "splitter_done",
    "before_descend",
    "isomorphic_leaf",
    "implicit_automorphism",
    "leaf_compared",
    "tree_pruned",
)


def _overrides(v: Visitor, name: str) -> bool:
    return getattr(type(v), name) is not getattr(Visitor, name)


class VisitorSuite:
    """Compound visitor: owns the visitors and fans events out in registration order."""

    def __init__(self, visitors: Iterable[Visitor]) -> None:
        self.visitors: list[Visitor] = list(visitors)
        trav = [i for i, v in enumerate(self.visitors) if v.can_traverse]
        sel = [i for i, v in enumerate(self.visitors) if v.can_select_target_cell]
        if len(trav) != 1:
            raise SuiteError(f"exactly one traversal visitor required, got {len(trav)}")
        if len(sel) != 1:
            raise SuiteError(f"exactly one target cell selector required, got {len(sel)}")
        self.traversal = self.visitors[trav[0]]
        self.selector = self.visitors[sel[0]]
        for i, v in enumerate(self.visitors):
            v.index = i
        self.handlers: dict[str, list] = {
            ev: [getattr(v, ev) for v in self.visitors if _overrides(v, ev)] for ev in _EVENTS
        }
        self._data_factories = [(i, v.make_node_data) for i, v in enumerate(self.visitors)
                                if _overrides(v, "make_node_data")]

    def __iter__(self):
        return iter(self.visitors)

    def find(self, cls: type) -> Any:
        for v in self.visitors:
            if isinstance(v, cls):
                return v
        return None

    def new_node_data(self) -> list:
        data = [None] * len(self.visitors)
        for i, f in self._data_factories:
            data[i] = f()
        return data

    def refine(self, node: "TreeNode") -> RefineStatus:
        status = RefineStatus.NO_CHANGE
        for h in self.handlers["refine"]:
            s = h(node)
            if node.is_pruned or s == RefineStatus.ABORTED:
                for a in self.handlers["refine_abort"]:
                    a(node)
                return RefineStatus.ABORTED
            if s == RefineStatus.CHANGED:
                status = RefineStatus.CHANGED
        return status

    def dispatch(self, event: str, *args) -> None:
        for h in self.handlers[event]:
            h(*args)


class TreeNode:
    __slots__ = (
        "state", "parent", "pi", "individualized_vertex", "depth", "id",
        "is_pruned", "target_start", "target_cell", "child", "child_pruned",
        "data", "refine_seed", "leaf_added", "__weakref__",
    )

    def __init__(self, state: "CanonState", parent: "TreeNode | None", pi: OrderedPartition,
                 vertex: int | None, seed: Sequence[int]) -> None:
        self.state = state
        self.parent = parent
        self.pi = pi
        self.individualized_vertex = vertex
        self.depth = 0 if parent is None else parent.depth + 1
        self.id = state.nodes_created
        self.is_pruned = False
        self.target_start: int | None = None
        self.target_cell: tuple[int, ...] = ()
        self.child: dict[int, weakref.ref | None] = {}
        self.child_pruned: dict[int, bool] = {}
        self.data: list = state.suite.new_node_data()
        self.refine_seed = seed
        self.leaf_added = False

    def is_leaf(self) -> bool:
        return self.pi.is_discrete()

    def sequence(self) -> list[int]:
        """Vertices individualized from the root down to this node."""
        seq = []
        node = self
        while node.parent is not None:
            seq.append(node.individualized_vertex)
            node = node.parent
        seq.reverse()
        return seq

    def get_child(self, w: int) -> "TreeNode | None":
        ref = self.child.get(w)
        return ref() if ref is not None else None

    def ancestors(self):
        node = self
        while node is not None:
            yield node
            node = node.parent

    def __del__(self) -> None:
        state = self.state
        try:
            state._destroy(self)
        except Exception as exc:  # exceptions cannot propagate out of __del__
            state.errors.append(exc)

    def __repr__(self) -> str:
        return f"TreeNode(id={self.id}, seq={[v + 1 for v in self.sequence()]}, pi={self.pi})"


@dataclass
class RunReport:
    permutation: Permutation
    nodes_created: int
    max_allocated: int
    leaves: int
    automorphisms: list[Permutation] = field(default_factory=list)
    automorphism_tags: list[str] = field(default_factory=list)
    stats: dict[str, dict[str, Any]] = field(default_factory=dict)
    allocated_after: int = 0


class CanonState:
    """Everything shared by one canonization run."""

    def __init__(self, g: AttributedGraph, suite: VisitorSuite, check_automorphisms: bool = False) -> None:
        self.g = g
        self.suite = suite
        self.check_automorphisms = check_automorphisms
        self.canon_leaf: TreeNode | None = None
        self._canon_key: tuple | None = None
        self.automorphisms: list[Permutation] = []
        self.automorphism_tags: list[str] = []
        self.nodes_created = 0
        self.nodes_allocated = 0
        self.max_allocated = 0
        self.leaves = 0
        self.errors: list[Exception] = []
        self.coordinator = None
        self.running = False

    # node lifecycle -----------------------------------------------------
    def make_tree_node(self, parent: TreeNode | None, pi: OrderedPartition,
                       vertex: int | None = None, seed: Sequence[int] = ()) -> TreeNode | None:
        suite = self.suite
        node = TreeNode(self, parent, pi, vertex, seed)
        self.nodes_created += 1
        self.nodes_allocated += 1
        if self.nodes_allocated > self.max_allocated:
            self.max_allocated = self.nodes_allocated
        suite.dispatch("tree_node_create_begin", node)
        if not node.is_pruned:
            suite.refine(node)
            if not node.is_pruned and not pi.is_discrete():
                start = suite.selector.select_target_cell(node)
                cell = tuple(pi.elems[start:pi.end[start]])
                assert len(cell) > 1, "target cell must be a non-singleton cell"
                node.target_start = start
                node.target_cell = cell
                node.child = dict.fromkeys(cell)
                node.child_pruned = dict.fromkeys(cell, False)
        suite.dispatch("tree_node_create_end", node)
        return None if node.is_pruned else node

    def make_child(self, node: TreeNode, w: int) -> TreeNode | None:
        assert w in node.child_pruned, "vertex not in target cell"
        assert not node.child_pruned[w], "child slot already pruned"
        assert node.get_child(w) is None, "child already exists"
        pi = individualize(node.pi, w)
        s = pi.pos[w]
        child = self.make_tree_node(node, pi, w, (s, s + 1))
        if child is None:
            node.child_pruned[w] = True
        else:
            node.child[w] = weakref.ref(child)
        return child

    def _destroy(self, node: TreeNode) -> None:
        self.nodes_allocated -= 1
        self.suite.dispatch("tree_node_destroy", node)
        parent = node.parent
        if parent is not None:
            w = node.individualized_vertex
            if w in parent.child:
                parent.child[w] = None
                parent.child_pruned[w] = True

    # leaves ---------------------------------------------------------------
    def leaf_key(self, leaf: TreeNode) -> tuple:
        # G permuted by the inverse leaf permutation: vertex -> its position
        return permuted_representation(self.g, leaf.pi.pos)

    def set_canon_leaf(self, leaf: TreeNode | None, key: tuple | None = None) -> None:
        self.canon_leaf = leaf
        self._canon_key = key

    def add_leaf(self, leaf: TreeNode) -> None:
        if leaf.leaf_added:
            return
        leaf.leaf_added = True
        self.leaves += 1
        key = self.leaf_key(leaf)
        if self.canon_leaf is None:
            self.set_canon_leaf(leaf, key)
            self.suite.dispatch("leaf_compared", leaf, "first")
            return
        best = self._canon_key
        if best is None:
            best = self._canon_key = self.leaf_key(self.canon_leaf)
        if key < best:
            self.set_canon_leaf(leaf, key)
            self.suite.dispatch("leaf_compared", leaf, "better")
        elif key == best:
            self.suite.dispatch("leaf_compared", leaf, "equal")
            gamma = Permutation([leaf.pi.elems[p] for p in self.canon_leaf.pi.pos])
            self._record_automorphism(gamma, "leaf")
            self.suite.dispatch("isomorphic_leaf", leaf)
        else:
            self.suite.dispatch("leaf_compared", leaf, "worse")

    # automorphisms ----------------------------------------------------------
    def _record_automorphism(self, gamma: Permutation, tag: str) -> None:
        if self.check_automorphisms:
            from .graph import apply_permutation
            if apply_permutation(self.g, gamma).representation() != self.g.representation():
                raise AssertionError(f"reported non-automorphism {gamma.to_cycles()} ({tag})")
        self.automorphisms.append(gamma)
        self.automorphism_tags.append(tag)

    def report_implicit_automorphism(self, gamma: Permutation, node: TreeNode | None, tag: str) -> None:
        if gamma.is_identity():
            return
        self._record_automorphism(gamma, tag)
        self.suite.dispatch("implicit_automorphism", gamma, node, tag)

    # pruning ------------------------------------------------------------------
    def prune_tree(self, node: TreeNode) -> None:
        """Flag a subtree as pruned; nothing is deallocated here."""
        stack = [node]
        while stack:
            t = stack.pop()
            t.is_pruned = True
            self.suite.dispatch("tree_pruned", t)
            if t.pi.is_discrete():
                if t is self.canon_leaf:
                    self.set_canon_leaf(None)
                continue
            for w in t.target_cell:
                t.child_pruned[w] = True
                c = t.get_child(w)
                if c is not None and not c.is_pruned:
                    stack.append(c)

    def before_descend(self, node: TreeNode) -> None:
        self.suite.dispatch("before_descend", node)

    # invariants ---------------------------------------------------------------
    def emit_invariant(self, node: TreeNode, visitor: Visitor, value: Any) -> bool:
        """Hand an invariant value to the coordinator; False if the node got pruned."""
        if self.coordinator is None:
            return True
        return self.coordinator.emit(node, visitor.index, value)


def canonicalize(
    g: AttributedGraph,
    suite: VisitorSuite | Iterable[Visitor],
    check_automorphisms: bool = False,
) -> tuple[Permutation, RunReport]:
    """Canonical labelling of ``g``: the returned permutation maps input vertices
    to canonical indices, so ``apply_permutation(g, perm)`` is the canonical form."""
    if g.n == 0:
        raise GraphError("cannot canonicalize the empty graph")
    if not isinstance(suite, VisitorSuite):
        suite = VisitorSuite(suite)
    state = CanonState(g, suite, check_automorphisms)
    for v in suite:
        if getattr(v, "is_invariant_coordinator", False):
            state.coordinator = v
    for v in suite:
        v.start(state)
    state.running = True
    pi0 = initial_partition(g)
    root = state.make_tree_node(None, pi0, None, pi0.cell_starts())
    if root is None:
        raise RuntimeError("root node was pruned during creation")
    suite.traversal.traverse_tree(root)
    root = None
    leaf = state.canon_leaf
    if leaf is None:
        raise RuntimeError("search finished without a canonical leaf")
    perm = Permutation(leaf.pi.pos)
    leaf = None
    state.set_canon_leaf(None)
    state.running = False
    for v in suite:
        v.finish()
    if state.errors:
        raise state.errors[0]
    report = RunReport(
        permutation=perm,
        nodes_created=state.nodes_created,
        max_allocated=state.max_allocated,
        leaves=state.leaves,
        automorphisms=list(state.automorphisms),
        automorphism_tags=list(state.automorphism_tags),
        stats={v.name: v.stats() for v in suite if v.stats()},
        allocated_after=state.nodes_allocated,
    )
    return perm, report
