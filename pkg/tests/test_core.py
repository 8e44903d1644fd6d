from __future__ import annotations

import gc

import pytest

from canonize.config import RunConfig, build_suite, canonical_form
from canonize.core import CanonState, RefineStatus, SuiteError, Visitor, VisitorSuite, canonicalize
from canonize.graph import GraphError, apply_permutation, build_graph
from canonize.oracle import brute_canon
from canonize.partition import OrderedPartition
from canonize.refine import WL1Refiner
from canonize.targetcell import FirstSelector
from canonize.traversal import DFSTraversal


class Recorder(Visitor):
    name = "recorder"

    def start(self, state):
        super().start(state)
        self.events = []

    def tree_node_create_begin(self, node):
        self.events.append(("begin", node.id))

    def refine(self, node):
        self.events.append(("refine", node.id))
        return RefineStatus.NO_CHANGE

    def tree_node_create_end(self, node):
        self.events.append(("end", node.id, node.target_cell != ()))

    def tree_node_destroy(self, node):
        self.events.append(("destroy", node.id))

    def before_descend(self, node):
        self.events.append(("descend", node.id))


def dfs_suite(*extra):
    return [DFSTraversal(), FirstSelector(), WL1Refiner(), *extra]


def test_suite_validation():
    with pytest.raises(SuiteError):
        VisitorSuite([FirstSelector(), WL1Refiner()])
    with pytest.raises(SuiteError):
        VisitorSuite([DFSTraversal(), DFSTraversal(), FirstSelector()])
    with pytest.raises(SuiteError):
        VisitorSuite([DFSTraversal()])


def test_empty_graph_rejected():
    with pytest.raises(GraphError):
        canonicalize(build_graph(0, []), dfs_suite())


def test_single_vertex_identity():
    perm, report = canonicalize(build_graph(1, []), dfs_suite())
    assert perm.is_identity() and report.nodes_created == 1


def test_iso4_forms_equal(iso4):
    g, g1, g2 = iso4
    forms = [canonical_form(h, RunConfig())[0] for h in (g, g1, g2)]
    assert forms[0] == forms[1] == forms[2]


def test_creation_order_is_begin_refine_select_end(golden10):
    rec = Recorder()
    canonicalize(golden10, dfs_suite(rec))
    per_node = {}
    for ev in rec.events:
        per_node.setdefault(ev[1], []).append(ev[0])
    for nid, evs in per_node.items():
        core = [e for e in evs if e in ("begin", "refine", "end")]
        assert core == ["begin", "refine", "end"], (nid, evs)


def test_before_descend_precedes_child_creation(golden10):
    rec = Recorder()
    canonicalize(golden10, dfs_suite(rec))
    last_descend = None
    for ev in rec.events:
        if ev[0] == "descend":
            last_descend = ev[1]
        if ev[0] == "begin" and ev[1] != 0:
            assert last_descend is not None


def test_allocation_balances(golden10):
    for trav in ("dfs", "bfs-exp", "bfs-exp-m"):
        cfg = RunConfig(traversal=trav, memory_limit=4 * 4 * 10 * 3 if trav == "bfs-exp-m" else None)
        perm, report = canonicalize(golden10, build_suite(cfg))
        gc.collect()
        assert report.allocated_after == 0, trav


def test_root_and_child_partitions(golden10):
    rec = []

    class Snap(Visitor):
        name = "snap"

        def tree_node_create_end(self, node):
            rec.append((tuple(v + 1 for v in node.sequence()), str(node.pi)))

    canonicalize(golden10, dfs_suite(Snap()))
    got = dict(rec)
    assert got[()] == "[1 2 | 7 8 9 10 | 3 4 5 6]"
    assert got[(1,)] == "[1 | 2 | 7 8 9 10 | 5 6 | 3 4]"
    assert got[(1, 7)] == "[1 | 2 | 7 | 10 | 8 | 9 | 6 | 5 | 4 | 3]"


def test_golden10_canonical_form_matches_oracle_class(golden10, rng):
    from canonize.config import random_permutation
    ref, _, _ = canonical_form(golden10, RunConfig(aut_pruner=False, implicit_size2=False, degree1=False))
    for _ in range(5):
        h = apply_permutation(golden10, random_permutation(10, rng))
        assert canonical_form(h, RunConfig())[0] == ref


def test_equal_leaves_yield_automorphisms(golden10):
    perm, report = canonicalize(golden10, dfs_suite(), check_automorphisms=True)
    assert report.automorphisms
    for gamma in report.automorphisms:
        assert not gamma.is_identity()
        assert apply_permutation(golden10, gamma) == golden10


class _Pruner(Visitor):
    name = "pruner"

    def __init__(self, target):
        self.target = target

    def refine(self, node):
        if node.sequence() == self.target:
            node.is_pruned = True
        return RefineStatus.NO_CHANGE


def test_pruned_creation_marks_slot(golden10):
    seen = {}

    class Watch(Visitor):
        name = "watch"

        def tree_node_destroy(self, node):
            if node.parent is None:
                seen.update(node.child_pruned)

    canonicalize(golden10, dfs_suite(_Pruner([1]), Watch()))
    assert seen[1] is True


def test_prune_tree_clears_canon_leaf(golden10):
    suite = VisitorSuite(dfs_suite())
    state = CanonState(golden10, suite)
    for v in suite:
        v.start(state)
    pi = OrderedPartition.parse("[1 | 2 | 7 | 10 | 8 | 9 | 6 | 5 | 4 | 3]")
    leaf = state.make_tree_node(None, pi, None, pi.cell_starts())
    state.add_leaf(leaf)
    assert state.canon_leaf is leaf
    state.prune_tree(leaf)
    assert state.canon_leaf is None and leaf.is_pruned
    state.prune_tree(leaf)
    assert leaf.is_pruned


def test_prune_internal_without_children(golden10):
    suite = VisitorSuite(dfs_suite())
    state = CanonState(golden10, suite)
    for v in suite:
        v.start(state)
    pi = OrderedPartition.parse("[1 2 3 4 5 6 7 8 9 10]")
    root = state.make_tree_node(None, pi, None, pi.cell_starts())
    state.prune_tree(root)
    assert all(root.child_pruned.values())


def test_leaf_path_stays_alive_while_canon_leaf_held(golden10):
    suite = VisitorSuite(dfs_suite())
    state = CanonState(golden10, suite)
    for v in suite:
        v.start(state)
    pi = OrderedPartition.parse("[1 2 3 4 5 6 7 8 9 10]")
    root = state.make_tree_node(None, pi, None, pi.cell_starts())
    child = state.make_child(root, root.target_cell[0])
    leaf = state.make_child(child, child.target_cell[0])
    assert state.nodes_allocated == 3
    root = child = None
    assert state.nodes_allocated == 3
    leaf = None
    assert state.nodes_allocated == 0


def test_make_child_contract(golden10):
    suite = VisitorSuite(dfs_suite())
    state = CanonState(golden10, suite)
    for v in suite:
        v.start(state)
    pi = OrderedPartition.parse("[1 2 3 4 5 6 7 8 9 10]")
    root = state.make_tree_node(None, pi, None, pi.cell_starts())
    c = state.make_child(root, 0)
    with pytest.raises(AssertionError):
        state.make_child(root, 0)
    with pytest.raises(AssertionError):
        state.make_child(root, 6)
    root.child_pruned[1] = True
    with pytest.raises(AssertionError):
        state.make_child(root, 1)
    assert c is not None


def test_canonical_form_isomorphic_to_input(rng):
    from canonize.generators import gnp
    for _ in range(20):
        g = gnp(7, 0.4, rng)
        form, perm, _ = canonical_form(g, RunConfig())
        assert sorted(perm.image) == list(range(7))
        assert brute_canon(form) == brute_canon(g)
