from __future__ import annotations

import random

from canonize.aut import AutPruner, Degree1Visitor, Size2Visitor
from canonize.config import RunConfig, build_suite, canonical_form
from canonize.core import CanonState, Visitor, VisitorSuite, canonicalize
from canonize.generators import circulant, cycle, disjoint_union, gnp, path, star
from canonize.graph import apply_permutation, build_graph
from canonize.oracle import brute_orbits
from canonize.partition import OrderedPartition
from canonize.permgroup import Permutation, orbit_partition
from canonize.refine import WL1Refiner
from canonize.targetcell import FirstSelector
from canonize.traversal import DFSTraversal


class AutLog(Visitor):
    name = "aut-log"

    def start(self, state):
        super().start(state)
        self.implicit = []
        self.depths = []

    def implicit_automorphism(self, perm, node, tag):
        self.implicit.append((tag, perm))
        self.depths.append(None if node is None else node.depth)


def run(g, *extra, check=True):
    log = AutLog()
    suite = [DFSTraversal(), FirstSelector(), WL1Refiner(), *extra, log]
    perm, report = canonicalize(g, suite, check_automorphisms=check)
    return log, report


def test_golden10_explicit_generator(golden10):
    _, report = run(golden10, AutPruner())
    first = report.automorphisms[0]
    assert first[0] == 0 and first[1] == 1
    assert not first.is_identity()
    assert apply_permutation(golden10, first) == golden10


def test_iso4_transposition(iso4):
    _, g1, _ = iso4
    _, report = run(g1, AutPruner())
    assert [p.to_cycles() for p in report.automorphisms] == ["(2 3)"]


def test_orbit_min_rule_keeps_first():
    # two leaves 2, 3 on a common vertex: target cell {2, 3} after WL-1
    g = build_graph(3, [(1, 2), (1, 3)])
    _, report = run(g, AutPruner())
    assert report.leaves == 1 or [p.to_cycles() for p in report.automorphisms] == ["(2 3)"]


def test_size2_reports_on_even_cycles():
    for n in (4, 6, 8, 10):
        g = cycle(n)
        log, report = run(g, Size2Visitor(), AutPruner())
        tags = [t for t in report.automorphism_tags if t == "size2"]
        assert tags, n
        for tag, perm in log.implicit:
            assert apply_permutation(g, perm) == g


def test_size2_no_effect_with_big_cells():
    g = disjoint_union(cycle(3), cycle(3), cycle(3))
    log, _ = run(g, Size2Visitor())
    first_cells = [t for t, _ in log.implicit]
    assert all(t == "size2" for t in first_cells)


def test_size2_first_child_case():
    g = build_graph(4, [(1, 2), (3, 4)], [0, 1, 2, 2])
    log, report = run(g, Size2Visitor())
    assert [p.to_cycles() for _, p in log.implicit] == ["(3 4)"]
    assert report.stats["implicit-size2"]["children_pruned"] == 1


def test_degree1_star():
    g = star(3)
    log, _ = run(g, Degree1Visitor())
    at_root = sorted(p.to_cycles() for (t, p), d in zip(log.implicit, log.depths) if d == 0)
    assert at_root == ["(2 3)", "(3 4)"]
    group = orbit_partition([p for _, p in log.implicit], 4)
    assert [sorted(c) for c in group] == [[0], [1, 2, 3]]


def test_degree1_matching_pairs():
    g = disjoint_union(path(2), path(2))
    log, _ = run(g, Degree1Visitor())
    for _, p in log.implicit:
        assert apply_permutation(g, p) == g
    assert any(p.to_cycles() == "(1 2)" for _, p in log.implicit)


def test_degree1_distinct_singleton_neighbours_split():
    # 1 and 2 are distinguished by colour; pendants 3, 4 attach to them
    g = build_graph(4, [(1, 3), (2, 4)], [0, 1, 2, 2])
    state_pi = []

    class Snap(Visitor):
        name = "snap"

        def tree_node_create_end(self, node):
            state_pi.append(str(node.pi))

    log, _ = run(g, Degree1Visitor(), Snap())
    assert not log.implicit
    # WL-1 already separates the pendants: 4 has no neighbour in {1}
    assert state_pi[0] == "[1 | 2 | 4 | 3]"


def test_degree1_noop_without_pendants():
    log, report = run(cycle(5), Degree1Visitor())
    assert report.stats["degree1"] == {"reported": 0, "splits": 0}


def test_orbit_completeness_small():
    rng = random.Random(3)
    graphs = [cycle(6), star(4), disjoint_union(cycle(3), cycle(3)), circulant(7, (1, 2))]
    graphs += [gnp(rng.randint(3, 7), 0.4, rng) for _ in range(25)]
    for g in graphs:
        _, report = run(g, Degree1Visitor(), Size2Visitor(), AutPruner())
        got = sorted(sorted(c) for c in orbit_partition(report.automorphisms, g.n))
        assert got == sorted(sorted(c) for c in brute_orbits(g))


def test_pruning_soundness_forms_equal():
    rng = random.Random(8)
    for _ in range(30):
        g = gnp(rng.randint(2, 8), rng.random(), rng)
        on = canonical_form(g, RunConfig())[0]
        off = canonical_form(g, RunConfig(aut_pruner=False, implicit_size2=False, degree1=False))[0]
        assert on == off


def test_lca_parent_prunes_leaf_itself(golden10):
    pruned = []

    class Watch(Visitor):
        name = "watch"

        def tree_pruned(self, node):
            pruned.append(tuple(v + 1 for v in node.sequence()))

    run(golden10, AutPruner(), Watch())
    assert (1, 8) in pruned
