from __future__ import annotations

import pydot
import pytest

from canonize import cli
from canonize.config import RunConfig, build_suite
from canonize.core import RefineStatus, Visitor, canonicalize
from canonize.dimacs import format_dimacs
from canonize.graph import build_graph
from canonize.instrument import DOT_LEGEND, AllocTraceVisitor, StatsVisitor
from canonize.traversal import node_cost_bytes

from conftest import GOLDEN_EDGES


@pytest.fixture
def golden_file(tmp_path, golden10):
    p = tmp_path / "golden.dimacs"
    p.write_text(format_dimacs(golden10))
    return str(p)


def test_parse_memory():
    assert cli.parse_memory("2MiB") == 2 * 2**20
    assert cli.parse_memory("512k") == 512 * 1024
    assert cli.parse_memory("1000") == 1000


def test_canon_output(golden_file, capsys):
    assert cli.main(["canon", golden_file, "--reps", "5", "--stats"]) == 0
    out = capsys.readouterr().out
    assert "canonical permutation" in out and "canonical form digest" in out
    assert out.count("rep ") == 5


def test_canon_deterministic(golden_file, capsys):
    outs = []
    for _ in range(2):
        cli.main(["canon", golden_file, "--seed", "7", "--invariants", "q,t", "--cell", "flm"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_bfs_exp_m_needs_limit(golden_file, capsys):
    assert cli.main(["canon", golden_file, "--traversal", "bfs-exp-m"]) == 2
    assert cli.main(["canon", golden_file, "--traversal", "bfs-exp-m", "--memory-limit", "160"]) == 2
    assert cli.main(["canon", golden_file, "--traversal", "bfs-exp-m", "--memory-limit", "4k"]) == 0


def test_bad_file(tmp_path, capsys):
    p = tmp_path / "bad.dimacs"
    p.write_text("p edge 2 1\ne 0 1\n")
    assert cli.main(["canon", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


class BreakTies(Visitor):
    """Deliberately broken refiner: splits by input vertex id, which is not
    isomorphism invariant."""

    name = "broken"

    def refine(self, node):
        pi = node.pi
        if node.parent is None and not pi.is_discrete():
            for s in list(pi.cell_starts()):
                e = pi.end[s]
                if e - s > 1:
                    seg = sorted(pi.elems[s:e])
                    pi.elems[s:e] = seg
                    for k, v in enumerate(seg, s):
                        pi.pos[v] = k
                    pi.split(s, list(range(s + 1, e)))
            return RefineStatus.CHANGED
        return RefineStatus.NO_CHANGE


def test_mutation_gives_nonzero_exit(golden_file, capsys, monkeypatch):
    real = cli.run

    def broken_run(config, g):
        config.extra_visitors = [BreakTies()]
        return real(config, g)

    monkeypatch.setattr(cli, "run", broken_run)
    assert cli.main(["canon", golden_file, "--reps", "5", "--no-aut-pruner"]) == 1
    assert "MISMATCH" in capsys.readouterr().err


def test_dot_is_valid_and_golden(golden_file, tmp_path):
    dot = tmp_path / "tree.dot"
    assert cli.main(["viz", golden_file, "--dot", str(dot), "--no-implicit-size2", "--no-degree1"]) == 0
    text = dot.read_text()
    for line in DOT_LEGEND:
        assert line in text
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    g = graphs[0]
    nodes = {n.get_name(): n for n in g.get_nodes()}
    labels = {n.get_label().strip('"') for n in nodes.values() if n.get_label()}
    assert "0: [1 2 | 7 8 9 10 | 3 4 5 6]" in labels
    assert "1: [1 | 2 | 7 8 9 10 | 5 6 | 3 4]" in labels
    assert any(l.startswith("aut = ") for l in labels)
    # root has children 1 and 2
    root_edges = sorted(e.get_label().strip('"') for e in g.get_edges() if e.get_source() == "n0")
    assert root_edges == ["1", "2"]
    # the four skipped slots appear as dashed placeholders
    skipped = sorted(e.get_label().strip('"') for e in g.get_edges()
                     if e.get_destination().startswith("s"))
    assert len(skipped) == 4
    greens = [n for n in nodes.values() if n.get("fillcolor") == "darkgreen"]
    assert len(greens) == 1


def test_single_node_tree_is_dark_green():
    stats = StatsVisitor()
    g = build_graph(2, [], [1, 2])
    canonicalize(g, build_suite(RunConfig(extra_visitors=[stats])))
    graphs = pydot.graph_from_dot_data(stats.to_dot())
    nodes = [n for n in graphs[0].get_nodes() if n.get_name().startswith("n") and n.get_name() != "node"]
    assert len(nodes) == 1 and nodes[0].get("fillcolor") == "darkgreen"


def test_alloc_trace(golden_file, tmp_path):
    out = tmp_path / "alloc.txt"
    assert cli.main(["viz", golden_file, "--alloc-trace", str(out)]) == 0
    rows = [tuple(map(int, l.split())) for l in out.read_text().splitlines() if not l.startswith("#")]
    assert [c for c, _ in rows] == list(range(1, len(rows) + 1))
    # canon-leaf path plus the current path, sharing the root: 2 * depth + 1
    assert max(a for _, a in rows) <= 2 * 2 + 1


def test_alloc_trace_plateaus_at_budget():
    from canonize.generators import circulant
    g = circulant(16, (1, 4))
    limit = 6 * node_cost_bytes(16)
    tr = AllocTraceVisitor()
    perm, report = canonicalize(g, build_suite(RunConfig(
        traversal="bfs-exp-m", memory_limit=limit, aut_pruner=False, implicit_size2=False,
        extra_visitors=[tr])))
    assert report.stats["bfs-exp-m"]["bfs_max_allocated"] == 6
    assert report.allocated_after == 0


def test_gen_and_oracle(capsys, tmp_path):
    assert cli.main(["gen", "circulant", "-n", "6", "--jumps", "1,2", "--shuffle", "--seed", "3"]) == 0
    text = capsys.readouterr().out
    p = tmp_path / "c6.dimacs"
    p.write_text(text)
    assert cli.main(["oracle", str(p)]) == 0
    out = capsys.readouterr().out
    assert "automorphisms 48" in out  # octahedron
    assert cli.main(["gen", "gnp", "-n", "8", "--copies", "2", "--complement",
                     "--vertex-colours", "2", "--edge-colours", "2"]) == 0
