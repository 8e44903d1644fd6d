"""Target cell selectors: first non-singleton (F), first largest (FL) and
first largest with the most non-uniform joins (FLM)."""

from __future__ import annotations

from .core import TreeNode, Visitor
from .graph import AttributedGraph
from .partition import OrderedPartition


def _require_non_discrete(pi: OrderedPartition) -> None:
    if pi.is_discrete():
        raise ValueError("target cell selection on a discrete partition")


def select_first(pi: OrderedPartition) -> int:
    _require_non_discrete(pi)
    for s in pi.cell_starts():
        if pi.end[s] - s > 1:
            return s
    raise AssertionError("unreachable")


def _largest_cells(pi: OrderedPartition) -> list[int]:
    _require_non_discrete(pi)
    starts = pi.cell_starts()
    biggest = max(pi.end[s] - s for s in starts)
    return [s for s in starts if pi.end[s] - s == biggest]


def select_first_largest(pi: OrderedPartition) -> int:
    return _largest_cells(pi)[0]


def non_uniformly_joined(g: AttributedGraph, cell_u, cell_w) -> bool:
    """Every vertex of ``cell_u`` has a neighbour and a non-neighbour in ``cell_w``."""
    w_set = set(cell_w)
    size = len(w_set)
    for u in cell_u:
        k = len({x for x, _ in g.adj[u] if x in w_set})
        if k == 0 or k == size:
            return False
    return True


def count_non_uniform_joins(g: AttributedGraph, pi: OrderedPartition, start: int) -> int:
    """Number of other cells the cell at ``start`` is non-uniformly joined to."""
    cell, end = pi.cell, pi.end
    per_vertex = []
    for u in pi.elems[start:end[start]]:
        counts: dict[int, int] = {}
        for x in {x for x, _ in g.adj[u]}:
            c = cell[x]
            counts[c] = counts.get(c, 0) + 1
        per_vertex.append(counts)
    candidates = set(per_vertex[0])
    for counts in per_vertex[1:]:
        candidates &= counts.keys()
    total = 0
    for w in candidates:
        if w == start:
            continue
        size = end[w] - w
        if all(counts[w] < size for counts in per_vertex):
            total += 1
    return total


def select_first_largest_max_joins(g: AttributedGraph, pi: OrderedPartition) -> int:
    best, best_joins = -1, -1
    for s in _largest_cells(pi):
        joins = count_non_uniform_joins(g, pi, s)
        if joins > best_joins:
            best, best_joins = s, joins
    return best


class FirstSelector(Visitor):
    name = "target-f"
    can_select_target_cell = True

    def select_target_cell(self, node: TreeNode) -> int:
        return select_first(node.pi)


class FirstLargestSelector(Visitor):
    name = "target-fl"
    can_select_target_cell = True

    def select_target_cell(self, node: TreeNode) -> int:
        return select_first_largest(node.pi)


class FirstLargestMaxJoinsSelector(Visitor):
    name = "target-flm"
    can_select_target_cell = True

    def select_target_cell(self, node: TreeNode) -> int:
        return select_first_largest_max_joins(self.state.g, node.pi)


SELECTORS = {
    "f": FirstSelector,
    "fl": FirstLargestSelector,
    "flm": FirstLargestMaxJoinsSelector,
}
