"""1-dimensional Weisfeiler-Leman refinement with edge-attribute aware degrees."""

from __future__ import annotations

from collections import deque
from typing import Callable, Sequence

from .core import RefineStatus, TreeNode, Visitor
from .graph import AttributedGraph
from .partition import OrderedPartition

# largest key range handled by counting sort before falling back to sorted()
COUNTING_SORT_RANGE = 64


def sort_cell_by_degree(segment: Sequence[int], degrees: Sequence, method: str = "auto"):
    """Stable ascending sort of ``segment`` by ``degrees``.

    Returns the reordered segment and the offsets (relative to the segment
    start) where the degree value changes.  ``method`` selects the binary
    partition, counting sort or comparison sort path; ``auto`` picks the
    cheapest applicable one.
    """
    if method == "auto":
        lo, hi = min(degrees), max(degrees)
        if lo == hi:
            return list(segment), []
        if isinstance(lo, int):
            distinct = set(degrees)
            if len(distinct) == 2:
                method = "binary"
            elif hi - lo <= COUNTING_SORT_RANGE:
                method = "counting"
            else:
                method = "comparison"
        else:
            method = "comparison"

    if method == "binary":
        lo = min(degrees)
        low = [v for v, d in zip(segment, degrees) if d == lo]
        high = [v for v, d in zip(segment, degrees) if d != lo]
        if len({d for d in degrees if d != lo}) > 1:
            raise ValueError("binary partition needs at most two distinct degrees")
        return low + high, ([len(low)] if low and high else [])
    if method == "counting":
        lo = min(degrees)
        buckets: list[list[int]] = [[] for _ in range(max(degrees) - lo + 1)]
        for v, d in zip(segment, degrees):
            buckets[d - lo].append(v)
        out: list[int] = []
        cuts = []
        for b in buckets:
            if b:
                if out:
                    cuts.append(len(out))
                out.extend(b)
        return out, cuts
    if method == "comparison":
        order = sorted(range(len(segment)), key=degrees.__getitem__)
        out = [segment[i] for i in order]
        cuts = [k for k in range(1, len(order)) if degrees[order[k]] != degrees[order[k - 1]]]
        return out, cuts
    raise ValueError(f"unknown sort method {method!r}")


def attributed_degrees(g: AttributedGraph, splitter: Sequence[int]) -> dict:
    """Vertex -> degree into ``splitter``.

    Plain integer counts when the graph has a single edge attribute,
    otherwise a sorted tuple of ``(attribute, count)`` pairs.
    """
    adj = g.adj
    if g.uniform_edge_attr:
        cnt: dict[int, int] = {}
        for w in splitter:
            for x, _ in adj[w]:
                cnt[x] = cnt.get(x, 0) + 1
        return cnt
    maps: dict[int, dict] = {}
    for w in splitter:
        for x, a in adj[w]:
            m = maps.get(x)
            if m is None:
                maps[x] = {a: 1}
            else:
                m[a] = m.get(a, 0) + 1
    return {x: tuple(sorted(m.items())) for x, m in maps.items()}


def wl1_refine(
    g: AttributedGraph,
    pi: OrderedPartition,
    seed: Sequence[int],
    new_cell: Callable[[int], None] | None = None,
    splitter_done: Callable[[], None] | None = None,
    aborted: Callable[[], bool] | None = None,
    sort_method: str = "auto",
    skip_largest: str = "last",
) -> RefineStatus:
    """Refine ``pi`` in place to the coarsest equitable partition below it.

    ``seed`` holds the start positions of the initial splitter cells.
    ``new_cell`` is called with the start of every cell created by a split,
    ``splitter_done`` after each splitter has been processed; when
    ``aborted`` returns True refinement stops with ``ABORTED``.

    When a cell that is not queued splits, every fragment except one of
    maximum size is queued; ``skip_largest`` picks whether that is the
    first or the last such fragment.
    """
    n = g.n
    zero = 0 if g.uniform_edge_attr else ()
    elems, pos, cell, end = pi.elems, pi.pos, pi.cell, pi.end
    queue: deque[int] = deque()
    queued = [False] * n
    for s in seed:
        if not queued[s]:
            queued[s] = True
            queue.append(s)
    changed = False
    while queue and pi.num_cells < n:
        ws = queue.popleft()
        queued[ws] = False
        deg = attributed_degrees(g, elems[ws:end[ws]])
        for s in sorted({cell[x] for x in deg}):
            e = end[s]
            if e - s == 1:
                continue
            seg = elems[s:e]
            keys = [deg.get(v, zero) for v in seg]
            ordered, offsets = sort_cell_by_degree(seg, keys, sort_method)
            if not offsets:
                continue
            elems[s:e] = ordered
            for p in range(s, e):
                pos[elems[p]] = p
            created = pi.split(s, [s + k for k in offsets])
            changed = True
            fragments = [s] + created
            if queued[s]:
                queue.remove(s)
                for f in fragments:
                    queue.append(f)
                    queued[f] = True
            else:
                sizes = [end[f] - f for f in fragments]
                top = max(sizes)
                if skip_largest == "first":
                    biggest = fragments[sizes.index(top)]
                else:
                    biggest = fragments[len(sizes) - 1 - sizes[::-1].index(top)]
                for f in fragments:
                    if f != biggest:
                        queue.append(f)
                        queued[f] = True
            if new_cell is not None:
                for p in created:
                    new_cell(p)
                    if aborted is not None and aborted():
                        return RefineStatus.ABORTED
        if splitter_done is not None:
            splitter_done()
            if aborted is not None and aborted():
                return RefineStatus.ABORTED
    return RefineStatus.CHANGED if changed else RefineStatus.NO_CHANGE


class WL1Refiner(Visitor):
    """Refinement visitor running WL-1 from the node's seed cells."""

    name = "wl1"

    def __init__(self, sort_method: str = "auto", skip_largest: str = "last") -> None:
        self.sort_method = sort_method
        self.skip_largest = skip_largest

    def start(self, state) -> None:
        super().start(state)
        self.calls = 0
        self.splits = 0

    def refine(self, node: TreeNode) -> RefineStatus:
        self.calls += 1
        suite = self.state.suite
        new_cell_handlers = suite.handlers["new_cell"]
        done_handlers = suite.handlers["splitter_done"]

        def on_new_cell(p: int) -> None:
            self.splits += 1
            for h in new_cell_handlers:
                h(node, p)

        def on_done() -> None:
            for h in done_handlers:
                h(node)

        return wl1_refine(
            self.state.g, node.pi, node.refine_seed,
            new_cell=on_new_cell,
            splitter_done=on_done if done_handlers else None,
            aborted=lambda: node.is_pruned,
            sort_method=self.sort_method,
            skip_largest=self.skip_largest,
        )

    def stats(self) -> dict:
        return {"calls": self.calls, "splits": self.splits}
