"""Ordered partitions stored as one contiguous array of cells.

Cells are identified by their start position.  The four arrays are the
element array, the inverse index, the per-vertex cell start and the
per-start cell end.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Iterable, Sequence

from .permgroup import Permutation

if TYPE_CHECKING:
    from .graph import AttributedGraph


class PartitionError(ValueError):
    pass


class OrderedPartition:
    __slots__ = ("elems", "pos", "cell", "end", "num_cells")

    def __init__(self, elems, pos, cell, end, num_cells: int) -> None:
        self.elems: list[int] = elems
        self.pos: list[int] = pos
        self.cell: list[int] = cell
        self.end: list[int] = end
        self.num_cells = num_cells

    @classmethod
    def from_cells(cls, cells: Sequence[Iterable[int]], n: int | None = None) -> "OrderedPartition":
        cells = [list(c) for c in cells]
        elems = [v for c in cells for v in c]
        if n is None:
            n = len(elems)
        if sorted(elems) != list(range(n)) or any(not c for c in cells):
            raise PartitionError("cells must be non-empty and cover 0..n-1 exactly once")
        pos = [0] * n
        cell = [0] * n
        end = [0] * n
        p = 0
        for c in cells:
            start = p
            for v in c:
                pos[v] = p
                cell[v] = start
                p += 1
            end[start] = p
        return cls(elems, pos, cell, end, len(cells))

    @classmethod
    def parse(cls, text: str) -> "OrderedPartition":
        """Parse the 1-based rendering ``"[1 2 | 3]"``."""
        body = text.strip().strip("[]")
        cells = [[int(t) - 1 for t in re.split(r"[\s,]+", c.strip()) if t] for c in body.split("|")]
        return cls.from_cells(cells)

    @property
    def n(self) -> int:
        return len(self.elems)

    def copy(self) -> "OrderedPartition":
        return OrderedPartition(self.elems[:], self.pos[:], self.cell[:], self.end[:], self.num_cells)

    def is_discrete(self) -> bool:
        return self.num_cells == len(self.elems)

    def cell_starts(self) -> list[int]:
        starts = []
        p, n = 0, len(self.elems)
        while p < n:
            starts.append(p)
            p = self.end[p]
        return starts

    def cells(self) -> list[list[int]]:
        return [self.elems[s : self.end[s]] for s in self.cell_starts()]

    def cell_of(self, v: int) -> list[int]:
        s = self.cell[v]
        return self.elems[s : self.end[s]]

    def cell_index(self) -> list[int]:
        """Vertex -> ordinal of its cell (0-based)."""
        idx = [0] * len(self.elems)
        for j, s in enumerate(self.cell_starts()):
            for v in self.elems[s : self.end[s]]:
                idx[v] = j
        return idx

    def cell_size(self, start: int) -> int:
        return self.end[start] - start

    def split(self, start: int, cuts: Sequence[int]) -> list[int]:
        """Split the cell at ``start`` at absolute positions ``cuts``.

        Element order inside the segment is preserved; returns the start
        positions of the newly created cells.
        """
        stop = self.end[start]
        prev = start
        for c in cuts:
            if not prev < c < stop:
                raise PartitionError(f"cut {c} outside cell [{start}, {stop}) or not increasing")
            prev = c
        if not cuts:
            return []
        bounds = list(cuts) + [stop]
        elems, cell, end = self.elems, self.cell, self.end
        end[start] = bounds[0]
        for i, c in enumerate(cuts):
            e = bounds[i + 1]
            end[c] = e
            for p in range(c, e):
                cell[elems[p]] = c
        self.num_cells += len(cuts)
        return list(cuts)

    def __str__(self) -> str:
        return "[" + " | ".join(" ".join(str(v + 1) for v in c) for c in self.cells()) + "]"

    def __repr__(self) -> str:
        return f"OrderedPartition({self})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrderedPartition):
            return NotImplemented
        return self.elems == other.elems and self.cell == other.cell

    def __hash__(self):
        return hash((tuple(self.elems), tuple(self.cell)))


def unit_partition(n: int) -> OrderedPartition:
    if n < 1:
        raise PartitionError("unit partition needs n >= 1")
    return OrderedPartition.from_cells([range(n)])


def initial_partition(g: "AttributedGraph") -> OrderedPartition:
    """Cells group equal vertex attributes, ordered by attribute."""
    if g.n < 1:
        raise PartitionError("graph has no vertices")
    groups: dict = {}
    for v, a in enumerate(g.vertex_attrs):
        groups.setdefault(a, []).append(v)
    return OrderedPartition.from_cells([groups[a] for a in sorted(groups)], g.n)


def individualize(pi: OrderedPartition, v: int) -> OrderedPartition:
    """Copy of ``pi`` with ``v`` moved into a singleton in front of its cell."""
    s = pi.cell[v]
    if pi.end[s] - s < 2:
        raise PartitionError(f"vertex {v + 1} already lies in a singleton cell")
    out = pi.copy()
    elems, pos = out.elems, out.pos
    # shift rather than swap so the remainder keeps its relative order
    for p in range(pos[v], s, -1):
        u = elems[p - 1]
        elems[p] = u
        pos[u] = p
    elems[s] = v
    pos[v] = s
    out.split(s, [s + 1])
    return out


def is_finer_or_equal(finer: OrderedPartition, coarser: OrderedPartition) -> bool:
    """True iff ``cell(u, coarser) < cell(v, coarser)`` implies the same order in ``finer``."""
    fi, ci = finer.cell_index(), coarser.cell_index()
    n = len(fi)
    order = sorted(range(n), key=lambda v: (ci[v], fi[v]))
    # at each coarse-cell boundary the fine cells must strictly increase
    return all(fi[a] < fi[b] for a, b in zip(order, order[1:]) if ci[a] < ci[b])


def as_permutation(pi: OrderedPartition) -> Permutation:
    """Discrete partition as the permutation ``cell index -> vertex``."""
    if not pi.is_discrete():
        raise PartitionError("only discrete partitions are permutations")
    return Permutation(pi.elems)


def permute_partition(pi: OrderedPartition, gamma: Permutation) -> OrderedPartition:
    img = gamma.image
    return OrderedPartition.from_cells([[img[v] for v in c] for c in pi.cells()], pi.n)
