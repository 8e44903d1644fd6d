"""Attributed undirected (multi)graphs and their total representation order.

Vertices are stored 0-based.  ``build_graph`` and the text formats are the
1-based boundary.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

DEFAULT_ATTR = 0


class GraphError(ValueError):
    pass


class AttributedGraph:
    """Undirected graph with totally ordered vertex and edge attributes.

    Parallel edges are allowed, self-loops are not.  Instances are treated as
    immutable once built.
    """

    __slots__ = ("n", "edges", "vertex_attrs", "adj", "uniform_edge_attr", "_rep")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, Any]],
        vertex_attrs: Sequence[Any] | None = None,
    ) -> None:
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        if vertex_attrs is None:
            vertex_attrs = [DEFAULT_ATTR] * n
        if len(vertex_attrs) != n:
            raise GraphError(f"expected {n} vertex attributes, got {len(vertex_attrs)}")
        norm = []
        for u, v, a in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            norm.append((u, v, a) if u < v else (v, u, a))
        norm.sort()
        self.n = n
        self.edges: tuple[tuple[int, int, Any], ...] = tuple(norm)
        self.vertex_attrs: tuple[Any, ...] = tuple(vertex_attrs)
        adj: list[list[tuple[int, Any]]] = [[] for _ in range(n)]
        for u, v, a in norm:
            adj[u].append((v, a))
            adj[v].append((u, a))
        # globally ordered: by neighbour, parallel edges by attribute
        self.adj: tuple[tuple[tuple[int, Any], ...], ...] = tuple(tuple(sorted(x)) for x in adj)
        self.uniform_edge_attr = len({a for _, _, a in norm}) <= 1
        self._rep: tuple | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def representation(self) -> tuple:
        """Flat key whose tuple order is the representation order.

        Vertex attributes come first, then for every vertex its list length
        followed by (neighbour, edge attribute) pairs.  Because every
        per-vertex block starts with its length, comparing the flat tuples is
        the same as comparing the nested adjacency lists.
        """
        if self._rep is None:
            self._rep = permuted_representation(self, range(self.n))
        return self._rep

    def adjacency_form(self) -> list[list[int]]:
        """1-based neighbour lists, as printed in the usual adjacency form."""
        return [[u + 1 for u, _ in nbrs] for nbrs in self.adj]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttributedGraph):
            return NotImplemented
        return self.n == other.n and self.representation() == other.representation()

    def __hash__(self) -> int:
        return hash(self.representation())

    def __repr__(self) -> str:
        return f"AttributedGraph(n={self.n}, m={self.m})"


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int] | tuple[int, int, Any]],
    vertex_attrs: Sequence[Any] | None = None,
) -> AttributedGraph:
    """Build a graph from 1-based edges ``(u, v)`` or ``(u, v, attr)``."""
    converted = []
    for e in edges:
        u, v = e[0], e[1]
        a = e[2] if len(e) > 2 else DEFAULT_ATTR
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge ({u}, {v}) out of range 1..{n}")
        converted.append((u - 1, v - 1, a))
    return AttributedGraph(n, converted, vertex_attrs)


def permuted_representation(g: AttributedGraph, image: Sequence[int]) -> tuple:
    """Representation key of ``g`` permuted by ``v -> image[v]`` without building it."""
    n = g.n
    preimage = [0] * n
    for v in range(n):
        preimage[image[v]] = v
    vattrs = g.vertex_attrs
    key: list[Any] = [vattrs[preimage[i]] for i in range(n)]
    adj = g.adj
    if g.uniform_edge_attr:
        a0 = g.edges[0][2] if g.edges else DEFAULT_ATTR
        for i in range(n):
            nbrs = sorted([image[u] for u, _ in adj[preimage[i]]])
            key.append(len(nbrs))
            for u in nbrs:
                key.append(u)
                key.append(a0)
    else:
        for i in range(n):
            nbrs = sorted([(image[u], a) for u, a in adj[preimage[i]]])
            key.append(len(nbrs))
            for u, a in nbrs:
                key.append(u)
                key.append(a)
    return tuple(key)


def apply_permutation(g: AttributedGraph, perm) -> AttributedGraph:
    """Return ``g`` relabelled by ``v -> perm[v]``; attributes travel with vertices."""
    image = perm.image if hasattr(perm, "image") else tuple(perm)
    if len(image) != g.n:
        raise GraphError(f"permutation of size {len(image)} applied to graph with n={g.n}")
    vattrs = [None] * g.n
    for v in range(g.n):
        vattrs[image[v]] = g.vertex_attrs[v]
    edges = [(image[u], image[v], a) for u, v, a in g.edges]
    return AttributedGraph(g.n, edges, vattrs)


def compare_representation(g1: AttributedGraph, g2: AttributedGraph) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if g1.n != g2.n:
        raise GraphError(f"cannot compare graphs of size {g1.n} and {g2.n}")
    r1, r2 = g1.representation(), g2.representation()
    return (r1 > r2) - (r1 < r2)
