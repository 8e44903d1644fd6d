"""Brute-force reference canonization and automorphism enumeration.

Deliberately naive: every permutation is tried and nothing is pruned.  The
enumeration is vectorized with numpy: each permuted graph becomes one
fixed-width integer row whose lexicographic order is the representation
order (vertex attributes, then per vertex the degree followed by the sorted
neighbour/edge-attribute codes, padded to the maximum degree).  Padding is
only ever compared between vertices of equal degree, so it never decides
the order.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .graph import AttributedGraph, apply_permutation
from .permgroup import Permutation, orbit_partition

MAX_CANON_N = 9
MAX_AUT_N = 8
CHUNK = 40320


class OracleLimitError(ValueError):
    pass


def _ranks(values) -> dict:
    return {v: i for i, v in enumerate(sorted(set(values)))}


class _Encoder:
    def __init__(self, g: AttributedGraph) -> None:
        n = g.n
        self.n = n
        vr = _ranks(g.vertex_attrs)
        self.vrank = np.array([vr[a] for a in g.vertex_attrs], dtype=np.int64)
        er = _ranks(a for _, _, a in g.edges)
        self.k = max(len(er), 1)
        self.deg = np.array([len(g.adj[v]) for v in range(n)], dtype=np.int64)
        self.maxdeg = int(self.deg.max()) if n else 0
        nb = np.full((n, max(self.maxdeg, 1)), n, dtype=np.int64)
        ea = np.zeros_like(nb)
        for v in range(n):
            for j, (x, a) in enumerate(g.adj[v]):
                nb[v, j] = x
                ea[v, j] = er[a]
        self.nb, self.ea = nb, ea

    def rows(self, images: np.ndarray) -> np.ndarray:
        n, big = self.n, np.iinfo(np.int64).max
        m = images.shape[0]
        pre = np.argsort(images, axis=1)
        cols = [self.vrank[pre]]
        ext = np.concatenate([images, np.full((m, 1), big // (self.k + 1), dtype=np.int64)], axis=1)
        for i in range(n):
            v = pre[:, i]
            nbrs = self.nb[v]
            codes = np.take_along_axis(ext, nbrs, axis=1) * self.k + self.ea[v]
            codes[nbrs == n] = big
            codes.sort(axis=1)
            codes[codes == big] = -1
            cols.append(self.deg[v][:, None])
            cols.append(codes[:, : self.maxdeg])
        return np.concatenate(cols, axis=1)


def _lexmin(rows: np.ndarray) -> int:
    idx = np.arange(rows.shape[0])
    for c in range(rows.shape[1]):
        col = rows[idx, c]
        idx = idx[col == col.min()]
        if len(idx) == 1:
            break
    return int(idx[0])


def _chunks(n: int):
    it = permutations(range(n))
    while True:
        block = [p for _, p in zip(range(CHUNK), it)]
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), n)


def brute_canon(g: AttributedGraph) -> AttributedGraph:
    """Minimum of ``g`` relabelled by every permutation, in representation order."""
    if g.n > MAX_CANON_N:
        raise OracleLimitError(f"brute_canon refuses n={g.n} > {MAX_CANON_N}")
    enc = _Encoder(g)
    best_row, best_img = None, None
    for images in _chunks(g.n):
        rows = enc.rows(images)
        i = _lexmin(rows)
        if best_row is None or tuple(rows[i]) < best_row:
            best_row, best_img = tuple(rows[i]), images[i]
    return apply_permutation(g, Permutation(int(x) for x in best_img))


def brute_aut(g: AttributedGraph) -> list[Permutation]:
    """Every automorphism of ``g``, identity included."""
    if g.n > MAX_AUT_N:
        raise OracleLimitError(f"brute_aut refuses n={g.n} > {MAX_AUT_N}")
    enc = _Encoder(g)
    ref = enc.rows(np.arange(g.n, dtype=np.int64)[None, :])[0]
    out = []
    for images in _chunks(g.n):
        hit = np.all(enc.rows(images) == ref, axis=1)
        out.extend(Permutation(int(x) for x in row) for row in images[hit])
    return out


def brute_orbits(g: AttributedGraph) -> list[list[int]]:
    """Orbit partition of Aut(g) as sorted vertex lists."""
    return orbit_partition(brute_aut(g), g.n)
