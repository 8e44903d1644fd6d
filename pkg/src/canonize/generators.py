"""Small graph families for tests and experiments. All take an explicit RNG."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import AttributedGraph


def gnp(n: int, p: float, rng: random.Random) -> AttributedGraph:
    edges = [(u, v, 0) for u, v in combinations(range(n), 2) if rng.random() < p]
    return AttributedGraph(n, edges)


def random_regular(n: int, d: int, rng: random.Random, tries: int = 1000) -> AttributedGraph:
    """Simple d-regular graph by the pairing model with rejection."""
    if (n * d) % 2 or d >= n:
        raise ValueError(f"no simple {d}-regular graph on {n} vertices")
    for _ in range(tries):
        points = [v for v in range(n) for _ in range(d)]
        rng.shuffle(points)
        pairs = {(min(a, b), max(a, b)) for a, b in zip(points[::2], points[1::2])}
        if len(pairs) == n * d // 2 and all(a != b for a, b in pairs):
            return AttributedGraph(n, [(a, b, 0) for a, b in sorted(pairs)])
    raise RuntimeError(f"pairing model failed {tries} times for n={n}, d={d}")


def circulant(n: int, jumps) -> AttributedGraph:
    edges = set()
    for v in range(n):
        for j in jumps:
            w = (v + j) % n
            if w != v:
                edges.add((min(v, w), max(v, w)))
    return AttributedGraph(n, [(a, b, 0) for a, b in sorted(edges)])


def cycle(n: int) -> AttributedGraph:
    return circulant(n, [1])


def path(n: int) -> AttributedGraph:
    return AttributedGraph(n, [(i, i + 1, 0) for i in range(n - 1)])


def star(leaves: int) -> AttributedGraph:
    return AttributedGraph(leaves + 1, [(0, i, 0) for i in range(1, leaves + 1)])


def complete(n: int) -> AttributedGraph:
    return AttributedGraph(n, [(u, v, 0) for u, v in combinations(range(n), 2)])


def disjoint_union(*graphs: AttributedGraph) -> AttributedGraph:
    edges, attrs, off = [], [], 0
    for g in graphs:
        edges.extend((u + off, v + off, a) for u, v, a in g.edges)
        attrs.extend(g.vertex_attrs)
        off += g.n
    return AttributedGraph(off, edges, attrs)


def complement(g: AttributedGraph) -> AttributedGraph:
    present = {(u, v) for u, v, _ in g.edges}
    edges = [(u, v, 0) for u, v in combinations(range(g.n), 2) if (u, v) not in present]
    return AttributedGraph(g.n, edges, g.vertex_attrs)


def with_vertex_attrs(g: AttributedGraph, k: int, rng: random.Random) -> AttributedGraph:
    return AttributedGraph(g.n, g.edges, [rng.randrange(k) for _ in range(g.n)])


def with_edge_attrs(g: AttributedGraph, k: int, rng: random.Random) -> AttributedGraph:
    return AttributedGraph(g.n, [(u, v, rng.randrange(k)) for u, v, _ in g.edges], g.vertex_attrs)


def corpus(rng: random.Random, n_values=range(6, 33), ps=(0.1, 0.3, 0.5), per_cell: int = 2,
           regular_sizes=range(8, 32, 2), attributed_sizes=range(6, 18)):
    """Yield ``(name, graph)`` over the mixed families of the acceptance corpus."""
    for n in n_values:
        for p in ps:
            for i in range(per_cell):
                yield f"gnp-{n}-{p}-{i}", gnp(n, p, rng)
    for n in regular_sizes:
        yield f"reg3-{n}", random_regular(n, 3, rng)
    for n, jumps in CIRCULANTS:
        yield f"circ-{n}-{'.'.join(map(str, jumps))}", circulant(n, jumps)
    for n in attributed_sizes:
        yield f"vattr-{n}", with_vertex_attrs(gnp(n, 0.3, rng), 3, rng)
        yield f"eattr-{n}", with_edge_attrs(gnp(n, 0.4, rng), 2, rng)
    yield from special_graphs()


CIRCULANTS = ((8, (1, 3)), (10, (1, 4)), (12, (1, 5)), (12, (2, 3)), (16, (1, 4)), (15, (1, 4, 6)))


def special_graphs():
    """Highly symmetric cases that exercise the implicit-automorphism visitors."""
    yield "cycles-2x6", disjoint_union(cycle(6), cycle(6))
    yield "co-cycles-2x5", complement(disjoint_union(cycle(5), cycle(5)))
    yield "star-6", star(6)
    yield "matching-4", disjoint_union(*[path(2)] * 4)
    yield "double-star", AttributedGraph(
        8, [(0, 1, 0)] + [(0, i, 0) for i in (2, 3, 4)] + [(1, i, 0) for i in (5, 6, 7)])


def small_corpus(rng: random.Random, count: int = 300, max_n: int = 8):
    """``count`` graphs with 1 <= n <= ``max_n`` for oracle comparisons."""
    made = 0
    fams = ("gnp", "vattr", "eattr", "cyc", "reg")
    while made < count:
        n = 1 + made % max_n
        fam = fams[(made // max_n) % len(fams)]
        p = rng.choice((0.1, 0.3, 0.5, 0.7))
        if fam == "gnp":
            g = gnp(n, p, rng)
        elif fam == "vattr":
            g = with_vertex_attrs(gnp(n, p, rng), 2, rng)
        elif fam == "eattr":
            g = with_edge_attrs(gnp(n, p, rng), 2, rng)
        elif fam == "cyc" and n >= 3:
            g = circulant(n, rng.sample(range(1, n // 2 + 1), k=1 + (n > 5)))
        elif fam == "reg" and n >= 4 and n % 2 == 0:
            g = random_regular(n, 3, rng)
        else:
            g = gnp(n, p, rng)
        yield f"{fam}-{n}-{made}", g
        made += 1
