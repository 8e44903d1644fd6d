"""DIMACS-style graph files.

Lines: ``c ...`` comment, ``p edge n m`` header, ``e u v`` edge,
``n v c`` vertex colour, ``f u v a`` attributed edge.  Indices are 1-based.
"""

from __future__ import annotations

from .graph import DEFAULT_ATTR, AttributedGraph


class DimacsError(ValueError):
    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _ints(lineno: int, parts: list[str], count: int) -> list[int]:
    if len(parts) != count:
        raise DimacsError(lineno, f"expected {count} fields after {parts and parts[0]!r}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise DimacsError(lineno, "non-integer field") from None


def parse_dimacs(text: str) -> AttributedGraph:
    n = None
    edges: list[tuple[int, int, int]] = []
    colours: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        kind, *rest = line.split()
        if kind == "p":
            if n is not None:
                raise DimacsError(lineno, "duplicate p line")
            if len(rest) != 3 or rest[0] not in ("edge", "col"):
                raise DimacsError(lineno, "malformed header, expected 'p edge n m'")
            n, _m = _ints(lineno, rest[1:], 2)
            if n < 1:
                raise DimacsError(lineno, "graph needs at least one vertex")
            continue
        if n is None:
            raise DimacsError(lineno, f"{kind!r} line before the p line")
        if kind == "e":
            u, v = _ints(lineno, rest, 2)
            a = DEFAULT_ATTR
        elif kind == "f":
            u, v, a = _ints(lineno, rest, 3)
        elif kind == "n":
            v, c = _ints(lineno, rest, 2)
            if not 1 <= v <= n:
                raise DimacsError(lineno, f"vertex {v} out of range 1..{n}")
            colours[v - 1] = c
            continue
        else:
            raise DimacsError(lineno, f"unknown line type {kind!r}")
        for x in (u, v):
            if not 1 <= x <= n:
                raise DimacsError(lineno, f"vertex {x} out of range 1..{n}")
        if u == v:
            raise DimacsError(lineno, f"self-loop at vertex {u}")
        edges.append((u - 1, v - 1, a))
    if n is None:
        raise DimacsError(0, "missing p line")
    attrs = [colours.get(v, DEFAULT_ATTR) for v in range(n)]
    return AttributedGraph(n, edges, attrs)


def read_dimacs(path: str) -> AttributedGraph:
    with open(path) as fh:
        return parse_dimacs(fh.read())


def format_dimacs(g: AttributedGraph) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    for v, a in enumerate(g.vertex_attrs):
        if a != DEFAULT_ATTR:
            lines.append(f"n {v + 1} {a}")
    for u, v, a in g.edges:
        lines.append(f"e {u + 1} {v + 1}" if a == DEFAULT_ATTR else f"f {u + 1} {v + 1} {a}")
    return "\n".join(lines) + "\n"
