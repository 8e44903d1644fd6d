"""Permutations, generator lists with stabilizer filtering, and orbit union-find.

Composition is left to right: ``compose(a, b)`` maps ``v`` to ``b[a[v]]``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence


class Permutation:
    __slots__ = ("image",)

    def __init__(self, image: Iterable[int]) -> None:
        self.image: tuple[int, ...] = tuple(image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse 1-based cycle notation such as ``"(1 2 4)(3)"``."""
        image = list(range(n))
        for body in re.findall(r"\(([^()]*)\)", text):
            cyc = [int(t) - 1 for t in body.replace(",", " ").split()]
            for i, v in enumerate(cyc):
                if not 0 <= v < n:
                    raise ValueError(f"point {v + 1} out of range 1..{n}")
                image[v] = cyc[(i + 1) % len(cyc)]
        if sorted(image) != list(range(n)):
            raise ValueError(f"not a bijection: {text!r}")
        return cls(image)

    @property
    def n(self) -> int:
        return len(self.image)

    def __getitem__(self, v: int) -> int:
        return self.image[v]

    def __len__(self) -> int:
        return len(self.image)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for v, w in enumerate(self.image):
            inv[w] = v
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(v == w for v, w in enumerate(self.image))

    def support(self) -> list[int]:
        return [v for v, w in enumerate(self.image) if v != w]

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.image)
        out = []
        for start in range(len(self.image)):
            if seen[start]:
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = self.image[v]
            out.append(tuple(cyc))
        return out

    def to_cycles(self, include_fixed: bool = False) -> str:
        """1-based cycle notation; the identity renders as ``(1)``."""
        cycs = [c for c in self.cycles() if include_fixed or len(c) > 1]
        if not cycs:
            return "(1)"
        return "".join("(" + " ".join(str(v + 1) for v in c) + ")" for c in cycs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({self.to_cycles()})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``v -> b[a[v]]``."""
    if len(a) != len(b):
        raise ValueError(f"size mismatch: {len(a)} vs {len(b)}")
    bi = b.image
    return Permutation([bi[x] for x in a.image])


def fixes_sequence(p: Permutation, seq: Iterable[int]) -> bool:
    img = p.image
    return all(img[v] == v for v in seq)


class GeneratorSet:
    """Append-only list of non-identity automorphisms; its length is the generation."""

    def __init__(self) -> None:
        self.perms: list[Permutation] = []

    @property
    def generation(self) -> int:
        return len(self.perms)

    def add(self, p: Permutation) -> bool:
        if p.is_identity():
            return False
        self.perms.append(p)
        return True

    def __len__(self) -> int:
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)


def filter_stabilizer(
    gens: GeneratorSet | Sequence[Permutation], seq: Sequence[int], from_generation: int = 0
) -> list[Permutation]:
    """Generators at index ``>= from_generation`` fixing every vertex of ``seq``."""
    perms = gens.perms if isinstance(gens, GeneratorSet) else list(gens)
    if from_generation > len(perms):
        raise ValueError("from_generation is ahead of the generator list")
    return [p for p in perms[from_generation:] if fixes_sequence(p, seq)]


class OrbitPartition:
    """Union-find over ``0..n-1`` whose class representatives are class minima."""

    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(self, u: int, v: int) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        if ru < rv:
            self.parent[rv] = ru
        else:
            self.parent[ru] = rv
        return True

    def add_permutation(self, p: Permutation, points: Iterable[int] | None = None) -> bool:
        """Merge ``v`` with ``p[v]`` for all points (default every point)."""
        changed = False
        img = p.image
        for v in range(len(img)) if points is None else points:
            if img[v] != v and self.union(v, img[v]):
                changed = True
        return changed

    def same_orbit(self, u: int, v: int) -> bool:
        return self.find(u) == self.find(v)

    def orbit_min(self, v: int) -> int:
        return self.find(v)

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for v in range(len(self.parent)):
            groups.setdefault(self.find(v), []).append(v)
        return sorted(groups.values())


def orbit_union(orbits: OrbitPartition, p: Permutation) -> OrbitPartition:
    orbits.add_permutation(p)
    return orbits


def orbit_partition(gens: Iterable[Permutation], n: int) -> list[list[int]]:
    orbits = OrbitPartition(n)
    for p in gens:
        orbits.add_permutation(p)
    return orbits.classes()
