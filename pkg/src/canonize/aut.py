"""Automorphism pruning and the implicit-automorphism producers.

``AutPruner`` collects explicit automorphisms from isomorphic leaves and
implicit ones from other visitors, and prunes children that lie in the same
orbit of the node's stabilizer.  ``Size2Visitor`` handles partitions whose
cells all have size one or two, ``Degree1Visitor`` cells of degree-1 vertices.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Any

from .core import RefineStatus, TreeNode, Visitor
from .permgroup import GeneratorSet, OrbitPartition, Permutation


class _AutData:
    __slots__ = ("k", "stab", "stab_idx", "orbit")

    def __init__(self) -> None:
        self.k = 0
        self.stab: list[Permutation] = []
        self.stab_idx: list[int] = []  # generator index of each stab entry
        self.orbit: OrbitPartition | None = None


class AutPruner(Visitor):
    """Prunes children of a node using the generators that fix its sequence.

    Within each orbit of the target cell one child is kept: the one on the
    path to the current canonical leaf if there is one, otherwise the first
    live materialized child, otherwise the first unpruned vertex in target
    cell order.
    """

    name = "aut-pruner"

    def start(self, state) -> None:
        super().start(state)
        self.gens = GeneratorSet()
        self.explicit = 0
        self.implicit = 0
        self.pruned_children = 0
        self.subtrees_pruned = 0

    def make_node_data(self) -> _AutData:
        return _AutData()

    def stats(self) -> dict[str, Any]:
        return {"generators": len(self.gens), "explicit": self.explicit, "implicit": self.implicit,
                "pruned_children": self.pruned_children, "subtrees_pruned": self.subtrees_pruned}

    def before_descend(self, node: TreeNode) -> None:
        self.prune_children(node)

    def prune_children(self, node: TreeNode) -> None:
        chain = list(node.ancestors())
        chain.reverse()
        i = self.index
        total = len(self.gens)
        parent_data = None
        for t in chain:
            d: _AutData = t.data[i]
            kp = total if parent_data is None else parent_data.k
            if d.k != kp:
                self._update(t, d, parent_data, kp)
            parent_data = d

    def _update(self, t: TreeNode, d: _AutData, parent: _AutData | None, kp: int) -> None:
        lo = d.k
        if parent is None:
            new = [(j, self.gens.perms[j]) for j in range(lo, kp)]
        else:
            w = t.individualized_vertex
            first = bisect_left(parent.stab_idx, lo)
            new = [(j, g) for j, g in zip(parent.stab_idx[first:], parent.stab[first:])
                   if j < kp and g[w] == w]
        d.k = kp
        if not new:
            return
        for j, g in new:
            d.stab_idx.append(j)
            d.stab.append(g)
        if t.is_pruned or not t.target_cell:
            return
        cell = t.target_cell
        if d.orbit is None:
            d.orbit = OrbitPartition(self.state.g.n)
        changed = False
        for _, g in new:
            changed |= d.orbit.add_permutation(g, cell)
        if changed:
            self._prune_orbits(t, d.orbit)

    def _canon_child(self, t: TreeNode) -> int | None:
        c = self.state.canon_leaf
        if c is None or c.depth <= t.depth:
            return None
        while c.depth > t.depth + 1:
            c = c.parent
        return c.individualized_vertex if c.parent is t else None

    def _prune_orbits(self, t: TreeNode, orbit: OrbitPartition) -> None:
        classes: dict[int, list[int]] = {}
        for w in t.target_cell:
            classes.setdefault(orbit.find(w), []).append(w)
        on_path = self._canon_child(t)
        state = self.state
        for members in classes.values():
            if len(members) < 2:
                continue
            keep = None
            if on_path is not None and on_path in members:
                keep = on_path
            if keep is None:
                for w in members:
                    c = t.get_child(w)
                    if c is not None and not c.is_pruned and not t.child_pruned[w]:
                        keep = w
                        break
            if keep is None:
                keep = next((w for w in members if not t.child_pruned[w]), None)
            if keep is None:
                continue
            for w in members:
                if w == keep or t.child_pruned[w]:
                    continue
                t.child_pruned[w] = True
                self.pruned_children += 1
                c = t.get_child(w)
                if c is not None and not c.is_pruned:
                    state.prune_tree(c)

    def isomorphic_leaf(self, leaf: TreeNode) -> None:
        canon = self.state.canon_leaf
        gamma = Permutation([leaf.pi.elems[p] for p in canon.pi.pos])
        assert not gamma.is_identity(), "distinct leaves gave the identity"
        self.gens.add(gamma)
        self.explicit += 1
        on_canon = {id(a) for a in canon.ancestors()}
        tp = leaf
        while tp.parent is not None and id(tp.parent) not in on_canon:
            tp = tp.parent
        self.subtrees_pruned += 1
        self.state.prune_tree(tp)

    def implicit_automorphism(self, perm: Permutation, node: TreeNode | None, tag: str) -> None:
        if self.gens.add(perm):
            self.implicit += 1


class _Size2Data:
    __slots__ = ("fulfilled",)

    def __init__(self) -> None:
        self.fulfilled = False


class Size2Visitor(Visitor):
    """Implicit automorphisms of partitions with cells of size at most two."""

    name = "implicit-size2"

    def start(self, state) -> None:
        super().start(state)
        self.gamma = list(range(state.g.n))
        self.dirty = False
        self.reported = 0
        self.children_pruned = 0

    def make_node_data(self) -> _Size2Data:
        return _Size2Data()

    def stats(self) -> dict[str, Any]:
        return {"reported": self.reported, "children_pruned": self.children_pruned}

    def _swap(self, u: int, v: int) -> None:
        # gamma <- gamma * (u v): whatever mapped to u now maps to v and back
        g = self.gamma
        iu = self._pre(u)
        iv = self._pre(v)
        g[iu], g[iv] = v, u
        self.dirty = True

    def _pre(self, y: int) -> int:
        g = self.gamma
        if g[y] == y:
            return y
        return g.index(y)

    def _reset(self) -> None:
        if self.dirty:
            self.gamma = list(range(self.state.g.n))
            self.dirty = False

    def tree_node_create_begin(self, node: TreeNode) -> None:
        parent = node.parent
        if parent is None or not parent.data[self.index].fulfilled:
            return
        node.data[self.index].fulfilled = True
        pi = node.pi
        u = node.individualized_vertex
        v = pi.elems[pi.pos[u] + 1]
        self._swap(u, v)

    def new_cell(self, node: TreeNode, pos: int) -> None:
        if not node.data[self.index].fulfilled:
            return
        elems = node.pi.elems
        self._swap(elems[pos - 1], elems[pos])

    def tree_node_create_end(self, node: TreeNode) -> None:
        d = node.data[self.index]
        if node.is_pruned:
            if d.fulfilled:
                self._reset()
            return
        pi = node.pi
        discrete = pi.is_discrete()
        if d.fulfilled:
            gamma = Permutation(self.gamma)
            self._reset()
            self.reported += 1
            self.state.report_implicit_automorphism(gamma, node, "size2")
        elif not discrete:
            if all(pi.end[s] - s <= 2 for s in pi.cell_starts()):
                d.fulfilled = True
        if d.fulfilled and not discrete and not node.is_pruned:
            u, v = node.target_cell
            if not node.child_pruned[u] and not node.child_pruned[v]:
                node.child_pruned[v] = True
                self.children_pruned += 1


class Degree1Visitor(Visitor):
    """Refiner for cells made up of degree-1 vertices.

    Vertices sharing their only neighbour are interchangeable, as are the
    two ends of an isolated edge; those transpositions are reported.  Cells
    whose vertices hang off distinct singleton cells are split by the
    neighbour's position.
    """

    name = "degree1"

    def start(self, state) -> None:
        super().start(state)
        g = state.g
        self.deg1 = [len(g.adj[v]) == 1 for v in range(g.n)]
        self.active = any(self.deg1)
        self.seen: set[tuple[int, int]] = set()
        self.reported = 0
        self.splits = 0
        self.refiner = None
        from .refine import WL1Refiner
        self.refiner = state.suite.find(WL1Refiner)

    def stats(self) -> dict[str, Any]:
        return {"reported": self.reported, "splits": self.splits}

    def _report(self, node: TreeNode, a: int, b: int) -> None:
        key = (a, b) if a < b else (b, a)
        if key in self.seen:
            return
        self.seen.add(key)
        img = list(range(self.state.g.n))
        img[a], img[b] = b, a
        self.reported += 1
        self.state.report_implicit_automorphism(Permutation(img), node, "degree1")

    def refine(self, node: TreeNode) -> RefineStatus:
        if not self.active:
            return RefineStatus.NO_CHANGE
        g, pi = self.state.g, node.pi
        deg1, adj = self.deg1, g.adj
        created_all: list[int] = []
        for s in pi.cell_starts():
            e = pi.end[s]
            if e - s < 2:
                continue
            cell = pi.elems[s:e]
            if not all(deg1[v] for v in cell):
                continue
            members = set(cell)
            by_nbr: dict[tuple[int, Any], list[int]] = {}
            for v in cell:
                x, a = adj[v][0]
                if x in members:
                    if v < x:
                        self._report(node, v, x)
                    continue
                by_nbr.setdefault((x, a), []).append(v)
            for group in by_nbr.values():
                for a, b in zip(group, group[1:]):
                    self._report(node, a, b)
            if len(by_nbr) != len(cell):
                continue
            nbrs = [adj[v][0][0] for v in cell]
            if not all(pi.end[pi.cell[x]] - pi.cell[x] == 1 for x in nbrs):
                continue
            order = sorted(range(len(cell)), key=lambda i: pi.pos[nbrs[i]])
            ordered = [cell[i] for i in order]
            pi.elems[s:e] = ordered
            for p in range(s, e):
                pi.pos[pi.elems[p]] = p
            created = pi.split(s, list(range(s + 1, e)))
            self.splits += 1
            for p in created:
                self.state.suite.dispatch("new_cell", node, p)
                if node.is_pruned:
                    return RefineStatus.ABORTED
            created_all.append(s)
            created_all.extend(created)
        if not created_all:
            return RefineStatus.NO_CHANGE
        if self.refiner is not None:
            seed, node.refine_seed = node.refine_seed, created_all
            try:
                self.refiner.refine(node)
            finally:
                node.refine_seed = seed
        return RefineStatus.CHANGED
