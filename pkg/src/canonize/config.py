"""Run configurations and the repetition protocol."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Any

from .aut import AutPruner, Degree1Visitor, Size2Visitor
from .core import RunReport, Visitor, canonicalize
from .graph import AttributedGraph, apply_permutation
from .invariants import INVARIANTS, InvariantCoordinator
from .permgroup import Permutation
from .refine import WL1Refiner
from .targetcell import SELECTORS
from .traversal import BFSExpMTraversal, TRAVERSALS

INVARIANT_ORDER = ("t", "q", "pl")


def parse_invariants(text: str | None) -> tuple[str, ...]:
    """``"pl,q"`` -> ``("q", "pl")``; order-insensitive, registration order fixed."""
    if not text or text.strip().lower() == "none":
        return ()
    names = {t.strip().lower() for t in text.split(",") if t.strip()}
    unknown = names - set(INVARIANT_ORDER)
    if unknown:
        raise ValueError(f"unknown invariants: {', '.join(sorted(unknown))}")
    return tuple(x for x in INVARIANT_ORDER if x in names)


@dataclass
class RunConfig:
    traversal: str = "dfs"
    selector: str = "f"
    invariants: tuple[str, ...] = ()
    aut_pruner: bool = True
    implicit_size2: bool = True
    degree1: bool = True
    memory_limit: float | None = None
    reps: int = 1
    seed: int = 0
    check_automorphisms: bool = False
    extra_visitors: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.traversal not in TRAVERSALS:
            raise ValueError(f"unknown traversal {self.traversal!r}")
        if self.selector not in SELECTORS:
            raise ValueError(f"unknown target cell selector {self.selector!r}")
        self.invariants = parse_invariants(",".join(self.invariants)) if self.invariants else ()
        if self.traversal == "bfs-exp-m" and self.memory_limit is None:
            raise ValueError("bfs-exp-m needs a memory limit")
        if self.reps < 1:
            raise ValueError("need at least one repetition")

    def label(self) -> str:
        inv = "+".join(self.invariants) or "none"
        return f"{self.traversal}/{self.selector}/{inv}"


def build_suite(config: RunConfig) -> list[Visitor]:
    """Visitors in registration order: traversal, selector, refiners,
    automorphism visitors, invariants, coordinator, then extras."""
    if config.traversal == "bfs-exp-m":
        trav = BFSExpMTraversal(config.memory_limit if config.memory_limit is not None else math.inf)
    else:
        trav = TRAVERSALS[config.traversal]()
    visitors: list[Visitor] = [trav, SELECTORS[config.selector](), WL1Refiner()]
    if config.degree1:
        visitors.append(Degree1Visitor())
    if config.implicit_size2:
        visitors.append(Size2Visitor())
    if config.aut_pruner:
        visitors.append(AutPruner())
    if config.invariants:
        visitors.extend(INVARIANTS[x]() for x in config.invariants)
        visitors.append(InvariantCoordinator())
    visitors.extend(config.extra_visitors)
    return visitors


def canonical_form(g: AttributedGraph, config: RunConfig) -> tuple[AttributedGraph, Permutation, RunReport]:
    perm, report = canonicalize(g, build_suite(config), config.check_automorphisms)
    return apply_permutation(g, perm), perm, report


def random_permutation(n: int, rng: random.Random) -> Permutation:
    img = list(range(n))
    rng.shuffle(img)
    return Permutation(img)


@dataclass
class RepResult:
    gamma: Permutation
    permutation: Permutation
    form: AttributedGraph
    seconds: float
    report: RunReport


@dataclass
class RunOutcome:
    config: RunConfig
    results: list[RepResult]
    agree: bool
    mismatches: list[int]

    def summary(self) -> list[dict[str, Any]]:
        return [{"rep": i, "seconds": r.seconds, "nodes": r.report.nodes_created,
                 "max_allocated": r.report.max_allocated, "leaves": r.report.leaves,
                 "generators": len(r.report.automorphisms)} for i, r in enumerate(self.results)]


def run(config: RunConfig, g: AttributedGraph) -> RunOutcome:
    """Canonize ``reps`` seeded random relabelings of ``g`` and check the forms agree."""
    rng = random.Random(config.seed)
    results = []
    for _ in range(config.reps):
        gamma = random_permutation(g.n, rng)
        h = apply_permutation(g, gamma)
        t0 = time.perf_counter()
        form, perm, report = canonical_form(h, config)
        results.append(RepResult(gamma, perm, form, time.perf_counter() - t0, report))
    ref = results[0].form.representation()
    mismatches = [i for i, r in enumerate(results) if r.form.representation() != ref]
    return RunOutcome(config, results, not mismatches, mismatches)
