from __future__ import annotations

import random

import pytest

from canonize.graph import build_graph

GOLDEN_EDGES = [(1, 3), (1, 4), (2, 5), (2, 6), (3, 7), (3, 10), (4, 8), (4, 9),
               (5, 7), (5, 9), (6, 8), (6, 10), (7, 9), (8, 10)]


@pytest.fixture
def golden10():
    return build_graph(10, GOLDEN_EDGES)


@pytest.fixture
def iso4():
    """The three 4-vertex graphs G, G1, G2 of the small isomorphism example."""
    g = build_graph(4, [(1, 2), (1, 3), (1, 4), (3, 4)])
    g1 = build_graph(4, [(1, 4), (2, 3), (2, 4), (3, 4)])
    g2 = build_graph(4, [(1, 4), (2, 3), (2, 4), (3, 4)])
    return g, g1, g2


@pytest.fixture
def rng():
    return random.Random(12345)
