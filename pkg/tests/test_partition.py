from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from canonize.graph import build_graph
from canonize.partition import (OrderedPartition, PartitionError, as_permutation, individualize,
                                initial_partition, is_finer_or_equal, permute_partition,
                                unit_partition)
from canonize.permgroup import Permutation

P = OrderedPartition.parse


def test_unit_partition():
    assert str(unit_partition(3)) == "[1 2 3]"
    one = unit_partition(1)
    assert one.is_discrete() and one.num_cells == 1
    assert unit_partition(10).cells() == [list(range(10))]
    with pytest.raises(PartitionError):
        unit_partition(0)


def test_initial_partition():
    assert str(initial_partition(build_graph(5, []))) == "[1 2 3 4 5]"
    assert str(initial_partition(build_graph(3, [], ["b", "a", "a"]))) == "[2 3 | 1]"
    assert str(initial_partition(build_graph(3, [], ["a", "b", "c"]))) == "[1 | 2 | 3]"


def test_individualize():
    pi = P("[1 2 | 7 8 9 10 | 3 4 5 6]")
    assert str(individualize(pi, 0)) == "[1 | 2 | 7 8 9 10 | 3 4 5 6]"
    assert str(individualize(P("[1 2]"), 1)) == "[2 | 1]"
    with pytest.raises(PartitionError):
        individualize(P("[1 | 2]"), 0)


def test_individualize_keeps_remainder_order():
    assert str(individualize(P("[4 2 3 1]"), 2)) == "[3 | 4 2 1]"


def test_split():
    pi = P("[1 2 | 7 8 9 10 | 3 4 5 6]")
    assert pi.split(6, [8]) == [8]
    assert str(pi) == "[1 2 | 7 8 9 10 | 3 4 | 5 6]"
    assert pi.split(2, []) == []
    q = P("[1 2 3 4]")
    assert q.split(0, [1, 2, 3]) == [1, 2, 3]
    assert q.is_discrete()
    with pytest.raises(PartitionError):
        P("[1 2 | 3 4]").split(0, [3])
    with pytest.raises(PartitionError):
        P("[1 2 3 4]").split(0, [2, 1])


def test_is_finer_or_equal():
    assert is_finer_or_equal(P("[1|2|3]"), P("[1 2 3]"))
    assert is_finer_or_equal(P("[2 3|1]"), P("[1 2 3]"))
    assert not is_finer_or_equal(P("[1|2 3]"), P("[2 3|1]"))
    assert is_finer_or_equal(P("[1 | 2 | 3 4]"), P("[1 2 | 3 4]"))


def test_as_permutation():
    assert as_permutation(P("[2|1|3]")).image == (1, 0, 2)
    assert as_permutation(P("[1|2|3|4]")).is_identity()
    leaf = P("[1|2|7|10|8|9|6|5|4|3]")
    assert [v + 1 for v in as_permutation(leaf).image] == [1, 2, 7, 10, 8, 9, 6, 5, 4, 3]
    with pytest.raises(PartitionError):
        as_permutation(P("[1 2|3]"))


def test_parse_roundtrip():
    text = "[1 2 | 7 8 9 10 | 3 4 5 6]"
    assert str(P(text)) == text
    with pytest.raises(PartitionError):
        P("[1 2 | 2]")


@st.composite
def partitions(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    order = draw(st.permutations(list(range(n))))
    cuts = sorted(draw(st.sets(st.integers(1, max(n - 1, 1)), max_size=n - 1))) if n > 1 else []
    bounds = [0] + [c for c in cuts if c < n] + [n]
    return OrderedPartition.from_cells([order[a:b] for a, b in zip(bounds, bounds[1:])], n)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_individualize_strictly_finer(data):
    pi = data.draw(partitions())
    nonsingle = [v for v in range(pi.n) if pi.cell_size(pi.cell[v]) > 1]
    if not nonsingle:
        return
    v = data.draw(st.sampled_from(nonsingle))
    out = individualize(pi, v)
    assert is_finer_or_equal(out, pi) and out.num_cells == pi.num_cells + 1
    assert out.cells()[pi.cells().index(pi.cell_of(v))] == [v]


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_permutation_inverse_and_action(data):
    pi = data.draw(partitions())
    gamma = Permutation(data.draw(st.permutations(list(range(pi.n)))))
    moved = permute_partition(pi, gamma)
    ci, cj = pi.cell_index(), moved.cell_index()
    for v in range(pi.n):
        assert cj[gamma[v]] == ci[v]
    if pi.is_discrete():
        p = as_permutation(pi)
        assert (p * p.inverse()).is_identity()


def test_internal_consistency_after_splits():
    pi = P("[5 1 4 2 3 6]")
    pi.split(0, [2, 3])
    for v in range(pi.n):
        s = pi.cell[v]
        assert s <= pi.pos[v] < pi.end[s]
        assert pi.elems[pi.pos[v]] == v
