import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from satgame.graph import (
    Digraph,
    GraphError,
    UGraph,
    canonical_key,
    canonical_order,
    iter_bits,
    popcount,
)
from strategies_hyp import digraphs, ugraphs


def test_add_arc_examples():
    g = Digraph.empty(3).add_arc((0, 1))
    assert g.arcs() == [(0, 1)]
    both = g.add_arc((1, 0))
    assert sorted(both.arcs()) == [(0, 1), (1, 0)]
    with pytest.raises(GraphError, match="duplicate"):
        g.add_arc((0, 1))


@pytest.mark.parametrize("bad", [(0, 0), (0, 3), (-1, 1)])
def test_add_arc_rejects_loops_and_range(bad):
    with pytest.raises(GraphError):
        Digraph.empty(3).add_arc(bad)


def test_missing_arcs_examples():
    assert Digraph.empty(2).missing_arcs() == [(0, 1), (1, 0)]
    full = Digraph.from_arcs(3, [(u, v) for u in range(3) for v in range(3) if u != v])
    assert full.missing_arcs() == []
    assert Digraph.from_arcs(2, [(0, 1)]).missing_arcs() == [(1, 0)]


def test_constructor_validation():
    with pytest.raises(GraphError):
        Digraph(2, (0,))
    with pytest.raises(GraphError):
        Digraph(2, (0b1, 0))  # self-loop
    with pytest.raises(GraphError):
        UGraph(2, (0b10, 0))  # asymmetric


def test_bit_helpers():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
    assert popcount(0b10110) == 3
    assert list(iter_bits(0)) == []


def test_text_round_trip():
    g = Digraph.from_arcs(4, [(0, 1), (2, 3), (3, 0)])
    assert Digraph.from_text(g.to_text()) == g


def test_canonical_key_examples():
    a = Digraph.from_arcs(3, [(0, 1)])
    b = Digraph.from_arcs(3, [(2, 0)])
    two_cycle = Digraph.from_arcs(3, [(0, 1), (1, 0)])
    assert canonical_key(a) == canonical_key(b)
    assert canonical_key(a) != canonical_key(two_cycle)
    assert canonical_key(Digraph.path(3)) == canonical_key(Digraph.from_arcs(3, [(2, 1), (1, 0)]))


def test_canonical_key_separates_orientations_of_a_path():
    # 0->1<-2 and 0<-1->2 have the same degree multiset shape but differ
    assert canonical_key(Digraph.from_arcs(3, [(0, 1), (2, 1)])) != canonical_key(
        Digraph.from_arcs(3, [(1, 0), (1, 2)]))


@given(digraphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_key_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_key(g.permute(perm)) == canonical_key(g)


@given(digraphs(max_n=6), digraphs(max_n=6))
def test_equal_canonical_keys_mean_isomorphic(g, h):
    import itertools

    if g.n != h.n or canonical_key(g) != canonical_key(h):
        return
    arcs = set(h.arcs())
    assert any({(p[u], p[v]) for u, v in g.arcs()} == arcs
               for p in itertools.permutations(range(g.n)))


@given(ugraphs(max_n=6), st.randoms(use_true_random=False))
def test_undirected_canonical_key_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_key(g.permute(perm)) == canonical_key(g)


@given(digraphs(max_n=9), st.data())
def test_canonical_order_with_anchors(g, data):
    anchors = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=3))
    perm = data.draw(st.permutations(range(g.n)))
    h = g.permute(perm)
    order_g, code_g = canonical_order(g.out, anchors)
    order_h, code_h = canonical_order(h.out, [perm[a] for a in anchors])
    assert code_g == code_h
    assert order_g[: len(anchors)] == anchors
    # reading both boards in their orders gives the same arcs
    pos_g = {v: i for i, v in enumerate(order_g)}
    pos_h = {v: i for i, v in enumerate(order_h)}
    assert {(pos_g[u], pos_g[v]) for u, v in g.arcs()} == {(pos_h[u], pos_h[v]) for u, v in h.arcs()}


def test_canonical_order_copes_with_many_isomorphic_pieces():
    # 12 disjoint copies of a 3-vertex path; branching without pruning would be 12!
    arcs = [(3 * i, 3 * i + 1) for i in range(12)] + [(3 * i + 1, 3 * i + 2) for i in range(12)]
    g = Digraph.from_arcs(36, arcs)
    perm = list(range(36))
    random.Random(3).shuffle(perm)
    assert canonical_order(g.out)[1] == canonical_order(g.permute(perm).out)[1]


def test_canonical_order_distinguishes_anchor_placement():
    g = Digraph.path(3)
    assert canonical_order(g.out, [0])[1] != canonical_order(g.out, [1])[1]
