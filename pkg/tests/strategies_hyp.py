"""Hypothesis generators for small boards."""

from hypothesis import strategies as st

from satgame.graph import Digraph, UGraph


@st.composite
def digraphs(draw, max_n: int = 7, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Digraph.from_arcs(n, chosen)


@st.composite
def dags(draw, max_n: int = 8):
    """Acyclic digraphs: arcs only go up a random vertex order."""
    n = draw(st.integers(1, max_n))
    order = draw(st.permutations(range(n)))
    pos = {v: i for i, v in enumerate(order)}
    pairs = [(u, v) for u in range(n) for v in range(n) if pos[u] < pos[v]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Digraph.from_arcs(n, chosen)


@st.composite
def ugraphs(draw, max_n: int = 6, max_edges: int | None = None):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    cap = len(pairs) if max_edges is None else min(max_edges, len(pairs))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=cap)) if pairs else []
    return UGraph.from_edges(n, chosen)
