"""Forbidden-structure oracles: homomorphism, subdigraph and orientation freeness.

The hot path is the directed-walk family: a digraph admits a homomorphic image
of the directed path on ``k`` vertices exactly when it has a directed cycle or
a directed path on ``k`` vertices.  That check is a topological sort plus a
longest-path pass, linear in the size of the graph.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .colouring import k_colouring
from .graph import Digraph, UGraph, iter_bits, popcount


class Mode(enum.Enum):
    HOMOMORPHISM = "hom"
    SUBDIGRAPH = "sub"


@dataclass(frozen=True)
class FamilySpec:
    """The excluded family: either the walk family ``P_k`` or explicit digraphs."""

    mode: Mode
    walk_k: int | None = None
    digraphs: tuple[Digraph, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.walk_k is None and not self.digraphs:
            raise ValueError("family needs a walk length or at least one digraph")
        if self.walk_k is not None and self.walk_k < 1:
            raise ValueError(f"path length must be >= 1, got {self.walk_k}")

    @classmethod
    def walk(cls, k: int, mode: Mode = Mode.HOMOMORPHISM) -> FamilySpec:
        return cls(mode=mode, walk_k=k)

    @classmethod
    def explicit(cls, digraphs: Sequence[Digraph], mode: Mode = Mode.HOMOMORPHISM) -> FamilySpec:
        return cls(mode=mode, digraphs=tuple(digraphs))


@dataclass(frozen=True)
class VertexClassAssignment:
    k_minus_1: int
    class_of: tuple[int, ...]
    sizes: tuple[int, ...]


class PreconditionError(ValueError):
    pass


# --------------------------------------------------------------------------
# longest paths


@dataclass(frozen=True)
class PathProfile:
    """Longest-path data of an acyclic digraph.

    ``ending[v]`` / ``starting[v]`` count the vertices on the longest directed
    path ending / starting at ``v``; ``reach[v]`` is the bitset of vertices
    reachable from ``v`` by a non-empty path.
    """

    ending: tuple[int, ...]
    starting: tuple[int, ...]
    reach: tuple[int, ...]

    @property
    def longest(self) -> int:
        return max(self.ending, default=0)


def topological_order(out: Sequence[int]) -> list[int] | None:
    """Kahn's algorithm on bitset rows; ``None`` if there is a directed cycle."""
    n = len(out)
    indeg = [0] * n
    for row in out:
        for v in iter_bits(row):
            indeg[v] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    ready.reverse()
    order = []
    while ready:
        u = ready.pop()
        order.append(u)
        for v in iter_bits(out[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return order if len(order) == n else None


def path_profile(out: Sequence[int]) -> PathProfile | None:
    """Longest-path profile, or ``None`` when the digraph has a cycle."""
    order = topological_order(out)
    if order is None:
        return None
    n = len(out)
    ending = [1] * n
    for u in order:
        e = ending[u] + 1
        for v in iter_bits(out[u]):
            if ending[v] < e:
                ending[v] = e
    starting = [1] * n
    reach = [0] * n
    for u in reversed(order):
        best, acc = 1, 0
        for v in iter_bits(out[u]):
            if starting[v] + 1 > best:
                best = starting[v] + 1
            acc |= reach[v] | (1 << v)
        starting[u] = best
        reach[u] = acc
    return PathProfile(tuple(ending), tuple(starting), tuple(reach))


def extend_profile(prof: PathProfile, out: Sequence[int], u: int, v: int) -> PathProfile:
    """Profile after adding arc ``u -> v`` to the acyclic digraph ``out``.

    The caller guarantees ``v`` does not reach ``u``.  Only descendants of
    ``v`` can gain on ``ending`` and only ancestors of ``u`` on ``starting``;
    both are relaxed in an order compatible with the old arcs, which the
    strictly monotone old values provide.
    """
    n = len(out)
    reach = list(prof.reach)
    ubit = 1 << u
    gain = reach[v] | (1 << v)
    anc = [u]
    for w in range(n):
        if reach[w] & ubit:
            anc.append(w)
    for w in anc:
        reach[w] |= gain

    ending = list(prof.ending)
    if ending[u] + 1 > ending[v]:
        ending[v] = ending[u] + 1
        desc = sorted(iter_bits(gain), key=prof.ending.__getitem__)
        for x in desc:
            e = ending[x] + 1
            for y in iter_bits(out[x]):
                if ending[y] < e:
                    ending[y] = e

    starting = list(prof.starting)
    if starting[v] + 1 > starting[u]:
        starting[u] = starting[v] + 1
        anc.sort(key=prof.starting.__getitem__)
        for x in anc:
            if x == u:
                continue
            best = starting[x]
            for y in iter_bits(out[x]):
                if starting[y] + 1 > best:
                    best = starting[y] + 1
            starting[x] = best
    return PathProfile(tuple(ending), tuple(starting), tuple(reach))


def longest_path_order(g: Digraph) -> int | None:
    """Vertex count of a longest directed path, or ``None`` if ``g`` has a cycle."""
    prof = path_profile(g.out)
    if prof is None:
        return None
    return prof.longest


def walk_hom_exists(k: int, g: Digraph) -> bool:
    """True iff ``g`` contains a directed walk on ``k`` vertices (repeats allowed)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return g.n > 0
    longest = longest_path_order(g)
    return longest is None or longest >= k


def _is_directed_path(f: Digraph) -> int | None:
    """Vertex count if ``f`` is exactly a directed path, else ``None``."""
    if f.n == 0:
        return None
    ins = f.in_rows()
    outd = [popcount(r) for r in f.out]
    ind = [popcount(r) for r in ins]
    if any(d > 1 for d in outd) or any(d > 1 for d in ind):
        return None
    if f.arc_count != f.n - 1:
        return None
    starts = [v for v in range(f.n) if ind[v] == 0]
    if len(starts) != 1:
        return None
    seen, v = 1, starts[0]
    while f.out[v]:
        v = f.out[v].bit_length() - 1
        seen += 1
    return f.n if seen == f.n else None


def _search_map(f: Digraph, g: Digraph, injective: bool) -> bool:
    """Backtracking search for an arc-preserving map ``f -> g``."""
    if f.n == 0:
        return True
    if g.n == 0 or (injective and f.n > g.n):
        return False
    f_in = f.in_rows()
    g_in = g.in_rows()
    # visit order: grow along arcs so constraints bite early
    order: list[int] = []
    placed = 0
    while len(order) < f.n:
        frontier = 0
        for u in order:
            frontier |= f.out[u] | f_in[u]
        frontier &= ~placed
        if frontier:
            v = max(iter_bits(frontier), key=lambda x: popcount(f.out[x] | f_in[x]))
        else:
            v = max(
                (x for x in range(f.n) if not placed >> x & 1),
                key=lambda x: popcount(f.out[x] | f_in[x]),
            )
        order.append(v)
        placed |= 1 << v
    image = [-1] * f.n
    everything = (1 << g.n) - 1

    def extend(i: int, used: int) -> bool:
        if i == f.n:
            return True
        v = order[i]
        cand = everything
        if injective:
            cand &= ~used
        for u in iter_bits(f_in[v]):
            if image[u] >= 0:
                cand &= g.out[image[u]]
        for w in iter_bits(f.out[v]):
            if image[w] >= 0:
                cand &= g_in[image[w]]
        for x in iter_bits(cand):
            image[v] = x
            if extend(i + 1, used | (1 << x)):
                return True
        image[v] = -1
        return False

    return extend(0, 0)


def hom_exists(f: Digraph, g: Digraph, fast_path: bool = True) -> bool:
    """True iff some (not necessarily injective) arc-preserving map ``f -> g`` exists."""
    if fast_path:
        k = _is_directed_path(f)
        if k is not None:
            return walk_hom_exists(k, g)
    return _search_map(f, g, injective=False)


def subdigraph_exists(f: Digraph, g: Digraph) -> bool:
    """True iff ``g`` contains a copy of ``f`` (injective arc-preserving map)."""
    return _search_map(f, g, injective=True)


def is_family_free(g: Digraph | UGraph, fam: FamilySpec) -> bool:
    """No member of ``fam`` is contained in ``g`` under the family's mode.

    An undirected ``g`` is judged by orientations: it is free of the
    subdigraph family ``P_{k+1}`` when some orientation avoids a directed path
    on ``k + 1`` vertices, i.e. when it is ``k``-colourable.
    """
    if isinstance(g, UGraph):
        if fam.walk_k is None or fam.mode is not Mode.SUBDIGRAPH:
            raise ValueError("undirected graphs are judged against WalkOnK(k+1) in subdigraph mode")
        return chromatic_at_most(g, fam.walk_k - 1)
    if fam.walk_k is not None:
        k = fam.walk_k
        if fam.mode is Mode.HOMOMORPHISM:
            return not walk_hom_exists(k, g)
        return not subdigraph_exists(Digraph.path(k), g)
    if fam.mode is Mode.HOMOMORPHISM:
        return not any(hom_exists(f, g) for f in fam.digraphs)
    return not any(subdigraph_exists(f, g) for f in fam.digraphs)


def is_saturated(g: Digraph | UGraph, fam: FamilySpec) -> bool:
    """``g`` is family-free and no single absent arc/edge can be added keeping it so."""
    if not is_family_free(g, fam):
        raise PreconditionError("graph already contains a forbidden structure")
    if isinstance(g, UGraph):
        return all(not is_family_free(g.add_edge(e), fam) for e in g.missing_edges())
    return all(not is_family_free(g.add_arc(a), fam) for a in g.missing_arcs())


# --------------------------------------------------------------------------
# vertex classes of saturated digraphs


def vertex_classes(g: Digraph, k: int) -> VertexClassAssignment:
    """Classes ``1..k-1`` by vertex count of the longest path ending at each vertex."""
    prof = path_profile(g.out)
    if prof is None:
        raise PreconditionError("digraph has a directed cycle")
    if prof.longest > k - 1:
        raise PreconditionError(f"longest path has {prof.longest} vertices, more than k-1={k - 1}")
    sizes = [0] * (k - 1)
    for c in prof.ending:
        sizes[c - 1] += 1
    return VertexClassAssignment(k - 1, prof.ending, tuple(sizes))


def saturated_edge_count(sizes: Sequence[int], n: int) -> int:
    """Arc count of the complete multipartite orientation with these class sizes."""
    if sum(sizes) != n:
        raise ValueError(f"class sizes sum to {sum(sizes)}, expected {n}")
    twice = n * n - sum(s * s for s in sizes)
    assert twice % 2 == 0
    return twice // 2


# --------------------------------------------------------------------------
# orientations and colourings


def chromatic_at_most(g: UGraph, k: int) -> bool:
    """Exact test for a proper ``k``-colouring."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return k_colouring(g.adj, k) is not None


def _has_simple_path(out: Sequence[int], m: int) -> bool:
    """True iff the digraph has a directed path on ``m`` distinct vertices."""
    n = len(out)
    if m <= 1:
        return n >= m

    def dfs(v: int, seen: int, count: int) -> bool:
        if count == m:
            return True
        for w in iter_bits(out[v] & ~seen):
            if dfs(w, seen | (1 << w), count + 1):
                return True
        return False

    return any(dfs(v, 1 << v, 1) for v in range(n))


#: Largest edge count :func:`orientation_free_bruteforce` will enumerate.
BRUTEFORCE_EDGE_LIMIT = 24


def orientation_free_bruteforce(g: UGraph, k: int) -> bool:
    """Enumerate every orientation; true iff one has no directed path on ``k + 1`` vertices.

    Reversing every arc preserves path lengths, so the first edge is kept in
    one direction and the remaining ``2**(e-1)`` orientations are walked in
    Gray-code order, flipping one arc per step.
    """
    edges = g.edges()
    e = len(edges)
    if e > BRUTEFORCE_EDGE_LIMIT:
        raise PreconditionError(f"{e} edges exceeds the enumeration bound {BRUTEFORCE_EDGE_LIMIT}")
    if e == 0:
        return not _has_simple_path((0,) * g.n, k + 1)
    out = [0] * g.n
    for u, v in edges:
        out[u] |= 1 << v
    if not _has_simple_path(out, k + 1):
        return True
    flipped = [False] * e
    for i in range(1, 1 << (e - 1)):
        j = (i & -i).bit_length()  # Gray code: flip edge j (edge 0 stays fixed)
        u, v = edges[j]
        if flipped[j]:
            u, v = v, u
        out[u] &= ~(1 << v)
        out[v] |= 1 << u
        flipped[j] = not flipped[j]
        if not _has_simple_path(out, k + 1):
            return True
    return False

