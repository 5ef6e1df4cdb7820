"""Bitset-encoded directed and undirected graphs.

Every graph is an immutable value: ``n`` plus a tuple holding one integer
bitmask per vertex.  Bit ``v`` of ``out[u]`` is set when the arc ``u -> v``
is present.  Python integers are unbounded, so ``n`` is not capped at 64.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Arc = tuple[int, int]
Edge = tuple[int, int]

#: Largest vertex count for which :func:`canonical_key` merges isomorphs.
CANON_LIMIT = 8


class GraphError(ValueError):
    """Raised on malformed graph mutations (self-loops, duplicates, range)."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True, slots=True)
class Digraph:
    """A simple digraph without loops.  Anti-parallel arcs are allowed."""

    n: int
    out: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.out) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.out)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.out):
            if row & ~full:
                raise GraphError(f"row {u} has bits beyond n={self.n}")
            if row >> u & 1:
                raise GraphError(f"self-loop at {u}")

    @classmethod
    def empty(cls, n: int) -> Digraph:
        return cls(n, (0,) * n)

    @classmethod
    def trusted(cls, n: int, out: tuple[int, ...]) -> Digraph:
        """Build without validation; for hot loops that maintain the invariants."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "out", out)
        return g

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc]) -> Digraph:
        rows = [0] * n
        for u, v in arcs:
            _check_pair(n, u, v)
            if rows[u] >> v & 1:
                raise GraphError(f"duplicate arc {u}->{v}")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    @classmethod
    def path(cls, k: int, n: int | None = None) -> Digraph:
        """The directed path 0 -> 1 -> ... -> k-1 on ``n`` (default ``k``) vertices."""
        return cls.from_arcs(k if n is None else n, [(i, i + 1) for i in range(k - 1)])

    @classmethod
    def transitive_tournament(cls, n: int) -> Digraph:
        return cls.from_arcs(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def __contains__(self, arc: object) -> bool:
        u, v = arc  # type: ignore[misc]
        return self.has_arc(u, v)

    def arcs(self) -> list[Arc]:
        """All arcs in ascending (u, v) order."""
        return [(u, v) for u, row in enumerate(self.out) for v in iter_bits(row)]

    @property
    def arc_count(self) -> int:
        return sum(popcount(row) for row in self.out)

    def in_rows(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, row in enumerate(self.out):
            bit = 1 << u
            for v in iter_bits(row):
                rows[v] |= bit
        return tuple(rows)

    def degrees(self) -> list[int]:
        """Total (in + out) degree of each vertex."""
        ins = self.in_rows()
        return [popcount(self.out[v]) + popcount(ins[v]) for v in range(self.n)]

    def add_arc(self, arc: Arc) -> Digraph:
        u, v = arc
        _check_pair(self.n, u, v)
        if self.out[u] >> v & 1:
            raise GraphError(f"duplicate arc {u}->{v}")
        rows = list(self.out)
        rows[u] |= 1 << v
        return Digraph.trusted(self.n, tuple(rows))

    def missing_arcs(self) -> list[Arc]:
        """Every absent ordered pair (u, v), u != v, ascending."""
        full = (1 << self.n) - 1
        return [
            (u, v)
            for u, row in enumerate(self.out)
            for v in iter_bits(full & ~row & ~(1 << u))
        ]

    def permute(self, perm: Sequence[int]) -> Digraph:
        """Relabel vertex ``v`` as ``perm[v]``."""
        rows = [0] * self.n
        for u, row in enumerate(self.out):
            acc = 0
            for v in iter_bits(row):
                acc |= 1 << perm[v]
            rows[perm[u]] = acc
        return Digraph(self.n, tuple(rows))

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        lines += [f"{u} {v}" for u, v in self.arcs()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Digraph:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n "):
            raise GraphError("first line must be 'n <count>'")
        n = int(lines[0].split()[1])
        arcs = []
        for ln in lines[1:]:
            u, v = ln.split()
            arcs.append((int(u), int(v)))
        return cls.from_arcs(n, arcs)


@dataclass(frozen=True, slots=True)
class UGraph:
    """A simple undirected graph, stored as a symmetric adjacency bitset."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        for u, row in enumerate(self.adj):
            if row >> u & 1:
                raise GraphError(f"self-loop at {u}")
            for v in iter_bits(row):
                if v >= self.n or not self.adj[v] >> u & 1:
                    raise GraphError(f"asymmetric or out-of-range edge {u}-{v}")

    @classmethod
    def empty(cls, n: int) -> UGraph:
        return cls(n, (0,) * n)

    @classmethod
    def trusted(cls, n: int, adj: tuple[int, ...]) -> UGraph:
        """Build without validation; for hot loops that maintain symmetry."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> UGraph:
        rows = [0] * n
        for u, v in edges:
            _check_pair(n, u, v)
            if rows[u] >> v & 1:
                raise GraphError(f"duplicate edge {u}-{v}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def complete(cls, n: int) -> UGraph:
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def cycle(cls, n: int) -> UGraph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def __contains__(self, edge: object) -> bool:
        u, v = edge  # type: ignore[misc]
        return self.has_edge(u, v)

    def edges(self) -> list[Edge]:
        return [(u, v) for u, row in enumerate(self.adj) for v in iter_bits(row >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def degrees(self) -> list[int]:
        return [popcount(row) for row in self.adj]

    def add_edge(self, edge: Edge) -> UGraph:
        u, v = edge
        _check_pair(self.n, u, v)
        if self.adj[u] >> v & 1:
            raise GraphError(f"duplicate edge {u}-{v}")
        rows = list(self.adj)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return UGraph.trusted(self.n, tuple(rows))

    def missing_edges(self) -> list[Edge]:
        """Every absent pair (u, v) with u < v, ascending."""
        full = (1 << self.n) - 1
        out = []
        for u, row in enumerate(self.adj):
            above = full >> (u + 1) << (u + 1)
            out.extend((u, v) for v in iter_bits(above & ~row))
        return out

    def permute(self, perm: Sequence[int]) -> UGraph:
        rows = [0] * self.n
        for u, row in enumerate(self.adj):
            acc = 0
            for v in iter_bits(row):
                acc |= 1 << perm[v]
            rows[perm[u]] = acc
        return UGraph(self.n, tuple(rows))


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"endpoint out of range: ({u}, {v}) with n={n}")
    if u == v:
        raise GraphError(f"self-loop at {u}")


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# --------------------------------------------------------------------------
# canonical keys


def _encode(rows: Sequence[int], order: Sequence[int]) -> int:
    """Adjacency matrix of ``rows`` read in vertex order ``order``, as one int."""
    n = len(order)
    pos = [0] * len(rows)
    for i, v in enumerate(order):
        pos[v] = i
    code = 0
    for i, u in enumerate(order):
        row = rows[u]
        bits = 0
        for v in iter_bits(row):
            bits |= 1 << (n - 1 - pos[v])
        code = (code << n) | bits
    return code


def _rank(sig: list) -> list[int]:
    order = sorted(set(sig))
    index = {s: i for i, s in enumerate(order)}
    return [index[s] for s in sig]


def _cells(rows: Sequence[int]) -> list[list[int]]:
    """Partition vertices into colour-refinement classes, in class order.

    Starts from (out-degree, in-degree) and refines by the multiset of
    neighbour classes until stable.  Class numbers come from sorting the
    signatures, so the ordering is an isomorphism invariant.
    """
    n = len(rows)
    ins = [0] * n
    for u, row in enumerate(rows):
        for v in iter_bits(row):
            ins[v] |= 1 << u
    colour = _rank([(popcount(rows[v]), popcount(ins[v])) for v in range(n)])
    classes = len(set(colour))
    while True:
        sig = [
            (
                colour[v],
                tuple(sorted(colour[w] for w in iter_bits(rows[v]))),
                tuple(sorted(colour[w] for w in iter_bits(ins[v]))),
            )
            for v in range(n)
        ]
        colour = _rank(sig)
        refined = len(set(colour))
        if refined == classes:
            break
        classes = refined
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(colour[v], []).append(v)
    return [groups[c] for c in sorted(groups)]


def canonical_rows(rows: Sequence[int]) -> tuple[int, int]:
    """Canonical code of an adjacency tuple: ``(n, minimum encoding)``.

    The minimum is taken over every vertex order that lists vertices by
    descending invariant signature; isomorphic inputs therefore reach the same
    minimum, and the code determines the graph, so non-isomorphs differ.
    Vertices with no arcs at all are interchangeable and are not permuted.
    """
    n = len(rows)
    cells = _cells(rows)
    fixed: list[list[int]] = []
    movable: list[list[int]] = []
    layout: list[tuple[bool, int]] = []
    for cell in cells:
        isolated = all(rows[v] == 0 for v in cell) and not any(
            rows[u] >> v & 1 for u in range(n) for v in cell
        )
        if isolated or len(cell) == 1:
            layout.append((False, len(fixed)))
            fixed.append(cell)
        else:
            layout.append((True, len(movable)))
            movable.append(cell)
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in movable)):
        order: list[int] = []
        for is_movable, idx in layout:
            order.extend(choice[idx] if is_movable else fixed[idx])
        code = _encode(rows, order)
        if best is None or code < best:
            best = code
    return (n, best if best is not None else 0)


def _refine(rows: Sequence[int], ins: Sequence[int], colour: list[int]) -> list[int]:
    classes = len(set(colour))
    while True:
        colour = _rank([
            (
                colour[v],
                tuple(sorted(colour[w] for w in iter_bits(rows[v]))),
                tuple(sorted(colour[w] for w in iter_bits(ins[v]))),
            )
            for v in range(len(rows))
        ])
        refined = len(set(colour))
        if refined == classes:
            return colour
        classes = refined


def canonical_order(rows: Sequence[int], anchors: Sequence[int] = ()) -> tuple[list[int], int]:
    """Canonical vertex order of a digraph with distinguished vertices.

    ``anchors`` are placed first, in the given order.  The rest are ordered
    by individualisation and refinement, keeping the order whose adjacency
    code is smallest.  Returns ``(order, code)``: two inputs share a code
    exactly when some isomorphism maps anchors to anchors in order, and
    reading both in their returned orders realises such an isomorphism.
    Twins (equal in- and out-neighbourhoods) are interchangeable, so only
    one of each twin class is branched on.
    """
    n = len(rows)
    ins = [0] * n
    for u, row in enumerate(rows):
        for v in iter_bits(row):
            ins[v] |= 1 << u
    # vertices with equal in- and out-rows are swapped by an automorphism
    twin = [(rows[v], ins[v]) for v in range(n)]
    tag = {a: i for i, a in enumerate(anchors)}
    start = _rank([(0, tag[v]) if v in tag else (1, popcount(rows[v]), popcount(ins[v]))
                   for v in range(n)])
    # leaves as (code, order, individualised vertices): the first one found
    # and the smallest so far
    first: tuple[int, list[int], list[int]] | None = None
    best: tuple[int, list[int], list[int]] | None = None
    path: list[int] = []

    def walk(colour: list[int]) -> int | None:
        # returns a depth to jump back to, or None to carry on
        nonlocal first, best
        colour = _refine(rows, ins, colour)
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(colour[v], []).append(v)
        depth = len(path)
        for c in sorted(groups):
            cell = groups[c]
            reps = {twin[v]: v for v in reversed(cell)}
            if len(reps) > 1:
                for v in sorted(reps.values()):
                    path.append(v)
                    back = walk([2 * colour[w] + (w != v) for w in range(n)])
                    path.pop()
                    if back is not None and back < depth:
                        return back
                return None
        order = [v for c in sorted(groups) for v in groups[c]]
        code = _encode(rows, order)
        if first is None or best is None:
            first = best = (code, order, list(path))
            return None
        for seen in (first, best):
            if code == seen[0]:
                # the two leaves differ by an automorphism fixing their common
                # prefix, so the rest of this branch repeats an earlier one
                same = 0
                while same < depth and path[same] == seen[2][same]:
                    same += 1
                return same
        if code < best[0]:
            best = (code, order, list(path))
        return None

    walk(start)
    assert best is not None
    return best[1], best[0]


def canonical_key(g: Digraph | UGraph) -> tuple:
    """Isomorphism-invariant key for ``g``.

    For ``g.n <= CANON_LIMIT`` isomorphic graphs share a key and
    non-isomorphic graphs on the same vertex count do not.  Above the limit
    the raw adjacency is returned (tagged ``"raw"``), so isomorphs are not
    merged.
    """
    rows = g.out if isinstance(g, Digraph) else g.adj
    kind = "d" if isinstance(g, Digraph) else "u"
    if g.n > CANON_LIMIT:
        return (kind, "raw", g.n, rows)
    return (kind,) + canonical_rows(rows)
