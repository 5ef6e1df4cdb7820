"""Exact k-colouring by DSATUR backtracking on adjacency bitsets."""

from __future__ import annotations

import sys
from typing import Sequence

from .graph import iter_bits, popcount


def _peel(adj: Sequence[int], k: int) -> tuple[int, list[int]]:
    """Strip vertices of degree < k, repeatedly.

    Returns the bitmask of the remaining core and the removal order.  A
    k-colouring of the core always extends to the peeled vertices, since each
    one had fewer than k neighbours left when it was removed.
    """
    n = len(adj)
    alive = (1 << n) - 1
    deg = [popcount(row) for row in adj]
    stack = [v for v in range(n) if deg[v] < k]
    queued = 0
    for v in stack:
        queued |= 1 << v
    removed = []
    while stack:
        v = stack.pop()
        alive &= ~(1 << v)
        removed.append(v)
        for w in iter_bits(adj[v] & alive):
            deg[w] -= 1
            if deg[w] < k and not queued >> w & 1:
                queued |= 1 << w
                stack.append(w)
    return alive, removed


def k_colouring(adj: Sequence[int], k: int) -> list[int] | None:
    """Return a proper colouring with colours ``0..k-1``, or ``None`` if none exists.

    Branching picks the uncoloured vertex with the most distinct neighbour
    colours, breaking ties by lowest index.  A vertex may open at most one
    previously unused colour, which removes colour-permutation symmetry.
    """
    n = len(adj)
    if n == 0:
        return []
    if k <= 0:
        return None
    core, removed = _peel(adj, k)
    colour = [-1] * n
    if core:
        if not _colour_core(adj, k, core, colour):
            return None
    for v in reversed(removed):
        used = 0
        for w in iter_bits(adj[v]):
            if colour[w] >= 0:
                used |= 1 << colour[w]
        c = 0
        while used >> c & 1:
            c += 1
        colour[v] = c
    return colour


def _colour_core(adj: Sequence[int], k: int, core: int, colour: list[int]) -> bool:
    full = (1 << k) - 1
    forb = [0] * len(adj)
    need = popcount(core) + 64
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)

    def pick(uncol: int) -> int:
        best, best_sat = -1, -1
        for v in iter_bits(uncol):
            sat = popcount(forb[v])
            if sat > best_sat:
                best, best_sat = v, sat
                if sat == k:
                    break
        return best

    def search(uncol: int, opened: int) -> bool:
        if not uncol:
            return True
        v = pick(uncol)
        limit = (1 << min(k, opened + 1)) - 1
        avail = ~forb[v] & limit
        rest = uncol & ~(1 << v)
        nbrs = adj[v] & rest
        for c in iter_bits(avail):
            bit = 1 << c
            colour[v] = c
            touched = []
            dead = False
            for w in iter_bits(nbrs):
                if not forb[w] & bit:
                    forb[w] |= bit
                    touched.append(w)
                    if forb[w] == full:
                        dead = True
            if not dead and search(rest, max(opened, c + 1)):
                return True
            for w in touched:
                forb[w] &= ~bit
        colour[v] = -1
        return False

    return search(core, 0)


def is_proper(adj: Sequence[int], colour: Sequence[int]) -> bool:
    for u, row in enumerate(adj):
        for v in iter_bits(row):
            if colour[u] == colour[v]:
                return False
    return True
