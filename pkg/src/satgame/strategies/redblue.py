"""Red/Blue degree-ratio strategies for the biased orientation game.

Both players colour the edges of ``K_n`` in their head: Red edges are the
ones they want to see, Blue the rest.  Each keeps a per-vertex ratio between
Red and Blue degrees by answering the opponent's edges at the touched
vertices, and spends leftover turns on Red (Prolonger) or Blue (Shortener)
edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from ..engine import GameState, Kind, Move, Player, current_player, is_legal
from .base import Strategy, greedy_move

Pair = tuple[int, int]


def lambda_minus(a: int, b: int) -> Fraction:
    c = b // (2 * a)
    return Fraction(c, 1 + c)


def lambda_plus(a: int, b: int) -> Fraction:
    return Fraction(1, 1 + a // (2 * b))


@dataclass
class RedBlueLedger:
    """Per-vertex Red/Blue degrees as seen by one player.

    ``group[v]`` is the index of ``v``'s target set (Prolonger) or 0/1 for
    outside/inside the pivot set ``S`` (Shortener).
    """

    role: Player
    ratio: int
    group: list[int]
    d_red: list[int]
    d_blue: list[int]
    trace: list[str] = field(default_factory=list)

    def is_red(self, u: int, v: int) -> bool:
        if self.role is Player.PROLONGER:
            return self.group[u] == self.group[v]
        return self.group[u] != self.group[v]

    def record(self, u: int, v: int) -> None:
        if self.is_red(u, v):
            self.d_red[u] += 1
            self.d_red[v] += 1
        else:
            self.d_blue[u] += 1
            self.d_blue[v] += 1


class _PairCursor:
    """Ascending scan over pairs ``u < v``; skipped pairs are never revisited.

    Sound because a present edge stays present and an illegal edge stays
    illegal as the board grows.
    """

    def __init__(self, n: int, allowed: list[bool] | None = None):
        self.n = n
        self.allowed = allowed
        self.u, self.v = 0, 1

    def next_legal(self, s: GameState) -> Pair | None:
        n, ok = self.n, self.allowed
        adj = s.board.adj  # type: ignore[union-attr]
        while self.u < n - 1:
            u, v = self.u, self.v
            if v >= n:
                self.u, self.v = u + 1, u + 2
                continue
            if (ok is None or (ok[u] and ok[v])) and not adj[u] >> v & 1 and is_legal(s, (u, v)):
                return (u, v)
            self.v = v + 1
        return None


def _partition(n: int, size: int) -> list[list[int]]:
    count = -(-n // size)
    base, extra = divmod(n, count)
    sets, start = [], 0
    for i in range(count):
        width = base + (i < extra)
        sets.append(list(range(start, start + width)))
        start += width
    return sets


class _RedBlueBase(Strategy):
    def __init__(self) -> None:
        super().__init__()
        self.ledger: RedBlueLedger | None = None
        self.watch: list[int] = []
        self.dirty: set[int] = set()
        self.checkpoints = 0

    def _common_reset(self, state: GameState) -> None:
        if state.config.kind is not Kind.ORIENTATION:
            raise ValueError(f"{self.name} plays the orientation game only")
        self.watch = []
        self.dirty = set()
        self.checkpoints = 0

    def observe(self, before: GameState, move: Move, after: GameState) -> None:
        led = self.ledger
        assert led is not None
        led.record(move.u, move.v)
        self.dirty.update((move.u, move.v))
        if move.player is not self.player:
            for w in (move.u, move.v):
                if w not in self.watch:
                    self.watch.append(w)
        elif current_player(after) is not self.player:
            self._checkpoint(after)

    def finish(self, state: GameState) -> None:
        # the game may end inside this player's block
        if self.dirty:
            self._checkpoint(state)

    def _checkpoint(self, s: GameState) -> None:
        raise NotImplementedError


class OrientProlongerRB(_RedBlueBase):
    """Grow disjoint cliques on fixed vertex sets, matching Shortener's edges with Red ones."""

    name = "orient-prolonger-rb"

    def __init__(self, set_size: int | None = None) -> None:
        super().__init__()
        self.set_size_override = set_size
        self.sets: list[list[int]] = []
        self.set_size = 0
        self.red_cursor = 0
        self.red_edges: list[Pair] = []
        self.blue = _PairCursor(1)
        self.degenerate = False

    def reset(self, state: GameState) -> None:
        self._common_reset(state)
        cfg = state.config
        a, b, k = cfg.a, cfg.b, cfg.k
        c = a // (2 * b)
        self.degenerate = c == 0
        size = self.set_size_override
        if size is None:
            size = floor(k * lambda_minus(a, b)) - a - 1
        self.set_size = max(size, 2)
        self.sets = _partition(cfg.n, self.set_size)
        group = [0] * cfg.n
        for i, members in enumerate(self.sets):
            for v in members:
                group[v] = i
        self.ledger = RedBlueLedger(Player.PROLONGER, c, group, [0] * cfg.n, [0] * cfg.n)
        self.red_edges = [(u, v) for members in self.sets
                          for i, u in enumerate(members) for v in members[i + 1:]]
        self.red_edges.sort()
        self.red_cursor = 0
        self.blue = _PairCursor(cfg.n)

    def _open_red(self, s: GameState, v: int) -> Pair | None:
        led = self.ledger
        assert led is not None
        adj = s.board.adj  # type: ignore[union-attr]
        for w in self.sets[led.group[v]]:
            if w != v and not adj[v] >> w & 1:
                pair = (min(v, w), max(v, w))
                if is_legal(s, pair):
                    return pair
        return None

    def _short(self, v: int) -> bool:
        led = self.ledger
        assert led is not None
        return led.d_red[v] < led.ratio * led.d_blue[v]

    def choose(self, state: GameState) -> Pair:
        led = self.ledger
        assert led is not None
        if not self.degenerate:
            while self.watch:
                v = self.watch[0]
                if self._short(v):
                    pair = self._open_red(state, v)
                    if pair is not None:
                        return pair
                self.watch.pop(0)
        adj = state.board.adj  # type: ignore[union-attr]
        while self.red_cursor < len(self.red_edges):
            u, v = self.red_edges[self.red_cursor]
            if not adj[u] >> v & 1:
                if is_legal(state, (u, v)):
                    return (u, v)
                led.trace.append(f"move {state.moves_made}: Red edge {u}-{v} blocked")
            self.red_cursor += 1
        pair = self.blue.next_legal(state)
        return pair if pair is not None else greedy_move(state)

    def _checkpoint(self, s: GameState) -> None:
        self.checkpoints += 1
        for v in sorted(self.dirty):
            if self._short(v) and self._open_red(s, v) is not None:
                led = self.ledger
                assert led is not None
                self.flag(f"move {s.moves_made}: vertex {v} has d_red={led.d_red[v]} "
                          f"< {led.ratio}*d_blue={led.d_blue[v]} with Red edges still open")
        self.dirty.clear()

    def clique_report(self, s: GameState) -> tuple[bool, int]:
        """Whether every target set is a clique on the board, and the smallest set size."""
        adj = s.board.adj  # type: ignore[union-attr]
        ok = True
        for members in self.sets:
            mask = 0
            for v in members:
                mask |= 1 << v
            for v in members:
                if (adj[v] | (1 << v)) & mask != mask:
                    ok = False
        return ok, min(len(m) for m in self.sets)


class OrientShortenerRB(_RedBlueBase):
    """Turn a small pivot set into a clique, then keep outside vertices Blue-heavy."""

    name = "orient-shortener-rb"

    def __init__(self, pivot_size: int | None = None) -> None:
        super().__init__()
        self.pivot_size_override = pivot_size
        self.pivot: list[int] = []
        self.pivot_size = 0
        self.phase = 1
        self.discard: set[int] = set()
        self.blue = _PairCursor(1)
        self.degenerate = False

    def reset(self, state: GameState) -> None:
        self._common_reset(state)
        cfg = state.config
        a, b, k = cfg.a, cfg.b, cfg.k
        c = b // (2 * a)
        self.degenerate = c == 0
        size = self.pivot_size_override
        if size is None:
            size = floor((1 - lambda_plus(a, b)) * k) - b - 1
        self.pivot_size = max(size, 0)
        self.pivot = []
        self.phase = 1
        self.discard = set()
        self.ledger = RedBlueLedger(Player.SHORTENER, c, [0] * cfg.n, [0] * cfg.n, [0] * cfg.n)
        self.blue = _PairCursor(cfg.n)

    def _pick_pivot(self, s: GameState) -> None:
        adj = s.board.adj  # type: ignore[union-attr]
        self.pivot = [v for v in range(s.config.n) if not adj[v]][: self.pivot_size]
        led = self.ledger
        assert led is not None
        for v in self.pivot:
            led.group[v] = 1
        # degrees so far were all counted as Blue
        for v in range(s.config.n):
            led.d_red[v] = led.d_blue[v] = 0
        for u in range(s.config.n):
            row = adj[u]
            for w in range(u + 1, s.config.n):
                if row >> w & 1:
                    led.record(u, w)
        self.blue = _PairCursor(s.config.n, [g == 0 for g in led.group])
        self.discard = {v for v in range(s.config.n) if adj[v] and led.group[v] == 0}

    def _missing_pivot_edge(self, s: GameState) -> Pair | None:
        adj = s.board.adj  # type: ignore[union-attr]
        for i, u in enumerate(self.pivot):
            for v in self.pivot[i + 1:]:
                if not adj[u] >> v & 1 and is_legal(s, (u, v)):
                    return (min(u, v), max(u, v))
        return None

    def _open_blue(self, s: GameState, v: int) -> Pair | None:
        led = self.ledger
        assert led is not None
        adj = s.board.adj  # type: ignore[union-attr]
        for w in range(s.config.n):
            if w != v and led.group[w] == 0 and not adj[v] >> w & 1:
                pair = (min(v, w), max(v, w))
                if is_legal(s, pair):
                    return pair
        return None

    def _short(self, v: int) -> bool:
        led = self.ledger
        assert led is not None
        return led.group[v] == 0 and led.d_blue[v] < led.ratio * led.d_red[v]

    def choose(self, state: GameState) -> Pair:
        if self.phase == 1:
            if not self.pivot and self.pivot_size:
                self._pick_pivot(state)
            pair = self._missing_pivot_edge(state)
            if pair is not None:
                return pair
            self.phase = 2
            adj = state.board.adj  # type: ignore[union-attr]
            led = self.ledger
            assert led is not None
            self.discard |= {v for v in range(state.config.n) if adj[v] and led.group[v] == 0}
            self.watch = []
        if not self.degenerate:
            while self.watch:
                v = self.watch[0]
                if v not in self.discard and self._short(v):
                    pair = self._open_blue(state, v)
                    if pair is not None:
                        return pair
                self.watch.pop(0)
        pair = self.blue.next_legal(state)
        return pair if pair is not None else greedy_move(state)

    def _checkpoint(self, s: GameState) -> None:
        if self.phase == 1:
            self.dirty.clear()
            return
        self.checkpoints += 1
        led = self.ledger
        assert led is not None
        for v in sorted(self.dirty):
            if v in self.discard or not self._short(v):
                continue
            if self._open_blue(s, v) is None:
                led.trace.append(f"move {s.moves_made}: vertex {v} has no Blue edge left")
                continue
            self.flag(f"move {s.moves_made}: vertex {v} has d_blue={led.d_blue[v]} "
                      f"< {led.ratio}*d_red={led.d_red[v]}")
        self.dirty.clear()

    def pivot_singletons(self, s: GameState) -> bool:
        """True when every pivot vertex is adjacent to all other vertices."""
        adj = s.board.adj  # type: ignore[union-attr]
        full = (1 << s.config.n) - 1
        return all(adj[v] | (1 << v) == full for v in self.pivot)
