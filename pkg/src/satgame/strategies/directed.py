"""Strategies for the directed walk-avoiding game.

Indices into a path list are 0-based: ``path[i]`` is the vertex written
``v_{i+1}`` in the usual numbering, so ``v_{k-2}`` is ``path[k - 3]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..engine import GameState, Move, is_legal
from ..graph import iter_bits
from .base import SYMMETRIC_LIMIT, Strategy, greedy_move, symmetric_move
from .scores import CLOSE_AT, StructKind

Pair = tuple[int, int]


def touched_mask(out: tuple[int, ...]) -> int:
    """Bitmask of vertices with positive degree."""
    acc = 0
    for u, row in enumerate(out):
        if row:
            acc |= row | (1 << u)
    return acc


def lowest_isolated(s: GameState, skip: int = 0) -> int | None:
    free = ((1 << s.config.n) - 1) & ~touched_mask(s.board.out) & ~skip  # type: ignore[union-attr]
    if not free:
        return None
    return (free & -free).bit_length() - 1


def component_mask(out: tuple[int, ...], start: int) -> int:
    n = len(out)
    und = list(out)
    for u, row in enumerate(out):
        for v in iter_bits(row):
            und[v] |= 1 << u
    seen = 1 << start
    todo = [start]
    while todo:
        u = todo.pop()
        for v in iter_bits(und[u] & ~seen):
            seen |= 1 << v
            todo.append(v)
    return seen & ((1 << n) - 1)


@dataclass(frozen=True)
class Seen:
    """An opponent move plus which endpoints had degree 0 just before it."""

    u: int
    v: int
    iso_u: bool
    iso_v: bool


def _seen(before: GameState, move: Move) -> Seen:
    t = touched_mask(before.board.out)  # type: ignore[union-attr]
    return Seen(move.u, move.v, not t >> move.u & 1, not t >> move.v & 1)


class PathBuilder:
    """Shared opening: grow a directed path to ``k - 1`` vertices.

    Each opponent move is absorbed into the path where possible, and the path
    is otherwise lengthened by hanging a fresh vertex off its last vertex.
    At most one vertex off the path is left with positive degree.
    """

    def __init__(self, k: int):
        self.k = k
        self.path: list[int] = []
        self.extra: int | None = None

    @property
    def done(self) -> bool:
        return len(self.path) >= self.k - 1

    def copy(self) -> PathBuilder:
        other = PathBuilder(self.k)
        other.path = list(self.path)
        other.extra = self.extra
        return other

    def _attach(self, s: GameState, path: list[int]):
        if len(path) >= self.k - 1:
            return None
        w = lowest_isolated(s)
        if w is None:
            return None
        return (path[-1], w), path + [w], self.extra

    def _fresh(self, s: GameState):
        w1 = lowest_isolated(s)
        if w1 is None:
            return None
        w2 = lowest_isolated(s, 1 << w1)
        if w2 is None:
            return None
        return (w1, w2), [w1, w2], self.extra

    def plan(self, s: GameState, opp: Seen | None):
        """``(pair, new_path, new_extra)`` answering ``opp``, or ``None`` if the path is complete."""
        k = self.k
        path = self.path
        if opp is None:
            if not path:
                return self._fresh(s)
            return self._attach(s, path)
        x, y = opp.u, opp.v
        if not path:
            if opp.iso_u and opp.iso_v:
                return self._attach(s, [x, y]) or (None, [x, y], self.extra)
            return self._fresh(s)
        n_path = len(path)
        if opp.iso_u and opp.iso_v:
            if n_path <= k - 3:
                return (path[-1], x), path + [x, y], self.extra
            # hang the new arc after v_{k-3}; the old last vertex becomes the spare
            return (path[k - 4], x), path[: k - 3] + [x, y], path[k - 3]
        on_x, on_y = x in path, y in path
        if on_x and opp.iso_v:
            if x == path[-1]:
                grown = path + [y]
                return self._attach(s, grown) or (None, grown, self.extra)
            return (path[-1], y), path + [y], self.extra
        if opp.iso_u and on_y:
            if y == path[0]:
                grown = [x] + path
                return self._attach(s, grown) or (None, grown, self.extra)
            return (x, path[0]), [x] + path, self.extra
        return self._attach(s, path)


def off_path_touched(s: GameState, path: list[int]) -> list[int]:
    t = touched_mask(s.board.out)  # type: ignore[union-attr]
    for v in path:
        t &= ~(1 << v)
    return list(iter_bits(t))


# --------------------------------------------------------------------------
# Shortener


class ShortenerPath(Strategy):
    """Build a path on ``k - 1`` vertices, then pin every new vertex to an end class."""

    name = "shortener-path"

    def __init__(self) -> None:
        super().__init__()
        self.builder = PathBuilder(4)
        self.n = 0
        self.pending: list[Seen] = []
        self._plan: tuple | None = None
        self.fallbacks = 0

    def reset(self, state: GameState) -> None:
        k = state.config.k
        if k < 4:
            raise ValueError("the path strategy needs k >= 4")
        self.builder = PathBuilder(k)
        self.n = state.config.n
        self.pending = []
        self._plan = None
        self.fallbacks = 0

    @property
    def path(self) -> list[int]:
        return self.builder.path

    def key(self) -> tuple:
        return (tuple(self.builder.path), self.builder.extra, tuple(self.pending))

    def anchors(self) -> list[int] | None:
        if self.n > SYMMETRIC_LIMIT:
            return None
        b = self.builder
        out = list(b.path)
        if b.extra is not None:
            out.append(b.extra)
        for seen in self.pending:
            out.extend(w for w in (seen.u, seen.v) if w not in out)
        return out

    def relabelled_key(self, pos: list[int]) -> tuple:
        b = self.builder
        return (
            tuple(pos[v] for v in b.path),
            None if b.extra is None else pos[b.extra],
            tuple((pos[p.u], pos[p.v], p.iso_u, p.iso_v) for p in self.pending),
        )

    def clone(self) -> ShortenerPath:
        other = ShortenerPath.__new__(ShortenerPath)
        other.player, other.rng = self.player, self.rng
        other.violations = list(self.violations)
        other.builder = self.builder.copy()
        other.pending = list(self.pending)
        other._plan = self._plan
        other.fallbacks = self.fallbacks
        other.n = self.n
        return other

    def _pinning_reply(self, s: GameState, opp: Seen | None) -> Pair | None:
        k = self.builder.k
        path = self.builder.path
        board = s.board.out  # type: ignore[union-attr]
        if opp is not None:
            comp = component_mask(board, path[0])
            in_u, in_v = comp >> opp.u & 1, comp >> opp.v & 1
            reply = None
            if opp.iso_u and opp.iso_v:
                reply = (path[k - 4], opp.u)
            elif in_u and opp.iso_v:
                reply = (path[k - 3], opp.v)
            elif opp.iso_u and in_v:
                reply = (opp.u, path[1])
            if reply is not None and not board[reply[0]] >> reply[1] & 1:
                return reply
        w = lowest_isolated(s)
        if w is None:
            return None
        return (path[k - 3], w)

    def choose(self, state: GameState) -> Pair:
        opp = self.pending.pop(0) if self.pending else None
        b = self.builder
        pair = None
        self._plan = None
        if not b.done:
            plan = b.plan(state, opp)
            if plan is not None and plan[0] is None:
                # the opponent's move finished the path
                b.path, b.extra = plan[1], plan[2]
                if b.done:
                    self._check_opening(state)
            elif plan is not None:
                pair = plan[0]
                self._plan = plan
        if pair is None and b.done:
            pair = self._pinning_reply(state, opp)
        if pair is None or not is_legal(state, pair):
            # no rule applies; any move will do, but pick it by board shape
            # rather than by label so that isomorphic games stay isomorphic
            self._plan = None
            self.fallbacks += 1
            pair = symmetric_move(state, self.anchors() or [])
        return pair

    def observe(self, before: GameState, move: Move, after: GameState) -> None:
        if move.player is not self.player:
            self.pending.append(_seen(before, move))
            if len(self.pending) > 1:
                self.pending = self.pending[-1:]
            return
        b = self.builder
        plan, self._plan = self._plan, None
        if plan is not None:
            b.path, b.extra = plan[1], plan[2]
            if b.done:
                self._check_opening(after)
        elif b.done:
            self._check_pinned(after)

    def _check_opening(self, s: GameState) -> None:
        extra = off_path_touched(s, self.builder.path)
        if len(extra) > 1:
            self.flag(f"opening left {len(extra)} off-path vertices touched: {extra}")

    def _check_pinned(self, s: GameState) -> None:
        k = self.builder.k
        prof = s.profile
        comp = component_mask(s.board.out, self.builder.path[0])  # type: ignore[union-attr]
        loose = [v for v in iter_bits(comp) if prof.ending[v] + prof.starting[v] - 1 < k - 1]
        if len(loose) > 1:
            self.flag(f"move {s.moves_made}: {len(loose)} vertices of C without a fixed class: {loose}")
        elif loose and prof.ending[loose[0]] < k - 2:
            self.flag(f"move {s.moves_made}: vertex {loose[0]} may still land below class {k - 2}")


# --------------------------------------------------------------------------
# Prolonger, k = 3


class ProlongerK3(Strategy):
    """Keep the source and sink sides within one vertex of each other."""

    name = "prolonger-k3"

    def clone(self) -> ProlongerK3:
        other = ProlongerK3()
        other.player, other.rng = self.player, self.rng
        other.violations = list(self.violations)
        return other

    @staticmethod
    def sides(s: GameState) -> tuple[int, int]:
        out = s.board.out  # type: ignore[union-attr]
        g1 = 0
        g2 = 0
        for u, row in enumerate(out):
            if row:
                g1 |= 1 << u
                g2 |= row
        return g1, g2

    def choose(self, state: GameState) -> Pair:
        g1, g2 = self.sides(state)
        n1, n2 = g1.bit_count(), g2.bit_count()
        w = lowest_isolated(state)
        if w is not None and n1 != n2:
            if n1 < n2:
                options = [(w, t) for t in iter_bits(g2)]
            else:
                options = [(t, w) for t in iter_bits(g1)]
            for pair in options:
                if is_legal(state, pair):
                    return pair
        if w is not None and n1 == n2:
            w2 = lowest_isolated(state, 1 << w)
            if w2 is not None:
                return (w, w2)
        return greedy_move(state)

    def observe(self, before: GameState, move: Move, after: GameState) -> None:
        if move.player is self.player:
            g1, g2 = self.sides(after)
            gap = abs(g1.bit_count() - g2.bit_count())
            if gap > 1:
                self.flag(f"move {after.moves_made}: sides differ by {gap}")


# --------------------------------------------------------------------------
# Prolonger, k >= 4


@dataclass
class StructureRecord:
    """A directed path on ``lam + 1`` vertices plus the loose vertices charged to it."""

    kind: StructKind
    lam: int
    path_vertices: list[int]
    off_path_vertices: set[int] = field(default_factory=set)
    closed: bool = False

    @property
    def budget(self) -> int:
        return self.lam - self.kind.value

    def done(self) -> bool:
        return self.lam >= CLOSE_AT[self.kind]


def _blocked_kind(s: GameState, path: list[int]) -> StructKind:
    k = s.config.k
    prof = s.profile
    blocked = int(prof.ending[path[-1]] >= k - 1) + int(prof.starting[path[0]] >= k - 1)
    return StructKind(blocked)


def _is_path_on(s: GameState, path: list[int]) -> bool:
    out = s.board.out  # type: ignore[union-attr]
    return all(out[a] >> b & 1 for a, b in zip(path, path[1:])) and len(set(path)) == len(path)


class ProlongerStructure(Strategy):
    """Open with a ``(k-1)``-vertex path, then tile the rest with short structures.

    Each structure is a directed path that is grown one vertex per move,
    swallowing any vertex Shortener touches when it can, until it is good
    enough to close (``A_6``, ``B_3`` or ``C_2``) or can no longer grow.
    """

    name = "prolonger-structure"

    def __init__(self) -> None:
        super().__init__()
        self.builder = PathBuilder(4)
        self.records: list[StructureRecord] = []
        self.cur: StructureRecord | None = None
        self.discard: set[int] = set()
        self.pending: list[Seen] = []
        self.fresh: list[int] = []
        self._plan: tuple | None = None
        self.endgame = False
        self.discards_this_pair = 0
        self.starved = 0
        self.log: list[str] = []

    def reset(self, state: GameState) -> None:
        k = state.config.k
        if k < 4:
            raise ValueError("the structure strategy needs k >= 4")
        self.builder = PathBuilder(k)
        self.records = []
        self.cur = None
        self.discard = set()
        self.pending = []
        self.fresh = []
        self._plan = None
        self.endgame = False
        self.discards_this_pair = 0
        self.starved = 0
        self.log = []

    # ------------------------------------------------------------------
    # bookkeeping of Shortener's moves

    def _owned(self) -> set[int]:
        owned = set(self.builder.path) | self.discard
        if self.builder.extra is not None:
            owned.add(self.builder.extra)
        for r in self.records:
            owned.update(r.path_vertices)
            owned.update(r.off_path_vertices)
        return owned

    def _take_in(self, s: GameState) -> None:
        """Fold Shortener's recent moves into the records before moving."""
        self.discards_this_pair = 0
        owned = self._owned()
        cur = self.cur
        self.fresh = []
        for seen in self.pending:
            new = [w for w, iso in ((seen.u, seen.iso_u), (seen.v, seen.iso_v)) if iso and w not in owned]
            if cur is not None and not cur.closed:
                if seen.u == cur.path_vertices[-1] and seen.v in new:
                    cur.path_vertices.append(seen.v)
                    new.remove(seen.v)
                    owned.add(seen.v)
                elif seen.v == cur.path_vertices[0] and seen.u in new:
                    cur.path_vertices.insert(0, seen.u)
                    new.remove(seen.u)
                    owned.add(seen.u)
                cur.lam = len(cur.path_vertices) - 1
            self.fresh.extend(new)
            owned.update(new)
        self.pending = []

    # ------------------------------------------------------------------
    # move choice

    def _extensions(self, s: GameState, cur: StructureRecord) -> list[tuple[Pair, list[int], list[int]]]:
        """Candidate moves ``(pair, new_path, absorbed)`` in preference order."""
        k = s.config.k
        path = cur.path_vertices
        head, tail = path[-1], path[0]
        out = s.board.out  # type: ignore[union-attr]
        opts: list[tuple[Pair, list[int], list[int]]] = []
        fresh = [w for w in self.fresh if w not in path]
        # an isolated arc from Shortener: take both ends
        for x in fresh:
            for y in fresh:
                if x != y and out[x] >> y & 1:
                    opts.append(((head, x), path + [x, y], [x, y]))
                    opts.append(((y, tail), [x, y] + path, [x, y]))
        for w in fresh:
            opts.append(((head, w), path + [w], [w]))
            opts.append(((w, tail), [w] + path, [w]))
        if len(path) == k - 2:
            for w in sorted(cur.off_path_vertices):
                opts.append(((head, w), path + [w], [w]))
                opts.append(((w, tail), [w] + path, [w]))
        w = lowest_isolated(s)
        if w is not None:
            opts.append(((head, w), path + [w], [w]))
            opts.append(((w, tail), [w] + path, [w]))
        return opts

    def _open_new(self, s: GameState):
        # adopt an isolated arc Shortener just played, else lay a fresh one
        out = s.board.out  # type: ignore[union-attr]
        for x in self.fresh:
            for y in self.fresh:
                if x != y and out[x] >> y & 1:
                    rec = StructureRecord(StructKind.A, 1, [x, y])
                    rec.kind = _blocked_kind(s, rec.path_vertices)
                    return rec, None
        w1 = lowest_isolated(s)
        if w1 is None:
            return None, None
        w2 = lowest_isolated(s, 1 << w1)
        if w2 is None:
            return None, None
        return StructureRecord(StructKind.A, 1, [w1, w2]), (w1, w2)

    def choose(self, state: GameState) -> Pair:
        self._plan = None
        b = self.builder
        if not b.done:
            opp = self.pending[-1] if self.pending else None
            self.pending = []
            plan = b.plan(state, opp)
            if plan is not None and plan[0] is None:
                b.path, b.extra = plan[1], plan[2]
                if not b.done:
                    return greedy_move(state)
                self._check_opening(state)
            elif plan is not None and is_legal(state, plan[0]):
                self._plan = ("open", plan)
                return plan[0]
            else:
                return greedy_move(state)
        if self.endgame:
            return greedy_move(state)
        self._take_in(state)
        return self._structure_move(state)

    def _structure_move(self, state: GameState) -> Pair:
        cur = self.cur
        before = (cur.kind, cur.lam) if cur is not None else None
        if cur is not None:
            cur.kind = StructKind(max(cur.kind.value, _blocked_kind(state, cur.path_vertices).value))
            for pair, path, absorbed in self._extensions(state, cur):
                if is_legal(state, pair):
                    self._plan = ("grow", cur, pair, path, absorbed, before)
                    return pair
            # nothing to grow into: close and start over, handing back what
            # the promoted kind no longer has room for
            cur.closed = True
            self._trim(cur)
            self.starved += 1
            self.log.append(f"structure {self.records.index(cur)} closed unfinished at lambda={cur.lam}")
            self.cur = None
        rec, pair = self._open_new(state)
        if rec is None:
            self.endgame = True
            self._settle_fresh([])
            return greedy_move(state)
        self.records.append(rec)
        self.cur = rec
        if pair is None:
            # adopted Shortener's arc for free; grow it this turn
            self.fresh = [w for w in self.fresh if w not in rec.path_vertices]
            return self._structure_move(state)
        self._plan = ("new", rec, pair)
        return pair

    # ------------------------------------------------------------------
    # after the move

    def _settle_fresh(self, absorbed: list[int]) -> None:
        cur = self.cur
        for w in self.fresh:
            if w in absorbed:
                continue
            if cur is not None and len(cur.off_path_vertices) < cur.budget:
                cur.off_path_vertices.add(w)
            else:
                self.discard.add(w)
                self.discards_this_pair += 1
        self.fresh = []

    def _trim(self, rec: StructureRecord) -> None:
        while len(rec.off_path_vertices) > max(rec.budget, 0):
            w = max(rec.off_path_vertices)
            rec.off_path_vertices.discard(w)
            self.discard.add(w)
            self.discards_this_pair += 1

    def observe(self, before: GameState, move: Move, after: GameState) -> None:
        if move.player is not self.player:
            self.pending.append(_seen(before, move))
            return
        plan, self._plan = self._plan, None
        if plan is None:
            return
        if plan[0] == "open":
            b = self.builder
            b.path, b.extra = plan[1][1], plan[1][2]
            if b.done:
                self._check_opening(after)
            return
        if plan[0] == "new":
            rec = plan[1]
            self._settle_fresh(rec.path_vertices)
        else:
            _, rec, pair, path, absorbed, was = plan
            lam_before = len(rec.path_vertices) - 1
            rec.path_vertices = path
            rec.lam = len(path) - 1
            rec.off_path_vertices -= set(absorbed)
            if rec.lam != lam_before + len(absorbed):
                self.flag(f"move {after.moves_made}: lambda {lam_before}->{rec.lam} "
                          f"after absorbing {len(absorbed)}")
            self._settle_fresh(absorbed)
            if was is not None and rec.kind.value > was[0].value and rec.lam < was[1] + 1:
                self.flag(f"move {after.moves_made}: {was[0].name}_{was[1]} became "
                          f"{rec.kind.name}_{rec.lam}")
        rec.kind = StructKind(max(rec.kind.value, _blocked_kind(after, rec.path_vertices).value))
        self._trim(rec)
        self._check_record(after, rec)
        if self.discards_this_pair > 2:
            self.flag(f"move {after.moves_made}: discarded {self.discards_this_pair} vertices in one pair")
        if rec.done():
            rec.closed = True
            self.cur = None

    # ------------------------------------------------------------------
    # checks

    def _check_opening(self, s: GameState) -> None:
        extra = off_path_touched(s, self.builder.path)
        if len(extra) > 1:
            self.flag(f"opening left {len(extra)} off-path vertices touched: {extra}")

    def _check_record(self, s: GameState, rec: StructureRecord) -> None:
        idx = self.records.index(rec)
        if not _is_path_on(s, rec.path_vertices):
            self.flag(f"structure {idx}: {rec.path_vertices} is not a directed path on the board")
        if rec.lam != len(rec.path_vertices) - 1:
            self.flag(f"structure {idx}: lambda {rec.lam} but {len(rec.path_vertices)} path vertices")
        if len(rec.off_path_vertices) > max(rec.budget, 0):
            self.flag(f"structure {idx}: {len(rec.off_path_vertices)} off-path vertices "
                      f"exceed the {rec.kind.name}_{rec.lam} budget")
        derived = _blocked_kind(s, rec.path_vertices)
        if derived is not rec.kind:
            self.flag(f"structure {idx}: recorded {rec.kind.name} but the board says {derived.name}")


__all__ = [
    "PathBuilder",
    "ProlongerK3",
    "ProlongerStructure",
    "Seen",
    "ShortenerPath",
    "StructureRecord",
]
