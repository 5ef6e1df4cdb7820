"""Strategy protocol and the two baseline players."""

from __future__ import annotations

import copy
import random

from ..engine import GameState, Kind, Move, Player, is_legal, iter_legal_moves, legal_moves
from ..graph import canonical_order


class NoLegalMove(RuntimeError):
    pass


class Strategy:
    """Deterministic move selection with per-game memory.

    ``start`` is called once on the empty board; ``observe`` sees every move
    of both players.  ``key`` must capture all memory that can influence
    future choices; exhaustive searches use it to merge positions.
    """

    name = "strategy"

    def __init__(self) -> None:
        self.player = Player.PROLONGER
        self.rng = random.Random(0)
        self.violations: list[str] = []

    def start(self, state: GameState, player: Player, rng: random.Random | None = None) -> None:
        self.player = player
        self.rng = rng if rng is not None else random.Random(0)
        self.violations = []
        self.reset(state)

    def reset(self, state: GameState) -> None:
        pass

    def choose(self, state: GameState) -> tuple[int, int]:
        raise NotImplementedError

    def observe(self, before: GameState, move: Move, after: GameState) -> None:
        pass

    def finish(self, state: GameState) -> None:
        """Called once on the terminal board."""

    def key(self) -> tuple:
        return ()

    def anchors(self) -> list[int] | None:
        """Vertices the memory refers to, or ``None`` if choices read vertex labels.

        A strategy that returns a list promises that relabelling the board
        and its memory relabels its choices, up to automorphisms fixing the
        anchors.  Searches may then merge isomorphic positions.
        """
        return None

    def relabelled_key(self, pos: list[int]) -> tuple:
        """``key`` with every vertex ``v`` replaced by ``pos[v]``."""
        return self.key()

    def clone(self) -> Strategy:
        return copy.deepcopy(self)

    def flag(self, message: str) -> None:
        self.violations.append(message)


def random_move(s: GameState, seed: int | random.Random) -> tuple[int, int]:
    """Uniform legal move.

    Uniform draws over all vertex pairs are accepted when legal, which is
    uniform over the legal moves; after a few misses the full list is built.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = s.config.n
    if n > 1:
        for _ in range(32):
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            v += v >= u
            if s.config.kind is Kind.ORIENTATION:
                u, v = min(u, v), max(u, v)
            if is_legal(s, (u, v)):
                return (u, v)
    moves = legal_moves(s)
    if not moves:
        raise NoLegalMove("no legal move on this board")
    return moves[rng.randrange(len(moves))]


def greedy_move(s: GameState) -> tuple[int, int]:
    """First legal move in ascending order."""
    move = next(iter_legal_moves(s), None)
    if move is None:
        raise NoLegalMove("no legal move on this board")
    return move


#: Largest board on which :func:`symmetric_move` computes a canonical order;
#: beyond it the canonical search can take seconds per call on boards with
#: many isomorphic pieces.
SYMMETRIC_LIMIT = 16


def symmetric_move(s: GameState, anchors: list[int]) -> tuple[int, int]:
    """First legal move in the canonical vertex order of the board.

    Isomorphic boards (anchors matched in order) get corresponding moves, which
    a lowest-index rule does not guarantee.  Boards above ``SYMMETRIC_LIMIT``
    vertices fall back to :func:`greedy_move`.
    """
    if s.config.n > SYMMETRIC_LIMIT:
        return greedy_move(s)
    rows = s.board.out if s.config.kind is not Kind.ORIENTATION else s.board.adj  # type: ignore[union-attr]
    order, _ = canonical_order(rows, anchors)
    orient = s.config.kind is Kind.ORIENTATION
    for i, u in enumerate(order):
        for v in order[i + 1:] if orient else order:
            pair = (min(u, v), max(u, v)) if orient else (u, v)
            if u != v and is_legal(s, pair):
                return pair
    raise NoLegalMove("no legal move on this board")


class RandomStrategy(Strategy):
    name = "random"

    def choose(self, state: GameState) -> tuple[int, int]:
        return random_move(state, self.rng)

    def key(self) -> tuple:
        return (self.rng.getstate(),)


class GreedyStrategy(Strategy):
    name = "greedy"

    def choose(self, state: GameState) -> tuple[int, int]:
        return greedy_move(state)
