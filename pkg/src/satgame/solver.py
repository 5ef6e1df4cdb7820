"""Exact game values by memoised alpha-beta search.

Values are final edge counts, so every position's value lies between the
number of moves already made and a Turan-type ceiling.  The memo stores a
``(lower, upper)`` bound pair per position and is keyed on the board (up to
isomorphism when small enough) together with the offset in the turn block.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .bounds import turan_edges
from .engine import (
    GameConfig,
    GameState,
    IllegalMove,
    Kind,
    Move,
    Player,
    Transcript,
    apply_move,
    current_player,
    iter_legal_moves,
    legal_moves,
    new_game,
)
from .graph import CANON_LIMIT, Digraph, canonical_key, canonical_order
from .strategies.base import Strategy


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverBudget:
    """Hard limits.  ``None`` disables a limit."""

    max_nodes: int | None = 20_000_000
    dhom_n: int = 6
    dhom_n_raw: int = 5
    orient_n: int = 5


DEFAULT_BUDGET = SolverBudget()


@dataclass
class SolveResult:
    score: int
    principal_variation: Transcript
    nodes_explored: int


def _check_size(cfg: GameConfig, canonical: bool, budget: SolverBudget) -> None:
    if cfg.kind is Kind.ORIENTATION:
        limit = budget.orient_n
    else:
        limit = budget.dhom_n if canonical else budget.dhom_n_raw
    if cfg.n > limit:
        raise BudgetExceeded(f"n={cfg.n} exceeds the solver limit {limit} for this game")


def score_ceiling(cfg: GameConfig) -> int:
    """Most edges a legal final board can carry."""
    if cfg.kind is Kind.ORIENTATION:
        return turan_edges(cfg.n, cfg.k)
    if cfg.walk_only:
        return turan_edges(cfg.n, cfg.k - 1)
    return cfg.n * (cfg.n - 1)


class _Search:
    def __init__(self, cfg: GameConfig, canonical: bool, budget: SolverBudget):
        self.cfg = cfg
        self.canonical = canonical and cfg.n <= CANON_LIMIT
        self.budget = budget
        self.memo: dict[tuple, tuple[int, int]] = {}
        self.nodes = 0
        self.top = score_ceiling(cfg)

    def key(self, s: GameState) -> tuple:
        if self.canonical:
            return (canonical_key(s.board), s.schedule_pos)
        return s.key()

    def children(self, s: GameState) -> list[GameState]:
        out, seen = [], set()
        for pair in legal_moves(s):
            child = apply_move(s, pair)
            if self.canonical:
                ck = self.key(child)
                if ck in seen:
                    continue
                seen.add(ck)
            out.append(child)
        return out

    def value(self, s: GameState, alpha: int, beta: int) -> int:
        self.nodes += 1
        cap = self.budget.max_nodes
        if cap is not None and self.nodes > cap:
            raise BudgetExceeded(f"search exceeded {cap} nodes")
        key = self.key(s)
        lo, hi = self.memo.get(key, (s.moves_made, self.top))
        if lo >= beta:
            return lo
        if hi <= alpha:
            return hi
        if lo == hi:
            return lo
        alpha, beta = max(alpha, lo), min(beta, hi)
        kids = self.children(s)
        if not kids:
            self.memo[key] = (s.moves_made, s.moves_made)
            return s.moves_made
        maxing = current_player(s) is Player.PROLONGER
        a, b = alpha, beta
        best = -1 if maxing else sys.maxsize
        for child in kids:
            v = self.value(child, a, b)
            if maxing:
                if v > best:
                    best = v
                a = max(a, v)
            else:
                if v < best:
                    best = v
                b = min(b, v)
            if a >= b:
                break
        if best <= alpha:
            hi = min(hi, best)
        elif best >= beta:
            lo = max(lo, best)
        else:
            lo = hi = best
        self.memo[key] = (lo, hi)
        return best

    def exact(self, s: GameState) -> int:
        return self.value(s, s.moves_made - 1, self.top + 1)

    def principal(self, root: GameState, score: int) -> Transcript:
        tr = Transcript(self.cfg)
        s = root
        while True:
            kids = legal_moves(s)
            if not kids:
                break
            for pair in kids:
                child = apply_move(s, pair)
                if self.value(child, score - 1, score + 1) == score:
                    tr.moves.append(Move(current_player(s), *child_pair(s, pair)))
                    s = child
                    break
            else:  # pragma: no cover - would mean the memo is inconsistent
                raise RuntimeError("no child attains the computed value")
        tr.final_score = s.moves_made
        return tr


def child_pair(s: GameState, pair: tuple[int, int]) -> tuple[int, int]:
    if s.config.kind is Kind.ORIENTATION:
        return (min(pair), max(pair))
    return pair


def solve(cfg: GameConfig, canonical: bool = True, budget: SolverBudget = DEFAULT_BUDGET) -> SolveResult:
    """Exact value under optimal play: Prolonger maximises, Shortener minimises."""
    _check_size(cfg, canonical, budget)
    search = _Search(cfg, canonical, budget)
    root = new_game(cfg)
    score = search.exact(root)
    pv = search.principal(root, score)
    return SolveResult(score, pv, search.nodes)


def plain_solve(cfg: GameConfig) -> int:
    """Textbook minimax over every move sequence; the reference oracle."""

    def rec(s: GameState) -> int:
        moves = legal_moves(s)
        if not moves:
            return s.moves_made
        vals = [rec(apply_move(s, m)) for m in moves]
        return max(vals) if current_player(s) is Player.PROLONGER else min(vals)

    return rec(new_game(cfg))


# --------------------------------------------------------------------------
# best response to a fixed strategy


@lru_cache(maxsize=1 << 16)
def _interval_ceiling(n: int, classes: int, intervals: tuple[tuple[int, int], ...]) -> int:
    """Max over class choices ``c(v) in [lo_v, hi_v]`` of the cross-class pair count."""
    states = {(0,) * classes}
    for lo, hi in intervals:
        nxt = set()
        for sizes in states:
            for c in range(lo - 1, hi):
                grown = list(sizes)
                grown[c] += 1
                nxt.add(tuple(grown))
        states = nxt
    best_sq = min(sum(x * x for x in sizes) for sizes in states)
    return (n * n - best_sq) // 2


def walk_ceiling(s: GameState) -> tuple[int, bool]:
    """Upper bound on the final arc count of a walk-avoiding game from ``s``.

    Longest paths only grow, so the final class of ``v`` lies between
    ``ending[v]`` and ``k - starting[v]``; the best spread of vertices over
    those windows bounds the final count.  Moves still legal now are the
    only ones that can ever be played, which gives a second bound.

    The flag is true when every window is a single class.  A saturated board
    has an arc between every two classes, so the bound is then the exact
    final count whatever is played.
    """
    cfg = s.config
    prof = s.profile
    k = cfg.k
    intervals = tuple(sorted(zip(prof.ending, (k - st for st in prof.starting))))
    by_classes = _interval_ceiling(cfg.n, k - 1, intervals)
    if all(lo == hi for lo, hi in intervals):
        return by_classes, True
    pairs = {(min(u, v), max(u, v)) for u, v in legal_moves(s)}
    return min(by_classes, s.moves_made + len(pairs)), False


class _BestResponse:
    def __init__(self, cfg: GameConfig, fixed_side: Player, budget: SolverBudget,
                 ceiling: Callable[[GameState], tuple[int, bool]] | None, symmetric: bool):
        self.cfg = cfg
        self.fixed_side = fixed_side
        self.budget = budget
        self.memo: dict[tuple, tuple[int, int]] = {}
        self.ceilings: dict[tuple, tuple[int, bool]] = {}
        self.nodes = 0
        self.top = score_ceiling(cfg)
        self.ceiling = ceiling
        self.symmetric = symmetric

    def key(self, s: GameState, strat: Strategy) -> tuple:
        anchors = strat.anchors() if self.symmetric else None
        if anchors is None:
            return (s.key(), strat.key())
        board = s.board
        rows = board.out if isinstance(board, Digraph) else board.adj
        order, code = canonical_order(rows, anchors)
        pos = [0] * len(order)
        for i, v in enumerate(order):
            pos[v] = i
        return (code, s.schedule_pos, strat.relabelled_key(pos))

    def bounds(self, s: GameState, key: tuple) -> tuple[int, int]:
        if self.ceiling is None:
            return s.moves_made, self.top
        board_key = key[:2] if self.symmetric else key[0]
        got = self.ceilings.get(board_key)
        if got is None:
            got = self.ceilings[board_key] = self.ceiling(s)
        hi, exact = got
        return (hi if exact else s.moves_made), hi

    def step_fixed(self, s: GameState, strat: Strategy) -> tuple[GameState, Strategy, Move]:
        strat = strat.clone()
        pair = strat.choose(s)
        try:
            nxt = apply_move(s, pair, self.fixed_side)
        except IllegalMove as exc:
            raise IllegalMove(exc.reason, f"{strat.name} played an illegal move: {exc}") from exc
        move = Move(self.fixed_side, *child_pair(s, pair))
        strat.observe(s, move, nxt)
        return nxt, strat, move

    def replies(self, s: GameState, strat: Strategy) -> list[tuple[GameState, Strategy, Move, tuple]]:
        who = current_player(s)
        out, seen = [], set()
        for pair in legal_moves(s):
            nxt = apply_move(s, pair)
            child = strat.clone()
            move = Move(who, *child_pair(s, pair))
            child.observe(s, move, nxt)
            key = self.key(nxt, child)
            if key in seen:
                continue
            seen.add(key)
            out.append((nxt, child, move, key))
        if self.ceiling is not None:
            # most promising first, so that good lines are found early
            sign = -1 if who is Player.PROLONGER else 1
            out.sort(key=lambda t: sign * self.bounds(t[0], t[3])[1])
        return out

    def value(self, s: GameState, strat: Strategy, alpha: int, beta: int, key: tuple | None = None) -> int:
        self.nodes += 1
        cap = self.budget.max_nodes
        if cap is not None and self.nodes > cap:
            raise BudgetExceeded(f"search exceeded {cap} nodes")
        if key is None:
            key = self.key(s, strat)
        entry = self.memo.get(key)
        lo, hi = entry if entry is not None else self.bounds(s, key)
        if lo >= beta:
            return lo
        if hi <= alpha:
            return hi
        if lo == hi:
            return lo
        alpha, beta = max(alpha, lo), min(beta, hi)
        who = current_player(s)
        if who is self.fixed_side:
            if next(iter_legal_moves(s), None) is None:
                self.memo[key] = (s.moves_made, s.moves_made)
                return s.moves_made
            nxt, child, _ = self.step_fixed(s, strat)
            best = self.value(nxt, child, alpha, beta)
        else:
            kids = self.replies(s, strat)
            if not kids:
                self.memo[key] = (s.moves_made, s.moves_made)
                return s.moves_made
            maxing = who is Player.PROLONGER
            a, b = alpha, beta
            best = -1 if maxing else sys.maxsize
            for nxt, child, _, child_key in kids:
                v = self.value(nxt, child, a, b, child_key)
                if maxing:
                    best = max(best, v)
                    a = max(a, v)
                else:
                    best = min(best, v)
                    b = min(b, v)
                if a >= b:
                    break
        if best <= alpha:
            hi = min(hi, best)
        elif best >= beta:
            lo = max(lo, best)
        else:
            lo = hi = best
        self.memo[key] = (lo, hi)
        return best

    def principal(self, s: GameState, strat: Strategy, score: int) -> Transcript:
        tr = Transcript(self.cfg)
        while next(iter_legal_moves(s), None) is not None:
            if current_player(s) is self.fixed_side:
                s, strat, move = self.step_fixed(s, strat)
                tr.moves.append(move)
                continue
            for nxt, child, move, key in self.replies(s, strat):
                if self.value(nxt, child, score - 1, score + 1, key) == score:
                    tr.moves.append(move)
                    s, strat = nxt, child
                    break
            else:  # pragma: no cover
                raise RuntimeError("no reply attains the computed value")
        tr.final_score = s.moves_made
        return tr


def best_response_score(cfg: GameConfig, fixed: Strategy, fixed_side: Player,
                        budget: SolverBudget = DEFAULT_BUDGET, symmetric: bool = True) -> SolveResult:
    """Exact optimum of the free side against ``fixed`` playing ``fixed_side``.

    ``fixed`` must be deterministic and its ``key`` must capture all the
    memory that affects its future moves.  With ``symmetric`` set, positions
    that are isomorphic (memory included) share a memo entry whenever the
    strategy declares anchors; see :meth:`Strategy.anchors`.
    """
    root = new_game(cfg)
    fixed = fixed.clone()
    fixed.start(root, fixed_side)
    ceiling = walk_ceiling if cfg.walk_only and fixed_side is Player.SHORTENER else None
    search = _BestResponse(cfg, fixed_side, budget, ceiling, symmetric)
    score = search.value(root, fixed, root.moves_made - 1, search.top + 1)
    pv = search.principal(root, fixed, score)
    return SolveResult(score, pv, search.nodes)
