"""Saturation game engine: turn schedule with bias, legality, transitions, playouts.

Two games share the machinery:

* ``Kind.DIRECTED`` -- players add arcs of the complete digraph keeping the
  board free of homomorphic images of the excluded family (by default the
  directed path ``P_k``).
* ``Kind.ORIENTATION`` -- players add edges of ``K_n`` keeping the board
  orientable without a directed path on ``k + 1`` vertices, which is the same
  as being ``k``-colourable.

The score is the number of arcs or edges on the board when no legal move is
left.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterator, Sequence

from .colouring import k_colouring
from .graph import Digraph, UGraph, iter_bits, normalize_edge, popcount
from .oracle import FamilySpec, Mode, PathProfile, extend_profile, is_family_free, path_profile

if TYPE_CHECKING:
    from .strategies.base import Strategy


class Kind(enum.Enum):
    DIRECTED = "dhom"
    ORIENTATION = "orient"


class Player(enum.Enum):
    PROLONGER = "P"
    SHORTENER = "S"

    @property
    def other(self) -> Player:
        return Player.SHORTENER if self is Player.PROLONGER else Player.PROLONGER


class ConfigError(ValueError):
    pass


class IllegalMove(ValueError):
    """A rejected move.  ``reason`` is one of duplicate, forbidden, turn, range."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class GameConfig:
    """Rules of one game.

    ``k`` is the vertex count of the excluded directed path in the directed
    game, and the colour bound in the orientation game (excluded path on
    ``k + 1`` vertices).
    """

    n: int
    kind: Kind
    k: int
    a: int = 1
    b: int = 1
    first: Player = Player.PROLONGER
    family: FamilySpec | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"board needs at least one vertex, got n={self.n}")
        if self.a < 1 or self.b < 1:
            raise ConfigError(f"bias turns must be >= 1, got {self.a}:{self.b}")
        if self.kind is Kind.DIRECTED:
            if self.family is None and self.k < 2:
                raise ConfigError("P_1 is contained in every non-empty board; need k >= 2")
            if self.family is not None and self.family.mode is not Mode.HOMOMORPHISM:
                raise ConfigError("the directed game excludes homomorphic images")
        else:
            if self.k < 1:
                raise ConfigError(f"orientation game needs k >= 1, got {self.k}")
            if self.family is not None:
                raise ConfigError("the orientation game always excludes P_(k+1) subdigraphs")

    @classmethod
    def directed(cls, n: int, k: int, a: int = 1, b: int = 1,
                 first: Player = Player.PROLONGER) -> GameConfig:
        return cls(n, Kind.DIRECTED, k, a, b, first)

    @classmethod
    def orientation(cls, n: int, k: int, a: int = 1, b: int = 1,
                    first: Player = Player.PROLONGER) -> GameConfig:
        return cls(n, Kind.ORIENTATION, k, a, b, first)

    @property
    def fam(self) -> FamilySpec:
        if self.kind is Kind.ORIENTATION:
            return FamilySpec.walk(self.k + 1, Mode.SUBDIGRAPH)
        return self.family or FamilySpec.walk(self.k, Mode.HOMOMORPHISM)

    @property
    def walk_only(self) -> bool:
        return self.kind is Kind.DIRECTED and self.family is None

    @property
    def block(self) -> int:
        return self.a + self.b

    def player_at(self, moves_made: int) -> Player:
        pos = moves_made % self.block
        lead = self.a if self.first is Player.PROLONGER else self.b
        return self.first if pos < lead else self.first.other

    def header(self) -> str:
        return (f"game {self.kind.value} n {self.n} k {self.k} "
                f"bias {self.a}:{self.b} first {self.first.value}")


@dataclass(frozen=True)
class Move:
    player: Player
    u: int
    v: int

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


class _Lineage:
    """Facts shared by a chain of states, each extending the previous board.

    An edge whose addition breaks k-colourability stays illegal on every
    supergraph, so such edges are remembered, but only along a single chain.
    """

    __slots__ = ("head", "dead", "proofs")

    def __init__(self, head: GameState | None = None):
        self.head = head
        self.dead: set[tuple[int, int]] = set()
        self.proofs: dict[tuple[int, int], tuple[int, ...]] = {}


@dataclass(frozen=True, eq=False)
class GameState:
    config: GameConfig
    board: Digraph | UGraph
    moves_made: int
    colouring: tuple[int, ...] | None = None
    lineage: _Lineage = field(default_factory=_Lineage, repr=False)

    @property
    def schedule_pos(self) -> int:
        return self.moves_made % self.config.block

    @property
    def score(self) -> int:
        return self.moves_made

    @cached_property
    def profile(self) -> PathProfile:
        prof = path_profile(self.board.out)  # type: ignore[union-attr]
        if prof is None:  # pragma: no cover - the board is kept acyclic
            raise RuntimeError("directed board acquired a cycle")
        return prof

    def key(self) -> tuple:
        rows = self.board.out if isinstance(self.board, Digraph) else self.board.adj
        return (rows, self.schedule_pos)


@dataclass
class Transcript:
    config: GameConfig
    moves: list[Move] = field(default_factory=list)
    final_score: int | None = None

    def to_text(self) -> str:
        lines = [self.config.header()]
        lines += [f"{m.player.value} {m.u} {m.v}" for m in self.moves]
        if self.final_score is not None:
            lines.append(f"score {self.final_score}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Transcript:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        head = dict(zip(lines[0][0::2], lines[0][1::2]))
        a, b = (int(x) for x in head["bias"].split(":"))
        cfg = GameConfig(int(head["n"]), Kind(head["game"]), int(head["k"]), a, b,
                         Player(head["first"]))
        tr = cls(cfg)
        for parts in lines[1:]:
            if parts[0] == "score":
                tr.final_score = int(parts[1])
            else:
                tr.moves.append(Move(Player(parts[0]), int(parts[1]), int(parts[2])))
        return tr

    def replay(self) -> Iterator[GameState]:
        """Yield the states from the empty board through every move."""
        s = new_game(self.config)
        yield s
        for m in self.moves:
            s = apply_move(s, m.pair, m.player)
            yield s


# --------------------------------------------------------------------------
# core operations


def new_game(cfg: GameConfig) -> GameState:
    if cfg.kind is Kind.ORIENTATION:
        colouring = tuple(v % cfg.k for v in range(cfg.n))
        state = GameState(cfg, UGraph.empty(cfg.n), 0, colouring)
    else:
        state = GameState(cfg, Digraph.empty(cfg.n), 0)
    state.lineage.head = state
    return state


def current_player(s: GameState) -> Player:
    return s.config.player_at(s.moves_made)


def _directed_ok(s: GameState, u: int, v: int) -> bool:
    if s.config.walk_only:
        prof = s.profile
        return not prof.reach[v] >> u & 1 and prof.ending[u] + prof.starting[v] <= s.config.k - 1
    return is_family_free(s.board.add_arc((u, v)), s.config.fam)  # type: ignore[union-attr]


def _greedy_clique(adj: Sequence[int], mask: int, want: int) -> bool:
    """Greedily look for a clique of size ``want`` inside ``mask``."""
    size = 0
    while mask and size < want:
        best, best_deg = -1, -1
        for w in iter_bits(mask):
            d = popcount(adj[w] & mask)
            if d > best_deg:
                best, best_deg = w, d
        size += 1
        mask &= adj[best]
    return size >= want


def _orientation_status(s: GameState, u: int, v: int) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether edge ``uv`` keeps the board k-colourable.

    Returns ``(legal, colouring)`` where ``colouring`` is a proper colouring
    of the board plus ``uv`` when legal.  Cheap certificates are tried before
    the exact search: differing colours, a free colour at one endpoint, or a
    ``(k-1)``-clique in the common neighbourhood (giving ``K_{k+1}``).
    """
    col = s.colouring
    assert col is not None
    if col[u] != col[v]:
        return True, col
    edge = normalize_edge(u, v)
    lin = s.lineage
    at_head = lin.head is s
    if at_head:
        if edge in lin.dead:
            return False, None
        if edge in lin.proofs:
            return True, lin.proofs[edge]
    k = s.config.k
    adj = s.board.adj  # type: ignore[union-attr]
    for x, y in ((u, v), (v, u)):
        used = 1 << col[y]
        for w in iter_bits(adj[x]):
            used |= 1 << col[w]
        free = ~used & ((1 << k) - 1)
        if free:
            new = list(col)
            new[x] = (free & -free).bit_length() - 1
            result = tuple(new)
            if at_head:
                lin.proofs[edge] = result
            return True, result
    if _greedy_clique(adj, adj[u] & adj[v], k - 1):
        if at_head:
            lin.dead.add(edge)
        return False, None
    rows = list(adj)
    rows[u] |= 1 << v
    rows[v] |= 1 << u
    found = k_colouring(rows, k)
    if found is None:
        if at_head:
            lin.dead.add(edge)
        return False, None
    result = tuple(found)
    if at_head:
        lin.proofs[edge] = result
    return True, result


def check_move(s: GameState, pair: tuple[int, int]) -> str | None:
    """``None`` if legal, else the rejection reason (range, duplicate, forbidden)."""
    u, v = pair
    n = s.config.n
    if not (0 <= u < n and 0 <= v < n) or u == v:
        return "range"
    if s.config.kind is Kind.DIRECTED:
        if s.board.out[u] >> v & 1:  # type: ignore[union-attr]
            return "duplicate"
        return None if _directed_ok(s, u, v) else "forbidden"
    if s.board.adj[u] >> v & 1:  # type: ignore[union-attr]
        return "duplicate"
    legal, _ = _orientation_status(s, u, v)
    return None if legal else "forbidden"


def is_legal(s: GameState, pair: tuple[int, int]) -> bool:
    return check_move(s, pair) is None


def _directed_moves(s: GameState) -> Iterator[tuple[int, int]]:
    cfg = s.config
    if not cfg.walk_only:
        for a in s.board.missing_arcs():  # type: ignore[union-attr]
            if _directed_ok(s, *a):
                yield a
        return
    prof = s.profile
    room = cfg.k - 1
    out = s.board.out  # type: ignore[union-attr]
    full = (1 << cfg.n) - 1
    # fits[b]: vertices whose longest outgoing path has at most b vertices
    fits = [0] * (room + 1)
    for v, st in enumerate(prof.starting):
        if st <= room:
            fits[st] |= 1 << v
    for b in range(1, room + 1):
        fits[b] |= fits[b - 1]
    reach = prof.reach
    for u in range(cfg.n):
        budget = room - prof.ending[u]
        if budget < 1:
            continue
        ubit = 1 << u
        for v in iter_bits(fits[budget] & full & ~out[u] & ~ubit):
            if not reach[v] & ubit:
                yield (u, v)


def iter_legal_moves(s: GameState) -> Iterator[tuple[int, int]]:
    """Legal moves in ascending order, lazily."""
    if s.config.kind is Kind.DIRECTED:
        return _directed_moves(s)
    return (e for e in s.board.missing_edges()  # type: ignore[union-attr]
            if _orientation_status(s, *e)[0])


def legal_moves(s: GameState) -> list[tuple[int, int]]:
    """All legal arcs (directed) or edges ``u < v`` (orientation), ascending."""
    return list(iter_legal_moves(s))


def is_terminal(s: GameState) -> bool:
    cfg = s.config
    if cfg.kind is Kind.DIRECTED:
        return next(iter_legal_moves(s), None) is None
    # a saturated k-colourable graph is complete multipartite w.r.t. any of
    # its k-colourings, with every colour class used
    col = s.colouring
    adj = s.board.adj  # type: ignore[union-attr]
    assert col is not None
    masks = [0] * cfg.k
    for v, c in enumerate(col):
        masks[c] |= 1 << v
    full = (1 << cfg.n) - 1
    for v in range(cfg.n):
        if full & ~adj[v] & ~masks[col[v]]:
            return False
    missing = any(full & ~adj[v] & ~(1 << v) for v in range(cfg.n))
    if not missing:
        return True
    return all(masks)


def apply_move(s: GameState, pair: tuple[int, int], player: Player | None = None) -> GameState:
    """Return the successor state; raises :class:`IllegalMove` with a reason."""
    who = current_player(s)
    if player is not None and player is not who:
        raise IllegalMove("turn", f"it is {who.name}'s turn, not {player.name}'s")
    u, v = pair
    cfg = s.config
    if cfg.kind is Kind.ORIENTATION:
        u, v = normalize_edge(u, v)
    reason = check_move(s, (u, v))
    if reason is not None:
        raise IllegalMove(reason, f"{who.name} move {u} {v}: {reason}")
    lin = s.lineage if s.lineage.head is s else _Lineage()
    if cfg.kind is Kind.DIRECTED:
        board = s.board.add_arc((u, v))  # type: ignore[union-attr]
        nxt = GameState(cfg, board, s.moves_made + 1, None, lin)
        if cfg.walk_only and "profile" in s.__dict__:
            nxt.__dict__["profile"] = extend_profile(s.profile, board.out, u, v)
    else:
        _, colouring = _orientation_status(s, u, v)
        board = s.board.add_edge((u, v))  # type: ignore[union-attr]
        if lin is s.lineage:
            lin.proofs.clear()
        nxt = GameState(cfg, board, s.moves_made + 1, colouring, lin)
    lin.head = nxt
    return nxt


# --------------------------------------------------------------------------
# playouts


class StrategyError(RuntimeError):
    """A strategy produced an illegal move; ``transcript`` holds the game so far."""

    def __init__(self, message: str, transcript: Transcript):
        super().__init__(message)
        self.transcript = transcript


def playout(cfg: GameConfig, strat_p: Strategy, strat_s: Strategy, seed: int = 0,
            max_moves: int | None = None) -> Transcript:
    """Play ``strat_p`` (Prolonger) against ``strat_s`` (Shortener) to saturation."""
    state = new_game(cfg)
    strat_p.start(state, Player.PROLONGER, random.Random(f"{seed}:P"))
    strat_s.start(state, Player.SHORTENER, random.Random(f"{seed}:S"))
    tr = Transcript(cfg)
    while not is_terminal(state):
        if max_moves is not None and len(tr.moves) >= max_moves:
            break
        who = current_player(state)
        strat = strat_p if who is Player.PROLONGER else strat_s
        pair = strat.choose(state)
        try:
            nxt = apply_move(state, pair, who)
        except IllegalMove as exc:
            raise StrategyError(f"{strat.name} played an illegal move: {exc}", tr) from exc
        u, v = normalize_edge(*pair) if cfg.kind is Kind.ORIENTATION else pair
        move = Move(who, u, v)
        tr.moves.append(move)
        strat_p.observe(state, move, nxt)
        strat_s.observe(state, move, nxt)
        state = nxt
    strat_p.finish(state)
    strat_s.finish(state)
    tr.final_score = state.moves_made
    return tr


def play_moves(cfg: GameConfig, pairs: Sequence[tuple[int, int]]) -> GameState:
    """Apply ``pairs`` in schedule order from the empty board."""
    s = new_game(cfg)
    for p in pairs:
        s = apply_move(s, p)
    return s
