import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from satgame.engine import GameConfig, Player, is_legal, legal_moves, new_game, play_moves, playout
from satgame.graph import canonical_order
from satgame.oracle import vertex_classes
from satgame.strategies import (
    REGISTRY,
    NoLegalMove,
    OrientProlongerRB,
    OrientShortenerRB,
    ProlongerK3,
    ProlongerStructure,
    ShortenerPath,
    StructKind,
    Strategy,
    greedy_move,
    make_strategy,
    normalised_score,
    random_move,
    structure_score,
)
from satgame.strategies.base import symmetric_move


class Script(Strategy):
    """Plays the listed moves, then the first legal move."""

    name = "script"

    def __init__(self, moves=()):
        super().__init__()
        self.moves = list(moves)

    def choose(self, state):
        return self.moves.pop(0) if self.moves else greedy_move(state)


def replies(cfg, script, strat, side=Player.SHORTENER):
    """Moves made by ``strat`` while the other side follows ``script``."""
    other = Script(script)
    p, s = (other, strat) if side is Player.SHORTENER else (strat, other)
    tr = playout(cfg, p, s, max_moves=2 * len(script))
    return [(m.u, m.v) for m in tr.moves if m.player is side]


def test_registry_names():
    assert set(REGISTRY) == {"shortener-path", "prolonger-structure", "prolonger-k3",
                             "orient-prolonger-rb", "orient-shortener-rb", "random", "greedy"}
    for name in REGISTRY:
        assert make_strategy(name).name == name
    with pytest.raises(ValueError):
        make_strategy("nope")


# --------------------------------------------------------------------------
# baselines


def test_baseline_examples():
    # a 3-vertex path under P_4: only the chord 0->2 can still be added
    s = play_moves(GameConfig.directed(3, 4), [(0, 1), (1, 2)])
    assert legal_moves(s) == [(0, 2)]
    assert random_move(s, 3) == greedy_move(s) == (0, 2)
    done = play_moves(GameConfig.directed(2, 3), [(0, 1)])
    with pytest.raises(NoLegalMove):
        greedy_move(done)
    with pytest.raises(NoLegalMove):
        random_move(done, 0)


@given(st.integers(0, 1000))
def test_random_move_is_reproducible(seed):
    s = play_moves(GameConfig.directed(6, 4), [(0, 1)])
    assert random_move(s, seed) == random_move(s, seed)
    assert is_legal(s, random_move(s, seed))


def test_random_move_covers_every_legal_move():
    s = new_game(GameConfig.directed(3, 3))
    rng = random.Random(0)
    seen = {random_move(s, rng) for _ in range(300)}
    assert seen == set(legal_moves(s))


# --------------------------------------------------------------------------
# scores


def test_normalised_score_examples():
    assert normalised_score([1, 1, 1], 3) == Fraction(1, 3)
    assert normalised_score([3, 0, 0], 3) == 1
    assert normalised_score([2, 2], 4) == Fraction(1, 2)
    with pytest.raises(ValueError):
        normalised_score([1, 1], 3)


def test_structure_score_examples():
    assert structure_score("B", 3) == Fraction(1, 3)
    assert structure_score("C", 2) == Fraction(1, 3)
    assert structure_score(StructKind.A, 6) == Fraction(55, 169)
    with pytest.raises(ValueError):
        structure_score("C", 1)


@pytest.mark.parametrize("kind", list(StructKind))
def test_structure_scores_decrease(kind):
    vals = [structure_score(kind, lam) for lam in range(2, 51)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


# --------------------------------------------------------------------------
# path-building Shortener


def test_shortener_joins_isolated_arc_to_path_end():
    # after 0->1 and the reply 1->2 the path is 0,1,2 with l = 3 = k - 3
    got = replies(GameConfig.directed(10, 6), [(0, 1), (5, 6)], ShortenerPath())
    assert got == [(1, 2), (2, 5)]


def test_shortener_pins_isolated_arc_in_phase_two():
    sp = ShortenerPath()
    got = replies(GameConfig.directed(10, 5), [(0, 1), (5, 6), (7, 8)], sp)
    path = sp.path
    assert path == [0, 1, 5, 6]
    assert got[-1] == (path[5 - 4], 7)  # v_(k-3) -> u


def test_shortener_pins_arc_leaving_the_component():
    sp = ShortenerPath()
    got = replies(GameConfig.directed(8, 4), [(0, 1), (0, 5)], sp)
    assert sp.path == [0, 1, 2]
    assert got[-1] == (sp.path[4 - 3], 5)  # v_(k-2) -> u


def test_shortener_path_needs_k4():
    with pytest.raises(ValueError):
        playout(GameConfig.directed(5, 3), make_strategy("greedy"), ShortenerPath())


@pytest.mark.parametrize("opponent", ["random", "greedy", "prolonger-structure"])
def test_shortener_path_invariants_hold(opponent):
    for seed in range(15):
        for n, k in [(9, 4), (12, 5), (20, 7)]:
            sp = ShortenerPath()
            playout(GameConfig.directed(n, k), make_strategy(opponent), sp, seed=seed)
            assert sp.violations == []


# --------------------------------------------------------------------------
# k = 3 Prolonger


def _sides(s):
    return tuple(x.bit_count() for x in ProlongerK3.sides(s))


def test_k3_joins_two_isolated_vertices_when_balanced():
    got = replies(GameConfig.directed(6, 3, first=Player.SHORTENER), [(0, 1)], ProlongerK3(),
                  side=Player.PROLONGER)
    assert got == [(2, 3)]


def test_k3_puts_new_vertex_on_the_smaller_side():
    # sizes (2, 1): the new vertex must land in the sink class
    s = play_moves(GameConfig.directed(6, 3), [(0, 1), (2, 1)])
    assert _sides(s) == (2, 1)
    strat = ProlongerK3()
    strat.start(s, Player.PROLONGER)
    move = strat.choose(s)
    after = play_moves(GameConfig.directed(6, 3), [(0, 1), (2, 1), move])
    assert vertex_classes(after.board, 3).class_of[3] == 2
    assert _sides(after) == (2, 2)


def test_k3_falls_back_without_isolated_vertices():
    s = play_moves(GameConfig.directed(4, 3, a=3), [(0, 1), (2, 3), (0, 3)])
    strat = ProlongerK3()
    strat.start(s, Player.PROLONGER)
    assert strat.choose(s) == greedy_move(s)


@given(st.integers(2, 14), st.integers(0, 500), st.sampled_from(["random", "greedy"]))
def test_k3_balance_and_score(n, seed, opponent):
    strat = ProlongerK3()
    tr = playout(GameConfig.directed(n, 3), strat, make_strategy(opponent), seed=seed)
    assert strat.violations == []
    assert tr.final_score == n * n // 4


# --------------------------------------------------------------------------
# structure-building Prolonger


@pytest.mark.parametrize("opponent", ["shortener-path", "random", "greedy"])
def test_structure_prolonger_invariants(opponent):
    for seed in range(10):
        for n, k in [(12, 4), (20, 6), (30, 5)]:
            sp = ProlongerStructure()
            playout(GameConfig.directed(n, k), sp, make_strategy(opponent), seed=seed)
            assert sp.violations == []
            for rec in sp.records:
                assert len(rec.path_vertices) == rec.lam + 1
                assert len(rec.off_path_vertices) <= rec.budget


def test_structure_prolonger_finishes_opening_path():
    sp = ProlongerStructure()
    tr = playout(GameConfig.directed(12, 5), sp, make_strategy("greedy"), max_moves=12)
    *_, s = tr.replay()
    assert sp.builder.done
    path = sp.builder.path
    assert len(path) == 4 and all(s.board.has_arc(u, v) for u, v in zip(path, path[1:]))


# --------------------------------------------------------------------------
# red/blue orientation strategies


def test_rb_prolonger_opens_inside_set_zero():
    sp = OrientProlongerRB()
    tr = playout(GameConfig.orientation(20, 8), sp, make_strategy("greedy"), max_moves=1)
    first = sp.sets[0]
    assert (tr.moves[0].u, tr.moves[0].v) == (first[0], first[1])


def test_rb_prolonger_answers_blue_edges_with_red_ones():
    # a:b = 4:1 gives c = 2
    cfg = GameConfig.orientation(30, 12, 4, 1)
    sp = OrientProlongerRB()
    tr = playout(cfg, sp, make_strategy("random"), seed=5, max_moves=40)
    assert sp.ledger.ratio == 2
    assert sp.violations == []
    assert any(m.player is Player.SHORTENER for m in tr.moves)


def test_rb_prolonger_cliques_or_trace():
    cfg = GameConfig.orientation(24, 12, 1, 1)
    sp = OrientProlongerRB()
    tr = playout(cfg, sp, make_strategy("random"), seed=0)
    *_, last = tr.replay()
    ok, _ = sp.clique_report(last)
    assert ok or sp.ledger.trace


def test_rb_prolonger_cliques_against_passive_shortener():
    # a Shortener that never plays inside a set cannot stop the cliques
    cfg = GameConfig.orientation(24, 12, 1, 1)
    sp = OrientProlongerRB()
    tr = playout(cfg, sp, make_strategy("orient-shortener-rb"), seed=0)
    *_, last = tr.replay()
    ok, smallest = sp.clique_report(last)
    assert smallest >= 2
    assert ok or sp.ledger.trace


def test_rb_shortener_builds_pivot_clique_first():
    # 4:1 gives lambda+ = 1/3, so |S| = 8 - 1 - 1 = 6
    cfg = GameConfig.orientation(30, 12, 4, 1)
    ss = OrientShortenerRB()
    tr = playout(cfg, make_strategy("random"), ss, seed=2, max_moves=30)
    pivot = ss.pivot
    assert len(pivot) == ss.pivot_size == 6
    first = [(m.u, m.v) for m in tr.moves if m.player is Player.SHORTENER][:3]
    assert all(u in pivot and v in pivot for u, v in first)


def test_rb_shortener_pivot_singletons_once_all_red_edges_exist():
    # pivot {0, 1}: the clique edge, then every edge from S to the rest
    cfg = GameConfig.orientation(8, 4)
    moves = [(0, 1)] + [(p, x) for p in (0, 1) for x in range(2, 8)]
    s = play_moves(cfg, moves)
    ss = OrientShortenerRB(pivot_size=2)
    ss.start(new_game(cfg), Player.SHORTENER)
    ss.pivot = [0, 1]
    assert ss.pivot_singletons(s)
    for v in ss.pivot:
        assert s.colouring.count(s.colouring[v]) == 1
    assert not ss.pivot_singletons(play_moves(cfg, moves[:-1]))


def test_rb_strategies_refuse_the_directed_game():
    with pytest.raises(ValueError):
        playout(GameConfig.directed(5, 4), OrientProlongerRB(), make_strategy("greedy"))


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (4, 1), (2, 1), (1, 3)])
def test_rb_invariants_across_biases(a, b):
    for seed in range(3):
        sp, ss = OrientProlongerRB(), OrientShortenerRB()
        tr = playout(GameConfig.orientation(40, 10, a, b), sp, ss, seed=seed)
        assert sp.violations == [] and ss.violations == []
        *_, last = tr.replay()
        deg = [row.bit_count() for row in last.board.adj]
        for led in (sp.ledger, ss.ledger):
            assert [r + bl for r, bl in zip(led.d_red, led.d_blue)] == deg


# --------------------------------------------------------------------------
# the canonical fallback


@given(st.integers(0, 10_000), st.integers(6, 10))
def test_symmetric_move_is_relabelling_equivariant(seed, n):
    cfg = GameConfig.directed(n, 4)
    tr = playout(cfg, make_strategy("random"), make_strategy("random"), seed=seed,
                 max_moves=seed % (n + 1))
    *_, s = tr.replay()
    if not legal_moves(s):
        return
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    moved = play_moves(cfg, [(perm[m.u], perm[m.v]) for m in tr.moves])
    u, v = symmetric_move(s, [])
    pu, pv = symmetric_move(moved, [])
    # the two choices must correspond under some automorphism: compare
    # canonical codes of the boards after each move
    after = s.board.add_arc((u, v))
    after_p = moved.board.add_arc((pu, pv))
    assert canonical_order(after.out)[1] == canonical_order(after_p.out)[1]
