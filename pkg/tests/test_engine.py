import itertools
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from satgame.engine import (
    ConfigError,
    GameConfig,
    IllegalMove,
    Kind,
    Player,
    StrategyError,
    Transcript,
    apply_move,
    check_move,
    current_player,
    is_terminal,
    legal_moves,
    new_game,
    play_moves,
    playout,
)
from satgame.graph import Digraph, UGraph
from satgame.oracle import chromatic_at_most, is_family_free, is_saturated
from satgame.strategies import Strategy, make_strategy
from oracles import has_walk

DATA = Path(__file__).parent / "data"


def test_new_game_examples():
    s = new_game(GameConfig.directed(4, 3))
    assert s.board == Digraph.empty(4)
    assert current_player(s) is Player.PROLONGER
    s = new_game(GameConfig.orientation(10, 3, 2, 1, first=Player.SHORTENER))
    assert s.board == UGraph.empty(10)
    assert current_player(s) is Player.SHORTENER


@pytest.mark.parametrize("kwargs", [dict(a=0), dict(b=0), dict(n=0), dict(k=1)])
def test_bad_configs(kwargs):
    args = dict(n=4, k=3, a=1, b=1) | kwargs
    with pytest.raises(ConfigError):
        GameConfig.directed(**args)


def test_orientation_needs_positive_k():
    with pytest.raises(ConfigError):
        GameConfig.orientation(4, 0)


def test_legal_moves_examples():
    cfg = GameConfig.directed(3, 3)
    assert legal_moves(new_game(cfg)) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    s = play_moves(cfg, [(0, 1)])
    # 1->0 closes a 2-cycle, 1->2 and 2->0 make a 3-vertex walk
    assert legal_moves(s) == [(0, 2), (2, 1)]


def test_current_player_schedule():
    assert GameConfig.directed(5, 3).player_at(0) is Player.PROLONGER
    cfg = GameConfig.directed(5, 3, 2, 3)
    assert [cfg.player_at(i).value for i in range(5)] == list("PPSSS")
    assert cfg.player_at(4) is Player.SHORTENER
    cfg = GameConfig.directed(5, 3, 2, 3, first=Player.SHORTENER)
    assert [cfg.player_at(i).value for i in range(6)] == list("SSSPPS")


def test_apply_move_examples():
    s = apply_move(new_game(GameConfig.directed(2, 3)), (0, 1))
    assert s.board.arcs() == [(0, 1)] and s.score == 1
    with pytest.raises(IllegalMove) as err:
        apply_move(s, (1, 0))
    assert err.value.reason == "forbidden"
    s = play_moves(GameConfig.directed(3, 4), [(0, 1), (1, 2)])
    assert s.board.arcs() == [(0, 1), (1, 2)]


def test_illegal_move_reasons():
    s = play_moves(GameConfig.directed(3, 3), [(0, 1)])
    for pair, reason in [((0, 1), "duplicate"), ((1, 2), "forbidden"), ((0, 0), "range"), ((0, 5), "range")]:
        assert check_move(s, pair) == reason
        with pytest.raises(IllegalMove) as err:
            apply_move(s, pair)
        assert err.value.reason == reason
    with pytest.raises(IllegalMove) as err:
        apply_move(s, (0, 2), Player.PROLONGER)
    assert err.value.reason == "turn"


def test_orientation_edges_are_normalised():
    s = apply_move(new_game(GameConfig.orientation(3, 2)), (2, 0))
    assert s.board.edges() == [(0, 2)]
    assert check_move(s, (2, 0)) == "duplicate"


def test_is_terminal_examples():
    assert is_terminal(play_moves(GameConfig.directed(2, 3), [(0, 1)]))
    assert not is_terminal(new_game(GameConfig.directed(3, 3)))
    cfg = GameConfig.directed(4, 3)
    s = play_moves(cfg, [(0, 2), (1, 3), (0, 3), (1, 2)])
    assert is_terminal(s) and legal_moves(s) == []


def test_playout_examples():
    for p, s in [("greedy", "greedy"), ("random", "random"), ("greedy", "random")]:
        assert playout(GameConfig.directed(2, 3), make_strategy(p), make_strategy(s)).final_score == 1
    tr = playout(GameConfig.directed(3, 2), make_strategy("random"), make_strategy("random"))
    assert tr.final_score == 0 and tr.moves == []


def test_playout_is_deterministic_for_a_seed():
    cfg = GameConfig.directed(7, 4)
    runs = [playout(cfg, make_strategy("random"), make_strategy("random"), seed=11).to_text()
            for _ in range(2)]
    assert runs[0] == runs[1]


class _Cheater(Strategy):
    name = "cheater"

    def choose(self, state):
        return (0, 0)


def test_illegal_strategy_move_aborts_with_transcript():
    cfg = GameConfig.directed(4, 3)
    with pytest.raises(StrategyError) as err:
        playout(cfg, make_strategy("greedy"), _Cheater())
    assert len(err.value.transcript.moves) == 1


@pytest.mark.parametrize("name", ["golden_dhom_n5_k4_seed7.txt", "golden_orient_n5_k2_bias21.txt"])
def test_golden_transcripts(name):
    text = (DATA / name).read_text()
    tr = Transcript.from_text(text)
    assert tr.to_text() == text
    *_, last = tr.replay()
    assert is_terminal(last) and last.score == tr.final_score
    if tr.config.kind is Kind.DIRECTED:
        p, s = "random", "random"
    else:
        p, s = "greedy", "random"
    seed = 7 if tr.config.kind is Kind.DIRECTED else 1
    assert playout(tr.config, make_strategy(p), make_strategy(s), seed=seed).to_text() == text


def test_bias_block_counts():
    cfg = GameConfig.orientation(9, 3, 3, 2)
    tr = playout(cfg, make_strategy("random"), make_strategy("random"), seed=4)
    runs = [len(list(g)) for _, g in itertools.groupby(m.player for m in tr.moves)]
    # full blocks everywhere except possibly the last run
    for i, r in enumerate(runs[:-1]):
        assert r == (3 if i % 2 == 0 else 2)


# --------------------------------------------------------------------------
# properties


def _brute_legal(s):
    cfg = s.config
    out = []
    if cfg.kind is Kind.DIRECTED:
        arcs = set(s.board.arcs())
        for pair in itertools.permutations(range(cfg.n), 2):
            if pair not in arcs and not has_walk(cfg.n, arcs | {pair}, cfg.k):
                out.append(pair)
    else:
        for e in itertools.combinations(range(cfg.n), 2):
            if not s.board.has_edge(*e) and chromatic_at_most(s.board.add_edge(e), cfg.k):
                out.append(e)
    return sorted(out)


games = st.one_of(
    st.builds(GameConfig.directed, st.integers(1, 6), st.integers(2, 5), st.integers(1, 3), st.integers(1, 3)),
    st.builds(GameConfig.orientation, st.integers(1, 6), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3)),
)


@given(games, st.integers(0, 10_000))
def test_random_games_match_brute_force(cfg, seed):
    tr = playout(cfg, make_strategy("random"), make_strategy("random"), seed=seed)
    states = list(tr.replay())
    for s in states:
        size = s.board.arc_count if cfg.kind is Kind.DIRECTED else s.board.edge_count
        assert s.score == size
        assert legal_moves(s) == _brute_legal(s)
        if cfg.kind is Kind.DIRECTED:
            assert is_family_free(s.board, cfg.fam)
        else:
            assert chromatic_at_most(s.board, cfg.k)
    last = states[-1]
    assert is_terminal(last) and last.score == tr.final_score
    for s in states[:-1]:
        assert not is_terminal(s)
    if cfg.kind is Kind.DIRECTED:
        assert is_saturated(last.board, cfg.fam)


@given(games, st.integers(0, 10_000))
def test_transcript_round_trip(cfg, seed):
    tr = playout(cfg, make_strategy("random"), make_strategy("greedy"), seed=seed)
    again = Transcript.from_text(tr.to_text())
    assert again == tr
    assert [m.player for m in tr.moves] == [cfg.player_at(i) for i in range(len(tr.moves))]
