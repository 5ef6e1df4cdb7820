import io
import subprocess
import sys

import pytest

from satgame.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_OK, EXIT_USAGE, main, parse_bias, parse_range
from satgame.engine import Transcript, is_terminal


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_helpers():
    assert parse_range("6..9") == (6, 7, 8, 9)
    assert parse_range("4,6,10") == (4, 6, 10)
    assert parse_range("5") == (5,)
    assert parse_bias("2:3") == (2, 3)


def test_solve_examples(capsys):
    code, out, _ = run(capsys, "solve", "--game", "dhom", "--n", "4", "--k", "3")
    assert code == EXIT_OK and out.splitlines()[0] == "score 4"
    code, out, _ = run(capsys, "solve", "--game", "dhom", "--n", "5", "--k", "2")
    assert code == EXIT_OK and out.splitlines()[0] == "score 0"
    code, _, err = run(capsys, "solve", "--game", "dhom", "--n", "20", "--k", "4")
    assert code == EXIT_BUDGET and "budget" in err


def test_solve_principal_variation(capsys, tmp_path):
    pv = tmp_path / "pv.txt"
    code, out, _ = run(capsys, "solve", "--n", "5", "--k", "3", "--pv", "--out", str(pv))
    assert code == EXIT_OK
    tr = Transcript.from_text(pv.read_text())
    assert tr.final_score == 6
    assert pv.read_text() in out


def test_play_examples(capsys):
    code, out, _ = run(capsys, "play", "--n", "2", "--k", "3", "--p", "greedy", "--s", "greedy")
    assert code == EXIT_OK and out.splitlines()[-1] == "score 1"
    code, out, err = run(capsys, "play", "--n", "12", "--k", "4", "--p", "prolonger-structure",
                         "--s", "shortener-path", "--bounds")
    assert code == EXIT_OK
    # regression value recorded from the first run; the path-Shortener bound is 48 here
    assert out.splitlines()[-1] == "score 48"
    assert "bounds - 48" in err


def test_play_is_deterministic(capsys):
    args = ("play", "--game", "orient", "--n", "9", "--k", "3", "--bias", "2:1", "--seed", "5")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    *_, last = Transcript.from_text(first).replay()
    assert is_terminal(last)


def test_interactive_play_echoes_human_moves(capsys, monkeypatch):
    # a 2-vertex board under P_3: the human's single move ends the game
    monkeypatch.setattr(sys, "stdin", io.StringIO("nonsense\n1 0\n"))
    code, out, err = run(capsys, "play", "--n", "2", "--k", "3", "--interactive", "prolonger")
    assert code == EXIT_OK
    assert "P 1 0" in out.splitlines()
    assert "legal: 0-1 1-0" in err
    assert "could not read" in err


def test_interactive_rejects_illegal_then_accepts(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("0 0\n0 1\n"))
    code, out, err = run(capsys, "play", "--n", "2", "--k", "3", "--interactive", "prolonger")
    assert code == EXIT_OK and "P 0 1" in out
    assert "not a legal move" in err


def test_interactive_eof_is_usage_error(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    code, _, err = run(capsys, "play", "--n", "3", "--k", "3", "--interactive", "shortener",
                       "--p", "greedy")
    assert code == EXIT_USAGE and "input ended" in err


def test_verify_lines(capsys):
    code, out, _ = run(capsys, "verify", "structure-scores")
    assert code == EXIT_OK
    assert "s(A_6): = 55/169" in out
    code, out, _ = run(capsys, "verify", "ghrv", "--count", "50")
    assert code == EXIT_OK and "ghrv: 50/50 agree" in out.splitlines()


def test_verify_theorem1(capsys):
    code, out, _ = run(capsys, "verify", "theorem1-k3")
    assert code == EXIT_OK
    assert "k3 n=5: score 6, floor(n^2/4) = 6" in out


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-suite"],
    ["solve", "--n", "4", "--k", "3", "--bias", "0:1"],
    ["solve", "--n", "4", "--k", "1"],
    ["sweep", "--n", "7..6", "--k", "4"],
    ["play", "--n", "4", "--k", "3", "--p", "nobody"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_sweep_csv_and_svg(capsys, tmp_path):
    csv_path, svg = tmp_path / "out.csv", tmp_path / "out.svg"
    args = ["sweep", "--game", "dhom", "--n", "6..12", "--k", "4", "--p", "prolonger-structure",
            "--s", "shortener-path", "--out", str(csv_path), "--svg", str(svg)]
    code, _, _ = run(capsys, *args)
    assert code == EXIT_OK
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "n,k,a,b,strat_p,strat_s,seed,score,bound_lo,bound_hi,lambda_hat"
    scores = [int(r.split(",")[7]) for r in rows[1:]]
    # regression values from the first run
    assert scores == [12, 16, 21, 27, 33, 40, 48]
    assert svg.read_text().lstrip().startswith("<?xml")
    first_csv, first_svg = csv_path.read_bytes(), svg.read_bytes()
    run(capsys, *args)
    assert csv_path.read_bytes() == first_csv
    assert svg.read_bytes() == first_svg


def test_sweep_orientation_lambda_hat(capsys):
    code, out, _ = run(capsys, "sweep", "--game", "orient", "--n", "40", "--k", "4,6",
                       "--bias", "1:1,1:2", "--p", "orient-prolonger-rb", "--s", "orient-shortener-rb")
    assert code == EXIT_OK
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert len(rows) == 4
    assert all(0 < float(r[10]) < float("inf") for r in rows)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "satgame", "solve", "--n", "3", "--k", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("score 2")


def test_failed_check_exits_1(capsys, monkeypatch):
    from satgame import cli
    from satgame.experiments import Check

    monkeypatch.setitem(cli.SUITES, "ghrv", lambda **_: [Check("x", False, "broken")])
    code, out, _ = run(capsys, "verify", "ghrv")
    assert code == EXIT_CHECK and "x: FAIL: broken" in out
