"""``satgame`` command line: solve, play, verify, sweep.

Exit codes: 0 success, 1 a check failed, 2 bad usage, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .engine import (
    ConfigError,
    GameConfig,
    GameState,
    Kind,
    Player,
    StrategyError,
    is_legal,
    legal_moves,
    playout,
)
from .experiments import SUITES, SweepSpec, final_state, row_bounds, rows_to_csv, run_sweep, write_svg
from .solver import BudgetExceeded, SolverBudget, solve
from .strategies import REGISTRY, NoLegalMove, Strategy, make_strategy

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers


def parse_bias(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bias must look like a:b, got {text!r}") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("bias turns must be >= 1")
    return a, b


def parse_range(text: str) -> tuple[int, ...]:
    """``"6..12"`` (inclusive), ``"4,6,10"`` or a single integer."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    return tuple(out)


def parse_bias_list(text: str) -> tuple[tuple[int, int], ...]:
    return tuple(parse_bias(part) for part in text.split(",") if part.strip())


def _config(args: argparse.Namespace) -> GameConfig:
    a, b = args.bias
    first = Player.PROLONGER if args.first == "p" else Player.SHORTENER
    try:
        return GameConfig(args.n, Kind(args.game), args.k, a, b, first)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# --------------------------------------------------------------------------
# interactive player


class HumanStrategy(Strategy):
    """Reads moves as ``u v`` lines; the prompt lists the legal moves."""

    name = "human"

    def __init__(self, stdin: TextIO, prompt: TextIO):
        super().__init__()
        self.stdin = stdin
        self.prompt = prompt

    def clone(self) -> HumanStrategy:  # pragma: no cover - never searched
        raise TypeError("a human player cannot be cloned")

    def choose(self, state: GameState) -> tuple[int, int]:
        moves = legal_moves(state)
        if not moves:
            raise NoLegalMove("no legal move on this board")
        while True:
            listing = " ".join(f"{u}-{v}" for u, v in moves)
            print(f"move {state.moves_made + 1}, legal: {listing}", file=self.prompt)
            print("your move (u v)> ", end="", file=self.prompt, flush=True)
            line = self.stdin.readline()
            if not line:
                raise EOFError("input ended before the game did")
            parts = line.replace("-", " ").split()
            try:
                pair = (int(parts[0]), int(parts[1]))
            except (ValueError, IndexError):
                print(f"could not read {line.strip()!r}; type two vertex numbers", file=self.prompt)
                continue
            if state.config.kind is Kind.ORIENTATION:
                pair = (min(pair), max(pair))
            if 0 <= min(pair) and max(pair) < state.config.n and is_legal(state, pair):
                return pair
            print(f"{pair[0]} {pair[1]} is not a legal move", file=self.prompt)


# --------------------------------------------------------------------------
# commands


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _config(args)
    budget = SolverBudget(max_nodes=args.max_nodes)
    try:
        res = solve(cfg, canonical=not args.no_canonical, budget=budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"score {res.score}")
    print(f"nodes {res.nodes_explored}")
    if args.pv:
        print(res.principal_variation.to_text(), end="")
    if args.out is not None:
        args.out.write_text(res.principal_variation.to_text())
    return EXIT_OK


def cmd_play(args: argparse.Namespace) -> int:
    cfg = _config(args)
    sp = make_strategy(args.p) if args.interactive != "prolonger" else HumanStrategy(sys.stdin, sys.stderr)
    ss = make_strategy(args.s) if args.interactive != "shortener" else HumanStrategy(sys.stdin, sys.stderr)
    try:
        tr = playout(cfg, sp, ss, seed=args.seed)
    except StrategyError as exc:
        print(exc, file=sys.stderr)
        sys.stderr.write(exc.transcript.to_text())
        return EXIT_CHECK
    except EOFError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    _emit(tr.to_text(), args.out)
    for strat in (sp, ss):
        for msg in strat.violations:
            print(f"{strat.name}: {msg}", file=sys.stderr)
    if args.bounds:
        lo, _, hi, _ = row_bounds(cfg, args.p, args.s)
        fmt = lambda x: "-" if x is None else str(x)  # noqa: E731
        print(f"bounds {fmt(lo)} {fmt(hi)}", file=sys.stderr)
    if args.show_board and cfg.kind is Kind.DIRECTED:
        sys.stderr.write(final_state(tr).board.to_text())  # type: ignore[union-attr]
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        kwargs = {}
        if args.count is not None:
            kwargs = _count_kwargs(name, args.count)
        for check in SUITES[name](**kwargs):
            print(check.line(), flush=True)
            failed += not check.ok
    return EXIT_CHECK if failed else EXIT_OK


_COUNT_PARAM = {"ghrv": "count", "terminal-structure": "count", "redblue": "seeds",
                "path-prolonger": "count"}


def _count_kwargs(name: str, count: int) -> dict:
    key = _COUNT_PARAM.get(name)
    return {key: count} if key else {}


def cmd_sweep(args: argparse.Namespace) -> int:
    biases = args.bias_list
    a_values = tuple(sorted({a for a, _ in biases}))
    b_values = tuple(sorted({b for _, b in biases}))
    try:
        spec = SweepSpec(Kind(args.game), args.n, args.k, a_values, b_values,
                         args.p, args.s, args.seeds, args.out, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = run_sweep(spec)
    keep = set(biases)
    rows = [r for r in rows if (r.a, r.b) in keep]
    _emit(rows_to_csv(rows), args.out)
    if args.svg is not None:
        write_svg(rows, spec.kind, args.svg)
    bad = [(r, msg) for r in rows for msg in r.violations()]
    for r, msg in bad:
        print(f"n={r.n} k={r.k} bias {r.a}:{r.b} seed {r.seed}: {msg}", file=sys.stderr)
    return EXIT_CHECK if bad else EXIT_OK


# --------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, multi: bool = False) -> None:
    p.add_argument("--game", choices=[k.value for k in Kind], default="dhom")
    if multi:
        p.add_argument("--n", type=parse_range, required=True, help="e.g. 6..12 or 6,8,10")
        p.add_argument("--k", type=parse_range, required=True)
        p.add_argument("--bias", dest="bias_list", type=parse_bias_list, default=((1, 1),),
                       help="comma-separated a:b pairs")
        p.add_argument("--seeds", type=parse_range, default=(0,))
    else:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--bias", type=parse_bias, default=(1, 1), help="a:b turns per block")
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--first", choices=("p", "s"), default="p")
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satgame", description="Saturation games on digraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact value under optimal play")
    _common(p)
    p.add_argument("--max-nodes", type=int, default=SolverBudget().max_nodes)
    p.add_argument("--no-canonical", action="store_true", help="do not merge isomorphic boards")
    p.add_argument("--pv", action="store_true", help="print one optimal transcript")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", help="one game between two strategies")
    _common(p)
    names = sorted(REGISTRY)
    p.add_argument("--p", choices=names, default="random", help="Prolonger strategy")
    p.add_argument("--s", choices=names, default="random", help="Shortener strategy")
    p.add_argument("--interactive", choices=("prolonger", "shortener"), default=None,
                   help="take this side's moves from stdin")
    p.add_argument("--bounds", action="store_true", help="print the applicable bounds to stderr")
    p.add_argument("--show-board", action="store_true", help="print the final digraph to stderr")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--count", type=int, default=None, help="games or samples, where the suite takes one")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="playouts over a grid, written as CSV")
    _common(p, multi=True)
    p.add_argument("--p", choices=names, default="random")
    p.add_argument("--s", choices=names, default="random")
    p.add_argument("--svg", type=Path, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
