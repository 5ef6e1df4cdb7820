"""Batch runs: strategy sweeps written as CSV/SVG, and named verification suites.

A sweep is a grid of cells ``(n, k, a, b, seed)``; each cell is one playout of
a fixed strategy pair and yields one :class:`ReportRow`.  Rows come out in
grid order whatever the worker count, so equal flags give byte-equal CSV.

Verification suites return :class:`Check` records; the CLI prints one line
per check and turns any failure into exit code 1.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .bounds import (
    VacuousBound,
    conjectured_lambda,
    lambda_bounds,
    lambda_hat,
    orientation_bound,
    prolonger_bound,
    shortener_bound,
    turan_edges,
)
from .engine import GameConfig, GameState, Kind, Player, Transcript, playout
from .graph import Digraph, UGraph
from .oracle import chromatic_at_most, orientation_free_bruteforce, path_profile, saturated_edge_count
from .solver import SolverBudget, best_response_score, plain_solve, solve
from .strategies import (
    OrientProlongerRB,
    OrientShortenerRB,
    ProlongerStructure,
    ShortenerPath,
    Strategy,
    StructKind,
    make_strategy,
    normalised_score,
    structure_score,
)

CSV_HEADER = ("n", "k", "a", "b", "strat_p", "strat_s", "seed",
              "score", "bound_lo", "bound_hi", "lambda_hat")


# --------------------------------------------------------------------------
# single playouts


def final_state(tr: Transcript) -> GameState:
    state = None
    for state in tr.replay():
        pass
    assert state is not None
    return state


def run_pair(cfg: GameConfig, p_name: str, s_name: str, seed: int = 0
             ) -> tuple[Transcript, Strategy, Strategy]:
    """One playout between two named strategies; the strategies are returned for inspection."""
    sp, ss = make_strategy(p_name), make_strategy(s_name)
    tr = playout(cfg, sp, ss, seed=seed)
    return tr, sp, ss


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    kind: Kind
    ns: tuple[int, ...]
    ks: tuple[int, ...]
    a_values: tuple[int, ...] = (1,)
    b_values: tuple[int, ...] = (1,)
    strat_p: str = "random"
    strat_s: str = "random"
    seeds: tuple[int, ...] = (0,)
    out: Path | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        for label, values in (("n", self.ns), ("k", self.ks), ("a", self.a_values),
                              ("b", self.b_values), ("seed", self.seeds)):
            if not values:
                raise ValueError(f"empty {label} range")
        for name in (self.strat_p, self.strat_s):
            make_strategy(name)
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def cells(self) -> list[tuple[int, int, int, int, int]]:
        return list(itertools.product(self.ns, self.ks, self.a_values, self.b_values, self.seeds))


@dataclass(frozen=True)
class ReportRow:
    """One playout.  ``exact_lo``/``exact_hi`` say whether a bound holds for every finite board."""

    n: int
    k: int
    a: int
    b: int
    strat_p: str
    strat_s: str
    seed: int
    score: int
    bound_lo: Fraction | None
    bound_hi: Fraction | None
    lambda_hat: float | None
    normalized: Fraction | None = None
    exact_lo: bool = False
    exact_hi: bool = False

    def violations(self) -> list[str]:
        out = []
        if self.bound_lo is not None and self.exact_lo and self.score < self.bound_lo:
            out.append(f"score {self.score} below bound {self.bound_lo}")
        if self.bound_hi is not None and self.exact_hi and self.score > self.bound_hi:
            out.append(f"score {self.score} above bound {self.bound_hi}")
        return out

    def csv_fields(self) -> list[str]:
        def num(x: Fraction | None) -> str:
            return "" if x is None else f"{float(x):.3f}"

        lam = "" if self.lambda_hat is None else f"{self.lambda_hat:.6f}"
        return [str(self.n), str(self.k), str(self.a), str(self.b), self.strat_p, self.strat_s,
                str(self.seed), str(self.score), num(self.bound_lo), num(self.bound_hi), lam]


def row_bounds(cfg: GameConfig, strat_p: str, strat_s: str
               ) -> tuple[Fraction | None, bool, Fraction | None, bool]:
    """``(lo, lo_exact, hi, hi_exact)`` for a strategy pair.

    A bound is only reported for the side whose published strategy is
    actually playing; the Turan-type ceiling is a fallback upper bound that
    holds for any play.
    """
    n, k = cfg.n, cfg.k
    lo: Fraction | None = None
    lo_exact = hi_exact = False
    if cfg.kind is Kind.DIRECTED:
        hi: Fraction | None = Fraction(turan_edges(n, k - 1))
        hi_exact = True
        if k <= 2:
            lo, lo_exact = Fraction(0), True
        elif k == 3 and strat_p == "prolonger-k3" and cfg.a == cfg.b == 1:
            lo, lo_exact = Fraction(n * n // 4), True
        elif k >= 4 and n >= k:
            if strat_p == "prolonger-structure":
                bound = prolonger_bound(n, k)
                if not bound.vacuous:
                    lo = bound.value
            if strat_s == "shortener-path" and cfg.a == cfg.b == 1:
                hi = min(hi, shortener_bound(n, k))
        return lo, lo_exact, hi, hi_exact
    hi = Fraction(turan_edges(n, k))
    hi_exact = True
    lam_lo, lam_hi = lambda_bounds(cfg.a, cfg.b)
    if strat_p == "orient-prolonger-rb":
        try:
            lo = orientation_bound(n, k, lam_lo)
        except VacuousBound:
            lo = None
    if strat_s == "orient-shortener-rb":
        # asymptotic, so it replaces the ceiling only as a reported value
        hi, hi_exact = orientation_bound(n, k, lam_hi), False
    return lo, lo_exact, hi, hi_exact


def run_cell(spec: SweepSpec, cell: tuple[int, int, int, int, int]) -> ReportRow:
    n, k, a, b, seed = cell
    cfg = GameConfig(n, spec.kind, k, a, b)
    tr, _, _ = run_pair(cfg, spec.strat_p, spec.strat_s, seed)
    score = tr.final_score
    assert score is not None
    lo, lo_exact, hi, hi_exact = row_bounds(cfg, spec.strat_p, spec.strat_s)
    lam = None
    normalized = None
    if spec.kind is Kind.ORIENTATION:
        lam = lambda_hat(score, n, k) if n >= 2 else None
    else:
        prof = path_profile(final_state(tr).board.out)  # type: ignore[union-attr]
        if prof is not None:
            sizes = [0] * max(prof.ending, default=0)
            for c in prof.ending:
                sizes[c - 1] += 1
            normalized = normalised_score(sizes, n)
    return ReportRow(n, k, a, b, spec.strat_p, spec.strat_s, seed, score, lo, hi, lam,
                     normalized, lo_exact, hi_exact)


def _run_cell_packed(args: tuple[SweepSpec, tuple[int, int, int, int, int]]) -> ReportRow:
    return run_cell(*args)


def run_sweep(spec: SweepSpec) -> list[ReportRow]:
    cells = spec.cells()
    if spec.jobs == 1:
        return [run_cell(spec, c) for c in cells]
    with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
        # map keeps submission order
        return list(pool.map(_run_cell_packed, [(spec, c) for c in cells]))


def rows_to_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def write_svg(rows: Sequence[ReportRow], kind: Kind, path: Path) -> None:
    """Scatter of score against ``n`` with reference curves, one colour per ``(k, a, b)``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "satgame"
    fig, ax = plt.subplots(figsize=(7, 4.5))
    groups: dict[tuple[int, int, int], list[ReportRow]] = {}
    for r in rows:
        groups.setdefault((r.k, r.a, r.b), []).append(r)
    for i, ((k, a, b), members) in enumerate(sorted(groups.items())):
        colour = f"C{i % 10}"
        ax.scatter([r.n for r in members], [r.score for r in members], s=14, color=colour,
                   label=f"k={k} bias {a}:{b}")
        ns = sorted({r.n for r in members})
        if kind is Kind.ORIENTATION:
            lam_lo, lam_hi = lambda_bounds(a, b)
            refs = [("lambda-", lam_lo, ":"), ("lambda+", lam_hi, "--"),
                    ("conjectured", conjectured_lambda(a, b), "-")]
            for label, lam, style in refs:
                if lam <= 0:
                    continue
                ax.plot(ns, [float(comb(n, 2) * (1 - 1 / (lam * k))) for n in ns],
                        linestyle=style, color=colour, linewidth=0.8,
                        label=f"{label} k={k} {a}:{b}")
        else:
            ax.plot(ns, [turan_edges(n, k - 1) for n in ns], linestyle=":", color=colour,
                    linewidth=0.8, label=f"class ceiling k={k}")
            if k >= 4:
                pts = [(n, float(shortener_bound(n, k))) for n in ns if n >= k]
                ax.plot([p[0] for p in pts], [p[1] for p in pts], linestyle="--", color=colour,
                        linewidth=0.8, label=f"path-Shortener bound k={k}")
    ax.set_xlabel("n")
    ax.set_ylabel("score")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# --------------------------------------------------------------------------
# verification suites


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{self.name}: {self.detail}" if self.ok else f"{self.name}: FAIL: {self.detail}"


def _all_graphs(n: int) -> Iterable[UGraph]:
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield UGraph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def suite_ghrv(count: int = 500, seed: int = 0) -> list[Check]:
    agree = total = 0
    for n in range(1, 5):
        for g in _all_graphs(n):
            for k in range(1, 5):
                total += 1
                agree += orientation_free_bruteforce(g, k) == chromatic_at_most(g, k)
    checks = [Check("ghrv-exhaustive", agree == total, f"{agree}/{total} agree")]
    rng = random.Random(seed)
    agree = 0
    for _ in range(count):
        n = rng.randint(1, 6)
        pairs = list(itertools.combinations(range(n), 2))
        edges = rng.sample(pairs, rng.randint(0, min(12, len(pairs))))
        g = UGraph.from_edges(n, edges)
        k = rng.randint(1, 4)
        agree += orientation_free_bruteforce(g, k) == chromatic_at_most(g, k)
    checks.append(Check("ghrv", agree == count, f"{agree}/{count} agree"))
    return checks


def suite_structure_scores() -> list[Check]:
    table = {("A", 6): Fraction(55, 169), ("B", 3): Fraction(1, 3), ("C", 2): Fraction(1, 3)}
    checks = []
    for (kind, lam), want in table.items():
        got = structure_score(kind, lam)
        checks.append(Check(f"s({kind}_{lam})", got == want, f"= {got}"))
    for kind in StructKind:
        values = [structure_score(kind, lam) for lam in range(2, 51)]
        dec = all(x > y for x, y in zip(values, values[1:]))
        checks.append(Check(f"s_{kind.name} decreasing", dec, "on lambda in [2,50]"))
    return checks


def suite_theorem1(ns: Sequence[int] = (2, 3, 4, 5)) -> list[Check]:
    checks = []
    for n in range(2, 7):
        got = solve(GameConfig.directed(n, 2)).score
        checks.append(Check(f"k2 n={n}", got == 0, f"score {got}"))
    for n in ns:
        got = solve(GameConfig.directed(n, 3)).score
        checks.append(Check(f"k3 n={n}", got == n * n // 4, f"score {got}, floor(n^2/4) = {n * n // 4}"))
    return checks


def suite_first_mover(max_n: int = 5, ks: Sequence[int] = (2, 3, 4)) -> list[Check]:
    checks = []
    for n in range(2, max_n + 1):
        for k in ks:
            p = solve(GameConfig.directed(n, k, first=Player.PROLONGER)).score
            s = solve(GameConfig.directed(n, k, first=Player.SHORTENER)).score
            checks.append(Check(f"first-mover n={n} k={k}", p == s, f"P first {p}, S first {s}"))
    return checks


def suite_solver_oracle() -> list[Check]:
    checks = []
    cfgs = [GameConfig.directed(n, k) for n in range(1, 5) for k in (2, 3, 4)]
    cfgs += [GameConfig.orientation(n, k) for n in range(1, 5) for k in (2, 3)]
    for cfg in cfgs:
        fast, plain = solve(cfg).score, plain_solve(cfg)
        checks.append(Check(f"oracle {cfg.kind.value} n={cfg.n} k={cfg.k}", fast == plain,
                            f"memoised {fast}, plain {plain}"))
    return checks


def terminal_problems(state: GameState, k: int) -> list[str]:
    """What keeps a terminal walk-game board from the ordered-class shape, if anything."""
    board = state.board
    assert isinstance(board, Digraph)
    prof = path_profile(board.out)
    if prof is None:
        return ["board has a directed cycle"]
    if prof.longest > k - 1:
        return [f"longest path has {prof.longest} vertices"]
    n = board.n
    cls = prof.ending
    bad = []
    for u in range(n):
        for v in range(n):
            if u != v and cls[u] < cls[v] and not board.has_arc(u, v):
                bad.append(f"missing cross-class arc {u}->{v}")
    sizes = [cls.count(c) for c in range(1, k)]
    if board.arc_count != saturated_edge_count(sizes, n):
        bad.append(f"{board.arc_count} arcs, class formula gives {saturated_edge_count(sizes, n)}")
    return bad


MIXED_P = ("prolonger-structure", "random", "greedy")
MIXED_S = ("shortener-path", "random", "greedy")


def suite_terminal_structure(count: int = 200, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    bad: list[str] = []
    for i in range(count):
        k = rng.choice((4, 5))
        n = rng.randint(k, 12)
        p, s = rng.choice(MIXED_P), rng.choice(MIXED_S)
        tr, _, _ = run_pair(GameConfig.directed(n, k), p, s, seed=i)
        for msg in terminal_problems(final_state(tr), k):
            bad.append(f"game {i} ({p} vs {s}, n={n}, k={k}): {msg}")
    return [Check("terminal-structure", not bad,
                  f"{count - len({b.split(':')[0] for b in bad})}/{count} boards clean"
                  + (f"; first: {bad[0]}" if bad else ""))]


SHORTENER_CASES = ((8, 4), (9, 4), (10, 4), (10, 5))


def suite_shortener_bound(cases: Sequence[tuple[int, int]] = SHORTENER_CASES) -> list[Check]:
    checks = []
    for n, k in cases:
        res = best_response_score(GameConfig.directed(n, k), ShortenerPath(), Player.SHORTENER,
                                  SolverBudget(max_nodes=None))
        bound = shortener_bound(n, k)
        checks.append(Check(f"shortener-path n={n} k={k}", res.score <= bound,
                            f"best response {res.score} <= {bound} ({res.nodes_explored} nodes)"))
    return checks


def suite_prolonger_k3(ns: Sequence[int] = (3, 4, 5, 6)) -> list[Check]:
    checks = []
    for n in ns:
        res = best_response_score(GameConfig.directed(n, 3), make_strategy("prolonger-k3"),
                                  Player.PROLONGER)
        checks.append(Check(f"prolonger-k3 n={n}", res.score == n * n // 4,
                            f"best response {res.score}, floor(n^2/4) = {n * n // 4}"))
    return checks


REDBLUE_CASES = ((60, 12, 1, 2), (60, 12, 1, 1), (60, 12, 4, 1))


def suite_redblue(seeds: int = 3) -> list[Check]:
    checks = []
    for n, k, a, b in REDBLUE_CASES:
        bad: list[str] = []
        for seed in range(seeds):
            sp, ss = OrientProlongerRB(), OrientShortenerRB()
            playout(GameConfig.orientation(n, k, a, b), sp, ss, seed=seed)
            bad += sp.violations + ss.violations
        checks.append(Check(f"redblue n={n} k={k} bias {a}:{b}", not bad,
                            f"{len(bad)} violations over {seeds} games"
                            + (f"; first: {bad[0]}" if bad else "")))
    return checks


def suite_path_prolonger(count: int = 30, ks: Sequence[int] = (4, 6, 10), n: int = 60) -> list[Check]:
    checks = []
    opponents = ("shortener-path", "random", "greedy")
    for k in ks:
        bad: list[str] = []
        for seed in range(count):
            sp = ProlongerStructure()
            ss = make_strategy(opponents[seed % len(opponents)])
            playout(GameConfig.directed(n, k), sp, ss, seed=seed)
            bad += sp.violations
        checks.append(Check(f"path-prolonger n={n} k={k}", not bad,
                            f"{len(bad)} violations over {count} games"
                            + (f"; first: {bad[0]}" if bad else "")))
    return checks


def suite_bias_monotone(max_n: int = 4, ks: Sequence[int] = (1, 2, 3), a_max: int = 3) -> list[Check]:
    checks = []
    for n in range(2, max_n + 1):
        for k in ks:
            for b in (1, 2):
                scores = [solve(GameConfig.orientation(n, k, a, b)).score for a in range(1, a_max + 1)]
                ok = all(x <= y for x, y in zip(scores, scores[1:]))
                checks.append(Check(f"bias n={n} k={k} b={b}", ok, f"scores for a=1..{a_max}: {scores}"))
    return checks


SUITES: dict[str, Callable[..., list[Check]]] = {
    "ghrv": suite_ghrv,
    "structure-scores": suite_structure_scores,
    "theorem1-k3": suite_theorem1,
    "first-mover": suite_first_mover,
    "solver-oracle": suite_solver_oracle,
    "terminal-structure": suite_terminal_structure,
    "shortener-bound": suite_shortener_bound,
    "prolonger-k3": suite_prolonger_k3,
    "redblue": suite_redblue,
    "path-prolonger": suite_path_prolonger,
    "bias-monotone": suite_bias_monotone,
}
