"""Exact values of the P_3 game, and why neither player can do better.

The solver gives floor(n^2/4) for every small n.  The same number comes out
when only Shortener searches and Prolonger follows the published k = 3 rule,
so that rule already guarantees the value.  The final board is a complete
bipartite orientation: every arc runs from the sources to the sinks.

    python3 demos/k3_balance.py
"""

from satgame import GameConfig, Player
from satgame.oracle import vertex_classes
from satgame.solver import best_response_score, solve
from satgame.strategies import ProlongerK3


def main() -> None:
    print(" n  solve  vs-k3-rule  floor(n^2/4)")
    for n in range(2, 7):
        cfg = GameConfig.directed(n, 3)
        exact = solve(cfg)
        ruled = best_response_score(cfg, ProlongerK3(), Player.PROLONGER).score
        print(f"{n:2d}  {exact.score:5d}  {ruled:10d}  {n * n // 4:12d}")

    res = solve(GameConfig.directed(6, 3))
    *_, last = res.principal_variation.replay()
    classes = vertex_classes(last.board, 3)
    print("\nprincipal variation at n=6:")
    print(res.principal_variation.to_text())
    print(f"class sizes on the final board: {classes.sizes}")


if __name__ == "__main__":
    main()
