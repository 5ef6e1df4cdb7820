"""How close an all-seeing Prolonger gets to the path-Shortener bound.

Shortener plays the fixed path rule.  Prolonger searches every line.  The
printed best score never exceeds the bound, and at several sizes it hits it.
The last column is the P_k Turan-type ceiling for comparison.

    python3 demos/shortener_bound.py
"""

import time

from satgame import GameConfig, Player
from satgame.bounds import shortener_bound, turan_edges
from satgame.solver import SolverBudget, best_response_score
from satgame.strategies import ShortenerPath

CASES = [(6, 4), (7, 4), (8, 4), (9, 4), (10, 4), (8, 5), (9, 5)]


def main() -> None:
    print(" n  k  best  bound   ceiling  nodes     secs")
    for n, k in CASES:
        t0 = time.perf_counter()
        res = best_response_score(GameConfig.directed(n, k), ShortenerPath(), Player.SHORTENER,
                                  SolverBudget(max_nodes=None))
        bound = shortener_bound(n, k)
        mark = "=" if res.score == bound else "<"
        print(f"{n:2d} {k:2d}  {res.score:4d} {mark}{float(bound):6.1f}  {turan_edges(n, k - 1):7d}"
              f"  {res.nodes_explored:8d}  {time.perf_counter() - t0:5.1f}")


if __name__ == "__main__":
    main()
