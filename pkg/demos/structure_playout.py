"""Watch the structure-building Prolonger against the path Shortener.

After the opening path on k - 1 vertices, Prolonger grows a chain of A, B and
C structures, each a directed path plus a few loose vertices.  The script
plays one game, then prints every structure with its normalised score and
the class sizes of the final board.

    python3 demos/structure_playout.py [n] [k] [seed]
"""

import sys

from satgame import GameConfig, playout
from satgame.bounds import prolonger_bound, shortener_bound
from satgame.oracle import vertex_classes
from satgame.strategies import ProlongerStructure, ShortenerPath, structure_score


def main(n: int = 40, k: int = 6, seed: int = 0) -> None:
    prolonger = ProlongerStructure()
    tr = playout(GameConfig.directed(n, k), prolonger, ShortenerPath(), seed=seed)
    *_, last = tr.replay()

    print(f"opening path: {prolonger.builder.path}")
    for rec in prolonger.records:
        state = "closed" if rec.closed else "open"
        print(f"  {rec.kind.name}_{rec.lam:<3d} path {rec.path_vertices} loose {sorted(rec.off_path_vertices)}"
              f"  s={structure_score(rec.kind, rec.lam)}  {state}")
    print(f"starved structures: {prolonger.starved}, invariant violations: {len(prolonger.violations)}")

    lo = prolonger_bound(n, k)
    print(f"\nscore {tr.final_score} after {len(tr.moves)} moves")
    print(f"  lower bound {'(vacuous)' if lo.vacuous else float(lo.value)}, "
          f"path-Shortener bound {float(shortener_bound(n, k)):.1f}")
    print(f"  class sizes {vertex_classes(last.board, k).sizes}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:4]))
