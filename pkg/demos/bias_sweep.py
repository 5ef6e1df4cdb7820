"""Red/Blue strategies in the biased orientation game, across biases.

For each bias a:b the two published strategies play each other on K_n.  The
score is turned back into an effective lambda (lambda_hat) through
C(n,2)(1 - 1/(lambda k)) and printed beside the proven window and the
conjectured value 2a/(b+2a).  Only biases with b >= 2a give a positive
lambda-minus; elsewhere the Red sets shrink to pairs and the games collapse
onto the same final board, which is visible as repeated rows.  An SVG of the same table is written when a path is
given.

    python3 demos/bias_sweep.py [out.svg]
"""

import sys
from pathlib import Path

from satgame.bounds import conjectured_lambda, lambda_bounds
from satgame.engine import Kind
from satgame.experiments import SweepSpec, run_sweep, write_svg

BIASES = (1, 2, 3)


def main(svg: str | None = None) -> None:
    spec = SweepSpec(Kind.ORIENTATION, (160,), (24,), BIASES, BIASES,
                     "orient-prolonger-rb", "orient-shortener-rb", (0,), jobs=4)
    rows = run_sweep(spec)
    print(" a:b   score  lambda_hat  [lam-, lam+]   conjecture")
    for r in rows:
        lo, hi = lambda_bounds(r.a, r.b)
        print(f" {r.a}:{r.b}  {r.score:6d}  {r.lambda_hat:10.3f}  [{float(lo):.2f}, {float(hi):.2f}]"
              f"   {float(conjectured_lambda(r.a, r.b)):.3f}")
    if svg:
        write_svg(rows, Kind.ORIENTATION, Path(svg))
        print(f"wrote {svg}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
