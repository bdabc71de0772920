"""Beta along a ray of homology classes with its duality certificate.

    python scripts/beta_duality.py corpus/triangle.json --direction 1 --n 9
"""
import argparse

import numpy as np

from graphkam.io import load_problem
from graphkam.mather import alpha, beta


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("problem")
    p.add_argument("--direction", help="comma separated, default first basis vector")
    p.add_argument("--tmax", type=float, default=3.0)
    p.add_argument("--n", type=int, default=7)
    args = p.parse_args(argv)

    graph, h = load_problem(args.problem)
    d = np.zeros(graph.betti)
    if args.direction:
        d = np.array([float(x) for x in args.direction.split(",")])
    else:
        d[0] = 1.0
    print(f"{'t':>6} {'beta':>12} {'level':>10} {'gap':>9} {'circuits':>8}  optimal c")
    for t in np.linspace(-args.tmax, args.tmax, args.n):
        res = beta(t * d, h)
        # Fenchel-Young at the returned class, recomputed independently
        fy = res.value + alpha(res.optimal_c, h) - res.optimal_c @ (t * d)
        print(f"{t:6.2f} {res.value:12.6f} {res.level:10.5f} {max(res.gap, fy):9.1e} "
              f"{len(res.components):8d}  {np.round(res.optimal_c, 5)}")


if __name__ == "__main__":
    main()
