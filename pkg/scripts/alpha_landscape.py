"""Tabulate alpha over a grid of cohomology classes and compare with the circuit oracle.

    python scripts/alpha_landscape.py corpus/triangle_chord.json --grid=-4:4:0.5 --out alpha.csv
"""
import argparse
import csv
import itertools
import sys

import numpy as np

from graphkam.cli import grid_axis, parse_grid
from graphkam.io import load_problem
from graphkam.mather import alpha, alpha_circuit_oracle, is_alpha_minimizer


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("problem")
    p.add_argument("--grid", default="-4:4:0.5")
    p.add_argument("--out")
    args = p.parse_args(argv)

    graph, h = load_problem(args.problem)
    axes = parse_grid(args.grid)
    if len(axes) == 1:
        axes = axes * graph.betti
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out)
    w.writerow([f"c{i + 1}" for i in range(graph.betti)] + ["alpha", "oracle", "minimizer"])
    worst = 0.0
    for point in itertools.product(*(grid_axis(*ax) for ax in axes)):
        c = np.array(point)
        a, o = alpha(c, h), alpha_circuit_oracle(c, h)
        worst = max(worst, abs(a - o))
        w.writerow([*c, a, o, int(is_alpha_minimizer(c, h))])
    print(f"a0 = {h.a0():.6g}, max |alpha - oracle| = {worst:.2e}", file=sys.stderr)


if __name__ == "__main__":
    main()
