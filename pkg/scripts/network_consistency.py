"""Compile a network file and report the grid checks and a few critical values.

    python scripts/network_consistency.py corpus/network_theta_s.json
"""
import argparse

import numpy as np

from graphkam.io import load_network
from graphkam.mather import alpha
from graphkam.network import check_compiled, compile_network


def main(argv=None):
    p = argparse.ArgumentParser()
    p.add_argument("network")
    p.add_argument("--nodes", type=int, default=32)
    args = p.parse_args(argv)

    spec = load_network(args.network)
    graph, h = compile_network(spec, args.nodes)
    _, fine = compile_network(spec, 2 * args.nodes)
    for e in graph.edges:
        rep = check_compiled(h.branch(e))
        drift = max(abs(h.sigma(e, a) - fine.sigma(e, a)) for a in h.a_floor(e) + np.logspace(-3, 2, 11))
        print(f"{e:>6}  floor {h.a_floor(e):+.4f}  checks {'ok' if rep.ok else rep.violations}  "
              f"node-doubling drift {drift:.1e}")
    rng = np.random.default_rng(0)
    for _ in range(3):
        c = rng.normal(0, 2, graph.betti)
        print(f"alpha({np.round(c, 3)}) = {alpha(c, h):.10f}")


if __name__ == "__main__":
    main()
