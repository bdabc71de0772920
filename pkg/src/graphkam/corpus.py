"""Seeded generators for random test problems and a few named graphs."""
from __future__ import annotations

import numpy as np

from .graph import Graph, build_graph, enumerate_circuits
from .hamiltonian import GraphHamiltonian, quadratic_family
from .measures import FiniteMeasure, circuit_path, occupation_measure


def two_parallel() -> Graph:
    return build_graph(["x", "y"], [("e1", "x", "y"), ("e2", "x", "y")])


def triangle() -> Graph:
    return build_graph(["x", "y", "z"], [("f1", "x", "y"), ("f2", "y", "z"), ("f3", "z", "x")])


def triangle_chord() -> Graph:
    return build_graph(
        ["x", "y", "z"], [("f1", "x", "y"), ("f2", "y", "z"), ("f3", "z", "x"), ("f4", "x", "z")]
    )


def random_graph(rng: np.random.Generator, max_vertices: int = 6, max_pairs: int = 8) -> Graph:
    """Connected loopless graph: a random spanning tree plus random extra pairs."""
    n = int(rng.integers(2, max_vertices + 1))
    m = int(rng.integers(max(n - 1, 1), max_pairs + 1))
    verts = [f"v{i}" for i in range(n)]
    specs = []
    for k in range(1, n):
        j = int(rng.integers(0, k))
        specs.append((k, j))
    while len(specs) < m:
        i, j = rng.choice(n, size=2, replace=False)
        specs.append((int(i), int(j)))
    order = rng.permutation(len(specs))
    edges = []
    for name, k in enumerate(order):
        i, j = specs[k]
        if rng.random() < 0.5:
            i, j = j, i
        edges.append((f"e{name + 1}", verts[i], verts[j]))
    return build_graph(verts, edges)


def random_quadratic(graph: Graph, rng: np.random.Generator, theta_scale: float = 1.0,
                     v_scale: float = 1.0) -> GraphHamiltonian:
    theta = rng.normal(0.0, theta_scale, graph.n_pairs)
    v = rng.uniform(-v_scale, v_scale, graph.n_pairs)
    return quadratic_family(graph, theta, v)


def random_circuit_mixture(graph: Graph, rng: np.random.Generator, k: int = 3,
                           speed_range=(0.2, 3.0)) -> FiniteMeasure:
    """Convex combination of ``k`` circuit occupation measures at random speeds.

    Edges shared between circuits reuse one speed, so the result keeps a
    single atom per edge.
    """
    circuits = enumerate_circuits(graph, include_equilibria=True)
    picks = rng.choice(len(circuits), size=min(k, len(circuits)), replace=False)
    speeds: dict[str, float] = {}
    parts = []
    for idx in picks:
        path = circuits[int(idx)]
        if path.is_equilibrium:
            e = path.edges[0]
            parts.append(FiniteMeasure.dirac(graph, e, 0.0))
            continue
        qs = []
        for e in path.edges:
            if e not in speeds:
                speeds[e] = float(rng.uniform(*speed_range))
            qs.append(speeds[e])
        parts.append(occupation_measure(circuit_path(graph, path.edges, qs)))
    w = rng.dirichlet(np.ones(len(parts)))
    return FiniteMeasure.mix(list(zip(w, parts)))
