"""Discrete Hamilton-Jacobi equation: critical value, subsolutions, Aubry set."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import BelowFloor, NoSubsolution
from .graph import Cochain0, Cochain1, Graph, Path

NEG_CYCLE_RTOL = 1e-12
TIGHT_RTOL = 1e-8
CRITICAL_TOL = 1e-10


def intrinsic_length(path: Path, a: float, h) -> float:
    """Sum of ``sigma^omega(e, a)`` along the path."""
    return float(sum(h.sigma(e, a) for e in path.edges))


def _weights(h, a: float) -> np.ndarray:
    a0 = h.a0()
    if a < a0 - 1e-12 * (1.0 + abs(a0)):
        raise BelowFloor(f"level {a} is below a0 = {a0}")
    return h.sigma_vector(max(a, a0))


def _relax(graph: Graph, w: np.ndarray, dist: np.ndarray, rtol: float):
    """Bellman-Ford rounds; returns final distances and whether the last round
    still improved something (a negative cycle)."""
    tail, head = graph.tail_idx, graph.head_idx
    tol = rtol * (1.0 + float(np.max(np.abs(w), initial=0.0)))
    dist = dist.copy()
    for _ in range(graph.n_vertices):
        cand = np.full_like(dist, np.inf)
        np.minimum.at(cand, head, dist[tail] + w)
        better = cand < dist - tol
        if not better.any():
            return dist, False
        dist[better] = cand[better]
    return dist, True


def has_subsolution(a: float, h, rtol: float = NEG_CYCLE_RTOL) -> bool:
    """True iff no cycle is negative for the weights ``sigma^omega(., a)``."""
    w = _weights(h, a)
    _, negative = _relax(h.graph, w, np.zeros(h.graph.n_vertices), rtol)
    return not negative


def critical_value(h, tol: float = CRITICAL_TOL) -> float:
    """Smallest level admitting a subsolution, by bisection on ``[a0, a_hi]``."""
    lo = h.a0()
    if has_subsolution(lo, h):
        return lo
    step = 1.0 + abs(lo)
    hi = lo + step
    while not has_subsolution(hi, h):
        lo = hi
        step *= 2.0
        hi = lo + step
    # absolute tolerance, floored at a few ulps so large levels terminate
    while hi - lo > max(tol, 8 * np.finfo(float).eps * abs(hi)):
        mid = 0.5 * (lo + hi)
        if has_subsolution(mid, h):
            hi = mid
        else:
            lo = mid
    return hi


def subsolution(h, a: float | None = None) -> Cochain0:
    """Shortest-path potential from the smallest vertex, normalized to 0 there."""
    g = h.graph
    if a is None:
        a = critical_value(h)
    w = _weights(h, a)
    dist = np.full(g.n_vertices, np.inf)
    dist[g.vertex_index(g.base_vertex)] = 0.0
    dist, negative = _relax(g, w, dist, NEG_CYCLE_RTOL)
    if negative:
        raise NoSubsolution(f"no subsolution at level {a}")
    return Cochain0(g, dist)


def speed(h, e: str, level: float) -> float:
    """``1 / dsigma_da`` at the level, or 0 when the level sits on the edge floor."""
    af = h.a_floor(e)
    if level - af <= 1e-14 * (1.0 + abs(af)):
        return 0.0
    d = h.dsigma_da(e, level)
    return 0.0 if math.isinf(d) else 1.0 / d


@dataclass(frozen=True, eq=False)
class WeakKamResult:
    level: float
    subsolution: Cochain0
    aubry_edges: tuple[str, ...]
    speeds: dict[str, float]
    hamiltonian: object = field(repr=False)

    @property
    def omega(self) -> Cochain1:
        return self.hamiltonian.omega

    @property
    def min_speed(self) -> float:
        return min(self.speeds.values())


def aubry_set(h, level: float | None = None, u: Cochain0 | None = None,
              tight_rtol: float = TIGHT_RTOL) -> tuple[tuple[str, ...], dict[str, float]]:
    """Edges on zero-length cycles at the critical level, with their speeds.

    Every subsolution is tight along a zero cycle, so the Aubry set is the
    set of tight edges whose endpoints share a strongly connected component
    of the tight subgraph.
    """
    g = h.graph
    if level is None:
        level = critical_value(h)
    if u is None:
        u = subsolution(h, level)
    w = _weights(h, level)
    du = u.values[g.head_idx] - u.values[g.tail_idx]
    scale = 1.0 + float(np.max(np.abs(w), initial=0.0))
    tight = np.abs(du - w) <= tight_rtol * scale

    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertices)
    dg.add_edges_from((g.origin(e), g.terminal(e)) for e, t in zip(g.edges, tight) if t)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(dg)):
        for x in scc:
            comp[x] = k
    edges = tuple(
        e for e, t in zip(g.edges, tight) if t and comp[g.origin(e)] == comp[g.terminal(e)]
    )
    return edges, {e: speed(h, e, level) for e in edges}


def solve(h, tol: float = CRITICAL_TOL) -> WeakKamResult:
    level = critical_value(h, tol)
    u = subsolution(h, level)
    edges, speeds = aubry_set(h, level, u)
    return WeakKamResult(level, u, edges, speeds, h)
