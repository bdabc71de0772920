"""Finitely supported probability measures on the tangent bundle of a graph.

A point of the tangent bundle is ``(edge, q)`` with speed ``q >= 0``; the two
zero-speed points ``(e, 0)`` and ``(-e, 0)`` are the same point and are stored
on the declared orientation of the pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import (
    BadConcatenation,
    BadMeasure,
    BadTime,
    ConsecutiveEquilibria,
    MultiAtomEdge,
    NotClosed,
    SkeletonBreak,
    ValidationError,
    ZeroSpeedOpenPath,
)
from .graph import Chain1, Cochain1, Graph, Path, boundary, pairing, reverse_name

WEIGHT_TOL = 1e-12
CLOSED_TOL = 1e-10


class Atom(NamedTuple):
    edge: str
    q: float
    w: float


def _canonical_edge(graph: Graph, edge: str, q: float) -> str:
    if q == 0.0 and graph.pair_sign(edge)[1] < 0:
        return reverse_name(edge)
    return edge


@dataclass(frozen=True, eq=False)
class FiniteMeasure:
    graph: Graph = field(repr=False)
    atoms: tuple[Atom, ...]

    @classmethod
    def from_atoms(cls, graph: Graph, atoms: Iterable, tol: float = WEIGHT_TOL) -> "FiniteMeasure":
        acc: dict[tuple[str, float], float] = {}
        for edge, q, w in atoms:
            q, w = float(q), float(w)
            graph.index(edge)
            if not q >= 0 or not np.isfinite(q):
                raise BadMeasure(f"speed must be finite and >= 0, got {q}")
            if w < 0:
                raise BadMeasure(f"negative weight {w}")
            if w == 0:
                continue
            key = (_canonical_edge(graph, edge, q), q)
            acc[key] = acc.get(key, 0.0) + w
        total = sum(acc.values())
        if abs(total - 1.0) > tol:
            raise BadMeasure(f"weights sum to {total!r}, not 1")
        ordered = sorted(acc.items(), key=lambda kv: (graph.index(kv[0][0]), kv[0][1]))
        return cls(graph, tuple(Atom(e, q, w) for (e, q), w in ordered))

    @classmethod
    def dirac(cls, graph: Graph, edge: str, q: float) -> "FiniteMeasure":
        return cls.from_atoms(graph, [(edge, q, 1.0)])

    @classmethod
    def mix(cls, parts: Sequence[tuple[float, "FiniteMeasure"]]) -> "FiniteMeasure":
        graph = parts[0][1].graph
        atoms = [(a.edge, a.q, lam * a.w) for lam, mu in parts for a in mu.atoms]
        return cls.from_atoms(graph, atoms, tol=1e-9)

    def __len__(self):
        return len(self.atoms)

    @property
    def support_edges(self) -> tuple[str, ...]:
        seen = []
        for a in self.atoms:
            if a.edge not in seen:
                seen.append(a.edge)
        return tuple(seen)

    def points(self) -> list[tuple[str, float]]:
        return [(a.edge, a.q) for a in self.atoms]

    def allclose(self, other: "FiniteMeasure", atol: float = 1e-10) -> bool:
        return atomwise_error(self, other) <= atol

    def to_json(self) -> dict:
        return {"atoms": [{"edge": a.edge, "q": a.q, "w": a.w} for a in self.atoms]}

    @classmethod
    def from_json(cls, graph: Graph, data) -> "FiniteMeasure":
        return cls.from_atoms(graph, [(a["edge"], a["q"], a["w"]) for a in data["atoms"]])


def atomwise_error(mu: FiniteMeasure, nu: FiniteMeasure, q_tol: float = 1e-9) -> float:
    """Largest weight discrepancy after matching atoms with equal edge and speed."""
    pool = [[a.edge, a.q, a.w] for a in nu.atoms]
    err = 0.0
    for a in mu.atoms:
        match = None
        for b in pool:
            if b[0] == a.edge and abs(b[1] - a.q) <= q_tol * (1 + abs(a.q)):
                match = b
                break
        if match is None:
            err = max(err, a.w)
        else:
            err = max(err, abs(match[2] - a.w))
            pool.remove(match)
    for b in pool:
        err = max(err, b[2])
    return err


# ----------------------------------------------------------- parametrized paths


@dataclass(frozen=True, eq=False)
class ParametrizedPath:
    graph: Graph = field(repr=False)
    triples: tuple[tuple[str, float, float], ...]

    @property
    def total_time(self) -> float:
        return float(sum(t for _, _, t in self.triples))

    @property
    def support(self) -> Path:
        return Path(self.graph, tuple(e for e, _, _ in self.triples))

    @property
    def is_cycle(self) -> bool:
        return self.support.is_closed


def validate_parametrized_path(graph: Graph, triples: Sequence, time_rtol: float = 1e-12) -> ParametrizedPath:
    """Check the defining clauses of a parametrized path and wrap the triples."""
    trip = tuple((str(e), float(q), float(t)) for e, q, t in triples)
    if not trip:
        raise ValidationError("empty parametrized path")
    for e, q, t in trip:
        graph.index(e)
        if q < 0:
            raise BadTime(f"negative speed on {e}")
        if q > 0 and abs(t - 1.0 / q) > time_rtol * (1.0 / q):
            raise BadTime(f"time on {e} must be 1/q = {1.0 / q}, got {t}")
        if q == 0 and not t > 0:
            raise BadTime(f"zero-speed edge {e} needs a positive time")
    for (e, q, _), (f, r, _) in zip(trip, trip[1:]):
        if q == 0 and f != reverse_name(e) and r == 0:
            raise ConsecutiveEquilibria(f"zero speed on {e} followed by zero speed on {f}")
    edges = [e for e, _, _ in trip]
    for a, b in zip(edges, edges[1:]):
        if graph.terminal(a) != graph.origin(b):
            raise BadConcatenation(f"{a} does not end where {b} starts")
    if all(q == 0 for _, q, _ in trip) and graph.origin(edges[0]) != graph.terminal(edges[-1]):
        raise ZeroSpeedOpenPath("all speeds vanish but the path is not closed")
    last_moving = None
    for i, (e, q, _) in enumerate(trip):
        if q > 0:
            if last_moving is not None and graph.origin(e) != graph.terminal(last_moving):
                raise SkeletonBreak(f"{e} does not continue the moving skeleton after {last_moving}")
            last_moving = e
    return ParametrizedPath(graph, trip)


def occupation_measure(path: ParametrizedPath) -> FiniteMeasure:
    total = path.total_time
    return FiniteMeasure.from_atoms(path.graph, [(e, q, t / total) for e, q, t in path.triples])


def circuit_path(graph: Graph, edges: Sequence[str], speeds: Sequence[float]) -> ParametrizedPath:
    """Parametrize a circuit with positive speeds, each edge taking time ``1/q``."""
    return validate_parametrized_path(graph, [(e, q, 1.0 / q) for e, q in zip(edges, speeds)])


def equilibrium_path(graph: Graph, edge: str, t: float = 1.0, s: float = 1.0) -> ParametrizedPath:
    return validate_parametrized_path(graph, [(edge, 0.0, t), (reverse_name(edge), 0.0, s)])


# --------------------------------------------------------- rotation vectors


@dataclass(frozen=True, eq=False)
class RotationVector:
    chain: Chain1
    coords: np.ndarray | None

    @property
    def closed(self) -> bool:
        return self.coords is not None


def flux_chain(mu: FiniteMeasure) -> Chain1:
    return Chain1.from_edges(mu.graph, _accumulate((a.edge, a.w * a.q) for a in mu.atoms))


def _accumulate(items):
    acc: dict[str, float] = {}
    for e, x in items:
        acc[e] = acc.get(e, 0.0) + x
    return acc


def is_closed(mu: FiniteMeasure, tol: float = CLOSED_TOL) -> bool:
    rho = flux_chain(mu)
    scale = 1.0 + float(np.max(np.abs(rho.values), initial=0.0))
    return float(np.max(np.abs(boundary(rho).values), initial=0.0)) <= tol * scale


def rotation_vector(mu: FiniteMeasure) -> RotationVector:
    rho = flux_chain(mu)
    coords = mu.graph.basis.coords(rho) if is_closed(mu) else None
    return RotationVector(rho, coords)


def measure_with_rotation(graph: Graph, h: Chain1) -> FiniteMeasure:
    """Closed measure with rotation vector ``h``: equal masses ``1/N`` at speeds ``N |h_i|``."""
    terms = [(p if x > 0 else "-" + p, abs(x)) for p, x in zip(graph.pairs, h.values) if x != 0]
    if not terms:
        return FiniteMeasure.dirac(graph, graph.pairs[0], 0.0)
    n = len(terms)
    return FiniteMeasure.from_atoms(graph, [(e, n * a, 1.0 / n) for e, a in terms])


def integrate(f: Callable[[str, float], float], mu: FiniteMeasure) -> float:
    return float(sum(a.w * f(a.edge, a.q) for a in mu.atoms))


def integrate_cochain(omega: Cochain1, mu: FiniteMeasure) -> float:
    return pairing(omega, flux_chain(mu))


def action(h, mu: FiniteMeasure) -> float:
    """Action of ``mu`` for a (possibly omega-modified) graph Hamiltonian."""
    return integrate(h.lagrangian, mu)


# ------------------------------------------------------ circuit decomposition


@dataclass(frozen=True, eq=False)
class CircuitComponent:
    weight: float
    path: ParametrizedPath
    measure: FiniteMeasure


def decompose_circuits(mu: FiniteMeasure, tol: float = CLOSED_TOL) -> list[CircuitComponent]:
    """Write a closed measure with one atom per edge as a convex combination
    of circuit occupation measures.

    Zero-speed atoms split off as equilibrium circuits.  The moving part is
    peeled one circuit at a time: walk the support from its smallest edge,
    always leaving a vertex by the smallest available edge, until a vertex
    repeats; subtract the largest multiple of that circuit's occupation
    measure that keeps every weight non-negative.
    """
    g = mu.graph
    if not is_closed(mu, tol):
        raise NotClosed("measure is not closed")
    comps: list[CircuitComponent] = []
    mass: dict[str, float] = {}
    speed: dict[str, float] = {}
    for a in mu.atoms:
        if a.q == 0:
            path = equilibrium_path(g, a.edge)
            comps.append(CircuitComponent(a.w, path, FiniteMeasure.dirac(g, a.edge, 0.0)))
            continue
        if a.edge in mass:
            raise MultiAtomEdge(f"edge {a.edge} carries more than one speed")
        mass[a.edge] = a.w
        speed[a.edge] = a.q

    drop = 1e-15
    stray = 1e-9
    while mass:
        start = min(mass, key=g.index)
        seq = [start]
        where = {g.origin(start): 0}
        cur = g.terminal(start)
        while cur not in where:
            nxt = [e for e in mass if g.origin(e) == cur]
            if not nxt:
                if all(mass[e] <= stray for e in seq):
                    for e in seq:
                        del mass[e]
                    seq = None
                    break
                raise NotClosed(f"flux is not conserved at vertex {cur}")
            where[cur] = len(seq)
            e = min(nxt, key=g.index)
            seq.append(e)
            cur = g.terminal(e)
        if seq is None:
            continue
        circ = seq[where[cur]:]
        qs = [speed[e] for e in circ]
        period = sum(1.0 / q for q in qs)
        k_min = min(range(len(circ)), key=lambda i: qs[i] * mass[circ[i]])
        kappa = period * qs[k_min] * mass[circ[k_min]]
        for i, e in enumerate(circ):
            if i == k_min:
                del mass[e]
                continue
            mass[e] -= kappa / (period * qs[i])
            if mass[e] <= drop:
                del mass[e]
        path = circuit_path(g, circ, qs)
        comps.append(CircuitComponent(kappa, path, occupation_measure(path)))
    return comps


def recombine(comps: Sequence[CircuitComponent]) -> FiniteMeasure:
    return FiniteMeasure.mix([(c.weight, c.measure) for c in comps])


# ------------------------------------------------------------- Wasserstein


def tangent_distance(graph: Graph, x: tuple[str, float], y: tuple[str, float]) -> float:
    """Distance on the tangent bundle.

    Same fiber: ``|q1 - q2|``.  Opposite fibers ``e``/``-e`` meet at the
    shared zero point: ``q1 + q2``.  Unrelated edges: ``q1 + q2 + 1``.
    """
    (e1, q1), (e2, q2) = x, y
    e1 = _canonical_edge(graph, e1, q1)
    e2 = _canonical_edge(graph, e2, q2)
    if e1 == e2:
        return abs(q1 - q2)
    if e1 == reverse_name(e2):
        return q1 + q2
    return q1 + q2 + 1.0


def wasserstein1(mu: FiniteMeasure, nu: FiniteMeasure) -> float:
    """Exact first Wasserstein distance between two finitely supported measures."""
    g = mu.graph
    n, m = len(mu.atoms), len(nu.atoms)
    cost = np.array(
        [[tangent_distance(g, (a.edge, a.q), (b.edge, b.q)) for b in nu.atoms] for a in mu.atoms]
    )
    if n == 1 or m == 1:
        # one side is a Dirac mass: the only coupling is the product
        return float(np.sum(cost * np.outer([a.w for a in mu.atoms], [b.w for b in nu.atoms])))
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([[a.w for a in mu.atoms], [b.w for b in nu.atoms]])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise BadMeasure(f"transport problem failed: {res.message}")
    return max(float(res.fun), 0.0)
