"""Mather alpha and beta functions, Mather measures and related checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq, linprog, nnls

from .errors import NoConvergence, NonConvergence
from .graph import Cochain1, Graph, enumerate_circuits, pairing, reverse_name
from .hamiltonian import modify
from .measures import (
    CircuitComponent,
    FiniteMeasure,
    action,
    circuit_path,
    decompose_circuits,
    occupation_measure,
    rotation_vector,
)
from .weak_kam import CRITICAL_TOL, WeakKamResult, critical_value, intrinsic_length, solve

ACTION_TOL = 1e-8
GAP_TOL = 1e-7


def _coords(graph: Graph, x) -> np.ndarray:
    return np.asarray(x, dtype=float).reshape(graph.betti)


def shifted(h, c):
    """``H`` modified by the representative cochain of the class ``c``."""
    return modify(h, h.graph.basis.representative_cochain(_coords(h.graph, c)))


def alpha(c, h, tol: float = CRITICAL_TOL) -> float:
    return critical_value(shifted(h, c), tol)


def alpha_circuit_oracle(c, h) -> float:
    """Max over circuits of the smallest level at which the circuit has
    non-negative intrinsic length; equilibrium circuits contribute their floor."""
    hm = shifted(h, c)
    g = h.graph
    best = h.a0()
    for path in enumerate_circuits(g):
        floor = max(h.a_floor(e) for e in path.edges)
        lo = max(floor, best)
        if intrinsic_length(path, lo, hm) >= 0:
            continue
        step = 1.0 + abs(lo)
        hi = lo + step
        while intrinsic_length(path, hi, hm) < 0:
            step *= 2.0
            hi = lo + step
        best = brentq(lambda a: intrinsic_length(path, a, hm), lo, hi, xtol=1e-13, rtol=1e-15)
    return float(best)


# --------------------------------------------------------------- measures


@dataclass(frozen=True, eq=False)
class MatherSolution:
    c: np.ndarray
    alpha: float
    mather_set: tuple[tuple[str, float], ...]
    irreducible_measures: tuple[FiniteMeasure, ...]
    rotation_vectors: np.ndarray
    circuits: tuple[tuple[str, ...], ...]
    weak_kam: WeakKamResult = field(repr=False)
    rejected: int = 0

    @property
    def graph(self) -> Graph:
        return self.weak_kam.hamiltonian.graph


def mather_measures(c, h, action_tol: float = ACTION_TOL) -> MatherSolution:
    """Irreducible Mather measures at ``c``: one per circuit of moving Aubry
    edges (speeds ``Q_c``) plus a zero-speed Dirac mass per resting pair."""
    g = h.graph
    c = _coords(g, c)
    hm = shifted(h, c)
    wk = solve(hm)
    a = wk.level
    moving = [e for e in wk.aubry_edges if wk.speeds[e] > 0]
    resting = []
    for e in wk.aubry_edges:
        if wk.speeds[e] == 0:
            rep = e if g.pair_sign(e)[1] > 0 else reverse_name(e)
            if rep not in resting:
                resting.append(rep)

    candidates = []
    for path in enumerate_circuits(g, moving):
        qs = [wk.speeds[e] for e in path.edges]
        candidates.append((path.edges, occupation_measure(circuit_path(g, path.edges, qs))))
    for e in resting:
        candidates.append(((e, reverse_name(e)), FiniteMeasure.dirac(g, e, 0.0)))

    kept, circuits, rejected = [], [], 0
    for edges, mu in candidates:
        if abs(action(hm, mu) + a) <= action_tol * (1.0 + abs(a)):
            kept.append(mu)
            circuits.append(tuple(edges))
        else:
            rejected += 1
    rho = np.array([rotation_vector(mu).coords for mu in kept]).reshape(len(kept), g.betti)
    mset = tuple((e, wk.speeds[e]) for e in wk.aubry_edges)
    return MatherSolution(c, a, mset, tuple(kept), rho, tuple(circuits), wk, rejected)


@dataclass(frozen=True)
class Subdifferential:
    points: np.ndarray
    hull_certified: bool = False


def rotation_vectors(ms: MatherSolution) -> np.ndarray:
    return ms.rotation_vectors


def subdifferential(c, h) -> Subdifferential:
    """Rotation vectors of the irreducibles; the subdifferential is reported
    as their convex hull, without certifying that nothing is missing."""
    pts = mather_measures(c, h).rotation_vectors
    return Subdifferential(np.unique(np.round(pts, 12), axis=0))


def _points(obj) -> list[tuple[str, float]]:
    if isinstance(obj, MatherSolution):
        return [p for mu in obj.irreducible_measures for p in mu.points()]
    if isinstance(obj, FiniteMeasure):
        return obj.points()
    return [tuple(p) for p in obj]


def check_graph_property(obj, graph: Graph | None = None, tol: float = 1e-9) -> bool:
    """No edge carries two speeds, and ``e``/``-e`` coexist only at rest.

    Accepts a MatherSolution, a measure, or plain ``(edge, q)`` points
    (``graph`` is then only needed to canonicalize the zero-speed points).
    """
    seen: dict[str, float] = {}
    for e, q in _points(obj):
        if q == 0 and e.startswith("-"):
            e = reverse_name(e)
        if e in seen:
            if abs(seen[e] - q) > tol * (1.0 + abs(q)):
                return False
        else:
            seen[e] = q
    for e, q in seen.items():
        r = reverse_name(e)
        if r in seen and not (q == 0 and seen[r] == 0):
            return False
    return True


def _minimizer_criteria(c, h, tol: float) -> tuple[bool, bool]:
    wk = solve(shifted(h, c))
    # speeds on the floor-edges behave like sqrt(alpha - a0), hence the root
    by_speed = wk.min_speed <= math.sqrt(2.0 * tol)
    by_value = abs(wk.level - h.a0()) <= tol
    return by_speed, by_value


def is_alpha_minimizer(c, h, tol: float = 1e-8) -> bool:
    """True iff ``Q_c`` vanishes somewhere on the Aubry set."""
    return _minimizer_criteria(c, h, tol)[0]


# -------------------------------------------------------------------- beta


@dataclass(frozen=True, eq=False)
class BetaResult:
    value: float
    optimal_c: np.ndarray
    dual_value: float
    gap: float
    level: float
    measure: FiniteMeasure
    components: tuple[CircuitComponent, ...]
    irreducible_feasible: bool | None = None
    irreducible_value: float | None = None
    iterations: int = 0


def _flux_level(h, x: np.ndarray):
    """Common energy level of the optimal measure with flux chain ``x``.

    Each pair with flux ``|x_i|`` is run in the flux direction at speed
    ``1/dsigma_da(level)``, carrying mass ``|x_i| dsigma_da(level)``; any
    leftover mass rests on a pair of maximal floor, which forces the level
    to ``a0``.
    """
    g = h.graph
    used = []
    for i, xi in enumerate(x):
        if xi != 0:
            used.append((g.pairs[i] if xi > 0 else "-" + g.pairs[i], abs(float(xi))))
    a0 = h.a0()

    def mass(a):
        return sum(f * h.dsigma_da(e, a) for e, f in used)

    if not used or mass(a0) <= 1.0:
        return a0, used
    step = 1.0 + abs(a0)
    hi = a0 + step
    while mass(hi) > 1.0:
        step *= 2.0
        hi = a0 + step
        if step > 1e300:
            raise NonConvergence("flux level not bracketed")
    # the mass may diverge at a0 itself, so start just above it
    lo = a0 + 1e-14 * (1.0 + abs(a0))
    if mass(lo) <= 1.0:
        return lo, used
    level = brentq(lambda a: mass(a) - 1.0, lo, hi, xtol=1e-15, rtol=1e-15)
    return level, used


def _closed_form(h, hvec: np.ndarray):
    g = h.graph
    x = g.basis.chain_from_coords(hvec).values
    level, used = _flux_level(h, x)
    a0 = h.a0()
    atoms, primal, total = [], 0.0, 0.0
    for e, f in used:
        d = h.dsigma_da(e, level)
        q, m = 1.0 / d, f * d
        atoms.append((e, q, m))
        primal += m * h.lagrangian(e, q)
        total += m
    rest = 1.0 - total
    if level > a0 + 1e-13 * (1.0 + abs(a0)):
        # all mass moves; drop the round-off remainder
        atoms = [(e, q, m / total) for e, q, m in atoms]
        primal /= total
    elif rest > 0:
        k = int(np.argmax(h.a_floors))
        atoms.append((g.edges[k], 0.0, rest))
        primal -= rest * a0
    flow = {e for e, _ in used}
    omega = np.empty(g.n_pairs)
    for i, p in enumerate(g.pairs):
        if p in flow:
            omega[i] = h.sigma(p, level)
        elif "-" + p in flow:
            omega[i] = -h.sigma("-" + p, level)
        else:
            omega[i] = 0.5 * (h.sigma(p, level) - h.sigma("-" + p, level))
    c = g.basis.cohomology_class(Cochain1(g, omega))
    return primal, c, level, FiniteMeasure.from_atoms(g, atoms, tol=1e-9)


def _closest_rotation(ms: MatherSolution, hvec: np.ndarray) -> np.ndarray:
    pts = ms.rotation_vectors
    if len(pts) == 0:
        return np.zeros_like(hvec)
    # closest point of the convex hull: least squares with a heavy sum-to-one row
    a = np.vstack([pts.T, 1e3 * np.ones(len(pts))])
    b = np.concatenate([hvec, [1e3]])
    w, _ = nnls(a, b)
    return pts.T @ (w / w.sum())


def _ascent(h, hvec, target, c, tol, max_iter):
    """Polyak supergradient ascent on ``c -> <c,h> - alpha(c)``."""
    best_c, best = c, float(c @ hvec - alpha(c, h))
    for it in range(1, max_iter + 1):
        if target - best <= tol:
            return best_c, best, it
        ms = mather_measures(c, h)
        g = hvec - _closest_rotation(ms, hvec)
        nrm = float(g @ g)
        if nrm < 1e-30:
            return c, float(c @ hvec - ms.alpha), it
        c = c + (target - best) / nrm * g
        val = float(c @ hvec - alpha(c, h))
        if val > best:
            best_c, best = c, val
    raise NoConvergence(f"duality gap {target - best:.3e} after {max_iter} steps")


def _irreducible_check(h, c, hvec):
    """Feasibility program: weights on the irreducibles at ``c`` matching ``h``."""
    ms = mather_measures(c, h)
    n = len(ms.irreducible_measures)
    if n == 0:
        return None, None
    costs = np.array([action(h, mu) for mu in ms.irreducible_measures])
    a_eq = np.vstack([ms.rotation_vectors.T, np.ones(n)])
    b_eq = np.concatenate([hvec, [1.0]])
    res = linprog(costs, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        return False, None
    return True, float(res.fun)


def beta(hvec, h, tol: float = GAP_TOL, max_iter: int = 200, cross_check: bool = True) -> BetaResult:
    """Mather's beta at the homology class ``hvec`` with a dual certificate.

    The minimizing measure is built directly (one speed per flux edge, all at
    one energy level); the class ``c`` making every used edge tight at that
    level gives the dual bound ``<c,h> - alpha(c)``.  If the gap is not
    closed, supergradient ascent on the dual takes over.
    """
    g = h.graph
    hvec = _coords(g, hvec)
    primal, c, level, mu = _closed_form(h, hvec)
    dual = float(c @ hvec - alpha(c, h))
    iters = 0
    if primal - dual > tol:
        c, dual, iters = _ascent(h, hvec, primal, c, tol, max_iter)
    comps = tuple(decompose_circuits(mu))
    feas, val = _irreducible_check(h, c, hvec) if cross_check else (None, None)
    return BetaResult(primal, np.asarray(c), dual, primal - dual, level, mu, comps, feas, val, iters)


def beta_value(hvec, h) -> float:
    return beta(hvec, h, cross_check=False).value
