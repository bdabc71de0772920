"""Edge Hamiltonians described through their right-branch inverse.

Every downstream algorithm only consumes ``a_floor`` (the minimum value of
``H(e, .)``), the right inverse ``sigma(e, a)`` on ``[a_floor, inf)`` and its
derivative.  The Lagrangian is the convex conjugate, evaluated for ``q >= 0``
as ``max_{a >= a_floor} (q * sigma(a) - a)``; the ``q < 0`` branch is read off
the reversed edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import BelowFloor, NonConvergence, ValidationError
from .graph import Cochain1, Graph

_XTOL = 4 * np.finfo(float).eps


class EdgeHamiltonian:
    """Base class for one directed edge."""

    a_floor: float
    family = "abstract"

    def sigma(self, a: float) -> float:
        raise NotImplementedError

    def dsigma_da(self, a: float) -> float:
        raise NotImplementedError

    @property
    def p_min(self) -> float:
        return self.sigma(self.a_floor)

    def _level(self, a: float) -> float:
        af = self.a_floor
        if a < af - 1e-12 * (1.0 + abs(af)):
            raise BelowFloor(f"level {a} below floor {af}")
        return max(float(a), af)

    def lagrangian(self, q: float) -> float:
        return conjugate_lagrangian(self, q)

    def energy(self, p: float) -> float:
        """Inverse of ``sigma``: the level ``a`` with ``sigma(a) = p``, for ``p >= p_min``."""
        af = self.a_floor
        if p <= self.p_min:
            return af
        width = 1.0 + abs(af)
        for _ in range(400):
            if self.sigma(af + width) >= p:
                break
            width *= 2.0
        else:
            raise NonConvergence("could not bracket the energy level")
        return brentq(lambda a: self.sigma(a) - p, af, af + width, xtol=1e-14 * width, rtol=_XTOL)

    def to_json(self) -> dict:
        raise NotImplementedError


def conjugate_lagrangian(h: EdgeHamiltonian, q: float, max_iter: int = 400) -> float:
    """``L(q) = max_{a >= a_floor} (q sigma(a) - a)`` for ``q >= 0``, numerically.

    The maximiser solves ``q * dsigma_da(a) = 1``; it is bracketed between
    ``a_floor + delta`` and an upper level grown by doubling, then refined with
    Brent's method.  ``dsigma_da`` may blow up at the floor, hence the offset.
    """
    if q < 0:
        raise ValueError("edge-level Lagrangian is defined for q >= 0")
    af = h.a_floor
    if q == 0:
        return -af

    def value(a):
        return q * h.sigma(a) - a

    def slope(a):
        return q * h.dsigma_da(a) - 1.0

    lo = af + 1e-12 * (1.0 + abs(af))
    if not slope(lo) > 0:
        return max(value(af), value(lo))
    width = 1.0 + abs(af)
    for _ in range(max_iter):
        if slope(af + width) < 0:
            break
        width *= 2.0
    else:
        raise NonConvergence(f"Lagrangian maximiser not bracketed at q={q}")
    a_star = brentq(slope, lo, af + width, xtol=1e-14 * (1.0 + abs(af) + width), rtol=_XTOL)
    return value(a_star)


@dataclass(frozen=True)
class QuadraticEdge(EdgeHamiltonian):
    """``H(p) = (p - theta)^2 / 2 - v``."""

    theta: float
    v: float
    family = "quadratic"

    @property
    def a_floor(self) -> float:
        return 0.0 - self.v

    def sigma(self, a):
        a = self._level(a)
        return self.theta + math.sqrt(2.0 * max(a + self.v, 0.0))

    def dsigma_da(self, a):
        a = self._level(a)
        r = 2.0 * (a + self.v)
        return math.inf if r <= 0 else 1.0 / math.sqrt(r)

    def lagrangian(self, q):
        if q < 0:
            raise ValueError("edge-level Lagrangian is defined for q >= 0")
        return 0.5 * q * q + self.theta * q + self.v

    def hamiltonian(self, p):
        return 0.5 * (p - self.theta) ** 2 - self.v

    def energy(self, p):
        return self.hamiltonian(max(p, self.theta))

    def to_json(self):
        return {"family": "quadratic", "theta": self.theta, "v": self.v}


@dataclass(frozen=True, eq=False)
class TabulatedEdge(EdgeHamiltonian):
    """Right branch given by samples, monotone-cubic interpolated.

    Beyond the last sample the branch continues as ``k * sqrt(a - a_floor)``
    matched in value and slope, which keeps it concave and sublinear.
    """

    a_floor: float
    a_samples: tuple[float, ...]
    sigma_samples: tuple[float, ...]
    family = "tabulated"

    def __post_init__(self):
        a = np.asarray(self.a_samples, dtype=float)
        if len(a) < 2 or np.any(np.diff(a) <= 0):
            raise ValidationError("tabulated levels must be strictly increasing, at least 2")
        if abs(a[0] - self.a_floor) > 1e-12 * (1 + abs(self.a_floor)):
            raise ValidationError("first tabulated level must equal a_floor")

    @cached_property
    def _interp(self):
        return PchipInterpolator(np.asarray(self.a_samples), np.asarray(self.sigma_samples))

    @cached_property
    def _tail(self):
        a_n = self.a_samples[-1]
        s_n = float(self._interp(a_n, 1))
        r = math.sqrt(a_n - self.a_floor)
        return a_n, float(self.sigma_samples[-1]), 2.0 * s_n * r, r

    def sigma(self, a):
        a = self._level(a)
        a_n, s_n, k, r = self._tail
        if a <= a_n:
            return float(self._interp(a))
        return s_n + k * (math.sqrt(a - self.a_floor) - r)

    def dsigma_da(self, a):
        a = self._level(a)
        a_n, _, k, _ = self._tail
        if a <= a_n:
            return float(self._interp(a, 1))
        return 0.5 * k / math.sqrt(a - self.a_floor)

    def to_json(self):
        return {
            "family": "tabulated",
            "a_floor": self.a_floor,
            "a": list(self.a_samples),
            "sigma": list(self.sigma_samples),
        }


# ----------------------------------------------------------------- graph level


@dataclass(frozen=True, eq=False)
class GraphHamiltonian:
    """One branch per directed edge, in the graph's canonical edge order."""

    graph: Graph
    branches: tuple[EdgeHamiltonian, ...]

    def __post_init__(self):
        if len(self.branches) != self.graph.n_edges:
            raise ValidationError("need one branch per directed edge")

    @property
    def base(self) -> "GraphHamiltonian":
        return self

    @cached_property
    def omega(self) -> Cochain1:
        return Cochain1.zero(self.graph)

    def branch(self, e: str) -> EdgeHamiltonian:
        return self.branches[self.graph.index(e)]

    @cached_property
    def a_floors(self) -> np.ndarray:
        return np.array([b.a_floor for b in self.branches])

    def a_floor(self, e: str) -> float:
        return self.branch(e).a_floor

    def a0(self) -> float:
        return float(self.a_floors.max())

    def sigma(self, e: str, a: float) -> float:
        return self.branch(e).sigma(a)

    def dsigma_da(self, e: str, a: float) -> float:
        return self.branch(e).dsigma_da(a)

    def sigma_vector(self, a: float) -> np.ndarray:
        return np.array([b.sigma(a) for b in self.branches])

    def lagrangian(self, e: str, q: float) -> float:
        if q < 0:
            return self.branch(self.graph.reverse(e)).lagrangian(-q)
        return self.branch(e).lagrangian(q)

    def hamiltonian(self, e: str, p: float) -> float:
        """``H(e, p)`` recovered by inverting the right branches of ``e`` and ``-e``."""
        b = self.branch(e)
        if p >= b.p_min:
            return b.energy(p)
        return self.branch(self.graph.reverse(e)).energy(-p)

    def check_symmetry(self, tol: float = 1e-10) -> list[str]:
        """Reversal-symmetry violations (empty list when consistent)."""
        out = []
        for p in self.graph.pairs:
            f, r = self.branch(p), self.branch("-" + p)
            scale = 1.0 + abs(f.a_floor)
            if abs(f.a_floor - r.a_floor) > tol * scale:
                out.append(f"{p}: a_floor differs between {p} and -{p}")
                continue
            if abs(f.sigma(f.a_floor) + r.sigma(f.a_floor)) > tol * (scale + abs(f.p_min)):
                out.append(f"{p}: sigma(e,a_e) != -sigma(-e,a_e)")
            if abs(f.lagrangian(0.0) - r.lagrangian(0.0)) > tol * scale:
                out.append(f"{p}: L(e,0) != L(-e,0)")
        return out

@dataclass(frozen=True, eq=False)
class OmegaModified:
    """``H^omega(e, p) = H(e, p + omega(e))``; floors are unchanged."""

    base: GraphHamiltonian
    omega: Cochain1

    @property
    def graph(self) -> Graph:
        return self.base.graph

    @property
    def a_floors(self) -> np.ndarray:
        return self.base.a_floors

    def a_floor(self, e: str) -> float:
        return self.base.a_floor(e)

    def a0(self) -> float:
        return self.base.a0()

    @cached_property
    def _shift(self) -> np.ndarray:
        return self.omega.edge_values()

    def sigma(self, e: str, a: float) -> float:
        return self.base.sigma(e, a) - self.omega[e]

    def dsigma_da(self, e: str, a: float) -> float:
        return self.base.dsigma_da(e, a)

    def sigma_vector(self, a: float) -> np.ndarray:
        return self.base.sigma_vector(a) - self._shift

    def lagrangian(self, e: str, q: float) -> float:
        return self.base.lagrangian(e, q) - q * self.omega[e]

    def hamiltonian(self, e: str, p: float) -> float:
        return self.base.hamiltonian(e, p + self.omega[e])


def modify(h, omega: Cochain1) -> OmegaModified:
    """Shift by ``omega``; modifying an already shifted Hamiltonian adds the cochains."""
    if isinstance(h, OmegaModified):
        return OmegaModified(h.base, h.omega + omega)
    return OmegaModified(h, omega)


def a0(h) -> float:
    return h.a0()


def _per_pair(graph: Graph, values, name: str) -> list[float]:
    if isinstance(values, Mapping):
        try:
            return [float(values[p]) for p in graph.pairs]
        except KeyError as exc:
            raise ValidationError(f"{name} missing for pair {exc.args[0]!r}") from None
    if np.isscalar(values):
        return [float(values)] * graph.n_pairs
    values = [float(x) for x in values]
    if len(values) != graph.n_pairs:
        raise ValidationError(f"{name} needs one value per edge pair")
    return values


def quadratic_family(graph: Graph, theta=0.0, v=0.0) -> GraphHamiltonian:
    """``H(e,p) = (p - theta_e)^2/2 - v_e`` with ``theta_{-e} = -theta_e``, ``v_{-e} = v_e``.

    ``theta`` and ``v`` may be scalars, per-pair sequences or mappings keyed by pair name.
    """
    th = _per_pair(graph, theta, "theta")
    vv = _per_pair(graph, v, "v")
    branches = []
    for t, w in zip(th, vv):
        branches += [QuadraticEdge(t, w), QuadraticEdge(-t, w)]
    return GraphHamiltonian(graph, tuple(branches))


def from_pair_branches(graph: Graph, pairs: Sequence[tuple[EdgeHamiltonian, EdgeHamiltonian]]) -> GraphHamiltonian:
    branches = []
    for fwd, rev in pairs:
        branches += [fwd, rev]
    return GraphHamiltonian(graph, tuple(branches))
