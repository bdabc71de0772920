"""Continuous network Hamiltonians compiled to graph Hamiltonians.

Each arc carries ``H(s, p) = (p - theta(s))^2 / (2 m(s)) - V`` for ``s`` in
``[0, 1]``.  The compiled edge has ``sigma(e, a) = int_0^1 sigma_plus(s, a) ds``
with ``sigma_plus(s, a) = theta(s) + sqrt(2 m(s) (a + V))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import BelowFloor, QuadratureFailure, ValidationError
from .graph import Graph, build_graph
from .hamiltonian import EdgeHamiltonian, GraphHamiltonian, from_pair_branches

DEFAULT_NODES = 32


def _profile(samples: Sequence[float]):
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or len(y) == 0 or not np.all(np.isfinite(y)):
        raise ValidationError("profile needs a non-empty list of finite samples")
    if len(y) == 1:
        return lambda s: np.full_like(np.asarray(s, dtype=float), y[0])
    return PchipInterpolator(np.linspace(0.0, 1.0, len(y)), y)


@dataclass(frozen=True, eq=False)
class ArcHamiltonian:
    """Quadratic-in-momentum arc Hamiltonian with sampled profiles on ``[0, 1]``."""

    theta: tuple[float, ...]
    m: tuple[float, ...]
    v: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(x) for x in self.theta))
        object.__setattr__(self, "m", tuple(float(x) for x in self.m))
        if any(not x > 0 for x in self.m):
            raise ValidationError("mass profile must be positive")

    @property
    def a_floor(self) -> float:
        return 0.0 - self.v

    @cached_property
    def _theta(self):
        return _profile(self.theta)

    @cached_property
    def _m(self):
        return _profile(self.m)

    def theta_at(self, s):
        return self._theta(s)

    def m_at(self, s):
        return self._m(s)

    def breakpoints(self) -> np.ndarray:
        pts = [0.0, 1.0]
        for prof in (self.theta, self.m):
            if len(prof) > 1:
                pts += list(np.linspace(0.0, 1.0, len(prof)))
        return np.unique(np.round(pts, 15))

    def reversed(self) -> "ArcHamiltonian":
        return ArcHamiltonian(tuple(-x for x in reversed(self.theta)), tuple(reversed(self.m)), self.v)

    def hamiltonian(self, s: float, p: float) -> float:
        return (p - float(self.theta_at(s))) ** 2 / (2.0 * float(self.m_at(s))) - self.v

    def to_json(self) -> dict:
        return {"theta": list(self.theta), "m": list(self.m), "v": self.v}


def sigma_plus(arc: ArcHamiltonian, s, a: float):
    """Largest momentum at which the arc Hamiltonian equals ``a`` at position ``s``."""
    if a < arc.a_floor - 1e-12 * (1.0 + abs(arc.a_floor)):
        raise BelowFloor(f"level {a} below arc floor {arc.a_floor}")
    r = 2.0 * arc.m_at(s) * max(a + arc.v, 0.0)
    return arc.theta_at(s) + np.sqrt(r)


@dataclass(frozen=True, eq=False)
class CompiledEdge(EdgeHamiltonian):
    arc: ArcHamiltonian
    nodes: int = DEFAULT_NODES
    family = "arc"

    @property
    def a_floor(self) -> float:
        return self.arc.a_floor

    @cached_property
    def _rule(self):
        # the fixed Gauss-Legendre rule is applied on every interpolation
        # piece, since the profiles are only C^1 across sample points
        x, w = np.polynomial.legendre.leggauss(self.nodes)
        cuts = self.arc.breakpoints()
        s = np.concatenate([lo + (hi - lo) * 0.5 * (x + 1.0) for lo, hi in zip(cuts, cuts[1:])])
        ws = np.concatenate([(hi - lo) * 0.5 * w for lo, hi in zip(cuts, cuts[1:])])
        return ws, np.asarray(self.arc.theta_at(s)), np.asarray(self.arc.m_at(s))

    def sigma(self, a):
        a = self._level(a)
        w, th, m = self._rule
        val = float(w @ (th + np.sqrt(2.0 * m * max(a + self.arc.v, 0.0))))
        if not math.isfinite(val):
            raise QuadratureFailure(f"non-finite sigma at level {a}")
        return val

    def dsigma_da(self, a):
        a = self._level(a)
        w, _, m = self._rule
        r = a + self.arc.v
        if r <= 0:
            return math.inf
        val = float(w @ (m / np.sqrt(2.0 * m * r)))
        if not math.isfinite(val):
            raise QuadratureFailure(f"non-finite derivative at level {a}")
        return val

    def to_json(self):
        return {"family": "arc", **self.arc.to_json(), "nodes": self.nodes}


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, str, ArcHamiltonian], ...]

    @classmethod
    def from_json(cls, data) -> "NetworkSpec":
        arcs = []
        for a in data["arcs"]:
            arc = ArcHamiltonian(a["theta"], a.get("m", [1.0]), float(a.get("v", 0.0)))
            arcs.append((str(a["name"]), str(a["from"]), str(a["to"]), arc))
        return cls(tuple(str(v) for v in data["vertices"]), tuple(arcs))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arcs": [{"name": n, "from": o, "to": t, **arc.to_json()} for n, o, t, arc in self.arcs],
        }


def compile_network(spec: NetworkSpec, nodes: int = DEFAULT_NODES) -> tuple[Graph, GraphHamiltonian]:
    graph = build_graph(spec.vertices, [(n, o, t) for n, o, t, _ in spec.arcs])
    pairs = [(CompiledEdge(arc, nodes), CompiledEdge(arc.reversed(), nodes)) for *_, arc in spec.arcs]
    return graph, from_pair_branches(graph, pairs)


@dataclass
class CompiledCheck:
    monotone: bool
    concave: bool
    sublinear: bool
    derivative_blowup: bool
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_compiled(edge: EdgeHamiltonian, n_grid: int = 200) -> CompiledCheck:
    """Grid checks: strictly increasing, midpoint concave, sublinear, and a
    derivative that grows as the level approaches the floor."""
    af = edge.a_floor
    scale = 1.0 + abs(af)
    grid = af + scale * np.concatenate([[0.0], np.logspace(-6, 3, n_grid)])
    sig = np.array([edge.sigma(a) for a in grid])
    out = []

    steps = np.diff(sig)
    monotone = bool(np.all(steps > 0))
    if not monotone:
        k = int(np.argmin(steps))
        out.append(f"not increasing near a={grid[k]:.6g}")

    mids = np.array([edge.sigma(0.5 * (x + y)) for x, y in zip(grid[:-1], grid[1:])])
    slack = mids - 0.5 * (sig[:-1] + sig[1:])
    concave = bool(np.all(slack >= -1e-12 * (1.0 + np.abs(sig[1:]))))
    if not concave:
        k = int(np.argmin(slack))
        out.append(f"midpoint concavity fails near a={grid[k]:.6g}")

    p0 = edge.sigma(af)
    chords = [(edge.sigma(af + scale * 10.0**k) - p0) / (scale * 10.0**k) for k in (1, 2, 3)]
    sublinear = bool(chords[0] > chords[1] > chords[2])
    if not sublinear:
        out.append(f"chord slopes {chords} do not decrease over three decades")

    ds = [edge.dsigma_da(af + scale * 10.0**-k) for k in range(1, 9)]
    blowup = bool(np.all(np.diff(ds) > 0))
    if not blowup:
        out.append("dsigma_da does not grow towards the floor")
    return CompiledCheck(monotone, concave, sublinear, blowup, out)
