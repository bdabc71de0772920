"""JSON readers and writers for graphs, Hamiltonians, measures and networks."""
from __future__ import annotations

import json
from pathlib import Path as FsPath

from .errors import ValidationError
from .graph import Graph
from .hamiltonian import GraphHamiltonian, QuadraticEdge, TabulatedEdge, from_pair_branches, quadratic_family
from .measures import FiniteMeasure
from .network import ArcHamiltonian, CompiledEdge, NetworkSpec, DEFAULT_NODES


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def write_json(data, path=None) -> str:
    text = json.dumps(data, indent=2)
    if path is not None:
        FsPath(path).write_text(text + "\n")
    return text


def _pair_branches(spec: dict):
    family = spec.get("family")
    if family == "quadratic":
        t, v = float(spec.get("theta", 0.0)), float(spec.get("v", 0.0))
        return QuadraticEdge(t, v), QuadraticEdge(-t, v)
    if family == "tabulated":
        rows = spec["sigma_samples"]
        a = tuple(float(r[0]) for r in rows)
        af = float(spec.get("a_floor", a[0]))
        fwd = TabulatedEdge(af, a, tuple(float(r[1]) for r in rows))
        rev = TabulatedEdge(af, a, tuple(float(r[2]) for r in rows))
        return fwd, rev
    if family == "arc":
        arc = ArcHamiltonian(spec["theta"], spec.get("m", [1.0]), float(spec.get("v", 0.0)))
        n = int(spec.get("nodes", DEFAULT_NODES))
        return CompiledEdge(arc, n), CompiledEdge(arc.reversed(), n)
    raise ValidationError(f"unknown Hamiltonian family {family!r}")


def hamiltonian_from_json(graph: Graph, data: dict | None) -> GraphHamiltonian:
    """Per-pair specs keyed by pair name; a missing block means ``H = p^2/2``."""
    if not data:
        return quadratic_family(graph)
    extra = set(data) - set(graph.pairs)
    if extra:
        raise ValidationError(f"Hamiltonian given for unknown pairs {sorted(extra)}")
    pairs = []
    for p in graph.pairs:
        if p not in data:
            raise ValidationError(f"no Hamiltonian for pair {p!r}")
        pairs.append(_pair_branches(data[p]))
    return from_pair_branches(graph, pairs)


def _pair_to_json(fwd, rev) -> dict:
    if isinstance(fwd, QuadraticEdge):
        return fwd.to_json()
    if isinstance(fwd, CompiledEdge):
        return fwd.to_json()
    if isinstance(fwd, TabulatedEdge) and isinstance(rev, TabulatedEdge):
        rows = [[a, s, r] for a, s, r in zip(fwd.a_samples, fwd.sigma_samples, rev.sigma_samples)]
        return {"family": "tabulated", "a_floor": fwd.a_floor, "sigma_samples": rows}
    raise ValidationError(f"cannot serialize branch of type {type(fwd).__name__}")


def hamiltonian_to_json(h: GraphHamiltonian) -> dict:
    g = h.graph
    return {p: _pair_to_json(h.branch(p), h.branch("-" + p)) for p in g.pairs}


def problem_from_json(data: dict) -> tuple[Graph, GraphHamiltonian]:
    graph = Graph.from_json(data)
    return graph, hamiltonian_from_json(graph, data.get("hamiltonian"))


def problem_to_json(graph: Graph, h: GraphHamiltonian) -> dict:
    return {**graph.to_json(), "hamiltonian": hamiltonian_to_json(h)}


def load_problem(path) -> tuple[Graph, GraphHamiltonian]:
    return problem_from_json(read_json(path))


def load_measure(graph: Graph, path) -> FiniteMeasure:
    return FiniteMeasure.from_json(graph, read_json(path))


def load_network(path) -> NetworkSpec:
    return NetworkSpec.from_json(read_json(path))
