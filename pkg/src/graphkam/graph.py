"""Finite graphs with edge reversal, chains, cochains and (co)homology.

Edges come in oriented pairs.  A pair is named once (``"e1"``); its two
directed edges are ``"e1"`` and ``"-e1"``.  The canonical edge order is
``e1, -e1, e2, -e2, ...`` following the order in which pairs were declared,
and "smallest edge id" always refers to that order.

Chains and cochains of degree one are stored on the declared orientation
only, so ``coeff(-e) == -coeff(e)`` holds by construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadConcatenation,
    CircuitCapExceeded,
    Disconnected,
    DuplicateName,
    LoopEdge,
    NotACycle,
    UnknownEdge,
    UnknownVertex,
    ValidationError,
)

DEFAULT_CIRCUIT_CAP = 10**6


def reverse_name(edge: str) -> str:
    return edge[1:] if edge.startswith("-") else "-" + edge


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    pairs: tuple[str, ...]
    tails: tuple[str, ...]
    heads: tuple[str, ...]

    @cached_property
    def edges(self) -> tuple[str, ...]:
        out = []
        for p in self.pairs:
            out += [p, "-" + p]
        return tuple(out)

    @cached_property
    def _edge_index(self) -> dict[str, int]:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def _vertex_index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_edges(self) -> int:
        return 2 * len(self.pairs)

    @property
    def betti(self) -> int:
        return self.n_pairs - self.n_vertices + 1

    @property
    def base_vertex(self) -> str:
        return min(self.vertices)

    def index(self, edge: str) -> int:
        try:
            return self._edge_index[edge]
        except KeyError:
            raise UnknownEdge(f"unknown edge {edge!r}") from None

    def vertex_index(self, vertex: str) -> int:
        try:
            return self._vertex_index[vertex]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vertex!r}") from None

    def pair_sign(self, edge: str) -> tuple[int, int]:
        k = self.index(edge)
        return k // 2, (1 if k % 2 == 0 else -1)

    def reverse(self, edge: str) -> str:
        self.index(edge)
        return reverse_name(edge)

    def origin(self, edge: str) -> str:
        i, s = self.pair_sign(edge)
        return self.tails[i] if s > 0 else self.heads[i]

    def terminal(self, edge: str) -> str:
        return self.origin(reverse_name(edge))

    def star(self, vertex: str) -> tuple[str, ...]:
        """Edges originating at ``vertex``, in canonical order."""
        self.vertex_index(vertex)
        return tuple(e for e in self.edges if self.origin(e) == vertex)

    @cached_property
    def tail_idx(self) -> np.ndarray:
        return np.array([self._vertex_index[self.origin(e)] for e in self.edges])

    @cached_property
    def head_idx(self) -> np.ndarray:
        return np.array([self._vertex_index[self.terminal(e)] for e in self.edges])

    @cached_property
    def incidence(self) -> np.ndarray:
        # column i is the boundary of the i-th declared pair
        b = np.zeros((self.n_vertices, self.n_pairs))
        for i in range(self.n_pairs):
            b[self._vertex_index[self.heads[i]], i] += 1.0
            b[self._vertex_index[self.tails[i]], i] -= 1.0
        return b

    @cached_property
    def basis(self) -> "HomologyBasis":
        return homology_basis(self)

    def path(self, edges: Iterable[str]) -> "Path":
        return Path(self, tuple(edges))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"name": p, "from": t, "to": h}
                for p, t, h in zip(self.pairs, self.tails, self.heads)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        specs = [(e["name"], e["from"], e["to"]) for e in data["edges"]]
        return build_graph(data["vertices"], specs)


def build_graph(vertex_ids: Iterable, edge_pair_specs: Sequence[tuple]) -> Graph:
    """Build a finite connected loopless graph.

    Each entry ``(name, origin, terminus)`` declares the edge ``name`` and,
    implicitly, its reverse ``-name``.  The declared edges form the
    orientation.
    """
    vertices = tuple(str(v) for v in vertex_ids)
    if len(set(vertices)) != len(vertices):
        raise DuplicateName("duplicate vertex id")
    if not vertices:
        raise ValidationError("graph needs at least one vertex")
    vset = set(vertices)
    names, tails, heads = [], [], []
    for name, o, t in edge_pair_specs:
        name, o, t = str(name), str(o), str(t)
        if not name or name.startswith("-"):
            raise ValidationError(f"bad edge name {name!r}")
        if name in names:
            raise DuplicateName(f"duplicate edge name {name!r}")
        for v in (o, t):
            if v not in vset:
                raise UnknownVertex(f"edge {name!r} uses unknown vertex {v!r}")
        if o == t:
            raise LoopEdge(f"edge {name!r} is a loop at {o!r}")
        names.append(name)
        tails.append(o)
        heads.append(t)

    adj: dict[str, set[str]] = {v: set() for v in vertices}
    for o, t in zip(tails, heads):
        adj[o].add(t)
        adj[t].add(o)
    seen = {vertices[0]}
    todo = [vertices[0]]
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    if len(seen) != len(vertices):
        missing = sorted(vset - seen)
        raise Disconnected(f"vertices not reachable: {missing}")
    return Graph(vertices, tuple(names), tuple(tails), tuple(heads))


# ---------------------------------------------------------------- vectors


@dataclass(frozen=True, eq=False)
class _Vector:
    graph: Graph = field(repr=False)
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self._size(self.graph),):
            raise ValidationError(
                f"{type(self).__name__} needs {self._size(self.graph)} entries, got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @staticmethod
    def _size(graph: Graph) -> int:
        raise NotImplementedError

    @classmethod
    def zero(cls, graph: Graph):
        return cls(graph, np.zeros(cls._size(graph)))

    def _new(self, values):
        return type(self)(self.graph, values)

    def __add__(self, other):
        return self._new(self.values + other.values)

    def __sub__(self, other):
        return self._new(self.values - other.values)

    def __neg__(self):
        return self._new(-self.values)

    def __mul__(self, k: float):
        return self._new(self.values * float(k))

    __rmul__ = __mul__

    def __truediv__(self, k: float):
        return self._new(self.values / float(k))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.values, other.values, rtol=0.0, atol=atol))


class _EdgeVector(_Vector):
    @staticmethod
    def _size(graph):
        return graph.n_pairs

    def __getitem__(self, edge: str) -> float:
        i, s = self.graph.pair_sign(edge)
        return s * float(self.values[i])

    def as_dict(self) -> dict[str, float]:
        return {p: float(x) for p, x in zip(self.graph.pairs, self.values)}


class _VertexVector(_Vector):
    @staticmethod
    def _size(graph):
        return graph.n_vertices

    def __getitem__(self, vertex: str) -> float:
        return float(self.values[self.graph.vertex_index(vertex)])

    def as_dict(self) -> dict[str, float]:
        return {v: float(x) for v, x in zip(self.graph.vertices, self.values)}


class Chain1(_EdgeVector):
    """Real 1-chain; ``-e`` is the negative of ``e``."""

    @classmethod
    def from_edges(cls, graph: Graph, terms) -> "Chain1":
        """``terms`` is a mapping edge -> coefficient or an iterable of edges."""
        if not isinstance(terms, Mapping):
            acc: dict[str, float] = {}
            for e in terms:
                acc[e] = acc.get(e, 0.0) + 1.0
            terms = acc
        v = np.zeros(graph.n_pairs)
        for e, a in terms.items():
            i, s = graph.pair_sign(e)
            v[i] += s * a
        return cls(graph, v)


class Cochain1(_EdgeVector):
    """Real 1-cochain, ``eta(-e) = -eta(e)``."""

    @classmethod
    def from_values(cls, graph: Graph, values: Mapping[str, float]) -> "Cochain1":
        v = np.zeros(graph.n_pairs)
        for e, x in values.items():
            i, s = graph.pair_sign(e)
            v[i] = s * x
        return cls(graph, v)

    def edge_values(self) -> np.ndarray:
        """Values on every directed edge, canonical order."""
        return np.repeat(self.values, 2) * np.tile([1.0, -1.0], self.graph.n_pairs)


class Chain0(_VertexVector):
    pass


class Cochain0(_VertexVector):
    @classmethod
    def from_values(cls, graph: Graph, values: Mapping[str, float]) -> "Cochain0":
        v = np.zeros(graph.n_vertices)
        for x, val in values.items():
            v[graph.vertex_index(str(x))] = val
        return cls(graph, v)


def boundary(chain: Chain1) -> Chain0:
    return Chain0(chain.graph, chain.graph.incidence @ chain.values)


def coboundary(g: Cochain0) -> Cochain1:
    return Cochain1(g.graph, g.graph.incidence.T @ g.values)


def pairing(cochain, chain) -> float:
    """Bilinear pairing of a cochain with a chain of the same degree."""
    if isinstance(cochain, Cochain1) and isinstance(chain, Chain1):
        pass
    elif isinstance(cochain, Cochain0) and isinstance(chain, Chain0):
        pass
    else:
        raise TypeError("pairing needs (Cochain1, Chain1) or (Cochain0, Chain0)")
    return float(np.dot(cochain.values, chain.values))


# ------------------------------------------------------------------ paths


@dataclass(frozen=True)
class Path:
    graph: Graph = field(repr=False, compare=False)
    edges: tuple[str, ...]

    def __post_init__(self):
        if not self.edges:
            raise ValidationError("empty path")
        g = self.graph
        for e in self.edges:
            g.index(e)
        for a, b in zip(self.edges, self.edges[1:]):
            if g.terminal(a) != g.origin(b):
                raise BadConcatenation(f"{a} does not end where {b} starts")

    def __len__(self):
        return len(self.edges)

    @property
    def origin(self) -> str:
        return self.graph.origin(self.edges[0])

    @property
    def terminal(self) -> str:
        return self.graph.terminal(self.edges[-1])

    @property
    def is_closed(self) -> bool:
        return self.origin == self.terminal

    @property
    def is_circuit(self) -> bool:
        ends = [self.graph.terminal(e) for e in self.edges]
        return self.is_closed and len(set(ends)) == len(ends)

    @property
    def is_equilibrium(self) -> bool:
        return len(self.edges) == 2 and self.edges[1] == reverse_name(self.edges[0])

    def chain(self) -> Chain1:
        return Chain1.from_edges(self.graph, self.edges)

    def rotated(self, k: int) -> "Path":
        k %= len(self.edges)
        return Path(self.graph, self.edges[k:] + self.edges[:k])


# --------------------------------------------------------------- homology


@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """Fundamental cycles of a BFS spanning tree.

    ``cycles[j]`` runs along the j-th co-tree pair (declared direction) and
    returns through the tree, so its chain has coefficient 1 on that pair and
    0 on every other co-tree pair.
    """

    graph: Graph = field(repr=False)
    tree_pairs: tuple[int, ...]
    cotree_pairs: tuple[int, ...]
    cycles: tuple[Path, ...]

    @property
    def betti(self) -> int:
        return len(self.cotree_pairs)

    @cached_property
    def cycle_matrix(self) -> np.ndarray:
        m = np.zeros((self.betti, self.graph.n_pairs))
        for j, z in enumerate(self.cycles):
            m[j] = z.chain().values
        return m

    def chain_from_coords(self, h) -> Chain1:
        h = np.asarray(h, dtype=float).reshape(self.betti)
        return Chain1(self.graph, h @ self.cycle_matrix)

    def coords(self, chain: Chain1, tol: float = 1e-10) -> np.ndarray:
        scale = 1.0 + float(np.max(np.abs(chain.values), initial=0.0))
        if np.max(np.abs(boundary(chain).values), initial=0.0) > tol * scale:
            raise NotACycle("chain has non-zero boundary")
        return np.array([chain.values[i] for i in self.cotree_pairs])

    def homology_class(self, cycle) -> np.ndarray:
        if isinstance(cycle, Path):
            if not cycle.is_closed:
                raise NotACycle("path is not closed")
            cycle = cycle.chain()
        return self.coords(cycle)

    def cohomology_class(self, omega: Cochain1) -> np.ndarray:
        return self.cycle_matrix @ omega.values

    def representative_cochain(self, c) -> Cochain1:
        c = np.asarray(c, dtype=float).reshape(self.betti)
        v = np.zeros(self.graph.n_pairs)
        v[list(self.cotree_pairs)] = c
        return Cochain1(self.graph, v)


def homology_basis(graph: Graph) -> HomologyBasis:
    # BFS from the smallest vertex; at each vertex later-declared pairs are
    # tried first, so the earliest pairs end up as co-tree generators.
    root = graph.base_vertex
    parent: dict[str, str] = {}
    seen = {root}
    queue = deque([root])
    tree = set()
    while queue:
        x = queue.popleft()
        for e in sorted(graph.star(x), key=graph.index, reverse=True):
            y = graph.terminal(e)
            if y not in seen:
                seen.add(y)
                parent[y] = e
                tree.add(graph.pair_sign(e)[0])
                queue.append(y)

    def down_edges(v):
        # tree edges from v up to the root, each pointing away from the root
        out = []
        while v != root:
            e = parent[v]
            out.append(e)
            v = graph.origin(e)
        return out

    cotree = tuple(i for i in range(graph.n_pairs) if i not in tree)
    cycles = []
    for i in cotree:
        e = graph.pairs[i]
        up, down = down_edges(graph.terminal(e)), down_edges(graph.origin(e))
        while up and down and up[-1] == down[-1]:
            up.pop()
            down.pop()
        back = [reverse_name(x) for x in up] + list(reversed(down))
        cycles.append(Path(graph, (e, *back)))
    return HomologyBasis(graph, tuple(sorted(tree)), cotree, tuple(cycles))


def homology_class(cycle, basis: HomologyBasis | None = None) -> np.ndarray:
    basis = basis or (cycle.graph.basis)
    return basis.homology_class(cycle)


def cohomology_class(omega: Cochain1, basis: HomologyBasis | None = None) -> np.ndarray:
    return (basis or omega.graph.basis).cohomology_class(omega)


def representative_cochain(c, basis: HomologyBasis) -> Cochain1:
    return basis.representative_cochain(c)


# --------------------------------------------------------------- circuits


def canonical_rotation(path: Path) -> Path:
    """Rotate a circuit to leave from its smallest vertex (ties: smallest edge id)."""
    g = path.graph
    k = min(range(len(path)), key=lambda j: (g.origin(path.edges[j]), g.index(path.edges[j])))
    return path.rotated(k)


def enumerate_circuits(
    graph: Graph,
    allowed_edges: Iterable[str] | None = None,
    include_equilibria: bool = False,
    cap: int = DEFAULT_CIRCUIT_CAP,
) -> list[Path]:
    """All circuits using only ``allowed_edges`` (default: every edge).

    Each circuit is reported once, rotated to leave from its smallest
    vertex, and the list is sorted by edge ids.  Two-edge circuits ``(e, -e)`` are
    reported only with ``include_equilibria``.
    """
    allowed = set(graph.edges if allowed_edges is None else allowed_edges)
    vidx = graph._vertex_index
    out_edges: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        if e in allowed:
            out_edges[graph.origin(e)].append(e)

    found: list[tuple[int, ...]] = []

    def extend(start, v, path, on_path):
        for e in out_edges[v]:
            w = graph.terminal(e)
            if w == start:
                cyc = path + [e]
                if len(cyc) == 2 and cyc[1] == reverse_name(cyc[0]) and not include_equilibria:
                    continue
                found.append(tuple(graph.index(x) for x in cyc))
                if len(found) > cap:
                    raise CircuitCapExceeded(f"more than {cap} circuits")
            elif vidx[w] > vidx[start] and w not in on_path:
                on_path.add(w)
                path.append(e)
                extend(start, w, path, on_path)
                path.pop()
                on_path.discard(w)

    for s in graph.vertices:
        extend(s, s, [], {s})

    canon = set()
    for ids in found:
        k = min(range(len(ids)), key=lambda j: (graph.origin(graph.edges[ids[j]]), ids[j]))
        canon.add(ids[k:] + ids[:k])
    return [Path(graph, tuple(graph.edges[i] for i in ids)) for ids in sorted(canon)]
