"""Signed weighted graphs, the two Laplacian kinds and the Dirichlet host-graph embedding.

Vertex ids are dense integers ``0..n-1``. Degrees are signed: ``d_u = sum_v w_uv``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateEdge,
    NegativePotentialUnsupported,
    SelfLoop,
    ZeroDegree,
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SignedWeightedGraph:
    """Undirected graph with real (possibly negative) edge weights.

    Edges are stored canonically as ``(u, v, w)`` with ``u < v``, sorted, and
    zero-weight edges dropped.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DimensionMismatch(f"vertex count must be a positive integer, got {self.n}")
        seen = {}
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DimensionMismatch(f"edge ({u},{v}) outside 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"duplicate edge {key}")
            seen[key] = w
        canon = tuple((u, v, w) for (u, v), w in sorted(seen.items()) if w != 0.0)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", canon)

    @classmethod
    def from_matrix(cls, weights: np.ndarray) -> "SignedWeightedGraph":
        """Build from a symmetric weight matrix; the diagonal is ignored."""
        a = np.asarray(weights, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], tuple((int(i), int(j), float(a[i, j])) for i, j in zip(iu, ju)))

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            a[u, v] = a[v, u] = w
        return _readonly(a)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Endpoints and weights as parallel arrays (u, v, w)."""
        if not self.edges:
            return (np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0))
        u, v, w = zip(*self.edges)
        return (
            _readonly(np.array(u, dtype=int)),
            _readonly(np.array(v, dtype=int)),
            _readonly(np.array(w, dtype=float)),
        )

    def weight(self, u: int, v: int) -> float:
        return float(self.weight_matrix[u, v])

    def neighbors(self, u: int) -> list[int]:
        return [int(v) for v in np.nonzero(self.weight_matrix[u])[0]]

    def degrees(self) -> np.ndarray:
        return self.weight_matrix.sum(axis=1)

    @property
    def positive_edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(e for e in self.edges if e[2] > 0)

    @property
    def negative_edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(e for e in self.edges if e[2] < 0)

    def components(self) -> list[list[int]]:
        """Connected components of the support graph, each sorted."""
        adj = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        label = [-1] * self.n
        comps = []
        for root in range(self.n):
            if label[root] >= 0:
                continue
            label[root] = len(comps)
            stack, comp = [root], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if label[y] < 0:
                        label[y] = label[root]
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def with_weights(self, edges: Iterable[tuple[int, int, float]]) -> "SignedWeightedGraph":
        return SignedWeightedGraph(self.n, tuple(edges))


class LaplacianKind(enum.Enum):
    COMBINATORIAL = "combinatorial"
    NORMALIZED = "normalized"

    def q_weights(self, graph: SignedWeightedGraph) -> np.ndarray:
        """Vertex masses: 1 for the combinatorial kind, d_u for the normalized kind."""
        if self is LaplacianKind.COMBINATORIAL:
            return np.ones(graph.n)
        d = graph.degrees()
        bad = np.nonzero(d <= 0)[0]
        if bad.size:
            raise ZeroDegree(f"normalized kind needs d_u > 0; vertex {int(bad[0])} has d = {d[bad[0]]:g}")
        return d


def build_laplacian(graph: SignedWeightedGraph, kind: LaplacianKind = LaplacianKind.COMBINATORIAL) -> np.ndarray:
    a = graph.weight_matrix
    lap = np.diag(a.sum(axis=1)) - a
    if kind is LaplacianKind.NORMALIZED:
        s = 1.0 / np.sqrt(kind.q_weights(graph))
        lap = s[:, None] * lap * s[None, :]
    return lap


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """The decomposition H = L_q + W of a graph operator.

    For the normalized kind the generalized problem ``(L + QW) phi = lam Q phi`` is
    realized as the symmetric matrix ``Q^-1/2 (L + QW) Q^-1/2`` acting on
    ``f = Q^1/2 phi``, so that one symmetric eigensolver serves both kinds.
    """

    graph: SignedWeightedGraph
    kind: LaplacianKind = LaplacianKind.COMBINATORIAL
    potential: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.potential is None:
            pot = np.zeros(self.graph.n)
        else:
            pot = np.array(self.potential, dtype=float).reshape(-1)
        if pot.shape != (self.graph.n,):
            raise DimensionMismatch(f"potential has length {pot.size}, graph has {self.graph.n} vertices")
        object.__setattr__(self, "potential", _readonly(pot))
        self.kind.q_weights(self.graph)  # fail early on zero degrees

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def q(self) -> np.ndarray:
        return _readonly(self.kind.q_weights(self.graph))

    @cached_property
    def matrix(self) -> np.ndarray:
        return _readonly(dense_hamiltonian(self))

    @classmethod
    def from_matrix(cls, m) -> "Hamiltonian":
        """Read a real symmetric matrix as a combinatorial L + W: w_uv = -m_uv, W_u = m_uu - d_u."""
        a = np.asarray(m, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        weights = -(a - np.diag(np.diag(a)))
        graph = SignedWeightedGraph.from_matrix(weights)
        return cls(graph, LaplacianKind.COMBINATORIAL, np.diag(a) - graph.degrees())

    def with_potential(self, potential) -> "Hamiltonian":
        return Hamiltonian(self.graph, self.kind, potential)

    def to_generalized(self, f: np.ndarray) -> np.ndarray:
        """Map a vector of the symmetric realization to vertex coordinates (phi = Q^-1/2 f)."""
        return np.asarray(f) / np.sqrt(self.q)

    def from_generalized(self, phi: np.ndarray) -> np.ndarray:
        return np.asarray(phi) * np.sqrt(self.q)


def dense_hamiltonian(decomp: Hamiltonian) -> np.ndarray:
    m = build_laplacian(decomp.graph, decomp.kind)
    m[np.diag_indices(decomp.n)] += decomp.potential
    return m


def quadratic_form(graph: SignedWeightedGraph, f: np.ndarray) -> float:
    """sum over edges of w_uv (f(u) - f(v))^2."""
    u, v, w = graph.edge_arrays
    f = np.asarray(f)
    return float(np.sum(w * np.abs(f[u] - f[v]) ** 2))


@dataclass(frozen=True)
class HostGraphEmbedding:
    host: SignedWeightedGraph
    boundary_vertex: int
    boundary_edges: tuple[tuple[int, int, float], ...]
    original_vertices: tuple[int, ...]

    def host_degrees(self) -> np.ndarray:
        return self.host.degrees()[list(self.original_vertices)]


def embed_dirichlet(decomp: Hamiltonian) -> HostGraphEmbedding:
    """Attach every vertex with a potential to an extra absorbing vertex.

    The boundary edge at u has weight q_u W_u, so that imposing f = 0 on the extra
    vertex reproduces the quadratic form of L + QW. For the combinatorial kind this
    is just W_u and the host degree is d_u + W_u.
    """
    pot = decomp.potential
    if np.any(pot < 0):
        u = int(np.nonzero(pot < 0)[0][0])
        raise NegativePotentialUnsupported(f"W_{u} = {pot[u]:g} < 0 cannot be a boundary edge")
    n = decomp.n
    x = n
    loads = decomp.q * pot
    boundary = tuple((u, x, float(loads[u])) for u in range(n) if loads[u] != 0)
    host = SignedWeightedGraph(n + 1, decomp.graph.edges + boundary)
    return HostGraphEmbedding(host, x, boundary, tuple(range(n)))


def positive_subgraph(graph: SignedWeightedGraph) -> SignedWeightedGraph:
    return SignedWeightedGraph(graph.n, graph.positive_edges)
