"""Random and named problem instances used by tests, scripts and the selftest command."""
from __future__ import annotations

import numpy as np

from .graph_core import Hamiltonian, LaplacianKind, SignedWeightedGraph


def random_connected_graph(rng: np.random.Generator, n: int, density: float | None = None,
                           low: float = 0.0, high: float = 1.0) -> SignedWeightedGraph:
    """Random spanning tree plus extra edges; weights uniform in (low, high]."""
    if density is None:
        density = rng.uniform(0.1, 0.9)
    perm = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        a, b = int(perm[i]), int(perm[j])
        pairs.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                pairs.add((a, b))
    edges = tuple((a, b, float(high - rng.uniform(0, high - low))) for a, b in sorted(pairs))
    return SignedWeightedGraph(n, edges)


def random_stoquastic(rng: np.random.Generator, n_range=(2, 12), w_max: float = 5.0,
                      kind: LaplacianKind | None = None) -> Hamiltonian:
    """Connected graph, weights in (0, 1], potential in [0, w_max]."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    g = random_connected_graph(rng, n)
    if kind is None:
        kind = LaplacianKind.COMBINATORIAL if rng.random() < 0.5 else LaplacianKind.NORMALIZED
    return Hamiltonian(g, kind, rng.uniform(0.0, w_max, n))


def random_signed(rng: np.random.Generator, n_range=(3, 10), neg_fraction: float = 0.2,
                  neg_scale: float = 0.5) -> SignedWeightedGraph:
    """Connected positive graph in which a few non-bridge edges are made negative."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    g = random_connected_graph(rng, n, density=rng.uniform(0.3, 0.9), low=0.2)
    edges = list(g.edges)
    k = max(1, int(round(neg_fraction * len(edges) * rng.random())))
    for i in rng.permutation(len(edges))[:k]:
        u, v, _ = edges[i]
        trial = edges.copy()
        trial[i] = (u, v, -float(rng.uniform(0.01, neg_scale)))
        if SignedWeightedGraph(n, tuple(e for e in trial if e[2] > 0)).is_connected():
            edges = trial
    return SignedWeightedGraph(n, tuple(edges))


def random_hermitian(rng: np.random.Generator, n_range=(2, 10), density: float = 0.6) -> np.ndarray:
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    g = random_connected_graph(rng, n, density=density)
    m = np.zeros((n, n), dtype=complex)
    for u, v, w in g.edges:
        z = w * np.exp(1j * rng.uniform(0, 2 * np.pi))
        m[u, v], m[v, u] = z, np.conj(z)
    m[np.diag_indices(n)] = rng.uniform(-2, 2, n)
    return m


def path_graph(n: int, w: float = 1.0) -> SignedWeightedGraph:
    return SignedWeightedGraph(n, tuple((i, i + 1, w) for i in range(n - 1)))


def cycle_graph(n: int, w: float = 1.0) -> SignedWeightedGraph:
    return SignedWeightedGraph(n, tuple((i, (i + 1) % n, w) for i in range(n)))


def grid_graph(rows: int, cols: int, w: float = 1.0) -> SignedWeightedGraph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1), w))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c), w))
    return SignedWeightedGraph(rows * cols, tuple(edges))


def path4_with_potential() -> Hamiltonian:
    """Path 0-1-2-3 with potential (0, 1, 0, 9): diagonal (1, 3, 2, 10)."""
    return Hamiltonian(path_graph(4), LaplacianKind.COMBINATORIAL, [0.0, 1.0, 0.0, 9.0])


def frustrated_grid() -> SignedWeightedGraph:
    """5x5 unit grid whose central edge (2,2)-(2,3) has weight -1/3."""
    g = grid_graph(5, 5)
    bad = (2 * 5 + 2, 2 * 5 + 3)
    return g.with_weights((u, v, -1.0 / 3.0 if (u, v) == bad else w) for u, v, w in g.edges)


def bottleneck_potential(n: int, c: float, x: float) -> np.ndarray:
    """Double-well potential on a path: wells at both ends, a barrier next to the right well.

    W = (c/x, x/c, 1, ..., 1, 1/c, c). With small c, x controls which well holds the
    ground state; near x = 1 both wells compete and the Cheeger constant collapses.
    """
    w = np.ones(n)
    w[0], w[1] = c / x, x / c
    w[n - 2], w[n - 1] = 1.0 / c, c
    return w


def bottleneck_path(n: int = 8, c: float = 0.1, x: float = 1.0) -> Hamiltonian:
    return Hamiltonian(path_graph(n), LaplacianKind.COMBINATORIAL, bottleneck_potential(n, c, x))


def two_level(a: float, b: float = 1.0, s: float = 0.0) -> Hamiltonian:
    """K2 with edge weight b and potential a(2s - 1)(1, -1): an avoided crossing at s = 1/2."""
    t = a * (2 * s - 1)
    return Hamiltonian(SignedWeightedGraph(2, ((0, 1, b),)), LaplacianKind.COMBINATORIAL, [t, -t])
