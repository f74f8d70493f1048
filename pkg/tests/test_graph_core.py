import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cheegerkit.errors import DimensionMismatch, DuplicateEdge, NegativePotentialUnsupported, SelfLoop, ZeroDegree
from cheegerkit.graph_core import (
    Hamiltonian,
    LaplacianKind,
    SignedWeightedGraph,
    build_laplacian,
    dense_hamiltonian,
    embed_dirichlet,
    positive_subgraph,
    quadratic_form,
)
from cheegerkit.instances import path4_with_potential, frustrated_grid, random_connected_graph


def edge(w=1.0):
    return SignedWeightedGraph(2, ((0, 1, w),))


@pytest.mark.parametrize("kind", list(LaplacianKind))
def test_single_edge_laplacian(kind):
    assert np.array_equal(build_laplacian(edge(), kind), [[1, -1], [-1, 1]])


def test_path_laplacian():
    g = SignedWeightedGraph(3, ((0, 1, 1.0), (1, 2, 1.0)))
    lap = build_laplacian(g)
    assert np.array_equal(np.diag(lap), [1, 2, 1])
    assert lap[0, 1] == lap[1, 2] == -1 and lap[0, 2] == 0


def test_path4_diagonal():
    assert np.array_equal(np.diag(path4_with_potential().matrix), [1, 3, 2, 10])


def test_uniform_shift():
    h = Hamiltonian(edge(), potential=[5, 5])
    assert np.array_equal(dense_hamiltonian(h), [[6, -1], [-1, 6]])


def test_zero_potential_is_laplacian():
    g = random_connected_graph(np.random.default_rng(3), 7)
    for kind in LaplacianKind:
        assert np.allclose(Hamiltonian(g, kind).matrix, build_laplacian(g, kind))


def test_canonical_edges():
    g = SignedWeightedGraph(3, ((2, 1, 0.5), (1, 0, 2.0), (0, 2, 0.0)))
    assert g.edges == ((0, 1, 2.0), (1, 2, 0.5))


@pytest.mark.parametrize("edges,err", [
    (((0, 0, 1.0),), SelfLoop),
    (((0, 1, 1.0), (1, 0, 2.0)), DuplicateEdge),
    (((0, 5, 1.0),), DimensionMismatch),
])
def test_graph_rejects(edges, err):
    with pytest.raises(err):
        SignedWeightedGraph(3, edges)


def test_potential_length_checked():
    with pytest.raises(DimensionMismatch):
        Hamiltonian(edge(), potential=[1, 2, 3])


def test_normalized_needs_positive_degree():
    with pytest.raises(ZeroDegree):
        Hamiltonian(SignedWeightedGraph(3, ((0, 1, 1.0),)), LaplacianKind.NORMALIZED)


def test_path4_embedding():
    emb = embed_dirichlet(path4_with_potential())
    x = emb.boundary_vertex
    assert emb.boundary_edges == ((1, x, 1.0), (3, x, 9.0))
    assert np.array_equal(emb.host_degrees(), [1, 3, 2, 10])


def test_embedding_without_potential():
    g = SignedWeightedGraph(3, ((0, 1, 1.0), (1, 2, 2.0)))
    emb = embed_dirichlet(Hamiltonian(g))
    assert emb.host.edges == g.edges and emb.host.n == 4
    assert emb.host.neighbors(emb.boundary_vertex) == []


def test_single_vertex_embedding():
    emb = embed_dirichlet(Hamiltonian(SignedWeightedGraph(1), potential=[3.0]))
    assert emb.host.edges == ((0, 1, 3.0),)


def test_negative_potential_not_embeddable():
    with pytest.raises(NegativePotentialUnsupported):
        embed_dirichlet(Hamiltonian(edge(), potential=[0.0, -1.0]))


def test_embedding_reproduces_quadratic_form():
    rng = np.random.default_rng(8)
    for kind in LaplacianKind:
        h = Hamiltonian(random_connected_graph(rng, 6), kind, rng.uniform(0, 3, 6))
        emb = embed_dirichlet(h)
        phi = rng.normal(size=6)
        ext = np.append(phi, 0.0)
        f = h.from_generalized(phi)
        assert np.isclose(quadratic_form(emb.host, ext), f @ h.matrix @ f)


def test_positive_subgraph():
    g = frustrated_grid()
    gp = positive_subgraph(g)
    assert len(gp.edges) == len(g.edges) - 1 and gp.is_connected()
    assert (12, 13) not in [(u, v) for u, v, _ in gp.edges]
    lone = positive_subgraph(edge(-1.0))
    assert lone.edges == () and not lone.is_connected()
    pos = random_connected_graph(np.random.default_rng(1), 5)
    assert positive_subgraph(pos) == pos


def test_from_matrix_roundtrip():
    h = path4_with_potential()
    back = Hamiltonian.from_matrix(h.matrix)
    assert back.graph == h.graph and np.allclose(back.potential, h.potential)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32 - 1), st.sampled_from(list(LaplacianKind)))
def test_laplacian_properties(n, seed, kind):
    g = random_connected_graph(np.random.default_rng(seed), n)
    lap = build_laplacian(g, kind)
    assert np.allclose(lap, lap.T)
    assert np.linalg.eigvalsh(lap).min() > -1e-10
    kernel = np.sqrt(kind.q_weights(g))
    assert np.allclose(lap @ kernel, 0, atol=1e-10)
