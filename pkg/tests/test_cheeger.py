import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cheegerkit.cheeger import (
    canonical_cut,
    cheeger_exhaustive,
    cheeger_sweep,
    cut_ratio,
    functional_ratio,
    weighted_median,
)
from cheegerkit.errors import ConstantFunction, ImproperCut, TooLarge
from cheegerkit.graph_core import Hamiltonian, LaplacianKind
from cheegerkit.instances import path_graph, random_stoquastic
from cheegerkit.spectral import ground_state


def naive_h(decomp, phi):
    """Plain loop over every subset; independent of the vectorized enumeration."""
    n = decomp.n
    mass = decomp.q * phi ** 2
    best = np.inf
    for k in range(1, n):
        for s in itertools.combinations(range(n), k):
            inside = set(s)
            boundary = sum(w * phi[a] * phi[b] for a, b, w in decomp.graph.edges if (a in inside) != (b in inside))
            vs = sum(mass[a] for a in s)
            vc = sum(mass[a] for a in range(n) if a not in inside)
            best = min(best, boundary / min(vs, vc))
    return best


def test_k2_cut_ratio(k2):
    phi = np.full(2, 1 / np.sqrt(2))
    assert np.isclose(cut_ratio(k2, phi, [0]), 1)
    rep = cheeger_exhaustive(k2, phi)
    assert np.isclose(rep.h, 1) and rep.cut == (0,)


def test_p3_cuts(p3):
    phi = np.full(3, 1 / np.sqrt(3))
    assert np.isclose(cut_ratio(p3, phi, [1]), 2)
    assert np.isclose(cheeger_exhaustive(p3, phi).h, 1)


def test_c4(c4):
    rep = cheeger_exhaustive(c4, np.full(4, 0.5), keep_ratios=True)
    assert np.isclose(rep.h, 1)
    assert np.isclose(rep.ratios[(0,)], 2)
    assert np.isclose(rep.ratios[(0, 2)], 2) and np.isclose(rep.ratios[(0, 1)], 1)
    assert len(rep.ratios) == 7
    assert rep.cut == (0, 1)


def test_cut_ratio_scales_with_weights():
    g = path_graph(5)
    phi = np.linspace(1, 2, 5)
    base = cut_ratio(Hamiltonian(g), phi, [0, 1])
    scaled = Hamiltonian(g.with_weights((a, b, 3.5 * w) for a, b, w in g.edges))
    assert np.isclose(cut_ratio(scaled, phi, [0, 1]), 3.5 * base)


def test_cut_is_canonical():
    assert canonical_cut([2, 3], 4) == (0, 1)
    with pytest.raises(ImproperCut):
        canonical_cut([0, 1, 2], 3)
    with pytest.raises(ImproperCut):
        canonical_cut([], 3)


def test_exhaustive_limit(p3):
    with pytest.raises(TooLarge):
        cheeger_exhaustive(p3, np.ones(3), limit=2)


def test_sweep_examples(k2, p3):
    assert np.isclose(cheeger_sweep(k2, np.ones(2), ordering=[0, 1]).h, 1)
    assert np.isclose(cheeger_sweep(k2, np.full(2, 1 / np.sqrt(2)), ordering=[1, 0]).h, 1)
    assert np.isclose(cheeger_sweep(p3, np.full(3, 1 / np.sqrt(3)), ordering=[0, 1, 2]).h, 1)


def test_weighted_median():
    assert weighted_median(np.array([1.0, 2.0, 3.0]), np.ones(3))[0] == 2
    assert weighted_median(np.array([1.0, 3.0]), np.ones(2))[0] == 2
    assert weighted_median(np.array([1.0, 3.0]), np.array([1.0, 3.0]))[0] == 3


def test_indicator_and_relabeling(p3):
    phi = ground_state(Hamiltonian(path_graph(3), potential=[0, 1, 2])).phi
    h = Hamiltonian(path_graph(3), potential=[0, 1, 2])
    for s in ([0], [1], [2]):
        f = np.isin(np.arange(3), s).astype(float)
        want = cut_ratio(h, phi, s)
        assert np.isclose(functional_ratio(h, phi, f), want)
        assert np.isclose(functional_ratio(h, phi, 7 - 3 * f), want)


def test_constant_function_rejected(p3):
    with pytest.raises(ConstantFunction):
        functional_ratio(p3, np.ones(3), [2.0, 2.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exhaustive_matches_naive(seed):
    h = random_stoquastic(np.random.default_rng(seed), n_range=(2, 8))
    phi = ground_state(h).phi
    assert np.isclose(cheeger_exhaustive(h, phi).h, naive_h(h, phi), rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sweep_bounds_exhaustive(seed):
    h = random_stoquastic(np.random.default_rng(seed), n_range=(12, 12))
    phi = ground_state(h).phi
    assert cheeger_sweep(h, phi).h >= cheeger_exhaustive(h, phi).h * (1 - 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_general_function_bounded_by_h(seed):
    rng = np.random.default_rng(seed)
    h = random_stoquastic(rng, n_range=(3, 9))
    phi = ground_state(h).phi
    f = rng.normal(size=h.n)
    assert functional_ratio(h, phi, f) >= cheeger_exhaustive(h, phi).h * (1 - 1e-10)


@pytest.mark.parametrize("kind", list(LaplacianKind))
def test_kinds_share_the_ratio(kind):
    g = path_graph(4)
    h = Hamiltonian(g, kind)
    phi = np.array([1.0, 2.0, 2.0, 1.0])
    mass = h.q * phi ** 2
    boundary = g.weight(1, 2) * phi[1] * phi[2]
    assert np.isclose(cut_ratio(h, phi, [0, 1]), boundary / mass[:2].sum())
