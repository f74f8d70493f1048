import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cheegerkit.errors import DisconnectedSupport, NotHermitian, ZeroAmplitude
from cheegerkit.instances import random_hermitian
from cheegerkit.stoquastic import (
    cycle_signature,
    phase_pattern,
    rotate_to_real,
    signature_is_one,
    stoquasticity_check,
)

TRIANGLE = np.ones((3, 3)) - np.eye(3)


def all_cycles(n):
    for k in range(3, n + 1):
        for combo in itertools.permutations(range(n), k):
            if combo[0] == min(combo):
                yield combo


def brute_force_stoquastic(m):
    """Balanced iff every simple cycle has signature one (2-cycles are always fine)."""
    theta = phase_pattern(m)
    for cyc in all_cycles(m.shape[0]):
        pairs = zip(cyc, cyc[1:] + cyc[:1])
        if all(theta[a, b] != 0 for a, b in pairs) and not signature_is_one(cycle_signature(theta, cyc)):
            return False
    return True


@pytest.mark.parametrize("sign,expected", [(1, 1), (-1, 1)])
def test_two_cycle(sign, expected):
    theta = phase_pattern(sign * np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert cycle_signature(theta, [0, 1]) == expected


def test_triangle_signatures():
    assert cycle_signature(phase_pattern(TRIANGLE), [0, 1, 2]) == -1
    assert cycle_signature(phase_pattern(-TRIANGLE), [0, 1, 2]) == 1


def test_bipartite_flip():
    m = np.array([[0.0, 1.0], [1.0, 0.0]])
    rep = stoquasticity_check(m)
    assert rep.is_stoquastic
    assert np.allclose(rep.phases, [1, -1])
    assert np.allclose(rep.conjugated(m), [[0, -1], [-1, 0]])


def test_frustrated_triangle():
    rep = stoquasticity_check(TRIANGLE)
    assert not rep.is_stoquastic
    assert sorted(rep.cycle) == [0, 1, 2]
    assert np.isclose(rep.signature, -1)


def test_already_stoquastic():
    m = -np.abs(np.random.default_rng(0).normal(size=(5, 5)))
    m = m + m.T
    rep = stoquasticity_check(m)
    assert rep.is_stoquastic and np.allclose(rep.phases, 1)


def test_disconnected_support():
    with pytest.raises(DisconnectedSupport):
        stoquasticity_check(np.diag([1.0, 2.0]))


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        stoquasticity_check(np.array([[0, 1], [2, 0]]))


def test_rotate_real_positive_ground():
    m = np.array([[1.0, -1.0, 0], [-1.0, 2.0, -0.5], [0, -0.5, 0.5]])
    _, vecs = np.linalg.eigh(m)
    phi = vecs[:, 0] * np.sign(vecs[0, 0])
    assert np.allclose(rotate_to_real(m, phi), m)


def test_rotate_complex_pair():
    m = np.array([[0, 1j], [-1j, 0]])
    phi = np.array([1, 1j]) / np.sqrt(2)
    assert np.allclose(m @ phi, -phi)
    out = rotate_to_real(m, phi)
    assert np.allclose(out, [[0, -1], [-1, 0]])
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(m))


def test_rotate_diagonal_unchanged():
    m = np.diag([3.0, 1.0, 2.0])
    assert np.allclose(rotate_to_real(m, [1, 1j, -1]), m)


def test_rotate_zero_amplitude():
    with pytest.raises(ZeroAmplitude):
        rotate_to_real(np.eye(2), [1.0, 0.0])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_check_agrees_with_cycle_enumeration(seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, n_range=(3, 6), density=0.7)
    if rng.random() < 0.5:
        # make it balanced: a conjugated nonpositive matrix
        u = np.exp(1j * rng.uniform(0, 2 * np.pi, m.shape[0]))
        off = -np.abs(m - np.diag(np.diag(m)))
        m = np.diag(np.diag(m)) + u[:, None] * off * u.conj()[None, :]
    rep = stoquasticity_check(m)
    assert rep.is_stoquastic == brute_force_stoquastic(m)
    if rep.is_stoquastic:
        c = rep.conjugated(m)
        off = c - np.diag(np.diag(c))
        assert np.abs(off.imag).max() < 1e-9 and off.real.max() < 1e-9
    else:
        assert not signature_is_one(rep.signature)
        assert rep.signature == cycle_signature(phase_pattern(m), rep.cycle)
