"""Stoquasticity via cycle signatures, and the diagonal rotation of Hermitian matrices to real ones."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BrokenCycle, DimensionMismatch, DisconnectedSupport, NotHermitian, ZeroAmplitude

PHASE_TOL = 1e-8


def as_hermitian(h, tol: float = 1e-12) -> np.ndarray:
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.conj().T).max(initial=0.0) > tol * scale:
        raise NotHermitian("matrix differs from its conjugate transpose")
    return (m + m.conj().T) / 2


def phase_pattern(h) -> np.ndarray:
    """Off-diagonal phases H_uv/|H_uv|, zero where H_uv = 0 and on the diagonal."""
    m = as_hermitian(h)
    mag = np.abs(m)
    theta = np.zeros_like(m)
    nz = mag > 0
    theta[nz] = m[nz] / mag[nz]
    np.fill_diagonal(theta, 0)
    return theta


def cycle_signature(pattern: np.ndarray, cycle: Sequence[int]) -> complex:
    """Product of -Theta over consecutive pairs of a closed vertex sequence.

    The closing pair (last, first) is implied; a repeated first vertex at the end is accepted.
    """
    cyc = list(cycle)
    if len(cyc) > 1 and cyc[0] == cyc[-1]:
        cyc = cyc[:-1]
    if len(cyc) < 2:
        raise BrokenCycle("a cycle needs at least two vertices")
    sig = 1.0 + 0j
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        t = pattern[a, b]
        if t == 0:
            raise BrokenCycle(f"zero entry at ({a},{b})")
        sig *= -t
    return complex(sig)


def signature_is_one(sig: complex, tol: float = PHASE_TOL) -> bool:
    return abs(abs(sig) - 1.0) <= tol and abs(np.angle(sig)) <= tol


@dataclass(frozen=True)
class StoquasticityReport:
    is_stoquastic: bool
    phases: np.ndarray | None = None  # diagonal of the witness unitary
    cycle: tuple[int, ...] | None = None
    signature: complex | None = None

    def conjugated(self, h) -> np.ndarray:
        u = self.phases
        return u.conj()[:, None] * np.asarray(h) * u[None, :]


def _tree_path(parent: list[int], a: int, b: int) -> list[int]:
    """Vertex path a -> b through the BFS tree."""
    up_a, up_b = [a], [b]
    seen_a = {a: 0}
    while parent[up_a[-1]] >= 0:
        up_a.append(parent[up_a[-1]])
        seen_a[up_a[-1]] = len(up_a) - 1
    while up_b[-1] not in seen_a:
        up_b.append(parent[up_b[-1]])
    meet = up_b[-1]
    return up_a[: seen_a[meet] + 1] + up_b[-2::-1]


def stoquasticity_check(h) -> StoquasticityReport:
    """Decide whether a diagonal unitary makes every off-diagonal entry real and nonpositive.

    Phases are propagated along a BFS tree from vertex 0 with U_0 = 1. Across a tree
    edge i -> j we need conj(U_i) H_ij U_j < 0, which fixes U_j = -conj(Theta_ij) U_i.
    Each non-tree edge is then checked; a violation closes a frustrated cycle.
    """
    theta = phase_pattern(h)
    n = theta.shape[0]
    support = theta != 0
    u = np.zeros(n, dtype=complex)
    parent = [-1] * n
    u[0] = 1.0
    order = [0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in np.nonzero(support[i])[0]:
            j = int(j)
            if u[j] == 0:
                u[j] = -np.conj(theta[i, j]) * u[i]
                u[j] /= abs(u[j])
                parent[j] = i
                order.append(j)
                queue.append(j)
    if len(order) < n:
        raise DisconnectedSupport(f"off-diagonal support reaches {len(order)} of {n} vertices")
    for i in range(n):
        for j in np.nonzero(support[i])[0]:
            j = int(j)
            if j <= i or parent[j] == i or parent[i] == j:
                continue
            entry = np.conj(u[i]) * theta[i, j] * u[j]
            if not signature_is_one(-entry):
                cyc = _tree_path(parent, i, j)
                return StoquasticityReport(False, cycle=tuple(cyc), signature=cycle_signature(theta, cyc))
    return StoquasticityReport(True, phases=u)


def rotate_to_real(h, ground_state) -> np.ndarray:
    """Re(U^dag H U) with U = diag(phi0/|phi0|).

    The result has the same ground energy and a gap at least as large.
    """
    m = as_hermitian(h)
    phi = np.asarray(ground_state, dtype=complex).reshape(-1)
    if phi.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"ground state has length {phi.shape[0]}, matrix is {m.shape[0]}")
    mag = np.abs(phi)
    tiny = mag <= 1e-14 * max(mag.max(initial=0.0), 1e-300)
    if np.any(tiny):
        raise ZeroAmplitude(f"ground state vanishes at vertex {int(np.nonzero(tiny)[0][0])}")
    u = phi / mag
    rotated = u.conj()[:, None] * m * u[None, :]
    out = rotated.real.copy()
    return (out + out.T) / 2
