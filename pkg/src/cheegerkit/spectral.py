"""Dense symmetric eigensolves, Rayleigh quotients, Dirichlet eigenvalues and the ground-weighted gap quotient."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    ConvergenceFailure,
    DegenerateGround,
    DimensionMismatch,
    EmptySubset,
    NotOrthogonal,
    NotSymmetric,
    ZeroDenominator,
    ZeroVector,
)
from .graph_core import Hamiltonian

SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_bound: float

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def gap(self) -> float:
        if self.eigenvalues.size < 2:
            return 0.0
        return max(0.0, float(self.eigenvalues[1] - self.eigenvalues[0]))

    @property
    def spread(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]


def _sign_normalize(vecs: np.ndarray) -> np.ndarray:
    # flip each column so its largest-magnitude entry is positive (first index on ties)
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def eigendecompose(m) -> EigenSystem:
    """Full eigensystem of a real symmetric matrix, eigenvalues ascending."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-12 relative tolerance")
    a = (a + a.T) / 2
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"LAPACK eigensolver did not converge: {exc}") from exc
    vecs = _sign_normalize(vecs)
    resid = float(np.linalg.norm(a @ vecs - vecs * vals, axis=0).max(initial=0.0))
    norm = float(np.abs(vals).max(initial=0.0))
    if resid > RESIDUAL_TOL * max(1.0, norm):
        raise ConvergenceFailure(f"residual {resid:.3e} exceeds {RESIDUAL_TOL:g} * max(1, |M|)")
    return EigenSystem(vals, vecs, resid)


def spectrum(decomp: Hamiltonian) -> EigenSystem:
    return eigendecompose(decomp.matrix)


def rayleigh_quotient(m, f) -> float:
    f = np.asarray(f, dtype=float)
    ff = float(f @ f)
    if ff == 0.0:
        raise ZeroVector("Rayleigh quotient of the zero vector")
    return float(f @ np.asarray(m) @ f) / ff


@dataclass(frozen=True, eq=False)
class GroundState:
    """Ground state in vertex coordinates (phi = Q^-1/2 f) with its energy and the gap above it."""

    phi: np.ndarray
    energy: float
    gap: float

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.phi, dtype=dtype)


def ground_state(decomp: Hamiltonian, require_positive: bool = True, system: EigenSystem | None = None) -> GroundState:
    """Sign-normalized ground state of the operator.

    With ``require_positive`` a degenerate ground level or a ground state with a
    nonpositive entry raises DegenerateGround.
    """
    es = system if system is not None else spectrum(decomp)
    phi = decomp.to_generalized(es.vector(0))
    if require_positive:
        if es.eigenvalues.size > 1 and es.gap <= 1e-12 * max(1.0, abs(es.ground_energy)):
            raise DegenerateGround(f"ground level is degenerate (gap {es.gap:.3e})")
        if phi.min() <= 0:
            raise DegenerateGround("ground state is not strictly positive")
    phi.setflags(write=False)
    return GroundState(phi, es.ground_energy, es.gap)


def positive_phi(phi) -> np.ndarray:
    p = np.asarray(phi, dtype=float).reshape(-1)
    if p.size == 0 or p.min() <= 0:
        raise DegenerateGround("weights phi must be strictly positive")
    return p


def _subset_indices(subset: Iterable[int], n: int) -> np.ndarray:
    idx = np.array(sorted(set(int(u) for u in subset)), dtype=int)
    if idx.size == 0:
        raise EmptySubset("subset is empty")
    if idx[0] < 0 or idx[-1] >= n:
        raise DimensionMismatch(f"subset has vertices outside 0..{n - 1}")
    return idx


def dirichlet_ground(decomp: Hamiltonian, subset: Iterable[int]) -> tuple[float, np.ndarray]:
    """Lowest eigenpair with the function pinned to zero outside ``subset``.

    Returns the eigenvalue and the vector in vertex coordinates, zero off the subset.
    """
    idx = _subset_indices(subset, decomp.n)
    es = eigendecompose(decomp.matrix[np.ix_(idx, idx)])
    f = np.zeros(decomp.n)
    f[idx] = es.vector(0)
    return es.ground_energy, decomp.to_generalized(f)


def ground_weighted_gap_quotient(decomp: Hamiltonian, phi, g, project: bool = False) -> float:
    """sum w phi(u) phi(v) (g(u)-g(v))^2 / sum q g^2 phi^2, for g orthogonal to q phi^2.

    With ``project=True`` the q phi^2-weighted mean of g is subtracted first, which
    leaves the numerator unchanged.
    """
    p = positive_phi(phi)
    g = np.asarray(g, dtype=float).reshape(-1)
    if g.shape != p.shape:
        raise DimensionMismatch("g and phi differ in length")
    mass = decomp.q * p * p
    inner = float(mass @ g)
    if project:
        g = g - inner / mass.sum()
    elif abs(inner) > 1e-10 * np.linalg.norm(mass) * np.linalg.norm(g):
        raise NotOrthogonal(f"<g, q phi^2> = {inner:.3e} is not zero")
    u, v, w = decomp.graph.edge_arrays
    num = float(np.sum(w * p[u] * p[v] * (g[u] - g[v]) ** 2))
    den = float(mass @ (g * g))
    if den <= 0:
        raise ZeroDenominator("g vanishes on the support of phi")
    return num / den
