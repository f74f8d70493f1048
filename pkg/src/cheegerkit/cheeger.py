"""Weighted Cheeger constants: exact enumeration, sweep cuts and the functional form.

A cut is stored canonically as the side that contains vertex 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConstantFunction, DimensionMismatch, ImproperCut, TooLarge
from .graph_core import Hamiltonian
from .spectral import eigendecompose, positive_phi

EXHAUSTIVE_LIMIT = 24
TIE_RTOL = 1e-12
_CHUNK = 1 << 15


@dataclass(frozen=True)
class CheegerReport:
    h: float
    cut: tuple[int, ...]
    method: str
    ratios: dict | None = None

    def to_dict(self) -> dict:
        out = {"h": self.h, "cut": list(self.cut), "method": self.method}
        if self.ratios is not None:
            out["ratios"] = [[list(k), v] for k, v in sorted(self.ratios.items())]
        return out


def canonical_cut(cut: Iterable[int], n: int) -> tuple[int, ...]:
    s = sorted(set(int(u) for u in cut))
    if not s:
        raise ImproperCut("cut side is empty")
    if len(s) >= n:
        raise ImproperCut("cut side is the whole vertex set")
    if s[0] < 0 or s[-1] >= n:
        raise DimensionMismatch(f"cut has vertices outside 0..{n - 1}")
    if s[0] != 0:
        s = sorted(set(range(n)) - set(s))
    return tuple(s)


def weighted_edges(decomp: Hamiltonian, phi) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Edge endpoints, boundary weights w phi phi and vertex masses q phi^2."""
    p = positive_phi(phi)
    if p.shape != (decomp.n,):
        raise DimensionMismatch("phi and graph differ in length")
    u, v, w = decomp.graph.edge_arrays
    return u, v, w * p[u] * p[v], decomp.q * p * p


def ratio_of(u, v, omega, mass, members: np.ndarray) -> float:
    """|boundary| / min(vol S, vol S-bar) for a boolean membership vector."""
    boundary = float(omega[members[u] != members[v]].sum())
    # both volumes summed directly: total - vol(S) loses all digits when vol(S-bar) is tiny
    return boundary / min(float(mass[members].sum()), float(mass[~members].sum()))


def _mask_chunks(n: int):
    # every subset containing vertex 0 except the full set, in increasing bit order
    total = (1 << (n - 1)) - 1
    shifts = np.arange(n - 1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        ks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        rest = ((ks[:, None] >> shifts) & 1).astype(bool)
        yield np.hstack([np.ones((ks.size, 1), dtype=bool), rest])


def min_ratio_cut(u, v, omega, mass, limit: int = EXHAUSTIVE_LIMIT, keep_ratios: bool = False):
    """Exact minimum of the cut ratio over all proper cuts.

    Returns (h, canonical cut, ratios or None). Ties within a relative 1e-12 go to
    the lexicographically smallest canonical cut.
    """
    n = mass.size
    if n > limit:
        raise TooLarge(f"{n} vertices exceeds the exhaustive limit {limit}")
    if n < 2:
        raise ImproperCut("a single vertex has no proper cut")
    best = np.inf
    cands: list[tuple[float, tuple[int, ...]]] = []
    ratios = {} if keep_ratios else None
    for masks in _mask_chunks(n):
        boundary = (masks[:, u] != masks[:, v]).astype(float) @ omega
        vs = masks.astype(float) @ mass
        vc = (~masks).astype(float) @ mass
        r = boundary / np.minimum(vs, vc)
        if keep_ratios:
            for row, val in zip(masks, r):
                ratios[tuple(int(i) for i in np.nonzero(row)[0])] = float(val)
        best = min(best, float(r.min()))
        window = best + TIE_RTOL * abs(best)
        cands = [c for c in cands if c[0] <= window]
        for row, val in zip(masks[r <= window], r[r <= window]):
            cands.append((float(val), tuple(int(i) for i in np.nonzero(row)[0])))
    return best, min(c[1] for c in cands), ratios


def _cut_value(cut, u, v, omega, mass):
    members = np.zeros(mass.size, dtype=bool)
    members[list(cut)] = True
    return ratio_of(u, v, omega, mass, members)


def cut_ratio(decomp: Hamiltonian, phi, cut: Iterable[int]) -> float:
    u, v, omega, mass = weighted_edges(decomp, phi)
    s = canonical_cut(cut, decomp.n)
    return _cut_value(s, u, v, omega, mass)


def cheeger_exhaustive(decomp: Hamiltonian, phi, limit: int = EXHAUSTIVE_LIMIT, keep_ratios: bool = False) -> CheegerReport:
    u, v, omega, mass = weighted_edges(decomp, phi)
    h, cut, ratios = min_ratio_cut(u, v, omega, mass, limit, keep_ratios)
    return CheegerReport(h, cut, "exhaustive", ratios)


def quotient_fiedler(u, v, omega, mass) -> np.ndarray:
    """Second generalized eigenvector of (L_omega, diag(mass)), the minimizer of the gap quotient."""
    n = mass.size
    lap = np.zeros((n, n))
    np.add.at(lap, (u, v), -omega)
    np.add.at(lap, (v, u), -omega)
    lap[np.diag_indices(n)] = -lap.sum(axis=1)
    s = 1.0 / np.sqrt(mass)
    es = eigendecompose(s[:, None] * lap * s[None, :])
    return es.vector(1) * s


def sweep_cut(u, v, omega, mass, ordering) -> tuple[float, tuple[int, ...]]:
    n = mass.size
    order = np.argsort(np.asarray(ordering, dtype=float), kind="stable")
    members = np.zeros(n, dtype=bool)
    best, best_cut = np.inf, None
    for k in range(n - 1):
        members[order[k]] = True
        r = ratio_of(u, v, omega, mass, members)
        cut = canonical_cut(np.nonzero(members)[0], n)
        if best_cut is None or r < best - TIE_RTOL * abs(best):
            best, best_cut = r, cut
        elif r <= best + TIE_RTOL * abs(best) and cut < best_cut:
            best, best_cut = min(r, best), cut
    return best, best_cut


def cheeger_sweep(decomp: Hamiltonian, phi, ordering=None) -> CheegerReport:
    """Best prefix cut of a vertex ordering; an upper bound on h."""
    u, v, omega, mass = weighted_edges(decomp, phi)
    if ordering is None:
        ordering = quotient_fiedler(u, v, omega, mass)
    elif np.shape(ordering) != (decomp.n,):
        raise DimensionMismatch("ordering needs one value per vertex")
    h, cut = sweep_cut(u, v, omega, mass, ordering)
    return CheegerReport(h, cut, "sweep")


def weighted_median(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Row-wise weighted median; an exact half split takes the midpoint of the bracket."""
    values = np.atleast_2d(values)
    order = np.argsort(values, axis=1, kind="stable")
    vs = np.take_along_axis(values, order, axis=1)
    ws = np.asarray(weights)[order]
    cum = np.cumsum(ws, axis=1)
    half = cum[:, -1:] / 2
    k = np.argmax(cum >= half * (1 - 1e-12), axis=1)
    rows = np.arange(values.shape[0])
    med = vs[rows, k]
    exact = np.abs(cum[rows, k] - half[:, 0]) <= 1e-12 * half[:, 0]
    exact &= k + 1 < values.shape[1]
    nxt = vs[rows, np.minimum(k + 1, values.shape[1] - 1)]
    return np.where(exact, (med + nxt) / 2, med)


def functional_ratios(decomp: Hamiltonian, phi, fs) -> np.ndarray:
    """The functional ratio for each row of ``fs``; see :func:`functional_ratio`."""
    u, v, omega, mass = weighted_edges(decomp, phi)
    fs = np.atleast_2d(np.asarray(fs, dtype=float))
    if fs.shape[1] != decomp.n:
        raise DimensionMismatch("f needs one value per vertex")
    spread = fs.max(axis=1) - fs.min(axis=1)
    if np.any(spread <= 1e-15 * np.maximum(1.0, np.abs(fs).max(axis=1))):
        raise ConstantFunction("f is constant")
    c = weighted_median(fs, mass)
    num = np.abs(fs[:, u] - fs[:, v]) @ omega
    den = np.abs(fs - c[:, None]) @ mass
    return num / den


def functional_ratio(decomp: Hamiltonian, phi, f) -> float:
    """sum w phi phi |f(u)-f(v)| / min_C sum q phi^2 |f - C|, with C the weighted median of f."""
    return float(functional_ratios(decomp, phi, f)[0])
