"""Executable certificates for the gap inequalities.

Every verifier returns a :class:`BoundCertificate` asserting ``lhs >= rhs``; the
intermediate steps of each argument are attached as ``chain`` certificates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cheeger import EXHAUSTIVE_LIMIT, cheeger_exhaustive, cut_ratio, min_ratio_cut, quotient_fiedler
from .errors import DimensionMismatch, EmptySubset, NegativePotentialUnsupported, NotStoquastic
from .graph_core import Hamiltonian, LaplacianKind, SignedWeightedGraph, positive_subgraph
from .routing import RoutingPlan, routed_weights, validate_plan, combinatorial_gap
from .spectral import (
    EigenSystem,
    GroundState,
    dirichlet_ground,
    ground_state,
    ground_weighted_gap_quotient,
    spectrum,
)

REL_TOL = 1e-9


def holds_within(lhs: float, rhs: float, rel: float = REL_TOL) -> bool:
    return bool(lhs - rhs >= -rel * max(1.0, abs(lhs), abs(rhs)))


@dataclass(frozen=True)
class BoundCertificate:
    name: str
    lhs: float
    rhs: float
    holds: bool
    inputs: dict = field(default_factory=dict)
    notes: str = ""
    chain: tuple["BoundCertificate", ...] = ()

    @classmethod
    def compare(cls, name, lhs, rhs, inputs=None, notes="", chain=()) -> "BoundCertificate":
        lhs, rhs = float(lhs), float(rhs)
        return cls(name, lhs, rhs, holds_within(lhs, rhs), dict(inputs or {}), notes, tuple(chain))

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def all_hold(self) -> bool:
        return self.holds and all(c.all_hold for c in self.chain)

    def failures(self) -> list["BoundCertificate"]:
        out = [] if self.holds else [self]
        for c in self.chain:
            out.extend(c.failures())
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "inputs": self.inputs,
            "notes": self.notes,
            "chain": [c.to_dict() for c in self.chain],
        }


# closed-form right-hand sides

def cheeger_lower_rhs(h: float, q: float) -> float:
    """sqrt(h^2 + Q^2) - Q, written in a cancellation-free form."""
    return h * h / (math.sqrt(h * h + q * q) + q)


def weak_cheeger_rhs(h: float, q: float) -> float:
    return h * h / (2.0 * math.sqrt(h * h + q * q))


def nonstoquastic_rhs(h: float, q: float, rho: float) -> float:
    """(Q + rho) - sqrt((Q + rho)^2 - h^2); NaN outside the square-root domain."""
    a = q + rho
    if h > a:
        return float("nan")
    return h * h / (a + math.sqrt(a * a - h * h))


@dataclass(frozen=True)
class QValue:
    value: float
    mode: str  # "relaxed" or "exact"
    side: tuple[int, ...] = ()


def degree_relaxed_q(decomp: Hamiltonian, graph: SignedWeightedGraph | None = None) -> QValue:
    g = decomp.graph if graph is None else graph
    if decomp.kind is LaplacianKind.NORMALIZED:
        return QValue(1.0, "relaxed")
    return QValue(float(g.degrees().max()), "relaxed")


def exact_excited_q(decomp: Hamiltonian, system: EigenSystem | None = None) -> QValue:
    """The phi_1^2-weighted degree average over one sign side of phi_1.

    Of {phi_1 >= 0} and {phi_1 <= 0} the side with the smaller ground-state volume is used.
    """
    es = system if system is not None else spectrum(decomp)
    phi0 = decomp.to_generalized(es.vector(0))
    phi1 = decomp.to_generalized(es.vector(1))
    d, q = decomp.graph.degrees(), decomp.q
    sides = [np.nonzero(phi1 >= 0)[0], np.nonzero(phi1 <= 0)[0]]
    sides = [s for s in sides if s.size]
    side = min(sides, key=lambda s: (float(np.sum(q[s] * phi0[s] ** 2)), tuple(s)))
    w = phi1[side] ** 2
    return QValue(float(np.sum(d[side] * w) / np.sum(q[side] * w)), "exact", tuple(int(x) for x in side))


def resolve_q(decomp: Hamiltonian, q_mode: str, system: EigenSystem | None = None) -> QValue:
    if q_mode == "relaxed":
        return degree_relaxed_q(decomp)
    if q_mode == "exact":
        return exact_excited_q(decomp, system)
    raise ValueError(f"unknown Q mode {q_mode!r}")


def _require_stoquastic(decomp: Hamiltonian) -> None:
    if decomp.graph.negative_edges:
        raise NotStoquastic(f"edge {decomp.graph.negative_edges[0][:2]} has negative weight")
    if not decomp.graph.is_connected():
        raise NotStoquastic("graph is not connected")


def verify_upper(decomp: Hamiltonian, system: EigenSystem | None = None, limit: int = EXHAUSTIVE_LIMIT) -> BoundCertificate:
    """2h >= gamma, replaying the two-valued trial function of the minimizing cut."""
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    rep = cheeger_exhaustive(decomp, gs.phi, limit)
    mass = decomp.q * gs.phi ** 2
    inside = np.zeros(decomp.n, dtype=bool)
    inside[list(rep.cut)] = True
    vol_s, vol_c = float(mass[inside].sum()), float(mass[~inside].sum())
    trial = np.where(inside, vol_c, -vol_s)
    quotient = ground_weighted_gap_quotient(decomp, gs.phi, trial, project=True)
    gamma, h = es.gap, rep.h
    inputs = {"gamma": gamma, "h": h, "cut": list(rep.cut), "trial_quotient": quotient}
    chain = (
        BoundCertificate.compare("upper.trial_vs_gap", quotient, gamma, inputs),
        BoundCertificate.compare("upper.cheeger_vs_trial", 2 * h, quotient, inputs),
    )
    return BoundCertificate.compare("upper", 2 * h, gamma, inputs, chain=chain)


def verify_lower_stoquastic(decomp: Hamiltonian, q_mode: str = "relaxed", system: EigenSystem | None = None,
                            limit: int = EXHAUSTIVE_LIMIT) -> BoundCertificate:
    """gamma >= sqrt(h^2 + Q^2) - Q, with the weaker h^2 / (2 sqrt(h^2 + Q^2)) form chained."""
    _require_stoquastic(decomp)
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    h = cheeger_exhaustive(decomp, gs.phi, limit).h
    q = resolve_q(decomp, q_mode, es)
    gamma = es.gap
    main_rhs = cheeger_lower_rhs(h, q.value)
    weak_rhs = weak_cheeger_rhs(h, q.value)
    inputs = {"gamma": gamma, "h": h, "Q": q.value, "q_mode": q.mode}
    if q.side:
        inputs["q_side"] = list(q.side)
    chain = (
        BoundCertificate.compare("weak_form", gamma, weak_rhs, inputs),
        BoundCertificate.compare("weak_form_dominated", main_rhs, weak_rhs, inputs),
    )
    return BoundCertificate.compare("cheeger_lower", gamma, main_rhs, inputs, chain=chain)


def verify_lower_nonstoquastic(decomp: Hamiltonian, plan: RoutingPlan, system: EigenSystem | None = None,
                               limit: int = EXHAUSTIVE_LIMIT) -> BoundCertificate:
    """gamma >= (Q + rho) - sqrt((Q + rho)^2 - h_routed^2) for a real symmetric operator with a routed plan."""
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    u, v, omega, mass = routed_weights(decomp, gs.phi, plan)
    h_routed, cut, _ = min_ratio_cut(u, v, omega, mass, limit)
    gplus = positive_subgraph(decomp.graph)
    pu, pv, pw = gplus.edge_arrays
    h_positive = min_ratio_cut(pu, pv, pw * gs.phi[pu] * gs.phi[pv], mass, limit)[0]
    q = degree_relaxed_q(decomp, gplus)
    rho = es.spread
    gamma = es.gap
    inputs = {"gamma": gamma, "h_routed": h_routed, "h_positive": h_positive, "Q": q.value, "rho": rho, "cut": list(cut)}
    if h_routed > q.value + rho:
        return BoundCertificate("nonstoquastic_lower", gamma, float("nan"), False, inputs,
                                notes="square-root domain violated: h_routed > Q + rho")
    rhs = nonstoquastic_rhs(h_routed, q.value, rho)
    return BoundCertificate.compare("nonstoquastic_lower", gamma, rhs, inputs)


def replay_nonstoquastic_chain(decomp: Hamiltonian, plan: RoutingPlan, system: EigenSystem | None = None) -> BoundCertificate:
    """Replays the chain behind the non-stoquastic bound with the routed minimizer f.

    f minimizes the routed gap quotient; S is its nonnegative side, flipped so S has
    the smaller ground-state volume, and g = f on S, 0 elsewhere. The replayed
    steps are gamma >= gamma_routed >= Phi(g) >= Psi(g), the co-area step
    sum omega |g(u)^2 - g(v)^2| >= h_routed sum q g^2 phi^2, and the closing bound.
    """
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    u, v, omega, mass = routed_weights(decomp, gs.phi, plan)
    h_routed, _, _ = min_ratio_cut(u, v, omega, mass)
    gamma = es.gap
    f = quotient_fiedler(u, v, omega, mass)
    num_f = float(np.sum(omega * (f[u] - f[v]) ** 2))
    gamma_routed = num_f / float(mass @ (f * f))
    pos = f >= 0
    if float(mass[pos].sum()) > float(mass[~pos].sum()):
        f = -f
        pos = f >= 0
    g = np.where(pos, f, 0.0)
    phi_q = float(np.sum(omega * (g[u] - g[v]) ** 2)) / float(mass @ (g * g))
    sq = float(np.sum(omega * np.abs(g[u] ** 2 - g[v] ** 2)))
    plus = float(np.sum(omega * (g[u] + g[v]) ** 2))
    psi_q = sq * sq / (float(mass @ (g * g)) * plus)
    coarea_rhs = h_routed * float(mass @ (g * g))
    q = degree_relaxed_q(decomp, positive_subgraph(decomp.graph)).value
    rho = es.spread
    inputs = {"gamma": gamma, "gamma_routed": gamma_routed, "Phi": phi_q, "Psi": psi_q, "h_routed": h_routed, "Q": q, "rho": rho}
    chain = (
        BoundCertificate.compare("chain.gamma_vs_routed", gamma, gamma_routed, inputs),
        BoundCertificate.compare("chain.routed_vs_Phi", gamma_routed, phi_q, inputs),
        BoundCertificate.compare("chain.Phi_vs_Psi", phi_q, psi_q, inputs),
        BoundCertificate.compare("chain.coarea", sq, coarea_rhs, inputs),
    )
    rhs = nonstoquastic_rhs(h_routed, q, rho)
    if math.isnan(rhs):
        final = BoundCertificate("chain.final", gamma, rhs, False, inputs, notes="h_routed > Q + rho")
    else:
        final = BoundCertificate.compare("chain.final", gamma, rhs, inputs)
    return BoundCertificate.compare("nonstoquastic_chain", gamma, phi_q, inputs, chain=chain + (final,))


def ground_identity_residual(decomp: Hamiltonian, gs: GroundState, g) -> tuple[float, float]:
    """Both sides of the identity
    sum w (g phi)(u) - (g phi)(v))^2 = sum (lam0 - W) q g^2 phi^2 + sum w (g(u)-g(v))^2 phi(u) phi(v).
    """
    g = np.asarray(g, dtype=float)
    phi = gs.phi
    u, v, w = decomp.graph.edge_arrays
    gp = g * phi
    lhs = float(np.sum(w * (gp[u] - gp[v]) ** 2))
    rhs = float(np.sum((gs.energy - decomp.potential) * decomp.q * g * g * phi * phi))
    rhs += float(np.sum(w * (g[u] - g[v]) ** 2 * phi[u] * phi[v]))
    return lhs, rhs


def verify_potential_bound(decomp: Hamiltonian, level: int = 1, system: EigenSystem | None = None) -> BoundCertificate:
    """lam_i >= weighted average of W + lam0^D(S') over each sign side S' of phi_i.

    The Dirichlet eigenvalue on S' is taken for the bare Laplacian (no potential);
    the potential enters through the average. The weaker form drops lam0^D.
    """
    if decomp.graph.negative_edges:
        raise NotStoquastic("potential bound needs positive edge weights")
    es = system if system is not None else spectrum(decomp)
    if not 0 <= level < decomp.n:
        raise DimensionMismatch(f"level {level} outside 0..{decomp.n - 1}")
    lam = float(es.eigenvalues[level])
    phi = decomp.to_generalized(es.vector(level))
    bare = decomp.with_potential(np.zeros(decomp.n))
    mass = decomp.q * phi * phi
    s = np.nonzero(phi >= 0)[0]
    sides = [("S", s), ("complement", np.setdiff1d(np.arange(decomp.n), s))]
    chain = []
    notes = ""
    best = -np.inf
    for label, side in sides:
        if side.size == 0:
            notes = "phi_i is single-signed; only the S side is certified"
            continue
        den = float(mass[side].sum())
        if den <= 0:
            continue
        lam_d = dirichlet_ground(bare, side)[0]
        avg_w = float(np.sum(decomp.potential[side] * mass[side])) / den
        with_dirichlet = avg_w + lam_d
        best = max(best, with_dirichlet)
        inp = {"lambda_i": lam, "side": label, "dirichlet": lam_d, "potential_average": avg_w}
        chain.append(BoundCertificate.compare(f"potential.with_dirichlet[{label}]", lam, with_dirichlet, inp))
        chain.append(BoundCertificate.compare(f"potential.average_only[{label}]", lam, avg_w, inp))
        chain.append(BoundCertificate.compare(f"potential.dirichlet_vs_average[{label}]", with_dirichlet, avg_w, inp))
    return BoundCertificate.compare("potential", lam, best, {"lambda_i": lam, "level": level}, notes, chain)


def verify_comparison(decomp: Hamiltonian, system: EigenSystem | None = None) -> BoundCertificate:
    """g <= h + lam0 + eps Q, with eps the smallest admissible curvature constant.

    g is the Cheeger constant of the original graph with phi = 1: boundary weights
    w_uv and volumes q_u. The absorbing boundary edges do not enter g.
    """
    _require_stoquastic(decomp)
    if np.any(decomp.potential < 0):
        raise NegativePotentialUnsupported("comparison needs W >= 0")
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    phi = gs.phi
    h = cheeger_exhaustive(decomp, phi).h
    g_const = cheeger_exhaustive(decomp, np.ones(decomp.n)).h
    u, v, w = decomp.graph.edge_arrays
    spread = np.zeros(decomp.n)
    np.add.at(spread, u, w * np.abs(phi[u] - phi[v]))
    np.add.at(spread, v, w * np.abs(phi[u] - phi[v]))
    eps = float(np.max(2 * spread / (decomp.graph.degrees() * phi)))
    q = degree_relaxed_q(decomp).value
    inputs = {"g": g_const, "h": h, "lambda0": gs.energy, "epsilon": eps, "Q": q,
              "g_normalization": "original graph, volumes q_u, boundary edges excluded"}
    return BoundCertificate.compare("comparison", h + gs.energy + eps * q, g_const, inputs)


def verify_subgraph_bottleneck(decomp: Hamiltonian, subset: Iterable[int], system: EigenSystem | None = None) -> BoundCertificate:
    """h_S >= lam0^D(H, S) - lam0(H)."""
    s = sorted(set(int(x) for x in subset))
    if not s:
        raise EmptySubset("subset is empty")
    es = system if system is not None else spectrum(decomp)
    gs = ground_state(decomp, system=es)
    lam_d = dirichlet_ground(decomp, s)[0]
    if len(s) == decomp.n:
        # whole vertex set: the boundary is empty, so the ratio |dS|/vol(S) is 0
        h_s = 0.0
    else:
        h_s = cut_ratio(decomp, gs.phi, s)
    inputs = {"h_S": h_s, "dirichlet": lam_d, "lambda0": gs.energy, "subset": s}
    return BoundCertificate.compare("subgraph_bottleneck", h_s, lam_d - gs.energy, inputs)


def verify_epsilon_relaxed(graph: SignedWeightedGraph, plan: RoutingPlan) -> BoundCertificate:
    """2h >= gamma >= eps (sqrt(h^2+Q^2) - Q) with h and Q from the positive subgraph.

    eps is the smallest ratio omega_uv / w_uv over positive edges after routing.
    """
    routed = validate_plan(graph, plan)
    gplus = positive_subgraph(graph)
    ratio = {(a, b): w for a, b, w in routed.edges}
    eps = min(ratio.get((a, b), 0.0) / w for a, b, w in gplus.edges)
    n = graph.n
    h = min_ratio_cut(*gplus.edge_arrays, np.ones(n))[0]
    q = float(gplus.degrees().max())
    gamma = combinatorial_gap(graph)
    inputs = {"gamma": gamma, "h_positive": h, "Q": q, "epsilon": eps}
    chain = (BoundCertificate.compare("epsilon_relaxed.upper", 2 * h, gamma, inputs),)
    return BoundCertificate.compare("epsilon_relaxed", gamma, eps * cheeger_lower_rhs(h, q), inputs, chain=chain)
