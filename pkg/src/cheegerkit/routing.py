"""Routing negative edge weight along positive paths.

Each negative edge (x, y) is assigned paths p through the positive subgraph with
fractions alpha_p summing to one. Every path edge then carries the load
|w_xy| * len(p) * alpha_p, and the residual weights

    omega_uv = w_uv - sum of loads on {u, v}

define a positive graph whose quadratic form lower-bounds the original one.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from .cheeger import CheegerReport, min_ratio_cut, EXHAUSTIVE_LIMIT
from .errors import (
    IncompleteCover,
    MassMismatch,
    NonPositiveResidual,
    OverlappingPaths,
    PathLeavesPositive,
    ResidualNegative,
    RoutingInfeasible,
    RoutingInvalid,
)
from .graph_core import Hamiltonian, LaplacianKind, SignedWeightedGraph, positive_subgraph
from .spectral import eigendecompose, positive_phi

MAX_PATHS = 16
RESIDUAL_FLOOR = 1e-12
ALPHA_TOL = 1e-12


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class RoutedPath:
    vertices: tuple[int, ...]
    alpha: float

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [_key(a, b) for a, b in zip(self.vertices, self.vertices[1:])]


@dataclass(frozen=True)
class RoutingPlan:
    """Paths per negative edge, keyed by the canonical edge (x, y) with x < y."""

    routes: tuple[tuple[tuple[int, int], tuple[RoutedPath, ...]], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[int, int], Sequence]) -> "RoutingPlan":
        """Accepts ``{(x, y): [(path, alpha), ...]}`` or lists of RoutedPath."""
        routes = []
        for edge, paths in mapping.items():
            rp = tuple(p if isinstance(p, RoutedPath) else RoutedPath(tuple(int(x) for x in p[0]), float(p[1])) for p in paths)
            routes.append((_key(int(edge[0]), int(edge[1])), rp))
        return cls(tuple(sorted(routes)))

    def as_dict(self) -> dict:
        return dict(self.routes)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [e for e, _ in self.routes]

    def paths(self, edge) -> tuple[RoutedPath, ...]:
        return self.as_dict()[_key(*edge)]

    def max_paths(self) -> int:
        return max((len(p) for _, p in self.routes), default=0)

    def to_dict(self) -> dict:
        return {
            "routes": [
                {"edge": list(e), "paths": [{"vertices": list(p.vertices), "alpha": p.alpha} for p in ps]}
                for e, ps in self.routes
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RoutingPlan":
        return cls.from_mapping(
            {tuple(r["edge"]): [(p["vertices"], p["alpha"]) for p in r["paths"]] for r in data["routes"]}
        )


def edge_loads(graph: SignedWeightedGraph, plan: RoutingPlan, phi=None) -> dict[tuple[int, int], float]:
    """Routed load per positive edge; with ``phi`` the load of (x, y) is scaled by phi(x) phi(y)."""
    p = np.ones(graph.n) if phi is None else np.asarray(phi, dtype=float)
    loads: dict[tuple[int, int], float] = {}
    for (x, y), paths in plan.routes:
        mass = abs(graph.weight(x, y)) * p[x] * p[y]
        for path in paths:
            for e in path.edges():
                loads[e] = loads.get(e, 0.0) + mass * path.length * path.alpha
    return loads


def _check_structure(graph: SignedWeightedGraph, plan: RoutingPlan) -> None:
    if not positive_subgraph(graph).is_connected():
        raise RoutingInvalid("positive subgraph is not connected")
    negative = {(u, v) for u, v, _ in graph.negative_edges}
    routed = set(plan.edges)
    missing = sorted(negative - routed)
    if missing:
        raise IncompleteCover(f"negative edge {missing[0]} has no route")
    extra = sorted(routed - negative)
    if extra:
        raise RoutingInvalid(f"edge {extra[0]} is routed but not negative")
    pos = {(u, v) for u, v, _ in graph.positive_edges}
    for (x, y), paths in plan.routes:
        if not paths:
            raise IncompleteCover(f"negative edge {(x, y)} has an empty path list")
        total = sum(p.alpha for p in paths)
        if abs(total - 1.0) > ALPHA_TOL or any(not 0.0 <= p.alpha <= 1.0 for p in paths):
            raise MassMismatch(f"fractions for {(x, y)} sum to {total!r}")
        for p in paths:
            if {p.vertices[0], p.vertices[-1]} != {x, y} or p.length < 1:
                raise PathLeavesPositive(f"path {p.vertices} does not join {x} and {y}")
            if p.length > graph.n:
                raise PathLeavesPositive(f"path {p.vertices} is longer than {graph.n} edges")
            for e in p.edges():
                if e not in pos:
                    raise PathLeavesPositive(f"path {p.vertices} uses non-positive edge {e}")


def validate_plan(graph: SignedWeightedGraph, plan: RoutingPlan, phi=None, floor: float = RESIDUAL_FLOOR) -> SignedWeightedGraph:
    """Check a plan and return the residual graph over the positive edges.

    With ``phi`` the edge weights are w_uv phi(u) phi(v) and loads are scaled the
    same way, so the result carries the weights omega(alpha) of the weighted bound.
    """
    _check_structure(graph, plan)
    p = np.ones(graph.n) if phi is None else positive_phi(phi)
    loads = edge_loads(graph, plan, p)
    out = []
    for u, v, w in graph.positive_edges:
        omega = w * p[u] * p[v] - loads.get((u, v), 0.0)
        if (u, v) in loads and omega < floor:
            raise NonPositiveResidual(f"residual {omega!r} on edge {(u, v)}", edge=(u, v), residual=omega)
        out.append((u, v, omega))
    return SignedWeightedGraph(graph.n, tuple(out))


def min_residual(graph: SignedWeightedGraph, plan: RoutingPlan) -> float:
    loads = edge_loads(graph, plan)
    if not loads:
        return float("inf")
    return min(graph.weight(u, v) - load for (u, v), load in loads.items())


def _positive_nx(graph: SignedWeightedGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from((u, v) for u, v, _ in graph.positive_edges)
    return g


def _candidate_paths(gplus: nx.Graph, x: int, y: int, cap: int, n: int) -> list[tuple[int, ...]]:
    try:
        gen = nx.shortest_simple_paths(gplus, x, y)
        return [tuple(p) for p in islice(gen, cap) if len(p) - 1 <= n]
    except nx.NetworkXNoPath:
        return []


def auto_route(graph: SignedWeightedGraph, strategy: str = "shortest", max_paths: int = MAX_PATHS) -> RoutingPlan:
    """Find a valid plan by a simple search.

    ``shortest`` gives every negative edge its k shortest positive paths with
    alpha = 1/k, raising k until the residuals are positive. ``greedy`` routes each
    negative edge on a single path that avoids edges used by earlier routes.
    """
    negatives = graph.negative_edges
    if not negatives:
        return RoutingPlan()
    gplus = _positive_nx(graph)
    if not nx.is_connected(gplus):
        raise RoutingInfeasible("positive subgraph is not connected")
    cands = {(x, y): _candidate_paths(gplus, x, y, max_paths, graph.n) for x, y, _ in negatives}
    if strategy == "shortest":
        return _route_shortest(graph, cands, max_paths)
    if strategy == "greedy":
        return _route_greedy(graph, cands)
    raise ValueError(f"unknown routing strategy {strategy!r}")


def _route_shortest(graph, cands, max_paths) -> RoutingPlan:
    best = float("-inf")
    for k in range(1, max_paths + 1):
        mapping = {e: [(p, 1.0 / len(ps[:k])) for p in ps[:k]] for e, ps in cands.items() if ps}
        if len(mapping) < len(cands):
            break
        plan = RoutingPlan.from_mapping(mapping)
        r = min_residual(graph, plan)
        best = max(best, r)
        if r >= RESIDUAL_FLOOR:
            return plan
        if all(len(ps) < k for ps in cands.values()):
            break
    raise RoutingInfeasible(f"no plan with at most {max_paths} paths per edge (best residual {best:.6g})", best)


def _route_greedy(graph, cands) -> RoutingPlan:
    used: set[tuple[int, int]] = set()
    mapping = {}
    order = sorted(cands, key=lambda e: (graph.weight(*e), e))  # most negative first
    for e in order:
        mag = abs(graph.weight(*e))
        chosen, best_r = None, float("-inf")
        for p in cands[e]:
            pe = RoutedPath(p, 1.0).edges()
            if used.intersection(pe):
                continue
            r = min(graph.weight(*f) for f in pe) - mag * len(pe)
            if r >= RESIDUAL_FLOOR:
                chosen = p
                break
            best_r = max(best_r, r)
        if chosen is None:
            raise RoutingInfeasible(f"no edge-disjoint path with positive residual for {e}", best_r)
        used.update(RoutedPath(chosen, 1.0).edges())
        mapping[e] = [(chosen, 1.0)]
    return RoutingPlan.from_mapping(mapping)


def combinatorial_gap(graph: SignedWeightedGraph, potential=None) -> float:
    return eigendecompose(Hamiltonian(graph, LaplacianKind.COMBINATORIAL, potential).matrix).gap


@dataclass(frozen=True)
class GapComparison:
    gamma_original: float
    gamma_routed: float

    @property
    def holds(self) -> bool:
        return self.gamma_original >= self.gamma_routed - 1e-9

    def to_dict(self) -> dict:
        return {"gamma_original": self.gamma_original, "gamma_routed": self.gamma_routed, "holds": self.holds}


def compare_routed_gap(graph: SignedWeightedGraph, plan: RoutingPlan, potential=None) -> GapComparison:
    """Gaps of L + W before and after routing; the routed one may not exceed the original."""
    routed = validate_plan(graph, plan)
    return GapComparison(combinatorial_gap(graph, potential), combinatorial_gap(routed, potential))


def check_simpler_reduction(graph: SignedWeightedGraph, plan: RoutingPlan) -> GapComparison:
    """Single, pairwise edge-disjoint paths with nonnegative residuals; compares the two gaps."""
    _check_structure(graph, plan)
    used: dict[tuple[int, int], tuple[int, int]] = {}
    weights = {(u, v): w for u, v, w in graph.positive_edges}
    for e, paths in plan.routes:
        if len(paths) != 1:
            raise RoutingInvalid(f"negative edge {e} must use exactly one path")
        path = paths[0]
        for f in path.edges():
            if f in used:
                raise OverlappingPaths(f"edge {f} is shared by the routes of {used[f]} and {e}")
            used[f] = e
            weights[f] -= abs(graph.weight(*e)) * path.length
            if weights[f] < 0:
                raise ResidualNegative(f"residual {weights[f]!r} on edge {f}")
    routed = SignedWeightedGraph(graph.n, tuple((u, v, w) for (u, v), w in weights.items()))
    return GapComparison(combinatorial_gap(graph), combinatorial_gap(routed))


def routed_weights(decomp: Hamiltonian, phi, plan: RoutingPlan) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Edges, omega(alpha) weights and q phi^2 masses of the routed, phi-weighted graph."""
    p = positive_phi(phi)
    routed = validate_plan(decomp.graph, plan, p)
    u, v, omega = routed.edge_arrays
    return u, v, omega, decomp.q * p * p


def distributed_cheeger_report(decomp: Hamiltonian, phi, plan: RoutingPlan, limit: int = EXHAUSTIVE_LIMIT) -> CheegerReport:
    u, v, omega, mass = routed_weights(decomp, phi, plan)
    h, cut, _ = min_ratio_cut(u, v, omega, mass, limit)
    return CheegerReport(h, cut, "exhaustive")


def distributed_cheeger(decomp: Hamiltonian, phi, plan: RoutingPlan, limit: int = EXHAUSTIVE_LIMIT) -> float:
    """Cheeger constant of the routed weights omega(alpha) for one plan."""
    return distributed_cheeger_report(decomp, phi, plan, limit).h
