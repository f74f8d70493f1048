"""Command line interface.

Exit codes: 0 when every certificate holds, 1 when one fails (or a computation is
rejected), 2 for usage and parse errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .baa import BAAConfig, run_baa
from .bounds import (
    verify_comparison,
    verify_lower_nonstoquastic,
    verify_lower_stoquastic,
    verify_potential_bound,
    verify_subgraph_bottleneck,
    verify_upper,
)
from .cheeger import cheeger_exhaustive, cheeger_sweep
from .errors import CheegerKitError, GapCollapse, RoutingInfeasible
from .graph_core import Hamiltonian, positive_subgraph
from .instances import bottleneck_path, two_level
from .io import Problem, ReportEnvelope, read_problem
from .routing import auto_route, compare_routed_gap, distributed_cheeger, min_residual
from .spectral import eigendecompose, ground_state, spectrum
from .stoquastic import as_hermitian, rotate_to_real, stoquasticity_check

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def _load(path: str) -> tuple[Problem, str]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return read_problem(p)


def _real_hamiltonian(problem: Problem) -> Hamiltonian:
    """The problem as L + W; Hermitian inputs are first rotated by their ground-state phases."""
    if not problem.is_hermitian:
        return problem.hamiltonian()
    m = as_hermitian(problem.matrix())
    vals, vecs = np.linalg.eigh(m)
    return Hamiltonian.from_matrix(rotate_to_real(m, vecs[:, 0]))


def cmd_gap(args) -> tuple[dict, bool]:
    problem, _ = _load(args.file)
    if problem.is_hermitian:
        vals = np.linalg.eigvalsh(as_hermitian(problem.matrix()))
    else:
        vals = spectrum(problem.hamiltonian()).eigenvalues
    gap = float(vals[1] - vals[0]) if vals.size > 1 else 0.0
    return {"eigenvalues": vals, "lambda0": vals[0], "gamma": gap, "rho": float(vals[-1] - vals[0])}, True


def cmd_cheeger(args) -> tuple[dict, bool]:
    problem, _ = _load(args.file)
    h = _real_hamiltonian(problem)
    gs = ground_state(h)
    if args.sweep:
        rep = cheeger_sweep(h, gs.phi)
    else:
        rep = cheeger_exhaustive(h, gs.phi, limit=args.limit)
    return {"report": rep, "phi": gs.phi, "lambda0": gs.energy, "gamma": gs.gap}, True


def cmd_stoquastize(args) -> tuple[dict, bool]:
    problem, _ = _load(args.file)
    m = as_hermitian(problem.matrix())
    rep = stoquasticity_check(m)
    out = {"is_stoquastic": rep.is_stoquastic}
    if rep.is_stoquastic:
        out["phases"] = [complex(z) for z in rep.phases]
    else:
        out["cycle"] = list(rep.cycle)
        out["signature"] = rep.signature
    vals, vecs = np.linalg.eigh(m)
    rotated = rotate_to_real(m, vecs[:, 0])
    rvals = eigendecompose(rotated).eigenvalues
    out["rotated"] = {
        "matrix": rotated,
        "gamma_input": float(vals[1] - vals[0]) if vals.size > 1 else 0.0,
        "gamma_rotated": float(rvals[1] - rvals[0]) if rvals.size > 1 else 0.0,
        "lambda0_input": float(vals[0]),
        "lambda0_rotated": float(rvals[0]),
    }
    return out, True


def cmd_route(args) -> tuple[dict, bool]:
    problem, _ = _load(args.file)
    h = problem.hamiltonian()
    g = h.graph
    try:
        plan = auto_route(g, args.strategy, args.max_paths)
    except RoutingInfeasible as exc:
        return {"feasible": False, "reason": str(exc), "best_residual": exc.best_residual}, False
    cmp = compare_routed_gap(g, plan, h.potential)
    out = {
        "feasible": True,
        "plan": plan,
        "paths_per_edge": plan.max_paths(),
        "min_residual": min_residual(g, plan),
        "gap_comparison": cmp,
        "positive_subgraph_connected": positive_subgraph(g).is_connected(),
    }
    try:
        gs = ground_state(h)
        out["h_routed"] = distributed_cheeger(h, gs.phi, plan, limit=args.limit)
    except CheegerKitError as exc:
        out["h_routed_error"] = str(exc)
    return out, cmp.holds


def _certificates_for(problem: Problem, args) -> list:
    h = _real_hamiltonian(problem)
    es = spectrum(h)
    signed = bool(h.graph.negative_edges)
    selected = {k for k in ("upper", "lower", "nonstoq", "comparison") if getattr(args, k)}
    if args.potential is not None:
        selected.add("potential")
    if args.subgraph:
        selected.add("subgraph")
    if args.all or not selected:
        selected |= {"upper", "nonstoq"} if signed else {"upper", "lower", "comparison"}
        if not signed:
            selected.add("potential")
    certs = []
    if "upper" in selected:
        certs.append(verify_upper(h, es, args.limit))
    if "lower" in selected:
        certs.append(verify_lower_stoquastic(h, args.q_mode, es, args.limit))
    if "comparison" in selected and not signed and np.all(h.potential >= 0):
        certs.append(verify_comparison(h, es))
    if "potential" in selected and not signed and h.n > 1:
        certs.append(verify_potential_bound(h, 1 if args.potential is None else args.potential, es))
    if "subgraph" in selected:
        subset = [int(x) for x in args.subgraph.split(",") if x.strip()]
        certs.append(verify_subgraph_bottleneck(h, subset, es))
    if "nonstoq" in selected:
        certs.append(verify_lower_nonstoquastic(h, auto_route(h.graph), es, args.limit))
    return certs


def cmd_verify(args) -> tuple[dict, bool]:
    if args.dir:
        files = sorted(Path(args.dir).glob("*.prob"))
        if not files:
            raise UsageError(f"no .prob files in {args.dir}")
    elif args.file:
        files = [Path(args.file)]
    else:
        raise UsageError("verify needs a file or --dir")
    results, ok = [], True
    for f in files:
        problem, digest = _load(str(f))
        try:
            certs = _certificates_for(problem, args)
            good = all(c.all_hold for c in certs)
            results.append({"file": f.name, "input_digest": digest, "certificates": certs, "ok": good})
        except CheegerKitError as exc:
            good = False
            results.append({"file": f.name, "input_digest": digest, "error": f"{type(exc).__name__}: {exc}", "ok": False})
        ok &= good
    if args.dir:
        return {"results": results}, ok
    return results[0], ok


def cmd_baa(args) -> tuple[dict, bool]:
    if args.file:
        if not args.to:
            raise UsageError("baa-sim with a problem file needs --to FINAL")
        h0 = _load(args.file)[0].hamiltonian()
        h1 = _load(args.to)[0].hamiltonian()
    elif args.family == "two-level":
        h0, h1 = two_level(3.0, 1.0, 0.0), two_level(3.0, 1.0, 1.0)
    else:
        h0, h1 = bottleneck_path(8, 0.1, 0.02), bottleneck_path(8, 0.1, 1.0)
    gamma_min = args.gamma_min if args.gamma_min is not None else (1e-5 if args.family == "path" else 1e-4)
    config = BAAConfig(n_samples=args.samples, theta=args.theta, gamma_min=gamma_min, seed=args.seed)
    ok = True
    try:
        run = run_baa(h0, h1, config)
    except GapCollapse as exc:
        run, ok = exc.run, False
    if args.csv:
        Path(args.csv).write_text(run.trace_csv())
    return {"run": run}, ok


def cmd_selftest(args) -> tuple[dict, bool]:
    from .instances import random_hermitian, random_signed, random_stoquastic

    rng = np.random.default_rng(args.seed)
    tally = {"stoquastic": 0, "signed_routed": 0, "hermitian": 0}
    failures = []
    for _ in range(args.count):
        h = random_stoquastic(rng)
        es = spectrum(h)
        for c in (verify_upper(h, es), verify_lower_stoquastic(h, "relaxed", es)):
            failures += [f.to_dict() for f in c.failures()]
        tally["stoquastic"] += 1
    while tally["signed_routed"] < max(1, args.count // 4):
        g = random_signed(rng)
        try:
            plan = auto_route(g)
        except RoutingInfeasible:
            continue
        h = Hamiltonian(g)
        try:
            c = verify_lower_nonstoquastic(h, plan)
        except CheegerKitError:
            continue
        failures += [f.to_dict() for f in c.failures()]
        if not compare_routed_gap(g, plan).holds:
            failures.append({"name": "routed_gap", "graph": g.edges})
        tally["signed_routed"] += 1
    for _ in range(max(1, args.count // 4)):
        m = random_hermitian(rng)
        vals, vecs = np.linalg.eigh(m)
        r = eigendecompose(rotate_to_real(m, vecs[:, 0])).eigenvalues
        if vals[1] - vals[0] > r[1] - r[0] + 1e-10:
            failures.append({"name": "rotation_gap", "matrix": m})
        tally["hermitian"] += 1
    return {"seed": args.seed, "checked": tally, "failures": failures}, not failures


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheegerkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte stability)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", parents=[common], help="spectrum, ground energy and gap")
    p.add_argument("file")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("cheeger", parents=[common], help="weighted Cheeger constant of the ground state")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="enumerate every cut (default)")
    mode.add_argument("--sweep", action="store_true", help="best prefix cut of the spectral ordering")
    p.add_argument("--limit", type=int, default=24)
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("stoquastize", parents=[common], help="cycle-signature test and ground-state phase rotation")
    p.add_argument("file")
    p.set_defaults(func=cmd_stoquastize)

    p = sub.add_parser("route", parents=[common], help="route negative edges along positive paths")
    p.add_argument("file")
    p.add_argument("--strategy", choices=["shortest", "greedy"], default="shortest")
    p.add_argument("--max-paths", type=int, default=16)
    p.add_argument("--limit", type=int, default=24)
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("verify", parents=[common], help="certify the gap inequalities")
    p.add_argument("file", nargs="?")
    p.add_argument("--dir", help="verify every .prob file in a directory")
    p.add_argument("--all", action="store_true")
    p.add_argument("--upper", action="store_true")
    p.add_argument("--lower", action="store_true")
    p.add_argument("--nonstoq", action="store_true")
    p.add_argument("--comparison", action="store_true")
    p.add_argument("--potential", type=int, metavar="LEVEL")
    p.add_argument("--subgraph", metavar="U,V,...")
    p.add_argument("--q-mode", choices=["relaxed", "exact"], default="relaxed")
    p.add_argument("--limit", type=int, default=24, help="largest vertex count for exhaustive cut enumeration")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("baa-sim", parents=[common], help="simulate the adaptive adiabatic schedule")
    p.add_argument("file", nargs="?", help="initial problem (needs --to)")
    p.add_argument("--to", help="final problem on the same graph")
    p.add_argument("--family", choices=["two-level", "path"], default="two-level")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--csv", help="write the checkpoint trace as CSV")
    p.set_defaults(func=cmd_baa)

    p = sub.add_parser("selftest", parents=[common], help="random certificate checks")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    digest = None
    if getattr(args, "file", None) and Path(args.file).is_file():
        digest = read_digest(args.file)
    start = time.perf_counter()
    try:
        payload, ok = args.func(args)
    except UsageError as exc:
        print(f"cheegerkit: {exc}", file=sys.stderr)
        return 2
    except CheegerKitError as exc:
        if _is_parse_error(exc):
            print(f"cheegerkit: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 2
        payload, ok = {"error": f"{type(exc).__name__}: {exc}"}, False
    except (OSError, UnicodeDecodeError) as exc:
        print(f"cheegerkit: {exc}", file=sys.stderr)
        return 2
    timings = {"wall_seconds": time.perf_counter() - start} if args.timings else None
    env = ReportEnvelope(args.command, payload, ok, digest, timings)
    text = env.dumps()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def read_digest(path) -> str:
    import hashlib

    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _is_parse_error(exc: Exception) -> bool:
    from .errors import BadHeader, DuplicateEdge, ProblemSyntaxError, SelfLoop

    return isinstance(exc, (BadHeader, DuplicateEdge, ProblemSyntaxError, SelfLoop))


if __name__ == "__main__":
    sys.exit(main())
