"""Desk-scale simulation of a restart-based adaptive adiabatic algorithm.

The schedule interpolates linearly between two operators on the same graph,
H(s) = (1 - s) H_init + s H_final, and a piecewise-linear map t -> s sets the pace.
At each checkpoint the algorithm samples the evolved state, estimates the weighted
Cheeger constant from the samples, turns it into a gap lower bound, extrapolates
that bound with Weyl's inequality to pick the next step, and slows the schedule so
that |dH/dt| / gamma^2 stays below a safety factor theta.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import expm

from .bounds import cheeger_lower_rhs, degree_relaxed_q
from .cheeger import min_ratio_cut, quotient_fiedler, sweep_cut
from .errors import AllMassOneVertex, DimensionMismatch, GapCollapse, StepTooLarge
from .graph_core import Hamiltonian
from .spectral import eigendecompose

SMOOTHING = 0.5


def spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.abs(eigendecompose(m).eigenvalues).max())


@dataclass(frozen=True, eq=False)
class Schedule:
    """Linear interpolation between two operators plus a time reparametrization.

    ``times`` and ``svalues`` are breakpoints of the monotone map t -> s(t), with
    times[0] = 0 and svalues[0] = 0. A complete schedule ends at s = 1.
    """

    h_init: Hamiltonian
    h_final: Hamiltonian
    times: tuple[float, ...] = (0.0, 1.0)
    svalues: tuple[float, ...] = (0.0, 1.0)

    def __post_init__(self):
        if self.h_init.graph != self.h_final.graph or self.h_init.kind is not self.h_final.kind:
            raise DimensionMismatch("schedule endpoints must share the graph and Laplacian kind")
        t, s = np.asarray(self.times, float), np.asarray(self.svalues, float)
        if t.shape != s.shape or t.size < 1 or t[0] != 0 or s[0] != 0:
            raise ValueError("breakpoints must start at (0, 0) and pair times with s values")
        if np.any(np.diff(t) < 0) or np.any(np.diff(s) < 0) or s[-1] > 1:
            raise ValueError("breakpoints must be nondecreasing with s <= 1")

    @classmethod
    def linear(cls, h_init: Hamiltonian, h_final: Hamiltonian, total_time: float) -> "Schedule":
        return cls(h_init, h_final, (0.0, float(total_time)), (0.0, 1.0))

    @property
    def total_time(self) -> float:
        return float(self.times[-1])

    @property
    def delta(self) -> np.ndarray:
        return self.h_final.matrix - self.h_init.matrix

    def s_at(self, t: float) -> float:
        return float(np.interp(t, self.times, self.svalues))

    def hamiltonian_at(self, s: float) -> Hamiltonian:
        pot = (1 - s) * self.h_init.potential + s * self.h_final.potential
        return self.h_init.with_potential(pot)

    def matrix_at(self, s: float) -> np.ndarray:
        return (1 - s) * self.h_init.matrix + s * self.h_final.matrix

    def extended(self, duration: float, s_next: float) -> "Schedule":
        return Schedule(self.h_init, self.h_final, self.times + (self.times[-1] + duration,), self.svalues + (s_next,))


@dataclass(frozen=True)
class EvolutionState:
    psi: np.ndarray
    t: float
    fidelity_to_ground: float
    steps: int = 0


def ground_fidelity(m: np.ndarray, psi: np.ndarray) -> float:
    vec = eigendecompose(m).vector(0)
    return float(abs(np.vdot(vec, psi)) ** 2)


def _odd_moment(w: np.ndarray, a: float) -> np.ndarray:
    # integral of x sin(w x) over [-a, a], i.e. 2 (sin(wa) - wa cos(wa)) / w^2
    out = np.empty_like(w)
    small = np.abs(w * a) < 1e-3
    ws = w[small]
    out[small] = (2.0 / 3.0) * ws * a ** 3 - (1.0 / 15.0) * ws ** 3 * a ** 5
    wl = w[~small]
    out[~small] = 2.0 * (np.sin(wl * a) - wl * a * np.cos(wl * a)) / wl ** 2
    return out


def _propagate(m: np.ndarray, dt: float, psi: np.ndarray, hdot: np.ndarray | None = None) -> np.ndarray:
    """One step of exp(-i H_mid dt), with a first-order Magnus correction for dH/dt.

    The correction is taken in the interaction frame of the midpoint operator; it
    is an exact rotation, so unitarity is preserved.
    """
    vals, vecs = np.linalg.eigh(m)
    half = np.exp(-0.5j * vals * dt)
    c = half * (vecs.T @ psi)
    if hdot is not None:
        b = vecs.T @ hdot @ vecs
        omega = b * _odd_moment(vals[:, None] - vals[None, :], dt / 2)
        c = expm(omega) @ c
    return vecs @ (half * c)


def evolve(schedule: Schedule, t_start: float, t_end: float, psi_in, max_dh: float = 1e-3,
           max_steps: int = 1 << 20, correct: bool = True) -> EvolutionState:
    """Integrate i dpsi/dt = H(s(t)) psi with midpoint exponentials.

    Each linear piece of the schedule is cut into equal steps so that H changes by
    at most ``max_dh`` (spectral norm) within a step; a piece over which H is
    constant takes a single exact step. With ``correct`` each step also applies the
    first-order Magnus term of the linear drift, which keeps long steps accurate in
    the adiabatic regime. StepTooLarge is raised if the budget would need more
    than ``max_steps`` steps.
    """
    psi = np.array(psi_in, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1) > 1e-9:
        raise ValueError("initial state must have unit norm")
    if t_end < t_start:
        raise ValueError("t_end precedes t_start")
    dnorm = spectral_norm(schedule.delta)
    knots = [t_start] + [t for t in schedule.times if t_start < t < t_end] + [t_end]
    plan = []
    for a, b in zip(knots, knots[1:]):
        if b <= a:
            continue
        ds = schedule.s_at(b) - schedule.s_at(a)
        k = max(1, math.ceil(ds * dnorm / max_dh)) if ds > 0 else 1
        plan.append((a, b, k))
    total = sum(k for *_, k in plan)
    if total > max_steps:
        raise StepTooLarge(f"accuracy budget needs {total} steps, cap is {max_steps}")
    delta = schedule.delta
    for a, b, k in plan:
        dt = (b - a) / k
        rate = (schedule.s_at(b) - schedule.s_at(a)) / (b - a)
        hdot = rate * delta if (correct and rate > 0) else None
        for j in range(k):
            s_mid = schedule.s_at(a + (j + 0.5) * dt)
            psi = _propagate(schedule.matrix_at(s_mid), dt, psi, hdot)
    psi /= np.linalg.norm(psi)
    fid = ground_fidelity(schedule.matrix_at(schedule.s_at(t_end)), psi)
    return EvolutionState(psi, float(t_end), fid, total)


def sample_state(psi, n_samples: int, seed=0) -> np.ndarray:
    """``n_samples`` independent vertex draws from |psi|^2."""
    if n_samples < 1:
        raise ValueError("need at least one sample")
    p = np.abs(np.asarray(psi)) ** 2
    p = p / p.sum()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.choice(p.size, size=n_samples, p=p)


@dataclass(frozen=True)
class CheegerEstimate:
    h_hat: float
    cut: tuple[int, ...]
    phi_hat: np.ndarray
    n_samples: int
    unseen: int
    method: str

    @property
    def notes(self) -> str:
        return f"{self.n_samples} samples, {self.unseen} unseen vertices smoothed with beta={SMOOTHING}"


def estimate_h_from_samples(decomp: Hamiltonian, samples, method: str = "exhaustive",
                            beta: float = SMOOTHING) -> CheegerEstimate:
    """Weighted Cheeger constant of the empirical amplitudes.

    phi_hat(u)^2 = (count(u) + beta) / (N + beta n), which keeps every vertex
    in play when some were never observed.
    """
    samples = np.asarray(samples, dtype=int).reshape(-1)
    n = decomp.n
    if samples.size == 0:
        raise ValueError("no samples")
    counts = np.bincount(samples, minlength=n)
    if counts.size != n:
        raise DimensionMismatch("sample ids outside the vertex range")
    if np.count_nonzero(counts) < 2:
        raise AllMassOneVertex("every sample landed on one vertex; the empirical cut ratio is undefined")
    p2 = (counts + beta) / (samples.size + beta * n)
    phi = np.sqrt(p2 / decomp.q)
    u, v, w = decomp.graph.edge_arrays
    omega, mass = w * phi[u] * phi[v], p2
    if method == "exhaustive":
        h, cut, _ = min_ratio_cut(u, v, omega, mass)
    elif method == "sweep":
        h, cut = sweep_cut(u, v, omega, mass, quotient_fiedler(u, v, omega, mass))
    else:
        raise ValueError(f"unknown estimator {method!r}")
    return CheegerEstimate(h, cut, phi, int(samples.size), int(np.sum(counts == 0)), method)


def weyl_step(gamma_now: float, h_now, h_next) -> float:
    """Lower bound on the gap after moving from h_now to h_next: gamma - 2 |dH|."""
    a, b = np.asarray(h_now, dtype=float), np.asarray(h_next, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return max(0.0, gamma_now - 2 * spectral_norm(b - a))


@dataclass(frozen=True)
class BAAConfig:
    n_samples: int = 10_000
    theta: float = 0.1
    gamma_min: float = 1e-4
    seed: int = 0
    keep_fraction: float = 0.5  # share of the estimated gap the Weyl step may consume is 1 - this
    dtau_max: float = 0.05
    method: str = "exhaustive"
    step_budget: float = 0.1  # per-step change of H relative to the gap bound in force
    max_checkpoints: int = 100_000
    replay: bool = False  # re-evolve from t = 0 at every checkpoint instead of reusing the prefix


@dataclass(frozen=True)
class Checkpoint:
    tau: float
    t: float
    h_hat: float
    gap_bound: float
    gap_lower: float
    delta_tau: float
    duration: float
    n_samples: int
    fidelity: float
    limited_by: str = "gap"  # "gap", "cap" (dtau_max) or "end" (remainder of the schedule)


@dataclass
class BAARun:
    config: BAAConfig
    checkpoints: list[Checkpoint] = field(default_factory=list)
    final_fidelity: float = float("nan")
    total_time: float = 0.0
    restart_time: float = 0.0  # sum over checkpoints of the evolution time from t = 0
    collapsed: bool = False
    schedule: Schedule | None = None

    @property
    def cost(self) -> float:
        """Copies times evolution time, summed over restarts."""
        return self.config.n_samples * self.restart_time

    @property
    def max_duration(self) -> float:
        return max((c.duration for c in self.checkpoints), default=0.0)

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "checkpoints": [asdict(c) for c in self.checkpoints],
            "final_fidelity": self.final_fidelity,
            "total_time": self.total_time,
            "restart_time": self.restart_time,
            "cost": self.cost,
            "collapsed": self.collapsed,
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["tau", "h_hat", "gap_bound", "delta_tau", "fidelity"])
        for c in self.checkpoints:
            out.writerow([repr(c.tau), repr(c.h_hat), repr(c.gap_bound), repr(c.delta_tau), repr(c.fidelity)])
        return buf.getvalue()


def run_baa(h_init: Hamiltonian, h_final: Hamiltonian, config: BAAConfig = BAAConfig()) -> BAARun:
    """Adaptive schedule construction; see the module docstring.

    Evolution restarts from t = 0 at every checkpoint. Earlier segments never change,
    so the state at the previous checkpoint is reused unless ``config.replay`` asks
    for literal re-evolution; the cost model charges the full restart either way.
    Raises GapCollapse, carrying the partial run, when the bound drops below gamma_min.
    """
    schedule = Schedule(h_init, h_final, (0.0,), (0.0,))
    dnorm = spectral_norm(schedule.delta)
    q = degree_relaxed_q(h_init).value
    rng = np.random.default_rng(config.seed)
    psi = eigendecompose(h_init.matrix).vector(0).astype(complex)
    psi0 = psi.copy()
    run = BAARun(config, schedule=schedule)
    tau, t = 0.0, 0.0
    budgets: list[float] = []
    while True:
        if len(run.checkpoints) >= config.max_checkpoints:
            raise GapCollapse(f"checkpoint cap {config.max_checkpoints} reached at tau={tau:.6g}", run)
        if config.replay and budgets:
            psi = _replay(schedule, budgets, psi0)
        m_now = schedule.matrix_at(tau)
        fid = ground_fidelity(m_now, psi)
        est = estimate_h_from_samples(schedule.hamiltonian_at(tau), sample_state(psi, config.n_samples, rng), config.method)
        gamma_hat = cheeger_lower_rhs(est.h_hat, q)
        run.restart_time += t
        if tau >= 1.0 or dnorm == 0.0:
            run.checkpoints.append(Checkpoint(tau, t, est.h_hat, gamma_hat, gamma_hat, 0.0, 0.0, config.n_samples, fid, "end"))
            break
        dtau, limit = (1 - config.keep_fraction) * gamma_hat / (2 * dnorm), "gap"
        if config.dtau_max < dtau:
            dtau, limit = config.dtau_max, "cap"
        if 1.0 - tau <= dtau + 1e-12:
            dtau, limit = 1.0 - tau, "end"
        s_next = 1.0 if limit == "end" else tau + dtau
        gamma_lb = weyl_step(gamma_hat, m_now, schedule.matrix_at(s_next))
        if gamma_lb < config.gamma_min or dtau <= 0:
            run.checkpoints.append(Checkpoint(tau, t, est.h_hat, gamma_hat, gamma_lb, dtau, 0.0, config.n_samples, fid, limit))
            run.collapsed = True
            run.total_time = t
            run.schedule = schedule
            raise GapCollapse(f"gap bound {gamma_lb:.3e} below gamma_min={config.gamma_min:g} at tau={tau:.6g}", run)
        duration = dtau * dnorm / (config.theta * gamma_lb ** 2)
        run.checkpoints.append(Checkpoint(tau, t, est.h_hat, gamma_hat, gamma_lb, dtau, duration, config.n_samples, fid, limit))
        schedule = schedule.extended(duration, s_next)
        max_dh = config.step_budget * gamma_lb
        budgets.append(max_dh)
        psi = evolve(schedule, t, t + duration, psi, max_dh=max_dh).psi
        tau, t = s_next, t + duration
    run.final_fidelity = run.checkpoints[-1].fidelity
    run.total_time = t
    run.schedule = schedule
    return run


def _replay(schedule: Schedule, budgets: list[float], psi0: np.ndarray) -> np.ndarray:
    psi = psi0
    for k, max_dh in enumerate(budgets):
        psi = evolve(schedule, schedule.times[k], schedule.times[k + 1], psi, max_dh=max_dh).psi
    return psi
