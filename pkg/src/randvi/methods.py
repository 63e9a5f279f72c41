"""Projection, Korpelevich and Popov iterations interleaved with random feasibility steps.

A single iteration advances every trial in a stack at once; ``run`` and
``run_batch`` drive them for a fixed budget and record traces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .core import BlockLayout, GameMapping, Problem, block_project
from .feasibility import FeasibilityConfig, feasibility_residual_check, random_feasibility_steps
from .streams import TrialStreams


class Method(str, Enum):
    PROJECTION = "projection"
    KORPELEVICH = "korpelevich"
    POPOV = "popov"


def popov_tau(mu: float, lipschitz: float) -> float:
    """Popov parameter tau balancing the first two step-size caps (always > 2)."""
    if not (0 < mu <= lipschitz):
        raise ValueError("need 0 < mu <= lipschitz")
    kappa = lipschitz / mu
    return 8.0 * (1.0 + math.sqrt(1.0 + (4.0 / kappa - 1.0 / kappa**2))) / (8.0 - 2.0 / kappa)


def popov_nu() -> float:
    return 2.0


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes ``alpha_k``, one sequence shared by all agents.

    ``cap_override`` replaces the constant cap of the method; runs using it are
    outside the convergence guarantees.
    """

    method: Method
    mu: float
    lipschitz: float
    tau: Optional[float] = None
    nu: Optional[float] = None
    cap_override: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not (0 < self.mu <= self.lipschitz):
            raise ValueError("need 0 < mu <= lipschitz")
        if self.method is Method.POPOV:
            if self.tau is None:
                object.__setattr__(self, "tau", popov_tau(self.mu, self.lipschitz))
            if self.nu is None:
                object.__setattr__(self, "nu", popov_nu())
            if not self.tau > 2:
                raise ValueError(f"Popov needs tau > 2, got {self.tau}")
            if not self.nu > 1:
                raise ValueError(f"Popov needs nu > 1, got {self.nu}")
        if self.cap_override is not None and not self.cap_override > 0:
            raise ValueError("cap_override must be positive")

    @classmethod
    def for_mapping(cls, method, mapping: GameMapping, **kw) -> "StepSchedule":
        return cls(Method(method), mapping.mu, mapping.lipschitz, **kw)

    @property
    def theory_cap(self) -> float:
        mu, L = self.mu, self.lipschitz
        if self.method is Method.PROJECTION:
            return mu / (2 * L * L)
        if self.method is Method.KORPELEVICH:
            return 1.0 / (4 * (L + mu))
        tau, nu = self.tau, self.nu
        return min(
            mu / (4 * tau * L * L),
            (1 - 2 / tau) / (2 * L / tau + L * tau),
            (1 - 1 / nu) / (2 * mu + L * tau),
        )

    @property
    def cap(self) -> float:
        return self.cap_override if self.cap_override is not None else self.theory_cap

    def decay(self, k: int) -> float:
        scale = 4.0 if self.method is Method.POPOV else 2.0
        return scale / (self.mu * (k + 1))

    def alpha(self, k: int) -> float:
        return min(self.decay(k), self.cap)

    def theory_bound(self, k: int) -> float:
        return min(self.decay(k), self.theory_cap)

    @property
    def within_theory(self) -> bool:
        return self.cap <= self.theory_cap


class BatchKind(str, Enum):
    CONSTANT = "constant"
    LOGTEN = "logten"


@dataclass(frozen=True)
class BatchSchedule:
    kind: BatchKind = BatchKind.CONSTANT
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", BatchKind(self.kind))
        if self.kind is BatchKind.CONSTANT and int(self.n) < 1:
            raise ValueError("constant batch size must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "BatchSchedule":
        """``"constant:3"``, ``"constant"`` (size 1) or ``"logten"``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "logten":
            return cls(BatchKind.LOGTEN)
        if name == "constant":
            return cls(BatchKind.CONSTANT, int(arg) if arg else 1)
        raise ValueError(f"unknown batch schedule {text!r}")

    @property
    def label(self) -> str:
        return "logten" if self.kind is BatchKind.LOGTEN else f"constant{self.n}"

    def size(self, k: int, j: int = 0) -> int:
        if self.kind is BatchKind.CONSTANT:
            return int(self.n)
        # ceil(log10 k) computed on integers: number of digits of k - 1
        return 1 if k <= 1 else max(1, len(str(k - 1)))


@dataclass
class IterationInfo:
    alpha: float
    n_batch: list[int]
    residual: list[Optional[np.ndarray]]  # per agent, None when the agent has no family
    max_dnorm: list[Optional[np.ndarray]]
    v_witness_sq: list[Optional[np.ndarray]]


@dataclass
class MethodState:
    """Iterates after ``k`` iterations; arrays may carry a leading trial axis."""

    k: int
    x: np.ndarray
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    fu: Optional[np.ndarray] = None  # cached F(u_k) for Popov
    f_evals: int = 0
    info: Optional[IterationInfo] = None

    @classmethod
    def initial(cls, method, x0, mapping: Optional[GameMapping] = None) -> "MethodState":
        """Start at ``x0``; Popov also sets ``u_0 = x_0`` and evaluates ``F(u_0)``."""
        x0 = np.asarray(x0, dtype=float)
        if Method(method) is Method.POPOV:
            if mapping is None:
                raise ValueError("Popov needs the mapping to seed F(u_0)")
            return cls(0, x0, u=x0.copy(), v=x0.copy(), fu=mapping(x0), f_evals=1)
        return cls(0, x0, v=x0.copy())


def _project(problem_sets, layout, v):
    return block_project(problem_sets, v, layout)


def _feasibility_pass(v, layout, sets, families, n_batch, feas_cfg, xstar):
    cur = np.array(v, dtype=float, copy=True)
    residual, dmax, vw = [], [], []
    for j, (s, fam) in enumerate(zip(sets, families)):
        sl = layout.slice(j)
        if fam is None or n_batch[j] == 0:
            residual.append(None)
            dmax.append(None)
            vw.append(None)
            continue
        fam = fam.conditioned_on(cur)
        vj = cur[..., sl]
        xj, audit = random_feasibility_steps(vj, fam, s, replace(feas_cfg, batch=n_batch[j]))
        witness = fam.witness
        if witness is None and xstar is not None:
            witness = xstar[sl]
        if witness is not None:
            residual.append(feasibility_residual_check(vj, xj, witness, audit, feas_cfg.beta, fam.mg_bound))
            vw.append(np.sum((vj - witness) ** 2, axis=-1))
        else:
            residual.append(None)
            vw.append(None)
        dmax.append(audit.max_dnorm)
        cur[..., sl] = xj
    return cur, residual, dmax, vw


def _batch_sizes(families, batch: BatchSchedule, k: int) -> list[int]:
    return [0 if fam is None else batch.size(k, j) for j, fam in enumerate(families)]


def projection_iteration(state: MethodState, mapping: GameMapping, sets, families, step: StepSchedule,
                         batch: BatchSchedule, feas_cfg: FeasibilityConfig, layout: BlockLayout,
                         xstar=None) -> MethodState:
    if step.method is not Method.PROJECTION:
        raise ValueError(f"schedule built for {step.method.value}, not projection")
    k = state.k + 1
    alpha = step.alpha(k - 1)
    v = _project(sets, layout, state.x - alpha * mapping(state.x))
    n_batch = _batch_sizes(families, batch, k)
    x, res, dmax, vw = _feasibility_pass(v, layout, sets, families, n_batch, feas_cfg, xstar)
    return MethodState(k, x, v=v, f_evals=state.f_evals + 1,
                       info=IterationInfo(alpha, n_batch, res, dmax, vw))


def korpelevich_iteration(state: MethodState, mapping: GameMapping, sets, families, step: StepSchedule,
                          batch: BatchSchedule, feas_cfg: FeasibilityConfig, layout: BlockLayout,
                          xstar=None) -> MethodState:
    if step.method is not Method.KORPELEVICH:
        raise ValueError(f"schedule built for {step.method.value}, not korpelevich")
    k = state.k + 1
    alpha = step.alpha(k - 1)
    u = _project(sets, layout, state.x - alpha * mapping(state.x))
    v = _project(sets, layout, state.x - alpha * mapping(u))
    n_batch = _batch_sizes(families, batch, k)
    x, res, dmax, vw = _feasibility_pass(v, layout, sets, families, n_batch, feas_cfg, xstar)
    return MethodState(k, x, u=u, v=v, f_evals=state.f_evals + 2,
                       info=IterationInfo(alpha, n_batch, res, dmax, vw))


def popov_iteration(state: MethodState, mapping: GameMapping, sets, families, step: StepSchedule,
                    batch: BatchSchedule, feas_cfg: FeasibilityConfig, layout: BlockLayout,
                    xstar=None) -> MethodState:
    if step.method is not Method.POPOV:
        raise ValueError(f"schedule built for {step.method.value}, not popov")
    if state.fu is None:
        raise ValueError("Popov state lacks F(u_{k-1}); build it with MethodState.initial")
    k = state.k + 1
    alpha = step.alpha(k - 1)
    u = _project(sets, layout, state.x - alpha * state.fu)
    fu = mapping(u)
    v = _project(sets, layout, state.x - alpha * fu)
    n_batch = _batch_sizes(families, batch, k)
    x, res, dmax, vw = _feasibility_pass(v, layout, sets, families, n_batch, feas_cfg, xstar)
    return MethodState(k, x, u=u, v=v, fu=fu, f_evals=state.f_evals + 1,
                       info=IterationInfo(alpha, n_batch, res, dmax, vw))


ITERATIONS = {
    Method.PROJECTION: projection_iteration,
    Method.KORPELEVICH: korpelevich_iteration,
    Method.POPOV: popov_iteration,
}


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class IterationRecord:
    k: int
    alpha: float
    n_batch: tuple[int, ...]
    sq_dist_to_solution: Optional[float]
    sq_dist_to_set: Optional[float]
    feas_residual: float
    f_evals_cumulative: int
    max_violation: Optional[float] = None


@dataclass
class BatchTrace:
    """Recorded rows of a stack of trials run in lock-step.

    Per-trial arrays have shape ``(rows, trials)`` (agent-resolved ones
    ``(rows, agents, trials)``).  Quantities without an oracle are ``None``.
    Running extremes cover every iteration, recorded or not.
    """

    method: Method
    seeds: tuple[int, ...]
    k: np.ndarray
    alpha: np.ndarray
    n_batch: np.ndarray  # (rows, agents)
    f_evals: np.ndarray
    sq_dist_solution: Optional[np.ndarray]
    sq_dist_set: Optional[np.ndarray]
    agent_sq_dist: Optional[np.ndarray]
    v_witness_sq: np.ndarray  # (rows, agents, trials), NaN where no witness
    max_violation: Optional[np.ndarray]
    feas_residual: np.ndarray  # (rows, trials), +inf where nothing was audited
    residual_min: np.ndarray  # (trials,) over all iterations
    max_dnorm: np.ndarray  # (agents, trials) over all iterations
    all_finite: np.ndarray  # (trials,)
    in_simple_sets: np.ndarray  # (trials,) over all iterations
    final_x: np.ndarray  # (trials, n)
    alpha_all: np.ndarray  # alpha_0 .. alpha_{T-1}

    @property
    def n_trials(self) -> int:
        return len(self.seeds)

    def trial(self, i: int) -> "RunTrace":
        def pick(a, axis=-1):
            return None if a is None else np.take(a, i, axis=axis)

        return RunTrace(
            method=self.method, seed=self.seeds[i], k=self.k, alpha=self.alpha, n_batch=self.n_batch,
            f_evals=self.f_evals, sq_dist_solution=pick(self.sq_dist_solution),
            sq_dist_set=pick(self.sq_dist_set), max_violation=pick(self.max_violation),
            feas_residual=pick(self.feas_residual), residual_min=float(self.residual_min[i]),
            final_x=self.final_x[i],
        )

    @staticmethod
    def concat(parts: Sequence["BatchTrace"]) -> "BatchTrace":
        first = parts[0]
        if len(parts) == 1:
            return first

        def cat(name, axis=-1):
            vals = [getattr(p, name) for p in parts]
            return None if vals[0] is None else np.concatenate(vals, axis=axis)

        return BatchTrace(
            method=first.method, seeds=tuple(s for p in parts for s in p.seeds), k=first.k,
            alpha=first.alpha, n_batch=first.n_batch, f_evals=first.f_evals,
            sq_dist_solution=cat("sq_dist_solution"), sq_dist_set=cat("sq_dist_set"),
            agent_sq_dist=cat("agent_sq_dist"), v_witness_sq=cat("v_witness_sq"),
            max_violation=cat("max_violation"), feas_residual=cat("feas_residual"),
            residual_min=cat("residual_min"), max_dnorm=cat("max_dnorm"), all_finite=cat("all_finite"),
            in_simple_sets=cat("in_simple_sets"), final_x=cat("final_x", axis=0), alpha_all=first.alpha_all,
        )


@dataclass
class RunTrace:
    """Trace of one trial."""

    method: Method
    seed: int
    k: np.ndarray
    alpha: np.ndarray
    n_batch: np.ndarray
    f_evals: np.ndarray
    sq_dist_solution: Optional[np.ndarray]
    sq_dist_set: Optional[np.ndarray]
    max_violation: Optional[np.ndarray]
    feas_residual: np.ndarray
    residual_min: float
    final_x: np.ndarray

    def __len__(self):
        return len(self.k)

    def records(self):
        for r in range(len(self.k)):
            yield IterationRecord(
                k=int(self.k[r]), alpha=float(self.alpha[r]), n_batch=tuple(int(n) for n in self.n_batch[r]),
                sq_dist_to_solution=None if self.sq_dist_solution is None else float(self.sq_dist_solution[r]),
                sq_dist_to_set=None if self.sq_dist_set is None else float(self.sq_dist_set[r]),
                feas_residual=float(self.feas_residual[r]), f_evals_cumulative=int(self.f_evals[r]),
                max_violation=None if self.max_violation is None else float(self.max_violation[r]),
            )


def run_batch(method, problem: Problem, step: StepSchedule, batch: BatchSchedule, beta: float, T: int,
              seeds: Sequence[int], record_every: int = 1, x0: Optional[np.ndarray] = None,
              chunk: int = 4096) -> BatchTrace:
    """Run ``len(seeds)`` independent trials of one method for ``T`` iterations.

    Trial ``i`` draws its starting point and every constraint sample from
    ``default_rng(seeds[i])``.  Rows are recorded at ``k = 0, record_every, ...``
    and always at ``k = T``.
    """
    method = Method(method)
    if T < 0:
        raise ValueError("iteration budget must be nonnegative")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if step.method is not method:
        raise ValueError(f"step schedule is for {step.method.value}, method is {method.value}")
    seeds = tuple(int(s) for s in seeds)
    gens = [np.random.default_rng(s) for s in seeds]
    if x0 is None:
        x = np.stack([problem.initial_point(g) for g in gens])
    else:
        x = np.array(np.broadcast_to(np.asarray(x0, dtype=float), (len(seeds), problem.layout.total)))
    streams = TrialStreams(gens, chunk=chunk)
    feas_cfg = FeasibilityConfig(beta=beta, batch=1, rng=streams)
    layout, J, B = problem.layout, problem.layout.n_blocks, len(seeds)
    iterate = ITERATIONS[method]

    rows = sorted(set(range(0, T + 1, record_every)) | {T})
    R = len(rows)
    rec_k = np.asarray(rows)
    rec_alpha = np.full(R, np.nan)
    rec_n = np.zeros((R, J), dtype=int)
    rec_f = np.zeros(R, dtype=int)
    has_sol = problem.xstar is not None
    rec_sol = np.empty((R, B)) if has_sol else None
    agent_d = problem.agent_sq_distances(x)
    rec_agent = np.empty((R, J, B)) if agent_d is not None else None
    viol = problem.max_violation(x) if agent_d is None else None
    rec_viol = np.empty((R, B)) if viol is not None else None
    rec_vw = np.full((R, J, B), np.nan)
    rec_res = np.full((R, B), np.inf)
    res_min = np.full(B, np.inf)
    dmax = np.zeros((J, B))
    finite = np.ones(B, dtype=bool)
    in_sets = np.ones(B, dtype=bool)
    alpha_all = np.empty(T)

    state = MethodState.initial(method, x, problem.mapping)

    def record(r, st):
        rec_f[r] = st.f_evals
        if has_sol:
            rec_sol[r] = np.sum((st.x - problem.xstar) ** 2, axis=-1)
        if rec_agent is not None:
            rec_agent[r] = problem.agent_sq_distances(st.x)
        if rec_viol is not None:
            rec_viol[r] = problem.max_violation(st.x)
        if st.info is not None:
            rec_alpha[r] = st.info.alpha
            rec_n[r] = st.info.n_batch
            for j in range(J):
                if st.info.v_witness_sq[j] is not None:
                    rec_vw[r, j] = st.info.v_witness_sq[j]
                if st.info.residual[j] is not None:
                    rec_res[r] = np.minimum(rec_res[r], st.info.residual[j])

    r = 0
    record(r, state)
    r += 1
    for k in range(1, T + 1):
        state = iterate(state, problem.mapping, problem.sets, problem.families, step, batch, feas_cfg,
                        layout, xstar=problem.xstar)
        info = state.info
        alpha_all[k - 1] = info.alpha
        for j in range(J):
            if info.residual[j] is not None:
                res_min = np.minimum(res_min, info.residual[j])
            if info.max_dnorm[j] is not None:
                dmax[j] = np.maximum(dmax[j], info.max_dnorm[j])
        finite &= np.all(np.isfinite(state.x), axis=-1)
        for j, s in enumerate(problem.sets):
            in_sets &= s.contains(state.x[..., layout.slice(j)], tol=1e-12)
        if r < R and rows[r] == k:
            record(r, state)
            r += 1

    if rec_agent is not None:
        sq_set = rec_agent.sum(axis=1)
    else:
        sq_set = None
    return BatchTrace(
        method=method, seeds=seeds, k=rec_k, alpha=rec_alpha, n_batch=rec_n, f_evals=rec_f,
        sq_dist_solution=rec_sol, sq_dist_set=sq_set, agent_sq_dist=rec_agent, v_witness_sq=rec_vw,
        max_violation=rec_viol, feas_residual=rec_res, residual_min=res_min, max_dnorm=dmax,
        all_finite=finite, in_simple_sets=in_sets, final_x=state.x, alpha_all=alpha_all,
    )


def run(method, problem: Problem, step: StepSchedule, batch: BatchSchedule, beta: float, T: int,
        seed: int, x0: Optional[np.ndarray] = None) -> RunTrace:
    """Single-trial run recording every iteration."""
    return run_batch(method, problem, step, batch, beta, T, [seed], record_every=1, x0=x0).trial(0)
