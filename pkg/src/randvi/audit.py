"""Distance oracles, inequality audits and trace statistics.

Everything here is read-only over traces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import JointDecision, LayoutError, Problem
from .methods import BatchSchedule, BatchTrace, StepSchedule

RESIDUAL_TOL = 1e-9


def _values(x):
    return x.values if isinstance(x, JointDecision) else np.asarray(x, dtype=float)


def sq_dist_to_solution(x, xstar) -> np.ndarray:
    """``||x - x*||^2`` (per trial when ``x`` is stacked)."""
    if isinstance(x, JointDecision) and isinstance(xstar, JointDecision) and x.layout != xstar.layout:
        raise LayoutError("x and x* use different layouts")
    a, b = _values(x), _values(xstar)
    if a.shape[-1] != b.shape[-1]:
        raise LayoutError(f"x has {a.shape[-1]} entries, x* has {b.shape[-1]}")
    out = np.sum((a - b) ** 2, axis=-1)
    return float(out) if out.ndim == 0 else out


def dist_to_set(x, problem: Problem):
    """Euclidean distance from ``x`` to the full constraint set, or None without exact oracles."""
    sq = problem.agent_sq_distances(_values(x))
    if sq is None:
        return None
    out = np.sqrt(np.sum(sq, axis=0))
    return float(out) if out.ndim == 0 else out


def infeasibility_column(x, problem: Problem):
    """Set distance where an oracle exists, else the largest constraint violation, else None."""
    d = dist_to_set(x, problem)
    return d if d is not None else problem.max_violation(_values(x))


# ---------------------------------------------------------------------------
# geometric decay of the set distance


@dataclass
class DecayRow:
    k: int
    mean_sq_dist: float
    mean_bound: float
    stderr: float
    ok: bool


@dataclass
class DecayReport:
    rows: list[DecayRow]
    n_trials: int
    min_trials: int
    notes: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[DecayRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def enough_trials(self) -> bool:
        return self.n_trials >= self.min_trials


def decay_bound(v_witness_sq: np.ndarray, n_batch: Sequence[int], q) -> np.ndarray:
    """``sum_j (1-q_j)^{N_j} ||v_j - w_j||^2`` over agents that took feasibility steps.

    ``v_witness_sq`` has shape ``(agents, ...)``; NaN marks agents without a family.
    """
    q = np.broadcast_to(np.asarray(q, dtype=float), (len(n_batch),))
    total = 0.0
    for j, n in enumerate(n_batch):
        vals = v_witness_sq[j]
        if n == 0 or np.all(np.isnan(vals)):
            continue
        total = total + (1.0 - q[j]) ** int(n) * vals
    return np.asarray(total, dtype=float)


def geometric_decay_audit(trace: BatchTrace, q, batch_schedule: Optional[BatchSchedule] = None,
                          rows: Optional[Sequence[int]] = None, min_trials: int = 1000,
                          sigmas: float = 3.0) -> DecayReport:
    """Monte Carlo check of ``E[dist^2(x_k, S)] <= E[sum_j (1-q)^{N_kj} ||v_kj - w_j||^2]``.

    ``w_j`` is the feasible reference point each trial used (the projection of
    ``v_kj`` on ``S_j`` when the family has one).  A row passes when the mean of
    the per-trial differences is at most ``sigmas`` standard errors above zero.
    """
    if trace.agent_sq_dist is None:
        raise ValueError("trace has no exact set distances; the audit needs them")
    report = DecayReport([], trace.n_trials, min_trials)
    if trace.n_trials < min_trials:
        report.notes.append(f"only {trace.n_trials} trials; the 3-sigma band needs about {min_trials}")
    idx = range(1, len(trace.k)) if rows is None else rows
    for r in idx:
        k = int(trace.k[r])
        if k == 0:
            continue
        n_batch = trace.n_batch[r] if batch_schedule is None else [
            0 if trace.n_batch[r][j] == 0 else batch_schedule.size(k, j) for j in range(trace.n_batch.shape[1])
        ]
        lhs = np.sum(trace.agent_sq_dist[r], axis=0)
        rhs = decay_bound(trace.v_witness_sq[r], n_batch, q)
        diff = lhs - rhs
        se = float(np.std(diff, ddof=1) / np.sqrt(diff.size)) if diff.size > 1 else float("inf")
        mean_diff = float(np.mean(diff))
        report.rows.append(DecayRow(k, float(np.mean(lhs)), float(np.mean(rhs)), se, mean_diff <= sigmas * se))
    return report


# ---------------------------------------------------------------------------
# rates


def rate_fit(trace_means) -> tuple[float, float]:
    """Least-squares fit of ``log err = log C - p log T``; returns ``(C, p)``."""
    pts = np.asarray(list(trace_means), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected (T, mean_sq_err) pairs")
    if len(pts) < 10:
        raise ValueError(f"need at least 10 tail points, got {len(pts)}")
    T, err = pts[:, 0], pts[:, 1]
    if np.any(err <= 0) or np.any(T <= 0):
        raise ValueError("rate_fit needs positive iteration counts and errors")
    slope, intercept = np.polyfit(np.log(T), np.log(err), 1)
    return float(np.exp(intercept)), float(-slope)


def tail_points(k: np.ndarray, means: np.ndarray, start_fraction: float = 0.5) -> np.ndarray:
    """Rows with ``k >= start_fraction * k_max`` and ``k > 0``, as (k, mean) pairs."""
    k = np.asarray(k, dtype=float)
    sel = (k >= start_fraction * k.max()) & (k > 0)
    return np.column_stack([k[sel], np.asarray(means, dtype=float)[sel]])


# ---------------------------------------------------------------------------
# trace audits


def step_admissibility(alphas: np.ndarray, step: StepSchedule, atol: float = 0.0) -> np.ndarray:
    """Per-iteration flag ``alpha_{k-1} <= guaranteed bound``; all True unless a cap override exceeds it."""
    bounds = np.array([step.theory_bound(k) for k in range(len(alphas))])
    return np.asarray(alphas) <= bounds + atol


@dataclass
class TraceAudit:
    residual_ok: bool
    residual_min: float
    finite: bool
    in_simple_sets: bool
    steps_ok: Optional[bool]  # None when a cap override deliberately leaves the theory

    @property
    def passed(self) -> bool:
        return self.residual_ok and self.finite and self.in_simple_sets and self.steps_ok is not False


def audit_trace(trace: BatchTrace, step: Optional[StepSchedule] = None, tol: float = RESIDUAL_TOL) -> TraceAudit:
    rmin = float(np.min(trace.residual_min)) if trace.residual_min.size else float("inf")
    steps_ok = None
    if step is not None and step.within_theory:
        steps_ok = bool(np.all(step_admissibility(trace.alpha_all, step)))
    return TraceAudit(
        residual_ok=rmin >= -tol,
        residual_min=rmin,
        finite=bool(np.all(trace.all_finite)),
        in_simple_sets=bool(np.all(trace.in_simple_sets)),
        steps_ok=steps_ok,
    )


def mean_and_stderr(values: np.ndarray, axis: int = -1) -> tuple[np.ndarray, np.ndarray]:
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    mean = np.mean(values, axis=axis)
    if n < 2:
        return mean, np.zeros_like(mean)
    return mean, np.std(values, axis=axis, ddof=1) / np.sqrt(n)
