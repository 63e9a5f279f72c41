"""Random Polyak feasibility updates for functional constraints."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import ConstraintFamily, SimpleSet

# squared subgradient norms below this, with positive violation, are a broken family
_MIN_SQ_NORM = 1e-24


class ContractViolation(RuntimeError):
    """A constraint family returned something the update cannot use."""


def _check_beta(beta: float):
    if not (0.0 < beta < 2.0):
        raise ValueError(f"beta must lie in (0, 2), got {beta}")


@dataclass(frozen=True)
class FeasibilityConfig:
    beta: float
    batch: int
    rng: Any  # np.random.Generator or TrialStreams

    def __post_init__(self):
        _check_beta(self.beta)
        if int(self.batch) < 1:
            raise ValueError("batch must be >= 1")


@dataclass(frozen=True)
class QConstant:
    q: float
    beta: float
    c: float
    mg: float


def compute_q(beta: float, c: float, mg: float, clamp: bool = False) -> QConstant:
    """Contraction constant ``beta (2 - beta) / (c mg^2)`` of one random feasibility step.

    ``q >= 1`` is rejected unless ``clamp`` is set, in which case it is pulled
    just below one.
    """
    _check_beta(beta)
    if c <= 0 or mg <= 0:
        raise ValueError("c and mg must be positive")
    q = beta * (2.0 - beta) / (c * mg * mg)
    if q >= 1.0:
        if not clamp:
            raise ValueError(f"q = {q} >= 1; the regularity constant c or the bound M_g is too small")
        q = float(np.nextafter(1.0, 0.0))
    return QConstant(q=q, beta=beta, c=c, mg=mg)


def polyak_step(z, handle, family: ConstraintFamily, simple_set: SimpleSet, beta: float,
                return_info: bool = False):
    """One Polyak step on the sampled constraint, followed by projection on the simple set.

    With ``return_info`` the violation ``g^+(z)`` and ``||d||`` used by the step are returned too.
    """
    _check_beta(beta)
    z = np.asarray(z, dtype=float)
    gplus = np.maximum(family.evaluate(handle, z), 0.0)
    d = family.subgradient(handle, z)
    sq = np.sum(d * d, axis=-1)
    if np.any((gplus > 0) & (sq < _MIN_SQ_NORM)):
        raise ContractViolation("zero subgradient at a point that violates the sampled constraint")
    coef = beta * gplus / sq
    z_new = simple_set.project(z - coef[..., None] * d)
    if return_info:
        return z_new, gplus, np.sqrt(sq)
    return z_new


@dataclass
class FeasibilityAudit:
    """Per-step record of one call to :func:`random_feasibility_steps`."""

    gplus: np.ndarray  # (steps, *batch)
    dnorm: np.ndarray  # (steps, *batch)

    @property
    def sum_sq_violation(self) -> np.ndarray:
        return np.sum(self.gplus**2, axis=0)

    @property
    def max_dnorm(self) -> np.ndarray:
        return np.max(self.dnorm, axis=0)


def random_feasibility_steps(v, family: ConstraintFamily, simple_set: SimpleSet,
                             cfg: FeasibilityConfig) -> tuple[np.ndarray, FeasibilityAudit]:
    """Take ``cfg.batch`` sequential Polyak steps on independently sampled constraints."""
    z = np.asarray(v, dtype=float)
    lead = z.shape[:-1]
    gs, ds = [], []
    for _ in range(int(cfg.batch)):
        handle = family.draw(cfg.rng.random(lead if lead else None))
        z, gplus, dnorm = polyak_step(z, handle, family, simple_set, cfg.beta, return_info=True)
        gs.append(gplus)
        ds.append(dnorm)
    return z, FeasibilityAudit(np.asarray(gs), np.asarray(ds))


def feasibility_residual_check(v, x, feasible_point, audit: FeasibilityAudit, beta: float,
                               mg: float) -> np.ndarray:
    """Slack in ``||x - w||^2 <= ||v - w||^2 - beta(2-beta)/mg^2 * sum (g^+)^2``.

    Nonnegative on every trajectory whenever ``w`` is feasible and every used
    subgradient has norm at most ``mg``.
    """
    v = np.asarray(v, dtype=float)
    x = np.asarray(x, dtype=float)
    w = np.asarray(feasible_point, dtype=float)
    before = np.sum((v - w) ** 2, axis=-1)
    after = np.sum((x - w) ** 2, axis=-1)
    return before - after - beta * (2.0 - beta) / mg**2 * audit.sum_sq_violation

