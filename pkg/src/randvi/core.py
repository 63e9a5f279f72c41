"""Shared vocabulary: block layouts, simple sets, mappings and constraint families.

Every array-valued routine here accepts an optional leading trial axis, so a
vector of shape ``(n,)`` and a stack of independent trials of shape ``(B, n)``
go through the same code.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np


class LayoutError(ValueError):
    """Raised when vectors, sets and layouts disagree on dimensions."""


@dataclass(frozen=True)
class BlockLayout:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) < 1:
            raise LayoutError("a layout needs at least one block")
        if any(s < 1 for s in sizes):
            raise LayoutError(f"block sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n_blocks(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(o) for o in np.cumsum((0,) + self.sizes[:-1]))

    def slice(self, j: int) -> slice:
        off = self.offsets[j]
        return slice(off, off + self.sizes[j])

    def slices(self) -> list[slice]:
        return [self.slice(j) for j in range(self.n_blocks)]


@dataclass(frozen=True)
class JointDecision:
    """Stacked decision vector ``(x_1, ..., x_J)``."""

    layout: BlockLayout
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape[-1:] != (self.layout.total,):
            raise LayoutError(
                f"values have trailing size {values.shape[-1:]}, layout expects {self.layout.total}"
            )
        object.__setattr__(self, "values", values)

    def block(self, j: int) -> np.ndarray:
        return self.values[..., self.layout.slice(j)]

    @classmethod
    def from_blocks(cls, layout: BlockLayout, blocks: Sequence[np.ndarray]) -> "JointDecision":
        return cls(layout, np.concatenate([np.asarray(b, dtype=float) for b in blocks], axis=-1))


# ---------------------------------------------------------------------------
# simple sets


class SimpleSet:
    """A closed convex set with an exact Euclidean projection."""

    dim: int

    def project(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, v: np.ndarray, tol: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def distance(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.sqrt(np.sum((v - self.project(v)) ** 2, axis=-1))

    def _check(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[-1:] != (self.dim,):
            raise LayoutError(f"vector of trailing size {v.shape[-1:]} for a set of dim {self.dim}")
        return v


@dataclass(frozen=True)
class FullSpace(SimpleSet):
    dim: int

    def project(self, v):
        return self._check(v)

    def contains(self, v, tol=0.0):
        v = self._check(v)
        return np.ones(v.shape[:-1], dtype=bool)


@dataclass(frozen=True)
class Box(SimpleSet):
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        if np.any(lo > hi):
            raise ValueError("box needs lower <= upper coordinatewise")
        object.__setattr__(self, "lower", lo.copy())
        object.__setattr__(self, "upper", hi.copy())

    @classmethod
    def uniform(cls, dim: int, lo: float, hi: float) -> "Box":
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def project(self, v):
        return np.clip(self._check(v), self.lower, self.upper)

    def contains(self, v, tol=0.0):
        v = self._check(v)
        return np.all((v >= self.lower - tol) & (v <= self.upper + tol), axis=-1)

    def max_norm(self) -> float:
        """Largest Euclidean norm of a point in the box."""
        return float(np.linalg.norm(np.maximum(np.abs(self.lower), np.abs(self.upper))))

    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))


@dataclass(frozen=True)
class Ball(SimpleSet):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)).copy())

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def project(self, v):
        v = self._check(v)
        off = v - self.center
        nrm = np.sqrt(np.sum(off * off, axis=-1, keepdims=True))
        outside = nrm > self.radius
        scale = np.where(outside, self.radius / np.where(outside, nrm, 1.0), 1.0)
        return np.where(outside, self.center + off * scale, v)

    def contains(self, v, tol=0.0):
        v = self._check(v)
        return np.sqrt(np.sum((v - self.center) ** 2, axis=-1)) <= self.radius + tol


def block_project(sets: Sequence[SimpleSet], v, layout: Optional[BlockLayout] = None) -> np.ndarray:
    """Project every block of ``v`` onto its own simple set.

    ``v`` may be a :class:`JointDecision` or a raw array (then ``layout`` is required).
    The result has the same type as the input.
    """
    if isinstance(v, JointDecision):
        layout, values, wrap = v.layout, v.values, True
    else:
        if layout is None:
            raise LayoutError("a raw array needs an explicit layout")
        values, wrap = np.asarray(v, dtype=float), False
    if len(sets) != layout.n_blocks:
        raise LayoutError(f"{len(sets)} sets for {layout.n_blocks} blocks")
    for j, s in enumerate(sets):
        if s.dim != layout.sizes[j]:
            raise LayoutError(f"block {j} has size {layout.sizes[j]} but its set has dim {s.dim}")
    out = np.concatenate([s.project(values[..., sl]) for s, sl in zip(sets, layout.slices())], axis=-1)
    return JointDecision(layout, out) if wrap else out


def positive_part(g):
    """``max(g, 0)``; scalars stay scalars."""
    out = np.maximum(g, 0.0)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# mappings


def affine_apply(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row-wise ``matrix @ x`` whose bits do not depend on how many rows are stacked."""
    return np.sum(x[..., None, :] * matrix, axis=-1)


@dataclass(frozen=True)
class GameMapping:
    """Evaluatable game mapping F with its monotonicity and Lipschitz constants.

    When ``matrix`` is set the mapping is affine, ``F(x) = matrix @ (x - root)``,
    and ``offset`` is the equivalent ``r`` in ``matrix @ x + r``.  Evaluating in
    the centred form makes ``F(root) == 0`` hold bit for bit.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    mu: float
    lipschitz: float
    matrix: Optional[np.ndarray] = None
    offset: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (self.mu > 0 and self.lipschitz > 0):
            raise ValueError("mu and lipschitz must be positive")
        if self.mu > self.lipschitz * (1 + 1e-12):
            raise ValueError(f"mu={self.mu} exceeds lipschitz={self.lipschitz}")

    def __call__(self, x):
        if isinstance(x, JointDecision):
            x = x.values
        return self.fn(np.asarray(x, dtype=float))

    @property
    def kappa(self) -> float:
        return self.lipschitz / self.mu

    @property
    def is_affine(self) -> bool:
        return self.matrix is not None

    @classmethod
    def affine(cls, matrix, mu: float, lipschitz: float, root=None) -> "GameMapping":
        matrix = np.array(matrix, dtype=float)
        root_arr = None if root is None else np.array(root, dtype=float)
        offset = -affine_apply(matrix, np.zeros(matrix.shape[0]) if root_arr is None else root_arr)
        return cls(_CentredAffine(matrix, root_arr), float(mu), float(lipschitz), matrix=matrix, offset=offset)


class _CentredAffine:
    # a plain class rather than a closure so mappings survive pickling to worker processes
    def __init__(self, matrix, root):
        self.matrix = matrix
        self.root = root

    def __call__(self, x):
        if self.root is None:
            return affine_apply(self.matrix, x)
        return affine_apply(self.matrix, x - self.root)


def spectral_constants(matrix: np.ndarray) -> tuple[float, float]:
    """(min eig of the symmetric part, largest singular value) of an affine Jacobian."""
    sym = 0.5 * (matrix + matrix.T)
    mu = float(np.linalg.eigvalsh(sym)[0])
    lip = float(np.linalg.norm(matrix, 2))
    return mu, lip


# ---------------------------------------------------------------------------
# constraint families


class ConstraintFamily:
    """Sampler of convex constraints ``g_a(x_j) <= 0`` for one agent.

    Handles come from :meth:`draw`, which maps uniforms in [0, 1) to constraint
    indices (or parameters); this keeps every family driven by one uniform
    stream per trial.
    """

    agent: int
    dim: int
    mg_bound: float
    regularity_c: float

    def draw(self, u: np.ndarray):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        return self.draw(rng.random(size))

    def evaluate(self, handle, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, handle, z: np.ndarray) -> np.ndarray:
        """A subgradient of ``g_a`` at ``z`` (valid for ``g_a^+`` wherever ``g_a(z) > 0``)."""
        raise NotImplementedError

    def subgradient(self, handle, z: np.ndarray) -> np.ndarray:
        """Subgradient of ``g_a^+``; the first basis vector where ``g_a^+(z) == 0``."""
        z = np.asarray(z, dtype=float)
        d = self.gradient(handle, z)
        active = self.evaluate(handle, z) > 0
        e1 = np.zeros(z.shape[-1])
        e1[0] = 1.0
        return np.where(np.asarray(active)[..., None], d, e1)

    def exact_set_distance(self, z: np.ndarray) -> Optional[np.ndarray]:
        """dist(z, S_j) if the family knows it analytically, else ``None``."""
        return None

    @property
    def witness(self) -> Optional[np.ndarray]:
        """A point known to satisfy every constraint of the family, if any."""
        return None

    def conditioned_on(self, x: np.ndarray) -> "ConstraintFamily":
        """Family seen by this agent when the other agents sit at ``x`` (joint, possibly batched)."""
        return self

    def with_constants(self, **kw) -> "ConstraintFamily":
        return replace(self, **kw)


@dataclass(frozen=True)
class HalfspaceFamily(ConstraintFamily):
    """Finite family of halfspaces ``<a_i, z> <= b_i``; handy for exact-projection checks."""

    normals: np.ndarray
    bounds: np.ndarray
    agent: int = 0
    regularity_c: float = 1.0
    mg_bound: float = field(default=0.0)

    def __post_init__(self):
        normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "bounds", np.atleast_1d(np.asarray(self.bounds, dtype=float)))
        if self.mg_bound <= 0:
            object.__setattr__(self, "mg_bound", float(np.max(np.linalg.norm(normals, axis=1))))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def draw(self, u):
        m = len(self.bounds)
        return np.minimum((np.asarray(u) * m).astype(int), m - 1)

    def evaluate(self, handle, z):
        return np.sum(self.normals[handle] * z, axis=-1) - self.bounds[handle]

    def gradient(self, handle, z):
        return np.broadcast_to(self.normals[handle], np.shape(z)).copy()

    def exact_set_distance(self, z):
        if len(self.bounds) != 1:
            return None
        g = self.evaluate(0, z)
        return np.maximum(g, 0.0) / np.linalg.norm(self.normals[0])


# ---------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class Problem:
    """Everything the methods need about one game."""

    name: str
    layout: BlockLayout
    mapping: GameMapping
    sets: tuple[SimpleSet, ...]
    families: tuple  # ConstraintFamily or None per agent
    xstar: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    def initial_point(self, rng: np.random.Generator) -> np.ndarray:
        kind = self.metadata.get("x0", "normal")
        if kind == "uniform01":
            x0 = rng.random(self.layout.total)
        else:
            x0 = rng.standard_normal(self.layout.total)
        return block_project(self.sets, x0, self.layout)

    def agent_sq_distances(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Per-agent ``dist^2(x_j, S_j)`` stacked on a leading agent axis, or None."""
        out = []
        for j, (s, fam) in enumerate(zip(self.sets, self.families)):
            xj = x[..., self.layout.slice(j)]
            if fam is None:
                out.append(s.distance(xj) ** 2)
                continue
            d = fam.conditioned_on(x).exact_set_distance(xj)
            if d is None:
                return None
            out.append(np.asarray(d) ** 2)
        return np.stack(out)

    def max_violation(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Largest ``g^+`` over every constraint of every agent, or None if not enumerable."""
        worst = None
        for j, fam in enumerate(self.families):
            if fam is None:
                continue
            fn = getattr(fam.conditioned_on(x), "max_violation", None)
            if fn is None:
                return None
            val = fn(x[..., self.layout.slice(j)])
            if val is None:
                return None
            worst = val if worst is None else np.maximum(worst, val)
        return worst
