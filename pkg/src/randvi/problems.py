"""Test games with known solutions: a constrained two-player matrix game and an
imitation-learning game with a continuum of exploration constraints.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .core import (
    BlockLayout,
    Box,
    ConstraintFamily,
    FullSpace,
    GameMapping,
    Problem,
    SimpleSet,
    affine_apply,
)

FORMAT_VERSION = 1


def generate_spd_with_spectrum(dim: int, lo: float, hi: float, rng: np.random.Generator,
                               return_parts: bool = False):
    """Symmetric matrix ``G diag(lam) G^T`` with ``lam ~ U[lo, hi]`` and ``G`` from a QR factorisation."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if not (0 <= lo <= hi):
        raise ValueError("need 0 <= lo <= hi")
    G, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    if np.max(np.abs(G.T @ G - np.eye(dim))) > 1e-10:
        raise ArithmeticError("QR factor is not orthogonal to 1e-10")
    lam = rng.uniform(lo, hi, dim)
    mat = (G * lam) @ G.T
    mat = 0.5 * (mat + mat.T)
    if return_parts:
        return mat, lam, G
    return mat


# ---------------------------------------------------------------------------
# matrix game


@dataclass(frozen=True)
class MatrixGameSpec:
    n_per_agent: int = 100
    mu_target: float = 1.0
    l_target: float = 3.0
    n_constraints: int = 10000
    box_half_width: float = 10000.0
    delta_range: tuple[float, float] = (1.0, 2.0)
    chi_range: tuple[float, float] = (1.0, 2.0)
    q_eig_range: tuple[float, float] = (0.0, 2.0)
    seed: int = 0
    max_dense_bytes: int = 512 * 2**20

    def __post_init__(self):
        if self.n_per_agent < 1 or self.n_constraints < 1:
            raise ValueError("n_per_agent and n_constraints must be positive")
        if not (0 < self.mu_target <= self.l_target):
            raise ValueError("need 0 < mu_target <= l_target")
        if self.box_half_width <= 0:
            raise ValueError("box_half_width must be positive")
        for name in ("delta_range", "chi_range", "q_eig_range"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (float(lo), float(hi)))
            if lo > hi:
                raise ValueError(f"{name} must be an increasing interval")

    @classmethod
    def desk(cls, **kw) -> "MatrixGameSpec":
        """Reduced scale: 20 variables per agent, 1000 constraints each."""
        kw.setdefault("n_per_agent", 20)
        kw.setdefault("n_constraints", 1000)
        return cls(**kw)


def _constraint_rng(seed: int, agent: int, i: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), 1 + agent, int(i)])


@dataclass(frozen=True)
class QuadraticFamily(ConstraintFamily):
    """Constraints ``<z, Q_i z> + <b_i, z> - c_i <= 0`` with PSD ``Q_i``, sampled uniformly.

    ``matrices`` may be ``None`` for large instances; ``Q_i`` is then rebuilt
    from its own seed whenever it is sampled.
    """

    agent: int
    linear: np.ndarray  # (N, n)
    rhs: np.ndarray  # (N,)
    lam_max: np.ndarray  # (N,)
    solution: np.ndarray  # interior point, x*_j
    mg_bound: float
    regularity_c: float
    matrices: Optional[np.ndarray] = None  # (N, n, n)
    seed: int = 0
    q_eig_range: tuple[float, float] = (0.0, 2.0)

    @property
    def dim(self) -> int:
        return self.linear.shape[1]

    @property
    def size(self) -> int:
        return self.rhs.shape[0]

    def matrix(self, i: int) -> np.ndarray:
        if self.matrices is not None:
            return self.matrices[i]
        return generate_spd_with_spectrum(self.dim, *self.q_eig_range, _constraint_rng(self.seed, self.agent, i))

    def _gather(self, idx) -> np.ndarray:
        idx = np.asarray(idx)
        if self.matrices is not None:
            return self.matrices[idx]
        flat = [self.matrix(int(i)) for i in idx.ravel()]
        return np.asarray(flat).reshape(idx.shape + (self.dim, self.dim))

    def draw(self, u):
        n = self.size
        return np.minimum((np.asarray(u) * n).astype(np.int64), n - 1)

    def evaluate(self, handle, z):
        z = np.asarray(z, dtype=float)
        qz = affine_apply(self._gather(handle), z)
        return np.sum(z * qz, axis=-1) + np.sum(self.linear[handle] * z, axis=-1) - self.rhs[handle]

    def gradient(self, handle, z):
        z = np.asarray(z, dtype=float)
        return 2.0 * affine_apply(self._gather(handle), z) + self.linear[handle]

    def values_all(self, z) -> Optional[np.ndarray]:
        """Every constraint value at ``z``: shape ``(..., N)``.  None for lazily stored matrices."""
        if self.matrices is None:
            return None
        z = np.asarray(z, dtype=float)
        N, n = self.rhs.shape[0], self.dim
        zz = z.reshape(-1, n)
        # <z, Q z> = <vec Q, vec(z z^T)>: one matrix product for all constraints
        outer = (zz[:, :, None] * zz[:, None, :]).reshape(-1, n * n)
        quad = outer @ self.matrices.reshape(N, n * n).T
        return (quad + zz @ self.linear.T - self.rhs).reshape(z.shape[:-1] + (N,))

    def max_violation(self, z):
        vals = self.values_all(z)
        return None if vals is None else np.maximum(np.max(vals, axis=-1), 0.0)

    @property
    def witness(self):
        return self.solution


def _quadratic_mg(lam_max: np.ndarray, linear: np.ndarray, radius: float) -> float:
    # ||(Q + Q^T) z + b|| <= 2 lam_max ||z|| + ||b||
    return float(np.max(2.0 * lam_max * radius + np.linalg.norm(linear, axis=1)))


def trajectory_mg(family: QuadraticFamily, lower: np.ndarray, upper: np.ndarray) -> float:
    """Subgradient bound restricted to the box spanned by observed iterates (reporting only)."""
    radius = float(np.linalg.norm(np.maximum(np.abs(lower), np.abs(upper))))
    return _quadratic_mg(family.lam_max, family.linear, radius)


def build_matrix_game(spec: MatrixGameSpec, calibrate: bool = True) -> Problem:
    n, N = spec.n_per_agent, spec.n_constraints
    rng = np.random.default_rng([int(spec.seed), 0])
    jac = generate_spd_with_spectrum(2 * n, spec.mu_target, spec.l_target, rng)
    eig = np.linalg.eigvalsh(jac)
    mu, L = float(eig[0]), float(eig[-1])
    assert mu > 0, "Jacobian must be positive definite"
    offset = np.concatenate([rng.standard_normal(n), rng.standard_normal(n)])
    xstar = -np.linalg.solve(jac, offset)
    if np.max(np.abs(xstar)) >= spec.box_half_width:
        raise ValueError("unconstrained solution falls outside the box; enlarge box_half_width")
    mapping = GameMapping.affine(jac, mu, L, root=xstar)

    layout = BlockLayout((n, n))
    box = Box.uniform(n, -spec.box_half_width, spec.box_half_width)
    dense = N * n * n * 8 <= spec.max_dense_bytes
    families = []
    for j, slack_range in enumerate((spec.delta_range, spec.chi_range)):
        xj = xstar[layout.slice(j)]
        mats = np.empty((N, n, n)) if dense else None
        lin = np.empty((N, n))
        rhs = np.empty(N)
        lam_max = np.empty(N)
        for i in range(N):
            r = _constraint_rng(spec.seed, j, i)
            Q, lam, _ = generate_spd_with_spectrum(n, *spec.q_eig_range, r, return_parts=True)
            b = r.standard_normal(n)
            slack = r.uniform(*slack_range)
            if dense:
                mats[i] = Q
            lin[i] = b
            lam_max[i] = lam.max()
            rhs[i] = xj @ Q @ xj + b @ xj + slack
        fam = QuadraticFamily(
            agent=j, linear=lin, rhs=rhs, lam_max=lam_max, solution=xj.copy(),
            mg_bound=_quadratic_mg(lam_max, lin, box.max_norm()), regularity_c=1.0,
            matrices=mats, seed=spec.seed, q_eig_range=spec.q_eig_range,
        )
        families.append(fam)

    if calibrate:
        crng = np.random.default_rng([int(spec.seed), 99])
        calibrated = []
        for fam in families:
            # lazily stored matrices are rebuilt per sample, so calibrate on fewer draws
            n_pts, n_handles = (64, 2000) if dense else (16, 200)
            pts = _matrix_game_calibration_points(fam, box, crng, n_box=n_pts, n_ray=n_pts)
            # distance to the interior solution over-estimates dist(z, S), keeping c conservative
            c = calibrate_c(fam, box, len(pts), crng, points=pts, n_handles=n_handles,
                            distance=lambda z, w=fam.solution: np.linalg.norm(z - w, axis=-1))
            calibrated.append(replace(fam, regularity_c=c))
        families = calibrated

    return Problem(
        name="matrix_game", layout=layout, mapping=mapping, sets=(box, box), families=tuple(families),
        xstar=xstar, metadata={"x0": "normal", "spec": spec},
    )


def _matrix_game_calibration_points(fam: QuadraticFamily, box: Box, rng, n_box: int = 64, n_ray: int = 64):
    # points spread over the box plus points along rays out of the interior solution
    pts_box = rng.uniform(box.lower, box.upper, (n_box, box.dim))
    dirs = rng.standard_normal((n_ray, box.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = np.logspace(-1, math.log10(box.max_norm()), n_ray)
    pts_ray = box.project(fam.solution + radii[:, None] * dirs)
    return np.concatenate([pts_box, pts_ray])


# ---------------------------------------------------------------------------
# imitation game


@dataclass(frozen=True)
class ImitationGameSpec:
    xi_max: float = 0.1
    box: tuple[float, float] = (0.1, 10.0)
    seed: int = 0

    def __post_init__(self):
        if self.xi_max <= 0:
            raise ValueError("xi_max must be positive")
        lo, hi = self.box
        object.__setattr__(self, "box", (float(lo), float(hi)))


@dataclass(frozen=True)
class ImitationFamily(ConstraintFamily):
    """Agent-2 constraints ``||z - x_1||^2 <= xi`` with ``xi ~ U[0, xi_max]``.

    The family only becomes evaluable once anchored on agent 1's latest
    decision via :meth:`conditioned_on`.
    """

    xi_max: float
    mg_bound: float
    regularity_c: float
    agent: int = 1
    anchor: Optional[np.ndarray] = None
    anchor_slice: slice = field(default=slice(0, 2))

    @property
    def dim(self) -> int:
        return 2

    def conditioned_on(self, x):
        return replace(self, anchor=np.asarray(x, dtype=float)[..., self.anchor_slice])

    def _offset(self, z):
        if self.anchor is None:
            raise ValueError("imitation constraints need agent 1's decision; call conditioned_on first")
        return np.asarray(z, dtype=float) - self.anchor

    def draw(self, u):
        return np.asarray(u) * self.xi_max

    def evaluate(self, handle, z):
        off = self._offset(z)
        return np.sum(off * off, axis=-1) - handle

    def gradient(self, handle, z):
        return 2.0 * self._offset(z)

    def exact_set_distance(self, z):
        off = self._offset(z)
        return np.sqrt(np.sum(off * off, axis=-1))

    def max_violation(self, z):
        off = self._offset(z)
        return np.sum(off * off, axis=-1)

    @property
    def witness(self):
        return self.anchor


IMITATION_MATRIX = np.array(
    [[2.0, 0.0, 1.0, 0.0],
     [0.0, 2.0, 0.0, 1.0],
     [1.0, 0.0, 2.0, 0.0],
     [0.0, 1.0, 0.0, 2.0]]
)


def imitation_constants(spec: ImitationGameSpec) -> tuple[float, float]:
    """Certified (M_g, c) for the agent-2 family.

    M_g bounds ``2 ||x_2 - x_1||`` by twice the largest start offset (points in
    [0, 1]^2) plus the box diameter.  The regularity ratio blows up as x_2
    approaches x_1, so c is calibrated only over offsets of at least
    ``sqrt(xi_max)``, where it is finite.
    """
    lo, hi = spec.box
    diameter = math.sqrt(2.0) * (hi - lo)
    mg = 2.0 * (math.sqrt(2.0) + diameter)
    fam = ImitationFamily(xi_max=spec.xi_max, mg_bound=mg, regularity_c=1.0)
    rng = np.random.default_rng([int(spec.seed), 99])
    anchor = np.array([lo, lo])
    radii = np.linspace(math.sqrt(spec.xi_max), math.sqrt(2.0) + diameter, 32)
    angles = rng.uniform(0.0, 2 * math.pi, radii.size)
    pts = anchor + radii[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    xfull = np.concatenate([anchor, anchor])
    c = calibrate_c(fam.conditioned_on(xfull), FullSpace(2), len(pts), rng, points=pts, n_handles=20000)
    return mg, c


def build_imitation_game(spec: ImitationGameSpec = ImitationGameSpec()) -> Problem:
    lo, hi = spec.box
    mg, c = imitation_constants(spec)
    mapping = GameMapping.affine(IMITATION_MATRIX, 1.0, 3.0)
    fam = ImitationFamily(xi_max=spec.xi_max, mg_bound=mg, regularity_c=c)
    return Problem(
        name="imitation", layout=BlockLayout((2, 2)), mapping=mapping,
        sets=(Box.uniform(2, lo, hi), FullSpace(2)), families=(None, fam),
        xstar=np.full(4, lo), metadata={"x0": "uniform01", "spec": spec},
    )


# ---------------------------------------------------------------------------
# regularity calibration


def _sample_points(simple_set: SimpleSet, n: int, rng: np.random.Generator, center=None) -> np.ndarray:
    if isinstance(simple_set, Box):
        return rng.uniform(simple_set.lower, simple_set.upper, (n, simple_set.dim))
    base = np.zeros(simple_set.dim) if center is None else np.asarray(center, dtype=float)
    pts = base + rng.standard_normal((n, simple_set.dim))
    return simple_set.project(pts)


def regularity_ratios(family: ConstraintFamily, points: np.ndarray, rng: np.random.Generator,
                      n_handles: int = 2000,
                      distance: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> np.ndarray:
    """``dist^2(x, S) / E[(g^+)^2]`` at each point; NaN where every sampled constraint holds."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.full(len(points), np.nan)
    for p, x in enumerate(points):
        d = family.exact_set_distance(x)
        if d is None:
            if distance is None:
                raise ValueError("family has no set-distance oracle; pass distance=")
            d = distance(x)
        handles = family.draw(rng.random(n_handles))
        z = np.broadcast_to(x, (n_handles, x.shape[-1]))
        if getattr(family, "anchor", None) is not None:
            # anchored families broadcast their anchor against the stacked copies
            family_p = replace(family, anchor=np.broadcast_to(family.anchor, z.shape))
        else:
            family_p = family
        mean_sq = float(np.mean(np.maximum(family_p.evaluate(handles, z), 0.0) ** 2))
        if mean_sq > 0:
            out[p] = float(d) ** 2 / mean_sq
    return out


def calibrate_c(family: ConstraintFamily, simple_set: SimpleSet, n_samples: int, rng: np.random.Generator,
                points: Optional[np.ndarray] = None, n_handles: int = 2000, safety: float = 2.0,
                distance=None) -> float:
    """Monte Carlo estimate of the regularity constant: ``safety * max`` ratio over sample points.

    Returns 1.0 when every sampled point satisfies every sampled constraint.
    """
    if points is None:
        points = _sample_points(simple_set, n_samples, rng, center=family.witness)
    ratios = regularity_ratios(family, points, rng, n_handles=n_handles, distance=distance)
    if np.all(np.isnan(ratios)):
        return 1.0
    return safety * float(np.nanmax(ratios))


# ---------------------------------------------------------------------------
# serialisation


def save_instance(problem: Problem, path) -> Path:
    """Write a replayable ``.npz`` container (arrays plus a JSON header)."""
    path = Path(path)
    spec = problem.metadata.get("spec")
    header = {
        "format": "randvi-instance",
        "version": FORMAT_VERSION,
        "kind": problem.name,
        "spec": asdict(spec) if spec is not None else None,
        "mu": problem.mapping.mu,
        "lipschitz": problem.mapping.lipschitz,
        "mg": [None if f is None else f.mg_bound for f in problem.families],
        "c": [None if f is None else f.regularity_c for f in problem.families],
    }
    arrays = {"jacobian": problem.mapping.matrix, "xstar": problem.xstar}
    if problem.name == "matrix_game":
        for j, fam in enumerate(problem.families):
            arrays[f"linear{j}"] = fam.linear
            arrays[f"rhs{j}"] = fam.rhs
            arrays[f"lam_max{j}"] = fam.lam_max
            if fam.matrices is not None:
                arrays[f"matrices{j}"] = fam.matrices
    arrays["header"] = np.frombuffer(json.dumps(header).encode(), dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez_compressed(fh, **arrays)
    return path


def load_instance(path) -> Problem:
    with np.load(Path(path)) as data:
        header = json.loads(bytes(data["header"]).decode())
        if header.get("format") != "randvi-instance":
            raise ValueError(f"{path} is not a randvi instance file")
        if header["version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported instance format version {header['version']}")
        arrays = {k: data[k] for k in data.files if k != "header"}
    kind, spec_d = header["kind"], header["spec"]
    if kind == "imitation":
        spec = ImitationGameSpec(**{**spec_d, "box": tuple(spec_d["box"])})
        prob = build_imitation_game(spec)
        fam = replace(prob.families[1], mg_bound=header["mg"][1], regularity_c=header["c"][1])
        return replace(prob, families=(None, fam))
    if kind != "matrix_game":
        raise ValueError(f"unknown instance kind {kind!r}")
    spec = MatrixGameSpec(**{k: tuple(v) if isinstance(v, list) else v for k, v in spec_d.items()})
    n = spec.n_per_agent
    xstar = arrays["xstar"]
    mapping = GameMapping.affine(arrays["jacobian"], header["mu"], header["lipschitz"], root=xstar)
    layout = BlockLayout((n, n))
    box = Box.uniform(n, -spec.box_half_width, spec.box_half_width)
    families = tuple(
        QuadraticFamily(
            agent=j, linear=arrays[f"linear{j}"], rhs=arrays[f"rhs{j}"], lam_max=arrays[f"lam_max{j}"],
            solution=xstar[layout.slice(j)].copy(), mg_bound=header["mg"][j], regularity_c=header["c"][j],
            matrices=arrays.get(f"matrices{j}"), seed=spec.seed, q_eig_range=spec.q_eig_range,
        )
        for j in range(2)
    )
    return Problem(name="matrix_game", layout=layout, mapping=mapping, sets=(box, box), families=families,
                   xstar=xstar, metadata={"x0": "normal", "spec": spec})
