import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randvi.core import Box, FullSpace, HalfspaceFamily
from randvi.feasibility import (
    ContractViolation,
    FeasibilityConfig,
    compute_q,
    feasibility_residual_check,
    polyak_step,
    random_feasibility_steps,
)
from randvi.problems import ImitationFamily, MatrixGameSpec, build_matrix_game


class UnitBall:
    """g(z) = ||z||^2 - 1, single constraint."""

    dim = 2
    mg_bound = 10.0
    regularity_c = 1.0

    def draw(self, u):
        return 0

    def evaluate(self, handle, z):
        return np.sum(z * z, axis=-1) - 1.0

    def subgradient(self, handle, z):
        return 2.0 * np.asarray(z)


class Ones:
    """Stand-in random source that always returns 1 (upper end of every sampling range)."""

    def random(self, size=None):
        return 1.0 if size is None else np.ones(size)


def test_halfspace_step_is_exact_projection():
    fam = HalfspaceFamily(np.array([[1.0, 0.0]]), np.array([1.0]))
    np.testing.assert_array_equal(polyak_step(np.array([3.0, 0.0]), 0, fam, FullSpace(2), 1.0), [1.0, 0.0])


def test_feasible_point_is_fixed():
    fam = HalfspaceFamily(np.array([[1.0, 0.0]]), np.array([1.0]))
    np.testing.assert_array_equal(polyak_step(np.array([0.5, 0.0]), 0, fam, FullSpace(2), 1.0), [0.5, 0.0])


def test_quadratic_step_hand_value_and_contraction():
    z = np.array([2.0, 0.0])
    out = polyak_step(z, 0, UnitBall(), FullSpace(2), 1.0)
    # g+ = 3, d = (4, 0): z - 3/16 * (4, 0)
    np.testing.assert_allclose(out, [1.25, 0.0], rtol=0, atol=1e-15)
    zbar = np.array([1.0, 0.0])
    assert np.linalg.norm(out - zbar) < np.linalg.norm(z - zbar)


def test_zero_subgradient_with_violation_is_an_error():
    class Broken(UnitBall):
        def subgradient(self, handle, z):
            return np.zeros_like(z)

    with pytest.raises(ContractViolation):
        polyak_step(np.array([2.0, 0.0]), 0, Broken(), FullSpace(2), 1.0)


@pytest.mark.parametrize("beta", [0.0, 2.0, -0.1, 2.5])
def test_beta_out_of_range(beta):
    with pytest.raises(ValueError):
        polyak_step(np.array([2.0, 0.0]), 0, UnitBall(), FullSpace(2), beta)
    with pytest.raises(ValueError):
        FeasibilityConfig(beta, 1, np.random.default_rng(0))


def test_batch_of_one_is_one_step():
    fam = HalfspaceFamily(np.array([[1.0, 1.0], [1.0, -2.0], [0.0, 1.0]]), np.array([1.0, 0.5, 2.0]))
    v = np.array([3.0, 2.0])
    out, _ = random_feasibility_steps(v, fam, FullSpace(2), FeasibilityConfig(1.3, 1, np.random.default_rng(5)))
    handle = fam.draw(np.random.default_rng(5).random())
    np.testing.assert_array_equal(out, polyak_step(v, handle, fam, FullSpace(2), 1.3))


def test_all_feasible_batch_leaves_point_and_zero_residual():
    fam = HalfspaceFamily(np.eye(2), np.array([5.0, 5.0]))
    v = np.array([1.0, -2.0])
    out, audit = random_feasibility_steps(v, fam, FullSpace(2), FeasibilityConfig(1.0, 4, np.random.default_rng(0)))
    np.testing.assert_array_equal(out, v)
    assert feasibility_residual_check(v, out, np.zeros(2), audit, 1.0, fam.mg_bound) == 0.0


def _scalar_recursion(r, xi, steps):
    # Polyak step on r -> r^2 - xi along the ray, with beta = 1
    out = []
    for _ in range(steps):
        r = r - (r * r - xi) / (2 * r)
        out.append(r)
    return out


def test_imitation_batch_matches_scalar_recursion():
    expected = _scalar_recursion(1.0, 0.1, 3)
    assert expected[0] == pytest.approx(0.55, abs=1e-15)
    assert expected[1] == pytest.approx(0.3659, abs=1e-4)
    assert expected[2] == pytest.approx(0.3196, abs=1e-4)
    x1 = np.array([0.3, 0.7])
    fam = ImitationFamily(xi_max=0.1, mg_bound=10.0, regularity_c=1.0).conditioned_on(np.r_[x1, 0.0, 0.0])
    direction = np.array([0.6, 0.8])
    v = x1 + direction
    out, audit = random_feasibility_steps(v, fam, FullSpace(2), FeasibilityConfig(1.0, 3, Ones()))
    assert np.linalg.norm(out - x1) == pytest.approx(expected[2], rel=1e-12)
    np.testing.assert_allclose((out - x1) / np.linalg.norm(out - x1), direction, atol=1e-12)
    assert audit.gplus.shape == (3,)


@pytest.mark.parametrize("beta, c, mg, q", [(1.0, 1.0, 2.0, 0.25), (0.5, 2.0, 1.0, 0.375)])
def test_compute_q_arithmetic(beta, c, mg, q):
    assert compute_q(beta, c, mg).q == pytest.approx(q, rel=1e-15)


def test_compute_q_rejects_q_of_one():
    with pytest.raises(ValueError):
        compute_q(1.0, 4.0, 0.5)
    assert compute_q(1.0, 4.0, 0.5, clamp=True).q < 1.0


def test_residual_equality_on_boundary_halfspace():
    fam = HalfspaceFamily(np.array([[1.0, 0.0]]), np.array([1.0]))
    v = np.array([3.0, 0.0])
    out, audit = random_feasibility_steps(v, fam, FullSpace(2), FeasibilityConfig(1.0, 1, np.random.default_rng(0)))
    xbar = np.array([1.0, 7.0])  # on the boundary hyperplane
    res = feasibility_residual_check(v, out, xbar, audit, 1.0, 1.0)
    assert res == pytest.approx(0.0, abs=1e-12)
    xbar_in = np.array([-2.0, 7.0])  # strictly inside
    assert feasibility_residual_check(v, out, xbar_in, audit, 1.0, 1.0) > 0


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), beta=st.floats(0.05, 1.95))
def test_step_is_deterministic(seed, beta):
    fam = HalfspaceFamily(np.array([[1.0, 1.0], [2.0, -1.0]]), np.array([0.0, 1.0]))
    v = np.random.default_rng(seed).normal(size=2) * 5
    box = Box.uniform(2, -3, 3)
    a, _ = random_feasibility_steps(v, fam, box, FeasibilityConfig(beta, 5, np.random.default_rng(seed)))
    b, _ = random_feasibility_steps(v, fam, box, FeasibilityConfig(beta, 5, np.random.default_rng(seed)))
    assert a.tobytes() == b.tobytes()


def test_residual_nonnegative_on_matrix_game_constraints():
    prob = build_matrix_game(MatrixGameSpec(n_per_agent=5, n_constraints=50, box_half_width=5.0, seed=2),
                             calibrate=False)
    fam, box = prob.families[0], prob.sets[0]
    rng = np.random.default_rng(11)
    v = rng.uniform(-5, 5, size=(10000, 5))
    cfg = FeasibilityConfig(1.0, 3, rng)
    out, audit = random_feasibility_steps(v, fam, box, cfg)
    assert np.max(audit.dnorm) <= fam.mg_bound
    res = feasibility_residual_check(v, out, fam.solution, audit, 1.0, fam.mg_bound)
    assert np.min(res) >= -1e-9
