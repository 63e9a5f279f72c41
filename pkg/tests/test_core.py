import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from randvi.core import (
    Ball,
    BlockLayout,
    Box,
    FullSpace,
    GameMapping,
    HalfspaceFamily,
    JointDecision,
    LayoutError,
    block_project,
    positive_part,
    spectral_constants,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_layout_offsets_and_slices():
    lay = BlockLayout((2, 3, 1))
    assert lay.total == 6 and lay.n_blocks == 3
    assert lay.offsets == (0, 2, 5)
    assert lay.slice(1) == slice(2, 5)
    with pytest.raises(LayoutError):
        BlockLayout((2, 0))


def test_joint_decision_blocks_roundtrip():
    lay = BlockLayout((2, 2))
    x = JointDecision.from_blocks(lay, [np.array([1.0, 2.0]), np.array([3.0, 4.0])])
    np.testing.assert_array_equal(x.block(1), [3.0, 4.0])
    with pytest.raises(LayoutError):
        JointDecision(lay, np.zeros(3))


def test_block_project_box_clamps():
    lay = BlockLayout((2,))
    out = block_project([Box.uniform(2, -1, 1)], JointDecision(lay, [2.0, 0.5]))
    np.testing.assert_array_equal(out.values, [1.0, 0.5])


def test_block_project_fullspace_is_identity():
    v = np.array([3.5, -1e8, 7.0])
    out = block_project([FullSpace(3)], v, BlockLayout((3,)))
    np.testing.assert_array_equal(out, v)


def test_block_project_imitation_box():
    lay = BlockLayout((2, 2))
    out = block_project([Box.uniform(2, 0.1, 10), FullSpace(2)], np.array([0.0, 5.0, -3.0, 20.0]), lay)
    np.testing.assert_array_equal(out, [0.1, 5.0, -3.0, 20.0])


def test_block_project_dimension_mismatch():
    with pytest.raises(LayoutError):
        block_project([Box.uniform(3, 0, 1)], np.zeros(2), BlockLayout((2,)))
    with pytest.raises(LayoutError):
        block_project([Box.uniform(2, 0, 1)], np.zeros(2))


@pytest.mark.parametrize("g, expected", [(3.2, 3.2), (-1.0, 0.0), (0.0, 0.0)])
def test_positive_part(g, expected):
    assert positive_part(g) == expected


def test_ball_projection_radial():
    ball = Ball(np.zeros(2), 1.0)
    np.testing.assert_allclose(ball.project(np.array([3.0, 4.0])), [0.6, 0.8])
    np.testing.assert_array_equal(ball.project(np.array([0.1, 0.2])), [0.1, 0.2])


def test_invalid_sets_rejected():
    with pytest.raises(ValueError):
        Box(np.array([1.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        Ball(np.zeros(2), -1.0)


SETS = [Box(np.array([-1.0, 0.0, 2.0]), np.array([1.0, 5.0, 2.0])), Ball(np.array([1.0, -2.0, 0.5]), 2.5), FullSpace(3)]


@settings(max_examples=200, deadline=None)
@given(u=arrays(float, 3, elements=finite), v=arrays(float, 3, elements=finite), which=st.integers(0, 2))
def test_projection_firmly_nonexpansive_and_idempotent(u, v, which):
    s = SETS[which]
    pu, pv = s.project(u), s.project(v)
    diff = pu - pv
    lhs = diff @ diff
    rhs = diff @ (u - v)
    assert lhs <= rhs + 1e-10 * max(1.0, abs(rhs))
    assert np.linalg.norm(diff) <= np.linalg.norm(u - v) * (1 + 1e-12) + 1e-12
    assert np.all(s.contains(pu, tol=1e-9))
    np.testing.assert_array_equal(s.project(pu), pu) if which != 1 else np.testing.assert_allclose(
        s.project(pu), pu, atol=1e-12)


def test_batched_projection_matches_rowwise():
    rng = np.random.default_rng(3)
    v = rng.normal(size=(7, 3)) * 4
    for s in SETS:
        rows = np.stack([s.project(r) for r in v])
        np.testing.assert_array_equal(s.project(v), rows)


def test_affine_mapping_matches_representation():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(4, 4)) + 5 * np.eye(4)
    root = rng.normal(size=4)
    mu, L = spectral_constants(A)
    F = GameMapping.affine(A, mu, L, root=root)
    x = rng.normal(size=4)
    np.testing.assert_allclose(F(x), A @ x + F.offset, atol=1e-12)
    np.testing.assert_array_equal(F(root), np.zeros(4))
    assert F.kappa == pytest.approx(L / mu)


def test_mapping_rejects_mu_above_lipschitz():
    with pytest.raises(ValueError):
        GameMapping.affine(np.eye(2), 2.0, 1.0)


def test_spectral_constants_bound_mapping_on_random_pairs():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(5, 5)) + 4 * np.eye(5)
    mu, L = spectral_constants(A)
    F = GameMapping.affine(A, mu, L)
    for _ in range(100):
        x, y = rng.normal(size=5), rng.normal(size=5)
        d = F(x) - F(y)
        assert d @ (x - y) >= mu * (x - y) @ (x - y) - 1e-9
        assert np.linalg.norm(d) <= L * np.linalg.norm(x - y) + 1e-9


def test_subgradient_fallback_is_first_basis_vector():
    fam = HalfspaceFamily(np.array([[0.0, 2.0]]), np.array([1.0]))
    np.testing.assert_array_equal(fam.subgradient(0, np.array([0.0, 0.0])), [1.0, 0.0])
    np.testing.assert_array_equal(fam.subgradient(0, np.array([0.0, 3.0])), [0.0, 2.0])


def test_halfspace_exact_distance():
    fam = HalfspaceFamily(np.array([[3.0, 4.0]]), np.array([5.0]))
    assert fam.exact_set_distance(np.array([3.0, 4.0])) == pytest.approx((25 - 5) / 5)
    assert fam.exact_set_distance(np.array([0.0, 0.0])) == 0.0
