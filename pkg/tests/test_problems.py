import numpy as np
import pytest

from randvi.core import Box, FullSpace, HalfspaceFamily
from randvi.problems import (
    IMITATION_MATRIX,
    ImitationFamily,
    ImitationGameSpec,
    MatrixGameSpec,
    build_imitation_game,
    build_matrix_game,
    calibrate_c,
    generate_spd_with_spectrum,
    load_instance,
    regularity_ratios,
    save_instance,
)


def test_spd_dim_one_in_range():
    m = generate_spd_with_spectrum(1, 2.0, 5.0, np.random.default_rng(0))
    assert m.shape == (1, 1) and 2.0 <= m[0, 0] <= 5.0


def test_spd_forced_spectrum_is_scaled_identity():
    m = generate_spd_with_spectrum(6, 1.7, 1.7, np.random.default_rng(1))
    np.testing.assert_allclose(m, 1.7 * np.eye(6), atol=1e-10)


def test_spd_spectrum_and_symmetry():
    m = generate_spd_with_spectrum(10, 1.0, 3.0, np.random.default_rng(2))
    eig = np.linalg.eigvalsh(m)
    assert np.max(np.abs(m - m.T)) <= 1e-10
    assert eig.min() >= 1 - 1e-8 and eig.max() <= 3 + 1e-8


def test_spd_bad_arguments():
    with pytest.raises(ValueError):
        generate_spd_with_spectrum(0, 1, 2, np.random.default_rng(0))
    with pytest.raises(ValueError):
        generate_spd_with_spectrum(3, 2, 1, np.random.default_rng(0))


@pytest.fixture(scope="module")
def game():
    return build_matrix_game(MatrixGameSpec(n_per_agent=8, n_constraints=60, seed=3))


def test_matrix_game_solution_is_interior_root(game):
    F = game.mapping
    scale = np.linalg.norm(F.offset)
    assert np.linalg.norm(F.matrix @ game.xstar + F.offset) <= 1e-9 * scale
    for j, fam in enumerate(game.families):
        xj = game.xstar[game.layout.slice(j)]
        g = np.array([fam.evaluate(i, xj) for i in range(fam.size)])
        assert np.all(g <= -1.0 + 1e-9)
        assert np.all(g >= -2.0 - 1e-9)


def test_matrix_game_constants(game):
    eig = np.linalg.eigvalsh(game.mapping.matrix)
    assert game.mapping.mu == eig[0] and game.mapping.lipschitz == eig[-1]
    assert 1.0 <= eig[0] and eig[-1] <= 3.0
    for fam in game.families:
        for i in range(fam.size):
            assert np.linalg.eigvalsh(fam.matrix(i)).min() >= -1e-8
        assert fam.regularity_c > 0


def test_matrix_game_strong_monotonicity_spot_check(game):
    rng = np.random.default_rng(0)
    mu = game.mapping.mu
    for _ in range(100):
        x, y = rng.normal(size=(2, 16)) * 10
        lhs = (game.mapping(x) - game.mapping(y)) @ (x - y)
        assert lhs >= mu * (x - y) @ (x - y) * (1 - 1e-8)


def test_matrix_game_subgradients_bounded_and_convex(game):
    rng = np.random.default_rng(1)
    box = game.sets[0]
    fam = game.families[0]
    for _ in range(50):
        i = int(rng.integers(fam.size))
        x, y = rng.uniform(box.lower, box.upper, size=(2, 8))
        assert np.linalg.norm(fam.gradient(i, x)) <= fam.mg_bound
        t = rng.random()
        mid = fam.evaluate(i, t * x + (1 - t) * y)
        assert mid <= t * fam.evaluate(i, x) + (1 - t) * fam.evaluate(i, y) + 1e-6 * abs(mid)
        gx = fam.evaluate(i, x)
        assert fam.evaluate(i, y) >= gx + fam.gradient(i, x) @ (y - x) - 1e-6 * max(1.0, abs(gx))


def test_matrix_game_is_reproducible():
    spec = MatrixGameSpec(n_per_agent=4, n_constraints=20, seed=9)
    a, b = build_matrix_game(spec), build_matrix_game(spec)
    assert a.mapping.matrix.tobytes() == b.mapping.matrix.tobytes()
    for fa, fb in zip(a.families, b.families):
        assert fa.matrices.tobytes() == fb.matrices.tobytes()
        assert fa.rhs.tobytes() == fb.rhs.tobytes()
        assert fa.regularity_c == fb.regularity_c


def test_lazy_matrices_match_dense():
    dense = build_matrix_game(MatrixGameSpec(n_per_agent=4, n_constraints=15, seed=4), calibrate=False)
    lazy = build_matrix_game(MatrixGameSpec(n_per_agent=4, n_constraints=15, seed=4, max_dense_bytes=0),
                             calibrate=False)
    assert lazy.families[1].matrices is None
    z = np.random.default_rng(0).normal(size=(3, 4))
    idx = np.array([0, 7, 14])
    np.testing.assert_array_equal(lazy.families[1].evaluate(idx, z), dense.families[1].evaluate(idx, z))


def test_imitation_game_structure():
    prob = build_imitation_game()
    np.testing.assert_array_equal(prob.mapping.matrix, IMITATION_MATRIX)
    eig = np.linalg.eigvalsh(0.5 * (IMITATION_MATRIX + IMITATION_MATRIX.T))
    np.testing.assert_allclose(eig, [1, 1, 3, 3], atol=1e-14)
    assert (prob.mapping.mu, prob.mapping.lipschitz) == (1.0, 3.0)
    np.testing.assert_array_equal(prob.xstar, [0.1] * 4)
    assert isinstance(prob.sets[0], Box) and isinstance(prob.sets[1], FullSpace)
    assert prob.families[0] is None


def test_imitation_solution_satisfies_vi_on_samples():
    prob = build_imitation_game()
    rng = np.random.default_rng(0)
    Fx = prob.mapping(prob.xstar)
    for _ in range(500):
        x1 = rng.uniform(0.1, 10, 2)
        x = np.r_[x1, x1]  # S forces x2 = x1
        gap = Fx @ (x - prob.xstar)
        assert gap == pytest.approx(x.sum() * 0.3 - 0.4 * 0.3, abs=1e-12)
        assert gap >= -1e-15


def test_imitation_constraint_values_and_gradient():
    fam = build_imitation_game().families[1].conditioned_on(np.array([1.0, 2.0, 0.0, 0.0]))
    assert fam.evaluate(0.05, np.array([1.0, 2.0])) == -0.05
    z = np.array([1.0, 2.0]) + np.array([0.6, 0.8]) * 1.5
    assert np.linalg.norm(fam.gradient(0.0, z)) == pytest.approx(3.0)
    assert fam.exact_set_distance(z) == pytest.approx(1.5)


def test_imitation_needs_anchor():
    fam = ImitationFamily(xi_max=0.1, mg_bound=1.0, regularity_c=1.0)
    with pytest.raises(ValueError):
        fam.evaluate(0.0, np.zeros(2))


def test_calibration_ratio_imitation_at_unit_distance():
    fam = ImitationFamily(xi_max=0.1, mg_bound=1.0, regularity_c=1.0).conditioned_on(np.zeros(4))
    expected = 1.0 / ((1 - 0.9**3) / (3 * 0.1))  # dist^2 / E[(1 - xi)^2]
    assert expected == pytest.approx(1.107, abs=1e-3)
    ratio = regularity_ratios(fam, np.array([[0.6, 0.8]]), np.random.default_rng(0), n_handles=400000)
    assert ratio[0] == pytest.approx(expected, rel=2e-3)


def test_calibration_halfspace_ratio_and_safety_factor():
    fam = HalfspaceFamily(np.array([[0.6, 0.8]]), np.array([0.5]))
    pts = np.array([[3.0, 1.0], [2.0, 2.0]])
    r = regularity_ratios(fam, pts, np.random.default_rng(0), n_handles=10)
    np.testing.assert_allclose(r, 1.0, rtol=1e-14)
    assert calibrate_c(fam, FullSpace(2), 2, np.random.default_rng(0), points=pts) == pytest.approx(2.0)


def test_calibration_all_feasible_defaults_to_one():
    fam = HalfspaceFamily(np.array([[1.0, 0.0]]), np.array([100.0]))
    assert calibrate_c(fam, Box.uniform(2, -1, 1), 20, np.random.default_rng(0)) == 1.0


def test_instance_roundtrip(tmp_path):
    prob = build_matrix_game(MatrixGameSpec(n_per_agent=4, n_constraints=12, seed=1))
    path = save_instance(prob, tmp_path / "mg.npz")
    back = load_instance(path)
    assert back.xstar.tobytes() == prob.xstar.tobytes()
    assert back.mapping.matrix.tobytes() == prob.mapping.matrix.tobytes()
    for a, b in zip(prob.families, back.families):
        assert a.matrices.tobytes() == b.matrices.tobytes()
        assert (a.mg_bound, a.regularity_c) == (b.mg_bound, b.regularity_c)
    x = np.random.default_rng(0).normal(size=8)
    np.testing.assert_array_equal(back.mapping(x), prob.mapping(x))
    im = build_imitation_game(ImitationGameSpec(xi_max=0.05))
    back_im = load_instance(save_instance(im, tmp_path / "im.npz"))
    assert back_im.families[1].xi_max == 0.05


def test_instance_rejects_foreign_file(tmp_path):
    p = tmp_path / "x.npz"
    np.savez(p, header=np.frombuffer(b'{"format": "other", "version": 1}', dtype=np.uint8))
    with pytest.raises(ValueError):
        load_instance(p)
