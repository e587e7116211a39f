import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliczkit.bodies import Ball, HPolytope, hausdorff, random_linear_map, random_polygon, regular_polygon, square
from orliczkit.errors import OrliczError
from orliczkit.orlicz_fn import power_law
from orliczkit.petty import (
    PettyOptions,
    objective_hom,
    objective_nonhom,
    polar_hull_volume,
    solve_affine_star,
    solve_petty,
    tightness_check,
)
from orliczkit.sphere import uniform_grid

SQUARE_VALUE = 8 * np.sqrt(2 / np.pi)
SQUARE_SUPPORT = np.sqrt(2 / np.pi)
seeds = st.integers(0, 2**31 - 1)


@pytest.mark.parametrize("s", [0.3, 1.0, 7.0])
def test_objective_on_square_dilates(s):
    assert objective_hom(square(), np.full(4, s), power_law(1)) == pytest.approx(SQUARE_VALUE, rel=1e-14)


def test_objective_on_ball_grid():
    B = Ball(2, 1.0, uniform_grid(512))
    # the polar of M(1) is the inscribed 512-gon, area (N/2) sin(2 pi/N)
    polar_area = 256 * np.sin(2 * np.pi / 512)
    expected = 2 * np.pi * np.sqrt(polar_area / np.pi)
    assert objective_hom(B, np.ones(512), power_law(1)) == pytest.approx(expected, rel=1e-12)


@given(seeds, st.floats(0.05, 20.0))
def test_objectives_are_scale_invariant(seed, t):
    rng = np.random.default_rng(seed)
    K = random_polygon(rng)
    h = K.edge_support * np.exp(0.2 * rng.standard_normal(len(K.edge_support)))
    for phi in (power_law(2), power_law(0.5), power_law(-0.5)):
        assert objective_hom(K, t * h, phi) == pytest.approx(objective_hom(K, h, phi), rel=1e-10)
        assert objective_nonhom(K, t * h, phi) == pytest.approx(objective_nonhom(K, h, phi), rel=1e-10)


def test_polar_hull_volume_gradient_matches_differences():
    rng = np.random.default_rng(2)
    U = uniform_grid(12).nodes
    h = np.exp(0.1 * rng.standard_normal(12))
    A, g = polar_hull_volume(U, h)
    for i in range(12):
        step = np.zeros(12)
        step[i] = 1e-6
        Ap, _ = polar_hull_volume(U, h * np.exp(step))
        Am, _ = polar_hull_volume(U, h * np.exp(-step))
        assert (Ap - Am) / 2e-6 == pytest.approx(g[i], rel=1e-6, abs=1e-9)


def test_square_petty_body():
    r = solve_petty(square(), power_law(1))
    assert r.value == pytest.approx(SQUARE_VALUE, abs=1e-8)
    assert np.allclose(r.M.support(r.M.normals), SQUARE_SUPPORT, atol=1e-8)
    assert r.polar_residual <= 1e-8
    assert np.max(np.abs(r.tightness)) <= 1e-9
    assert r.value <= r.reference * (1 + 1e-12)
    assert r.verdict == "ok"


def test_tightness_with_diagonal_normals():
    r = solve_petty(square(), power_law(1))
    rep = tightness_check(square(), r)
    assert rep.drift <= 1e-6
    assert rep.min_slack >= -1e-9


def test_hexagon_pow2_slacks():
    r = solve_petty(regular_polygon(6), power_law(2))
    assert np.max(np.abs(r.tightness)) <= 1e-6
    assert np.min(r.tightness) >= -1e-9


@settings(max_examples=5)
@given(seeds)
def test_special_linear_invariance(seed):
    rng = np.random.default_rng(seed)
    K = random_polygon(rng, m_range=(5, 8))
    A = random_linear_map(rng)
    A = A / np.sqrt(abs(np.linalg.det(A)))
    phi = power_law(2)
    v1 = solve_petty(K, phi, opts=PettyOptions(starts=3)).value
    v2 = solve_petty(K.linear_image(A), phi, opts=PettyOptions(starts=3)).value
    assert v2 == pytest.approx(v1, rel=1e-5)


def test_dilation_scaling():
    K = random_polygon(np.random.default_rng(4))
    phi = power_law(0.5)
    v1 = solve_petty(K, phi, opts=PettyOptions(starts=3)).value
    v2 = solve_petty(K.linear_image(2.5 * np.eye(2)), phi, opts=PettyOptions(starts=3)).value
    assert v2 == pytest.approx(2.5 * v1, rel=1e-5)


def test_mahler_product_on_square():
    r = solve_petty(square(), power_law(2))
    assert r.M.volume() * r.M.polar_volume() == pytest.approx(8.0, abs=1e-6)


@given(seeds)
def test_midpoint_polar_volume(seed):
    rng = np.random.default_rng(seed)
    U = uniform_grid(10).nodes
    omega = np.pi
    hs = []
    for _ in range(2):
        h = np.exp(0.3 * rng.standard_normal(10))
        A, _ = polar_hull_volume(U, h)
        hs.append(h * (A / omega) ** 0.5)
    A_mid, _ = polar_hull_volume(U, 0.5 * (hs[0] + hs[1]))
    assert A_mid <= omega * (1 + 1e-12)


def test_thread_count_does_not_change_result():
    K = random_polygon(np.random.default_rng(8))
    a = solve_petty(K, power_law(2), opts=PettyOptions(starts=4, threads=1))
    b = solve_petty(K, power_law(2), opts=PettyOptions(starts=4, threads=4))
    assert a.value == b.value
    assert np.array_equal(a.h, b.h)


def test_multistart_records():
    r = solve_petty(square(), power_law(2), opts=PettyOptions(starts=5, seed=3))
    assert [s.label for s in r.starts] == ["K", "ball", "random-0", "random-1", "random-2"]
    assert r.value == min(s.value for s in r.starts)
    assert isinstance(r.trace, list)


def test_phi2_full_cone_is_degenerate():
    r = solve_petty(square(), power_law(-0.5))
    assert r.degenerate
    assert r.verdict.startswith("degenerate: objective unbounded toward 0")
    assert r.value < 1e-6 * r.reference


def test_nonhom_phi2_grows():
    r = solve_petty(square(), power_law(-0.5), mode="nonhom")
    assert r.degenerate
    assert "infinity" in r.verdict
    assert r.value > r.reference


def test_psi_is_a_maximum_with_flag():
    r = solve_petty(square(), power_law(-3))
    assert "maximizer existence unproven" in r.flags
    assert r.value >= r.reference * (1 - 1e-12)


def test_unknown_mode_and_class():
    with pytest.raises(OrliczError):
        solve_petty(square(), power_law(1), mode="other")
    with pytest.raises(OrliczError, match="none of"):
        solve_petty(square(), power_law(-2))


def test_symmetric_cone_on_ball_grid():
    B = Ball(2, 1.0, uniform_grid(256))
    r = solve_petty(B, power_law(-0.5), cone="sym", opts=PettyOptions(starts=2))
    assert r.value == pytest.approx(2 * np.pi, rel=1e-4)
    assert not r.degenerate


def test_petty_body_of_ball_is_ball():
    B = Ball(2, 1.0, uniform_grid(256))
    r = solve_petty(B, power_law(2), opts=PettyOptions(starts=2))
    assert hausdorff(r.M, Ball(2)) < 1e-3


def test_affine_star_square_below_geominimal():
    r = solve_affine_star(square(), power_law(1), opts=PettyOptions(starts=2))
    assert r.value <= SQUARE_VALUE + 1e-6
    assert r.polar_residual < 1e-12


def test_three_dimensional_cube():
    U = np.vstack([np.eye(3), -np.eye(3)])
    from orliczkit.bodies import WulffPolytope

    C = WulffPolytope(U, np.ones(6))
    r = solve_petty(C, power_law(1), opts=PettyOptions(starts=2))
    # cube dilates are optimal by symmetry; |C polar| = 4/3, so J = 24 (4/(3 omega_3))^(1/3)
    assert r.value == pytest.approx(24 * (4 / 3 / (4 * np.pi / 3)) ** (1 / 3), rel=1e-8)


def test_hpolytope_from_result_directions():
    r = solve_petty(square(), power_law(1))
    M = HPolytope(r.directions, r.h)
    assert M.polar_volume() == pytest.approx(np.pi, rel=1e-12)
