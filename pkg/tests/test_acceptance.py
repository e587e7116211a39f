"""Acceptance criteria 1-15.  Each test prints one PASS/FAIL line (run with -s to see them)."""

import itertools

import numpy as np
import pytest

from orliczkit.bodies import Ball, HPolytope, ellipsoid, hausdorff, random_linear_map, random_polygon, square
from orliczkit.errors import OrliczError
from orliczkit.functionals import (
    affine,
    certify,
    cnp_constant,
    geominimal,
    polygon_family,
    probe_continuity,
    probe_degeneracy,
)
from orliczkit.mixed_vol import hom_mixed_volume, lp_closed_form
from orliczkit.orlicz_add import variational_mixed_volume
from orliczkit.orlicz_fn import power_law
from orliczkit.petty import PettyOptions, solve_petty
from orliczkit.sphere import uniform_grid

from conftest import PHI_MATRIX, centered, phi_from, polygons


def report(number: int, ok: bool, message: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {message}")
    assert ok, message


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def test_criterion_01_volume_identity():
    worst = 0.0
    for K in polygons(20, seed=101):
        for spec in PHI_MATRIX:
            worst = max(worst, rel(hom_mixed_volume(K, K, phi_from(spec)).value, 2 * K.volume()))
    report(1, worst <= 1e-9, f"max rel error of V(K,K) vs n|K| = {worst:.2e} (tol 1e-9)")


def test_criterion_02_lp_oracle():
    rng = np.random.default_rng(102)
    worst = 0.0
    powers = [spec for spec in PHI_MATRIX if spec.startswith("pow:")]
    for _ in range(20):
        K, L = random_polygon(rng), random_polygon(rng)
        for spec in powers:
            phi = phi_from(spec)
            worst = max(worst, rel(hom_mixed_volume(K, L, phi).value, lp_closed_form(K, L, phi.power)))
    report(2, worst <= 1e-9, f"max rel error vs L_p closed form over {len(powers)} powers = {worst:.2e} (tol 1e-9)")


def test_criterion_03_homogeneity_and_equivariance():
    rng = np.random.default_rng(103)
    worst_scale, worst_linear = 0.0, 0.0
    specs = itertools.cycle(PHI_MATRIX)
    for _ in range(50):
        K, L = random_polygon(rng), random_polygon(rng)
        A = random_linear_map(rng)
        phi = phi_from(next(specs))
        s, t = rng.uniform(0.2, 5.0, 2)
        base = hom_mixed_volume(K, L, phi).value
        scaled = hom_mixed_volume(K.linear_image(s * np.eye(2)), L.linear_image(t * np.eye(2)), phi).value
        worst_scale = max(worst_scale, rel(scaled, s * t * base))
        # (A^-t L) polar = A (L polar)
        lhs = hom_mixed_volume(K.linear_image(A), L.linear_image(np.linalg.inv(A).T).polar(), phi).value
        rhs = abs(np.linalg.det(A)) * hom_mixed_volume(K, L.polar(), phi).value
        worst_linear = max(worst_linear, rel(lhs, rhs))
    ok = worst_scale <= 1e-8 and worst_linear <= 1e-7
    report(3, ok, f"scaling rel error {worst_scale:.2e} (tol 1e-8), linear rel error {worst_linear:.2e} (tol 1e-7)")


def test_criterion_04_ball_values():
    grid = uniform_grid(512)
    B = Ball(2, 1.0, grid)
    g, res = geominimal(B, power_law(1))
    a, _ = affine(B, power_law(1), grid)
    dist = hausdorff(res.M, Ball(2))
    ok = abs(g - 2 * np.pi) <= 1e-4 and abs(a - 2 * np.pi) <= 1e-4 and dist <= 1e-3
    report(4, ok, f"geominimal-2pi {g - 2 * np.pi:.2e}, affine-2pi {a - 2 * np.pi:.2e} (tol 1e-4), "
                  f"Hausdorff(M, B) {dist:.2e} (tol 1e-3)")


def _square_objective(h2, h3, h4, h1=1.0):
    # J = sum_i h_i S_i * (|M polar| / pi)^(1/2) with S_i = 2 and the kite polar
    area = 0.5 * (1 / h1 + 1 / h3) * (1 / h2 + 1 / h4)
    return 2 * (h1 + h2 + h3 + h4) * np.sqrt(area / np.pi)


def _brute_force_square(step=1e-3):
    lo, hi, coarse = 0.5, 2.0, 0.05
    axis = np.arange(lo, hi + coarse / 2, coarse)
    H = np.meshgrid(axis, axis, axis, indexing="ij")
    J = _square_objective(*H)
    centre = [H[i].flat[np.argmin(J)] for i in range(3)]
    axes = [np.arange(c - coarse, c + coarse + step / 2, step) for c in centre]
    H = np.meshgrid(*axes, indexing="ij")
    J = _square_objective(*H)
    k = np.argmin(J)
    h = np.array([1.0] + [H[i].flat[k] for i in range(3)])
    area = 0.5 * (1 / h[0] + 1 / h[2]) * (1 / h[1] + 1 / h[3])
    return float(J.flat[k]), h * np.sqrt(area / np.pi)


def test_criterion_05_square_petty_body():
    # AM-GM with a = h1 + h3, b = h2 + h4: 1/h1 + 1/h3 >= 4/a, so
    # J >= 8 (a + b) / sqrt(2 pi a b) >= 16 / sqrt(2 pi), equality iff all h_i agree
    target = 16 / np.sqrt(2 * np.pi)
    assert _square_objective(1.0, 1.0, 1.0) == pytest.approx(target, rel=1e-15)
    res = solve_petty(square(), power_law(1))
    support = res.M.support(square().edge_normals)
    brute_value, brute_h = _brute_force_square()
    ok = (abs(res.value - target) <= 1e-4 and np.max(np.abs(support - np.sqrt(2 / np.pi))) <= 1e-4
          and abs(brute_value - target) <= 1e-3 and np.max(np.abs(brute_h - np.sqrt(2 / np.pi))) <= 1e-3)
    report(5, ok, f"value-8sqrt(2/pi) {res.value - target:.2e}, support dev "
                  f"{np.max(np.abs(support - np.sqrt(2 / np.pi))):.2e} (tol 1e-4); grid search value dev "
                  f"{brute_value - target:.2e}, support dev {np.max(np.abs(brute_h - np.sqrt(2 / np.pi))):.2e} "
                  f"(tol 1e-3)")


def test_criterion_06_ellipse():
    E = ellipsoid(np.diag([2.0, 1.0]), uniform_grid(512))
    value, _ = geominimal(E, power_law(1))
    err = abs(value - np.sqrt(2) * 2 * np.pi)
    report(6, err <= 1e-3, f"|G(diag(2,1)B) - sqrt(2) 2pi| = {err:.2e} (tol 1e-3)")


def test_criterion_07_mahler():
    worst = -np.inf
    for K in polygons(20, seed=107):
        Kc = centered(K)
        for p in (1.0, 2.0):
            c = certify("mahler", Kc, power_law(p))
            worst = max(worst, c.lhs - c.rhs)
    eq = certify("mahler", square(), power_law(2))
    ok = worst <= 1e-8 and abs(eq.lhs - eq.rhs) <= 1e-6
    report(7, ok, f"max |M||M polar| - |K||K polar| = {worst:.2e} (tol 1e-8); "
                  f"square gap {abs(eq.lhs - eq.rhs):.2e} (tol 1e-6)")


def test_criterion_08_isoperimetric():
    worst = np.inf
    for K in polygons(20, seed=108):
        for p in (0.5, 1.0, 2.0):
            worst = min(worst, certify("isoperimetric", centered(K), power_law(p)).slack)
    report(8, worst >= -1e-6, f"min slack {worst:.2e} (tol -1e-6)")


def test_criterion_09_cyclic():
    worst = np.inf
    for K in polygons(10, seed=109):
        for p, q in ((0.5, 1.0), (1.0, 2.0), (0.5, 2.0)):
            worst = min(worst, certify("cyclic", K, power_law(p), psi=power_law(q)).slack)
    report(9, worst >= -1e-5, f"min slack {worst:.2e} (tol -1e-5)")


def test_criterion_10_geometric_interpretation():
    pairs = [(square(), Ball(2)), (Ball(2), square().linear_image(np.diag([2.0, 1.0])))]
    worst = 0.0
    count = 0
    for K, L in pairs:
        for p1, p2 in itertools.product((0.5, 1.0, 2.0), repeat=2):
            r = variational_mixed_volume(K, L, power_law(p1), power_law(p2))
            worst = max(worst, r.rel_error)
            count += 1
    report(10, worst <= 5e-3, f"max rel error of extrapolated estimate over {count} cases = {worst:.2e} (tol 5e-3)")


def test_criterion_11_degeneracy():
    rep = probe_degeneracy(square(), power_law(-0.5), [2.0**-k for k in range(9)])
    hom, non = rep.details["hom_ratio"], rep.details["nonhom_ratio"]
    report(11, rep.verdict == "degenerate",
           f"hom ratio {hom:.3e} (needs < 1e-3), nonhom ratio {non:.3e} (needs > 1e3) at eps = 2^-8")


def test_criterion_12_continuity():
    rep = probe_continuity(polygon_family(), power_law(1), Ball(2))
    errs = rep.columns["abs_error"]
    report(12, rep.verdict == "converging",
           "|G(P_m) - 2pi| = " + ", ".join(f"{e:.2e}" for e in errs) + " (decreasing, last <= 5e-3)")


def test_criterion_13_cnp_constant():
    rep = cnp_constant(-0.5, trials=64, seed=113)
    spread, err = rep.details["relative_spread"], rep.details["relative_error"]
    report(13, spread <= 1e-6 and err <= 1e-6, f"relative spread {spread:.2e}, oracle rel error {err:.2e} (tol 1e-6)")


def _normalized(directions, h):
    P = HPolytope(directions, h)
    scale = np.sqrt(P.polar_volume() / np.pi)
    return HPolytope(directions, h * scale)


def test_criterion_14_uniqueness():
    worst = 0.0
    for K in polygons(10, seed=114):
        res = solve_petty(K, power_law(2), opts=PettyOptions(starts=8))
        bodies = [_normalized(res.directions, s.h) for s in res.starts]
        for A, B in itertools.combinations(bodies, 2):
            worst = max(worst, hausdorff(A, B))
    report(14, worst <= 1e-6, f"max pairwise Hausdorff distance between 8 starts = {worst:.2e} (tol 1e-6)")


def test_criterion_15_aleksandrov_identity():
    rng = np.random.default_rng(115)
    worst = 0.0
    done = 0
    while done < 50:
        m = int(rng.integers(3, 16))
        angles = np.sort(rng.uniform(0, 2 * np.pi, m))
        U = np.column_stack([np.cos(angles), np.sin(angles)])
        f = rng.uniform(0.5, 2.0, m)
        try:
            K = HPolytope(U, f)
        except OrliczError:
            continue  # directions leave the intersection unbounded
        mixed = 0.5 * float(np.dot(f, K.input_surface_masses()))
        worst = max(worst, rel(mixed, K.volume()))
        done += 1
    report(15, worst <= 1e-10, f"max rel error |K_f| vs V_1(K_f, f) over 50 sets = {worst:.2e} (tol 1e-10)")

