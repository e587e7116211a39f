import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orliczkit.bodies import Ball, random_polygon, square
from orliczkit.errors import OrliczError
from orliczkit.mixed_vol import nonhom_mixed_volume
from orliczkit.orlicz_add import lp_sum_support, orlicz_add, variational_mixed_volume
from orliczkit.orlicz_fn import expm1_normalized, power_law

seeds = st.integers(0, 2**31 - 1)


@given(seeds, st.sampled_from([0.5, 1.0, 2.0, 3.0]), st.floats(1e-3, 1.0))
def test_lp_specialization(seed, p, eps):
    rng = np.random.default_rng(seed)
    K, L = random_polygon(rng), random_polygon(rng)
    phi = power_law(p)
    s = orlicz_add(K, L, phi, phi, eps)
    assert np.allclose(s.f, lp_sum_support(s.h_K, s.h_L, p, eps), rtol=1e-12, atol=0)


@given(seeds, st.floats(1e-4, 1.0))
def test_defining_equation_residual(seed, eps):
    rng = np.random.default_rng(seed)
    K, L = random_polygon(rng), random_polygon(rng)
    s = orlicz_add(K, L, power_law(0.5), expm1_normalized(), eps)
    assert s.residual() < 1e-12


def test_decreasing_pair_shrinks_support():
    # phi in D: the sum with eps > 0 has f below h_K
    s = orlicz_add(square(), Ball(2), power_law(-0.5), power_law(-1.0), 0.1)
    assert np.all(s.f < s.h_K)
    assert s.residual() < 1e-12


def test_mixed_classes_rejected():
    with pytest.raises(OrliczError, match="monotonicity"):
        orlicz_add(square(), Ball(2), power_law(1), power_law(-1), 0.1)
    with pytest.raises(OrliczError):
        orlicz_add(square(), Ball(2), power_law(1), power_law(1), 0.0)


def test_difference_quotient_converges_uniformly():
    K, L = square(), Ball(2)
    phi1, phi2 = power_law(2.0), power_law(0.5)
    errs = []
    for eps in [1e-1, 1e-2, 1e-3, 1e-4]:
        s = orlicz_add(K, L, phi1, phi2, eps)
        target = s.h_K * phi2(s.h_L / s.h_K)
        errs.append(np.max(np.abs(phi1.left_d1 * (s.f - s.h_K) / eps - target)))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_variational_estimate_for_decreasing_pair():
    r = variational_mixed_volume(square(), Ball(2), power_law(-1.0), power_law(-0.5))
    assert r.rel_error < 5e-3
    assert r.direct == pytest.approx(nonhom_mixed_volume(square(), Ball(2), power_law(-0.5)))


def test_enrichment_diagnostic_is_reported():
    r = variational_mixed_volume(square(), Ball(2), power_law(1.0), power_law(2.0), check_enrichment=True)
    assert r.enrichment["directions"] == 2048
    assert r.enrichment["estimate_change"] < 1e-8
    assert r.enrichment["volume_change"] < 1e-6


def test_rows_table():
    r = variational_mixed_volume(square(), Ball(2), power_law(1.0), power_law(1.0), [0.1, 0.05, 0.025])
    rows = r.rows()
    assert [row["eps"] for row in rows] == [0.1, 0.05, 0.025]
    assert r.estimate == pytest.approx(r.direct, rel=1e-6)
