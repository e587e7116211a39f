import numpy as np
import pytest
from scipy.special import beta

from orliczkit.errors import OrliczError
from orliczkit.orlicz_fn import (
    abs_dot_integral,
    admissible_class,
    check_symmetric_integrability,
    classify,
    custom,
    expm1_normalized,
    parse_phi,
    power_law,
    power_tags,
    table_from_arrays,
)
from orliczkit.sphere import uniform_grid


@pytest.mark.parametrize(
    "p, n, cls",
    [(2, 2, "Phi1"), (0.5, 2, "Phi1"), (-0.5, 2, "Phi2"), (-1.5, 2, "Phi2"), (-3, 2, "Psi"),
     (-2, 2, "none"), (-2.5, 3, "Phi2"), (-4, 3, "Psi")],
)
def test_power_classes(p, n, cls):
    assert admissible_class(power_law(p), n) == cls


@pytest.mark.parametrize("p", [3.0, 1.0, 0.5, -0.5, -1.5, -3.0])
def test_numeric_classification_agrees_with_exact_tags(p):
    exact = power_tags(p, 2)
    numeric = classify(custom(lambda t, p=p: np.power(t, p), name=f"c{p}"), 2)
    assert exact == numeric.tags
    assert numeric.provenance.startswith("numeric")


def test_expm1_is_increasing_convex_phi1():
    phi = expm1_normalized()
    assert phi(1.0) == pytest.approx(1.0, rel=1e-15)
    tags = classify(phi, 2).tags
    assert {"I", "convex", "Phi1"} <= tags
    assert "trimmed" in classify(phi, 2).provenance


def test_boundary_power_is_not_admissible():
    assert "boundary" in classify(power_law(-2.0), 2).tags


def test_parse_phi_specs(tmp_path):
    assert parse_phi("pow:-1/2").power == -0.5
    assert parse_phi("pow:2").name == "pow:2"
    assert parse_phi("expm1").kind == "I"
    f = tmp_path / "phi.txt"
    f.write_text("0.5 0.25\n1 1\n2 4\n")
    tab = parse_phi(f"table:{f}")
    assert tab(np.array([0.5, 1.0, 1.5])) == pytest.approx([0.25, 1.0, 2.25], rel=1e-12)
    with pytest.raises(OrliczError):
        parse_phi("cosh")
    with pytest.raises(OrliczError):
        parse_phi("pow:abc")


def test_table_requires_normalization_and_monotonicity():
    with pytest.raises(OrliczError, match="phi\\(1\\)"):
        table_from_arrays([0.5, 2.0], [0.4, 3.0])
    with pytest.raises(OrliczError, match="monotone"):
        table_from_arrays([0.5, 1.0, 2.0], [0.5, 1.0, 0.8])


def test_table_one_sided_derivatives():
    tab = table_from_arrays([0.5, 1.0, 2.0], [0.5**2, 1.0, 2.0])
    assert tab.left_d1 == pytest.approx(2.0)
    assert tab.right_d1 == pytest.approx(1.0)


def test_values_at_zero_follow_monotonicity():
    assert power_law(2)(0.0) == 0.0
    assert power_law(-1)(0.0) == np.inf


@pytest.mark.parametrize("p", [-0.5, -0.25, -0.9])
def test_abs_dot_integral_matches_closed_form(p):
    r = abs_dot_integral(power_law(p), 1.0, uniform_grid(512), np.array([np.cos(0.3), np.sin(0.3)]))
    assert r.converged
    assert r.value == pytest.approx(2 * beta((p + 1) / 2, 0.5), rel=1e-10)


def test_integrability_condition():
    g = uniform_grid(256)
    assert check_symmetric_integrability(power_law(-0.5), g).satisfied
    bad = check_symmetric_integrability(power_law(-1.5), g)
    assert bad.verdict == "condition violated"
    with pytest.raises(OrliczError):
        bad.require()
    with pytest.raises(OrliczError):
        check_symmetric_integrability(power_law(1.0), g)
