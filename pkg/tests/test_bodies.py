import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orliczkit.bodies import (
    Ball,
    GridBody,
    HPolytope,
    Polygon,
    aleksandrov_body,
    ellipsoid,
    hausdorff,
    random_linear_map,
    random_polygon,
    regular_polygon,
    square,
    vrad,
)
from orliczkit.errors import OrliczError
from orliczkit.sphere import lebedev_grid, uniform_grid

seeds = st.integers(0, 2**31 - 1)


def test_square_basics(unit_square):
    K = unit_square
    assert K.volume() == 4.0
    assert K.polar_volume() == pytest.approx(2.0, rel=1e-15)
    assert np.allclose(K.support(np.array([[1.0, 0.0], [np.sqrt(0.5), np.sqrt(0.5)]])), [1.0, np.sqrt(2)])
    sm = K.surface_measure()
    assert sm.total == pytest.approx(8.0)
    assert sm.n_volume == pytest.approx(8.0)
    assert np.allclose(K.centroid(), 0.0)


def test_polygon_rejects_bad_input():
    with pytest.raises(OrliczError, match="origin"):
        Polygon([[1, 1], [2, 1], [2, 2], [1, 2]])
    with pytest.raises(OrliczError, match="convex"):
        Polygon([[1, 0], [0, 0.1], [-1, 0], [0, 1]])
    with pytest.raises(OrliczError):
        Polygon([[1, 0], [0, 1]])


def test_clockwise_input_is_reoriented():
    K = Polygon([[1, -1], [-1, -1], [-1, 1], [1, 1]])
    assert K.volume() == pytest.approx(4.0)


@given(seeds)
def test_polar_radial_support_duality(seed):
    K = random_polygon(np.random.default_rng(seed))
    rng = np.random.default_rng(seed + 1)
    U = rng.standard_normal((50, 2))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    assert np.allclose(K.polar().radial(U), 1.0 / K.support(U), rtol=1e-12)


@given(seeds)
def test_minkowski_closure_of_surface_measure(seed):
    K = random_polygon(np.random.default_rng(seed))
    assert K.surface_measure().closure < 1e-12


@given(seeds)
def test_linear_image_scales_volume(seed):
    rng = np.random.default_rng(seed)
    K = random_polygon(rng)
    A = random_linear_map(rng)
    assert K.linear_image(A).volume() == pytest.approx(abs(np.linalg.det(A)) * K.volume(), rel=1e-12)


def test_hpolytope_drops_redundant_halfspaces():
    U = np.array([[1, 0], [0, 1], [-1, 0], [0, -1], [np.sqrt(0.5), np.sqrt(0.5)]])
    P = HPolytope(U, [1, 1, 1, 1, 5])
    assert P.volume() == pytest.approx(4.0)
    assert list(P.input_surface_masses()) == pytest.approx([2, 2, 2, 2, 0])


def test_hpolytope_unbounded_directions():
    with pytest.raises(OrliczError, match="bound"):
        HPolytope([[1, 0], [0, 1], [-1, 0]], [1, 1, 1])


def test_grid_disk_matches_ball():
    g = uniform_grid(512)
    D = Ball(2, 1.0, g).as_grid()
    assert D.volume() == pytest.approx(np.pi, rel=1e-14)
    assert D.polar_volume() == pytest.approx(np.pi, rel=1e-14)
    assert vrad(Ball(2, 2.0)) == pytest.approx(2.0)


def test_ellipsoid_volume_and_linear_image():
    g = uniform_grid(1024)
    E = ellipsoid(np.diag([2.0, 1.0]), g)
    assert E.volume() == pytest.approx(2 * np.pi, rel=1e-12)
    # exact through the ball, second order in the grid spacing through samples
    assert np.allclose(Ball(2, 1.0, g).linear_image(np.diag([2.0, 1.0])).h, E.h, rtol=1e-14)
    F = Ball(2, 1.0, g).as_grid().linear_image(np.diag([2.0, 1.0]))
    assert np.allclose(F.h, E.h, rtol=1e-4)
    assert np.allclose(F.f, E.f, rtol=1e-4)


def test_ellipsoid_three_dims():
    E = ellipsoid(np.diag([1.0, 2.0, 3.0]), lebedev_grid(590))
    assert E.volume() == pytest.approx(4 * np.pi / 3 * 6, rel=1e-6)


def test_grid_body_without_curvature_uses_wulff_shape():
    g = uniform_grid(256)
    K = GridBody(g, square().support(g.nodes))
    assert K.volume() == pytest.approx(4.0, rel=1e-12)
    with pytest.raises(OrliczError, match="curvature"):
        K.surface_measure()


def test_hausdorff_between_polygons():
    assert hausdorff(square(1.0), square(1.5)) == pytest.approx(0.5 * np.sqrt(2), rel=1e-12)
    assert hausdorff(square(), square()) == 0.0
    d = hausdorff(regular_polygon(256), Ball(2))
    assert d == pytest.approx(1 - np.cos(np.pi / 256), rel=1e-6)


def test_aleksandrov_body_is_largest():
    U = uniform_grid(16).nodes
    f = np.where(np.arange(16) % 2 == 0, 1.0, 3.0)
    K = aleksandrov_body(U, f)
    assert np.all(K.support(U) <= f + 1e-12)
    # the unit-support directions cut out a regular octagon
    assert K.volume() == pytest.approx(8 * np.tan(np.pi / 8), rel=1e-12)
