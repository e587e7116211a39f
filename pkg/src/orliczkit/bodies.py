"""Convex and star bodies given by vertices, halfspaces, grid samples or as balls."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection

from .errors import OrliczError
from .sphere import SphereGrid, angles_to_dirs, ball_volume, check_dim, default_grid, lebedev_grid

HULL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SurfaceMeasure:
    """Atoms of a surface area measure with the support of its body at each atom."""

    dirs: np.ndarray
    masses: np.ndarray
    support: np.ndarray
    grid: SphereGrid | None = None

    @property
    def dim(self) -> int:
        return self.dirs.shape[1]

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @property
    def closure(self) -> float:
        """Norm of the barycenter sum; zero for a closed body."""
        return float(np.linalg.norm(self.masses @ self.dirs))

    @property
    def n_volume(self) -> float:
        """Sum of h*S, which equals n times the volume."""
        return float(np.dot(self.support, self.masses))


def _as_dirs(u, n: int) -> tuple[np.ndarray, bool]:
    u = np.asarray(u, dtype=float)
    single = u.ndim == 1
    u = np.atleast_2d(u)
    if u.shape[-1] != n:
        raise OrliczError(f"direction dimension {u.shape[-1]} does not match body dimension {n}")
    return u, single


def _out(x: np.ndarray, single: bool):
    return float(x[0]) if single else x


class Body:
    """Common interface; subclasses fill in the geometry."""

    dim: int
    kind: str

    def support(self, u):
        raise OrliczError(f"{self.kind} has no support function")

    def radial(self, u):
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def polar_volume(self) -> float:
        raise NotImplementedError

    def surface_measure(self) -> SurfaceMeasure:
        raise NotImplementedError

    def centroid(self) -> np.ndarray:
        raise NotImplementedError

    def translate(self, z) -> "Body":
        raise NotImplementedError

    def linear_image(self, A) -> "Body":
        raise NotImplementedError

    def inner_outer_radii(self) -> tuple[float, float]:
        raise NotImplementedError

    def polar(self) -> "Body":
        raise NotImplementedError

    def critical_dirs(self) -> np.ndarray:
        return np.zeros((0, self.dim))


# ---------------------------------------------------------------------------
# planar polygons


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points, tol: float = HULL_TOL) -> np.ndarray:
    """Indices of the strict convex hull in counterclockwise order.

    Points within relative ``tol`` of an edge are discarded, so every
    returned point is a genuine corner.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    scale = float(np.max(np.abs(pts))) or 1.0

    def build(seq):
        chain: list[int] = []
        for i in seq:
            p = pts[i]
            while len(chain) >= 2:
                o, a = pts[chain[-2]], pts[chain[-1]]
                if _cross(o, a, p) > tol * scale * max(np.hypot(*(a - o)), np.hypot(*(p - o)), tol * scale):
                    break
                chain.pop()
            if chain and np.hypot(*(pts[chain[-1]] - p)) <= tol * scale:
                continue
            chain.append(int(i))
        return chain

    lower = build(order)
    upper = build(order[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.asarray(hull, dtype=int)


class Polygon(Body):
    """Convex polygon with the origin in its interior, vertices counterclockwise."""

    kind = "polygon"
    dim = 2

    def __init__(self, vertices, *, strict: bool = True):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 3:
            raise OrliczError("polygon needs at least three 2-d vertices")
        if not np.all(np.isfinite(V)):
            raise OrliczError("polygon vertices must be finite")
        signed = 0.5 * np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
        if signed < 0:
            V = V[::-1].copy()
        E = np.roll(V, -1, axis=0) - V
        lengths = np.hypot(E[:, 0], E[:, 1])
        if np.any(lengths <= 0):
            raise OrliczError("polygon has repeated vertices")
        turn = E[:, 0] * np.roll(E[:, 1], -1) - E[:, 1] * np.roll(E[:, 0], -1)
        scale = lengths * np.roll(lengths, -1)
        if np.any(turn <= (1e-12 * scale if strict else 0.0)):
            raise OrliczError("vertices are not in strictly convex position")
        normals = np.column_stack([E[:, 1], -E[:, 0]]) / lengths[:, None]
        h = np.einsum("ij,ij->i", V, normals)
        R = float(np.max(np.hypot(V[:, 0], V[:, 1])))
        # linear images may be very elongated; only rounding-level support is rejected there
        if np.any(h <= (1e-12 if strict else 8 * np.finfo(float).eps) * R):
            raise OrliczError("origin is not an interior point")
        self.vertices = V
        self.vertices.setflags(write=False)
        self.edge_normals = normals
        self.edge_lengths = lengths
        self.edge_support = h

    def support(self, u):
        u, single = _as_dirs(u, 2)
        return _out(np.max(u @ self.vertices.T, axis=1), single)

    def radial(self, u):
        u, single = _as_dirs(u, 2)
        g = np.max(u @ (self.edge_normals / self.edge_support[:, None]).T, axis=1)
        return _out(1.0 / g, single)

    def volume(self) -> float:
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        return float(0.5 * np.sum(V[:, 0] * W[:, 1] - W[:, 0] * V[:, 1]))

    def polar(self) -> "Polygon":
        return Polygon(self.edge_normals / self.edge_support[:, None], strict=False)

    def polar_volume(self) -> float:
        return self.polar().volume()

    def surface_measure(self) -> SurfaceMeasure:
        return SurfaceMeasure(self.edge_normals, self.edge_lengths, self.edge_support)

    def centroid(self) -> np.ndarray:
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        c = V[:, 0] * W[:, 1] - W[:, 0] * V[:, 1]
        return np.array([np.sum((V[:, 0] + W[:, 0]) * c), np.sum((V[:, 1] + W[:, 1]) * c)]) / (6 * self.volume())

    def translate(self, z) -> "Polygon":
        return Polygon(self.vertices + np.asarray(z, dtype=float), strict=False)

    def linear_image(self, A) -> "Polygon":
        A = np.asarray(A, dtype=float)
        if abs(np.linalg.det(A)) < 1e-300:
            raise OrliczError("linear map is singular")
        return Polygon(self.vertices @ A.T, strict=False)

    def inner_outer_radii(self) -> tuple[float, float]:
        return float(self.edge_support.min()), float(np.max(np.hypot(*self.vertices.T)))

    def critical_dirs(self) -> np.ndarray:
        return self.edge_normals


class HPolytope(Polygon):
    """Planar polytope from unit normals and support numbers.

    Halfspaces that do not carry an edge are dropped, so ``normals`` and
    ``supports`` list exactly the tight ones and ``tight`` indexes them in the
    input.  Edge ``i`` runs from ``vertices[i]`` to ``vertices[i+1]``.
    """

    kind = "hpolytope"

    def __init__(self, normals, supports, *, tol: float = HULL_TOL):
        U = np.asarray(normals, dtype=float)
        f = np.asarray(supports, dtype=float)
        if U.ndim != 2 or U.shape[1] != 2 or f.shape != (U.shape[0],):
            raise OrliczError("need an (m, 2) normal array and m supports")
        if not np.all(np.isfinite(f)):
            raise OrliczError("supports must be finite")
        if np.any(f <= 0):
            raise OrliczError("origin is not an interior point")
        norms = np.hypot(U[:, 0], U[:, 1])
        if np.any(norms == 0):
            raise OrliczError("zero normal")
        U = U / norms[:, None]
        pts = U / f[:, None]
        idx = convex_hull_2d(pts, tol)
        if len(idx) < 3:
            raise OrliczError("directions do not bound a polytope")
        Q = pts[idx]
        Qn = np.roll(Q, -1, axis=0)
        if np.any(Q[:, 0] * Qn[:, 1] - Q[:, 1] * Qn[:, 0] <= 0):
            raise OrliczError("directions do not bound a polytope")
        Qp = np.roll(Q, 1, axis=0)
        det = Qp[:, 0] * Q[:, 1] - Qp[:, 1] * Q[:, 0]
        verts = np.column_stack([Q[:, 1] - Qp[:, 1], Qp[:, 0] - Q[:, 0]]) / det[:, None]
        super().__init__(verts, strict=False)
        self.tight = idx
        self.normals = U[idx]
        self.supports = f[idx]
        self.input_normals = U
        self.input_supports = f

    def surface_measure(self) -> SurfaceMeasure:
        return SurfaceMeasure(self.normals, self.edge_lengths, self.supports)

    def input_surface_masses(self) -> np.ndarray:
        """Edge length for every input halfspace, zero for the redundant ones."""
        out = np.zeros(len(self.input_supports))
        out[self.tight] = self.edge_lengths
        return out


def aleksandrov_body(directions, f, *, tol: float = HULL_TOL) -> Body:
    """Largest convex body with support at most f[i] in direction directions[i]."""
    U = np.asarray(directions, dtype=float)
    if U.shape[1] == 2:
        return HPolytope(U, f, tol=tol)
    return WulffPolytope(U, f)


class WulffPolytope(Body):
    """Intersection of halfspaces in R^3, vertices from qhull."""

    kind = "wulff"
    dim = 3

    def __init__(self, normals, supports):
        U = np.asarray(normals, dtype=float)
        U = U / np.linalg.norm(U, axis=1, keepdims=True)
        f = np.asarray(supports, dtype=float)
        if np.any(f <= 0):
            raise OrliczError("origin is not an interior point")
        hs = HalfspaceIntersection(np.column_stack([U, -f]), np.zeros(3))
        self.vertices = hs.intersections
        self.normals = U
        self.supports = f
        self._hull = ConvexHull(self.vertices)

    def support(self, u):
        u, single = _as_dirs(u, 3)
        return _out(np.max(u @ self.vertices.T, axis=1), single)

    def radial(self, u):
        u, single = _as_dirs(u, 3)
        return _out(1.0 / np.max(u @ (self.normals / self.supports[:, None]).T, axis=1), single)

    def volume(self) -> float:
        return float(self._hull.volume)

    def polar_volume(self) -> float:
        return float(ConvexHull(self.normals / self.supports[:, None]).volume)

    def centroid(self) -> np.ndarray:
        return _hull_centroid(self.vertices, self._hull)

    def inner_outer_radii(self) -> tuple[float, float]:
        return float(self.supports.min()), float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def facet_areas(self) -> np.ndarray:
        """Area of the face with each input normal, zero for redundant halfspaces."""
        hull = self._hull
        tri = self.vertices[hull.simplices]
        area = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)
        match = np.argmax(hull.equations[:, :3] @ self.normals.T, axis=1)
        return np.bincount(match, weights=area, minlength=len(self.normals))

    def surface_measure(self) -> SurfaceMeasure:
        S = self.facet_areas()
        live = S > 1e-14 * S.sum()
        return SurfaceMeasure(self.normals[live], S[live], self.supports[live])

    def critical_dirs(self) -> np.ndarray:
        return self.normals


def _hull_centroid(points: np.ndarray, hull: ConvexHull) -> np.ndarray:
    c0 = points.mean(axis=0)
    tet = points[hull.simplices] - c0
    vol = np.abs(np.linalg.det(tet)) / 6.0
    cen = c0 + tet.sum(axis=1) / 4.0
    return (vol[:, None] * cen).sum(axis=0) / vol.sum()


# ---------------------------------------------------------------------------
# grid, ball and star bodies


class GridBody(Body):
    """Convex body sampled on a sphere grid by support values and, optionally, curvature.

    With a curvature function f the surface area measure is f*sigma and the
    volume is (1/n) sum w h f.  Without it, off-grid quantities come from
    the polytope cut out by the sampled halfspaces.
    """

    kind = "grid"

    def __init__(self, grid: SphereGrid, support, curvature=None):
        self.grid = grid
        self.dim = grid.dim
        h = np.asarray(support, dtype=float)
        if h.shape != (len(grid),):
            raise OrliczError("support samples must match the grid")
        if not np.all(np.isfinite(h)) or np.any(h <= 0):
            raise OrliczError("origin is not an interior point")
        self.h = h
        self.f = None
        if curvature is not None:
            f = np.asarray(curvature, dtype=float)
            if f.shape != h.shape or np.any(f < 0) or not np.all(np.isfinite(f)):
                raise OrliczError("curvature samples must be finite, nonnegative and match the grid")
            self.f = f

    @cached_property
    def wulff(self) -> Body:
        return aleksandrov_body(self.grid.nodes, self.h)

    def support(self, u):
        return self.wulff.support(u)

    def radial(self, u):
        u, single = _as_dirs(u, self.dim)
        return _out(1.0 / np.max(u @ (self.grid.nodes / self.h[:, None]).T, axis=1), single)

    def volume(self, method: str = "auto") -> float:
        if self.f is not None and method in ("auto", "support"):
            return float(np.dot(self.grid.weights, self.h * self.f)) / self.dim
        if method == "support":
            raise OrliczError("curvature required")
        return self.wulff.volume()

    def polar_volume(self) -> float:
        return float(np.dot(self.grid.weights, self.h ** (-self.dim))) / self.dim

    def polar(self) -> "StarGrid":
        return StarGrid(self.grid, 1.0 / self.h)

    def surface_measure(self) -> SurfaceMeasure:
        if self.f is None:
            raise OrliczError("curvature required")
        return SurfaceMeasure(self.grid.nodes, self.grid.weights * self.f, self.h, grid=self.grid)

    def centroid(self) -> np.ndarray:
        return self.wulff.centroid()

    def translate(self, z) -> "GridBody":
        z = np.asarray(z, dtype=float)
        return GridBody(self.grid, self.h + self.grid.nodes @ z, self.f)

    def linear_image(self, A) -> "GridBody":
        A = np.asarray(A, dtype=float)
        det = np.linalg.det(A)
        if abs(det) < 1e-300:
            raise OrliczError("linear map is singular")
        if self.dim != 2:
            raise OrliczError("linear images of sampled 3-d bodies are not supported; use ellipsoid()")
        W = self.grid.nodes @ A
        norm = np.linalg.norm(W, axis=1)
        pre = W / norm[:, None]
        h = norm * self.wulff.support(pre)
        f = None
        if self.f is not None:
            f = det**2 * _periodic_interp(self.grid, self.f, pre) / norm ** (self.dim + 1)
        return GridBody(self.grid, h, f)

    def inner_outer_radii(self) -> tuple[float, float]:
        return float(self.h.min()), float(np.max(np.linalg.norm(self.wulff.vertices, axis=1)))

    def critical_dirs(self) -> np.ndarray:
        return self.grid.nodes


def _periodic_interp(grid: SphereGrid, values, dirs) -> np.ndarray:
    """Linear interpolation in angle on a circle grid; nearest node on S^2."""
    dirs = np.atleast_2d(dirs)
    if grid.dim == 2:
        th = grid.angles
        order = np.argsort(th)
        xs = np.append(th[order], th[order][0] + 2 * np.pi)
        ys = np.append(np.asarray(values)[order], np.asarray(values)[order][0])
        q = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2 * np.pi)
        q = np.where(q < xs[0], q + 2 * np.pi, q)
        return np.interp(q, xs, ys)
    j = np.argmax(dirs @ grid.nodes.T, axis=1)
    return np.asarray(values)[j]


class Ball(Body):
    """Euclidean ball centered at the origin."""

    kind = "ball"

    def __init__(self, dim: int, radius: float = 1.0, grid: SphereGrid | None = None):
        self.dim = check_dim(dim)
        if not radius > 0:
            raise OrliczError("radius must be positive")
        self.radius = float(radius)
        self.grid = grid or default_grid(dim)

    def support(self, u):
        u, single = _as_dirs(u, self.dim)
        return _out(self.radius * np.linalg.norm(u, axis=1), single)

    def radial(self, u):
        u, single = _as_dirs(u, self.dim)
        return _out(self.radius / np.linalg.norm(u, axis=1), single)

    def volume(self) -> float:
        return ball_volume(self.dim) * self.radius**self.dim

    def polar(self) -> "Ball":
        return Ball(self.dim, 1.0 / self.radius, self.grid)

    def polar_volume(self) -> float:
        return ball_volume(self.dim) * self.radius ** (-self.dim)

    def as_grid(self, grid: SphereGrid | None = None) -> GridBody:
        g = grid or self.grid
        return GridBody(g, np.full(len(g), self.radius), np.full(len(g), self.radius ** (self.dim - 1)))

    def surface_measure(self) -> SurfaceMeasure:
        return self.as_grid().surface_measure()

    def centroid(self) -> np.ndarray:
        return np.zeros(self.dim)

    def translate(self, z) -> GridBody:
        return self.as_grid().translate(z)

    def linear_image(self, A) -> GridBody:
        return ellipsoid(self.radius * np.asarray(A, dtype=float), self.grid)

    def inner_outer_radii(self) -> tuple[float, float]:
        return self.radius, self.radius


class StarGrid(Body):
    """Star body given by radial samples on a sphere grid."""

    kind = "star"

    def __init__(self, grid: SphereGrid, rho):
        rho = np.asarray(rho, dtype=float)
        if rho.shape != (len(grid),) or not np.all(np.isfinite(rho)) or np.any(rho <= 0):
            raise OrliczError("radial samples must be positive, finite and match the grid")
        self.grid = grid
        self.dim = grid.dim
        self.rho = rho

    def support(self, u):
        raise OrliczError("star body is not convex; no support function")

    def radial(self, u):
        u, single = _as_dirs(u, self.dim)
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        return _out(_periodic_interp(self.grid, self.rho, u), single)

    def volume(self) -> float:
        return float(np.dot(self.grid.weights, self.rho**self.dim)) / self.dim

    def inner_outer_radii(self) -> tuple[float, float]:
        return float(self.rho.min()), float(self.rho.max())

    def critical_dirs(self) -> np.ndarray:
        return self.grid.nodes


# ---------------------------------------------------------------------------
# module level operations and constructors


def volume(K: Body) -> float:
    return K.volume()


def polar(K: Body) -> Body:
    return K.polar()


def polar_volume(K: Body) -> float:
    return K.polar_volume()


def support(K: Body, u):
    return K.support(u)


def radial(K: Body, u):
    return K.radial(u)


def surface_measure(K: Body) -> SurfaceMeasure:
    return K.surface_measure()


def centroid(K: Body) -> np.ndarray:
    return K.centroid()


def translate(K: Body, z) -> Body:
    return K.translate(z)


def linear_image(K: Body, A) -> Body:
    return K.linear_image(A)


def inner_outer_radii(K: Body) -> tuple[float, float]:
    return K.inner_outer_radii()


def vrad(K: Body) -> float:
    """Volume radius (|K| / omega_n)^(1/n)."""
    return (K.volume() / ball_volume(K.dim)) ** (1.0 / K.dim)


def hausdorff(K: Body, L: Body, *, dense: int = 4096) -> float:
    """max |h_K - h_L| over a dense direction set plus each body's critical normals."""
    if K.dim != L.dim:
        raise OrliczError("bodies live in different dimensions")
    if K.dim == 2:
        dirs = [angles_to_dirs(2 * np.pi * np.arange(dense) / dense)]
    else:
        dirs = [lebedev_grid(5810).nodes]
    dirs += [K.critical_dirs(), L.critical_dirs()]
    if isinstance(K, Polygon) and isinstance(L, Polygon) and len(K.vertices) * len(L.vertices) <= 200_000:
        diff = (K.vertices[:, None, :] - L.vertices[None, :, :]).reshape(-1, 2)
        nrm = np.hypot(diff[:, 0], diff[:, 1])
        diff = diff[nrm > 0] / nrm[nrm > 0, None]
        dirs += [diff, -diff]
    U = np.concatenate(dirs, axis=0)
    return float(np.max(np.abs(K.support(U) - L.support(U))))


def regular_polygon(m: int, circumradius: float = 1.0, phase: float = 0.0) -> Polygon:
    th = phase + 2 * np.pi * np.arange(m) / m
    return Polygon(circumradius * angles_to_dirs(th))


def square(half_side: float = 1.0) -> Polygon:
    s = half_side
    return Polygon([[s, s], [-s, s], [-s, -s], [s, -s]])


def ellipsoid(A, grid: SphereGrid | None = None) -> GridBody:
    """A applied to the unit ball, sampled with exact support and curvature."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    grid = grid or default_grid(n)
    det = abs(np.linalg.det(A))
    w = np.linalg.norm(grid.nodes @ A, axis=1)
    return GridBody(grid, w, det**2 / w ** (n + 1))


def random_polygon(rng: np.random.Generator, m_range=(5, 12), radius_range=(0.5, 1.5)) -> Polygon:
    """Convex hull of jittered points around the origin; origin stays interior."""
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    while True:
        th = np.sort(2 * np.pi * (np.arange(m) + rng.uniform(0.1, 0.9, m)) / m)
        r = rng.uniform(*radius_range, m)
        pts = r[:, None] * angles_to_dirs(th)
        idx = convex_hull_2d(pts, 1e-9)
        if len(idx) >= 3:
            try:
                return Polygon(pts[idx])
            except OrliczError:
                continue


def random_linear_map(rng: np.random.Generator, n: int = 2, cond_max: float = 10.0) -> np.ndarray:
    while True:
        A = rng.normal(size=(n, n))
        if np.linalg.cond(A) <= cond_max and abs(np.linalg.det(A)) > 0.1:
            return A
