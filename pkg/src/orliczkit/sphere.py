"""Quadrature grids on the unit sphere and a graded rule for singular zonal integrands."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gamma, pi

import numpy as np
from scipy.integrate import lebedev_rule

from .errors import OrliczError

SUPPORTED_DIMS = (2, 3)

# Gauss-Legendre nodes on [0, 1] reused by every composite rule below.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def check_dim(n: int) -> int:
    if n not in SUPPORTED_DIMS:
        raise OrliczError(f"dimension {n} not supported (allowed: 2, 3)")
    return n


def ball_volume(n: int) -> float:
    """Volume of the Euclidean unit ball in R^n."""
    return pi ** (n / 2) / gamma(n / 2 + 1)


def sphere_area(n: int) -> float:
    """sigma(S^{n-1})."""
    return n * ball_volume(n)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Nodes and positive sigma-weights on S^{n-1}.

    ``antipode[j]`` is the index of ``-nodes[j]`` or -1 when the grid has no
    such node.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    name: str = "custom"
    antipode: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        check_dim(self.dim)
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.dim:
            raise OrliczError("grid nodes must be an (N, dim) array")
        if weights.shape != (nodes.shape[0],) or np.any(weights <= 0):
            raise OrliczError("grid weights must be positive, one per node")
        if np.max(np.abs(np.linalg.norm(nodes, axis=1) - 1.0)) > 1e-12:
            raise OrliczError("grid nodes must be unit vectors")
        object.__setattr__(self, "nodes", _readonly(nodes))
        object.__setattr__(self, "weights", _readonly(weights))
        if self.antipode is None:
            object.__setattr__(self, "antipode", _match_antipodes(nodes))

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def symmetric(self) -> bool:
        if np.any(self.antipode < 0):
            return False
        return bool(np.allclose(self.weights, self.weights[self.antipode], rtol=1e-12, atol=0))

    @property
    def angles(self) -> np.ndarray:
        if self.dim != 2:
            raise OrliczError("angles are defined for circle grids only")
        return np.mod(np.arctan2(self.nodes[:, 1], self.nodes[:, 0]), 2 * pi)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _match_antipodes(nodes: np.ndarray) -> np.ndarray:
    out = np.full(len(nodes), -1, dtype=int)
    dots = nodes @ nodes.T
    j = np.argmin(dots, axis=1)
    ok = np.abs(dots[np.arange(len(nodes)), j] + 1.0) < 1e-10
    out[ok] = j[ok]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def uniform_grid(count: int = 1024) -> SphereGrid:
    """Equally spaced angles on S^1 with trapezoid weights 2*pi/count."""
    if count < 8:
        raise OrliczError("uniform grid needs at least 8 nodes")
    theta = 2 * pi * np.arange(count) / count
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(count, 2 * pi / count)
    return SphereGrid(2, nodes, weights, name=f"uniform-{count}")


@lru_cache(maxsize=8)
def lebedev_grid(count: int = 590) -> SphereGrid:
    """Lebedev rule on S^2 with ``count`` nodes, weights scaled to total 4*pi."""
    for order in range(3, 132, 2):
        try:
            x, w = lebedev_rule(order)
        except (ValueError, NotImplementedError):
            continue
        if x.shape[1] == count:
            nodes = x.T / np.linalg.norm(x.T, axis=1, keepdims=True)
            return SphereGrid(3, nodes, w * (4 * pi / w.sum()), name=f"sym3d-{count}")
        if x.shape[1] > count:
            break
    raise OrliczError(f"no Lebedev rule with {count} nodes")


def grid_from_spec(spec: str) -> SphereGrid:
    """Parse ``uniform-<N>`` or ``sym3d-<N>``."""
    kind, _, num = spec.partition("-")
    try:
        count = int(num)
    except ValueError:
        raise OrliczError(f"bad grid spec {spec!r}") from None
    if kind == "uniform":
        return uniform_grid(count)
    if kind == "sym3d":
        return lebedev_grid(count)
    raise OrliczError(f"unknown grid kind {kind!r}")


def default_grid(n: int) -> SphereGrid:
    return uniform_grid(1024) if check_dim(n) == 2 else lebedev_grid(590)


def angles_to_dirs(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


# ---------------------------------------------------------------------------
# graded quadrature near isolated singular points


@dataclass
class GradedResult:
    value: float
    converged: bool
    tail: float
    ratio: float
    levels: int


def _gl(g, a: float, b: float) -> float:
    x = a + (b - a) * _GL_X
    return float((b - a) * np.dot(_GL_W, g(x)))


def _graded_toward(g, s: float, far: float, levels: int, q: float, near=None):
    """Integrate over the interval between s and far, refining geometrically at s.

    ``near(s, d)`` evaluates the integrand at offset d from s without the
    cancellation of forming s + d; it defaults to g(s + d).  Returns the
    per-level contributions, outermost first.
    """
    width = far - s
    parts = []
    for k in range(levels):
        lo, hi = sorted((width * q ** (k + 1), width * q**k), key=abs)
        d = lo + (hi - lo) * _GL_X
        vals = near(s, d) if near is not None else g(s + d)
        parts.append(float(abs(hi - lo) * np.dot(_GL_W, vals)))
    return parts


def _tail(parts) -> tuple[float, float, bool]:
    c = np.abs(np.asarray(parts[-4:]))
    if c[-1] == 0.0:
        return 0.0, 0.0, True
    with np.errstate(divide="ignore", invalid="ignore"):
        r = c[1:] / c[:-1]
    if not np.all(np.isfinite(r)):
        return float("inf"), float("inf"), False
    ratio = float(r[-1])
    steady = np.max(np.abs(r - ratio)) <= 1e-3 * max(ratio, 1e-300)
    if ratio < 0.999 and (steady or c[-1] <= 1e-15 * np.sum(np.abs(parts))):
        return float(parts[-1]) * ratio / (1 - ratio), ratio, True
    return float("inf"), ratio, False


def integrate_interval_singular(g, a: float, b: float, singular, *, soft=(), near=None,
                                levels: int = 60, q: float = 0.25) -> GradedResult:
    """Integrate g over [a, b] with geometric refinement at singular points.

    ``singular`` lists true singularities, evaluated through ``near`` when
    given; ``soft`` lists points that only need grading (for instance a cell
    end next to a singularity just outside).  A 16-point Gauss-Legendre rule
    runs on each graded piece and the remainder at a singularity comes from
    the geometric decay of the last contributions.  Decay ratios that do not
    drop below one mean divergence.
    """
    hard = sorted({float(s) for s in singular if a <= s <= b})
    pts = sorted(set(hard) | {float(s) for s in soft if a <= s <= b})
    cuts = sorted(set([a, b] + pts))
    total = 0.0
    tail = 0.0
    worst = 0.0
    ok = True
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        for s in (lo, hi):
            if s in hard:
                parts = _graded_toward(g, s, mid, levels, q, near)
                t, r, good = _tail(parts)
                total += float(np.sum(parts))
                tail += t if good else 0.0
                worst = max(worst, r)
                ok &= good
            else:
                deep = levels if s in pts else 12
                parts = _graded_toward(g, s, mid, deep, 0.25 if s in pts else 0.5)
                rest = s + (mid - s) * (0.25 if s in pts else 0.5) ** deep
                total += float(np.sum(parts)) + _gl(g, min(s, rest), max(s, rest))
    value = total + tail if ok else float("inf")
    return GradedResult(value=value, converged=ok, tail=tail, ratio=worst, levels=levels)


def zonal_integral(g, n: int, *, levels: int = 60) -> GradedResult:
    """Integral over S^{n-1} of g(<u, v>) for a fixed unit v, singular where <u, v> = 0.

    n=2 works in the angle (t = cos theta); n=3 uses the Archimedes
    reduction 2*pi * int_{-1}^{1} g(t) dt.
    """
    check_dim(n)
    if n == 2:
        def near(s, d):
            # cos(pi/2 + d) = -sin d, cos(3pi/2 + d) = sin d
            return g(-np.sin(d)) if s < pi else g(np.sin(d))

        return integrate_interval_singular(lambda th: g(np.cos(th)), 0.0, 2 * pi, [pi / 2, 3 * pi / 2],
                                           near=near, levels=levels)
    res = integrate_interval_singular(g, -1.0, 1.0, [0.0], levels=levels)
    res.value *= 2 * pi
    res.tail *= 2 * pi
    return res


def circle_grid_integral(g, grid: SphereGrid, singular_angles, *, near=None, levels: int = 60) -> GradedResult:
    """Composite rule over the cells of a circle grid.

    Every cell [theta_j, theta_{j+1}] gets Gauss-Legendre.  A cell containing
    a singular angle is split there and graded toward it; a cell next to one
    is graded toward its nearer end.  ``near(s, d)`` evaluates the integrand
    at offset d from singular angle s.
    """
    if grid.dim != 2:
        raise OrliczError("circle_grid_integral needs a circle grid")
    th = np.sort(grid.angles)
    edges = np.append(th, th[0] + 2 * pi)
    sing = np.mod(np.asarray(singular_angles, dtype=float), 2 * pi)
    sing = np.concatenate([sing, sing + 2 * pi])
    total = 0.0
    tail = 0.0
    ok = True
    worst = 0.0
    smooth_a = []
    smooth_b = []
    for a, b in zip(edges[:-1], edges[1:]):
        near_pts = sing[(sing > a - (b - a)) & (sing < b + (b - a))]
        if near_pts.size:
            hard = [float(s) for s in near_pts if a <= s <= b]
            soft = [a if s < a else b for s in near_pts if not a <= s <= b]
            res = integrate_interval_singular(g, a, b, hard, soft=soft, near=near, levels=levels)
            total += res.value if res.converged else 0.0
            tail += res.tail
            ok &= res.converged
            worst = max(worst, res.ratio)
        else:
            smooth_a.append(a)
            smooth_b.append(b)
    if smooth_a:
        a = np.asarray(smooth_a)[:, None]
        b = np.asarray(smooth_b)[:, None]
        x = a + (b - a) * _GL_X[None, :]
        total += float(np.sum((b - a)[:, 0] * (g(x) @ _GL_W)))
    return GradedResult(value=total if ok else float("inf"), converged=ok, tail=tail, ratio=worst, levels=levels)
