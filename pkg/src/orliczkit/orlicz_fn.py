"""Orlicz functions, their class tags, and the symmetric integrability check."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import e
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import OrliczError
from .sphere import SphereGrid, check_dim, circle_grid_integral, zonal_integral

CLASS_GRID = np.logspace(-6, 6, 512)
MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class OrliczFn:
    """Strictly monotone phi on (0, inf) with phi(1) = 1.

    ``kind`` is "I" for increasing and "D" for decreasing.  ``deriv`` is the
    pointwise derivative; ``left_d1`` and ``right_d1`` are the one-sided
    derivatives at 1.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    kind: str
    left_d1: float
    right_d1: float
    power: float | None = None
    meta: dict = field(default_factory=dict)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = self.func(np.where(t > 0, t, 1.0))
        if self.kind == "I":
            out = np.where(t > 0, out, 0.0)
        else:
            out = np.where(t > 0, out, np.inf)
        return out if out.ndim else float(out)

    def d(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return self.deriv(t)

    @property
    def increasing(self) -> bool:
        return self.kind == "I"

    def tags(self, n: int) -> frozenset:
        return classify(self, n).tags

    def spec(self) -> str:
        return self.name


def power_law(p: float) -> OrliczFn:
    """phi(t) = t^p, p != 0."""
    p = float(p)
    if p == 0 or not np.isfinite(p):
        raise OrliczError("power must be finite and nonzero")
    return OrliczFn(
        name=f"pow:{_fmt(p)}",
        func=lambda t: np.power(t, p),
        deriv=lambda t: p * np.power(t, p - 1),
        kind="I" if p > 0 else "D",
        left_d1=p,
        right_d1=p,
        power=p,
    )


def expm1_normalized() -> OrliczFn:
    """phi(t) = (e^t - 1)/(e - 1)."""
    c = e - 1.0
    return OrliczFn(
        name="expm1",
        func=lambda t: np.expm1(t) / c,
        deriv=lambda t: np.exp(t) / c,
        kind="I",
        left_d1=e / c,
        right_d1=e / c,
    )


def table(path: str | Path) -> OrliczFn:
    """Piecewise power function through tabulated (t, phi) rows.

    Between knots log phi is linear in log t; the end pieces extend to 0 and
    infinity.  The table must pass through (1, 1).
    """
    data = np.loadtxt(path, delimiter="," if str(path).endswith(".csv") else None, comments="#", ndmin=2)
    return table_from_arrays(data[:, 0], data[:, 1], name=f"table:{path}")


def table_from_arrays(t, y, name: str = "table") -> OrliczFn:
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(t)
    t, y = t[order], y[order]
    if len(t) < 2 or np.any(t <= 0) or np.any(y <= 0) or np.any(np.diff(t) <= 0):
        raise OrliczError("table needs >= 2 rows with distinct positive t and positive phi")
    dy = np.diff(y)
    if not (np.all(dy > 0) or np.all(dy < 0)):
        raise OrliczError("not strictly monotone")
    lt, ly = np.log(t), np.log(y)
    if not (lt[0] <= 0 <= lt[-1]) or abs(np.interp(0.0, lt, ly)) > 1e-12:
        raise OrliczError("table must satisfy phi(1) = 1")
    slopes = np.diff(ly) / np.diff(lt)

    def piece(s):
        k = np.clip(np.searchsorted(lt, s, side="right") - 1, 0, len(slopes) - 1)
        return k

    def f(x):
        s = np.log(x)
        k = piece(s)
        return np.exp(ly[k] + slopes[k] * (s - lt[k]))

    def df(x):
        s = np.log(x)
        k = piece(s)
        return slopes[k] * np.exp(ly[k] + slopes[k] * (s - lt[k])) / x

    at_one = np.searchsorted(lt, 0.0, side="right") - 1
    right = slopes[min(at_one, len(slopes) - 1)]
    left = slopes[max(at_one - 1, 0)] if np.isclose(lt[at_one], 0.0, atol=1e-14) else right
    return OrliczFn(name=name, func=f, deriv=df, kind="I" if dy[0] > 0 else "D",
                    left_d1=float(left), right_d1=float(right), meta={"knots": t.tolist()})


def custom(func: Callable, name: str = "custom", deriv: Callable | None = None) -> OrliczFn:
    """Wrap a user function; derivatives come from central differences when not given."""
    one = float(func(np.array([1.0]))[0])
    if abs(one - 1.0) > 1e-12:
        raise OrliczError("phi(1) must equal 1")
    probe = func(np.array([0.5, 2.0]))
    kind = "I" if probe[1] > probe[0] else "D"
    if deriv is None:
        def deriv(t, _f=func):
            t = np.asarray(t, dtype=float)
            hstep = 1e-6 * t
            return (_f(t + hstep) - _f(t - hstep)) / (2 * hstep)
    hs = 1e-6
    left = (1.0 - float(func(np.array([1 - hs]))[0])) / hs
    right = (float(func(np.array([1 + hs]))[0]) - 1.0) / hs
    return OrliczFn(name=name, func=func, deriv=deriv, kind=kind, left_d1=left, right_d1=right)


def parse_phi(spec: str) -> OrliczFn:
    """Build from ``pow:<p>``, ``expm1`` or ``table:<path>``."""
    spec = spec.strip()
    if spec == "expm1":
        return expm1_normalized()
    head, _, arg = spec.partition(":")
    if head == "pow":
        try:
            num, _, den = arg.partition("/")
            p = float(num) / float(den) if den else float(num)
        except ValueError:
            raise OrliczError(f"bad power in {spec!r}") from None
        return power_law(p)
    if head == "table":
        return table(arg)
    raise OrliczError(f"unknown phi spec {spec!r}")


def _fmt(p: float) -> str:
    return repr(int(p)) if float(p).is_integer() else repr(p)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    tags: frozenset
    provenance: str
    sampled_range: tuple[float, float]


def _finite_window(t: np.ndarray, y: np.ndarray):
    if np.any(np.isnan(y)):
        raise OrliczError("not classifiable on grid")
    ok = np.isfinite(y) & (np.abs(y) < 1e300)
    if ok.sum() < 64:
        raise OrliczError("not classifiable on grid")
    # keep the longest run of finite values
    idx = np.flatnonzero(ok)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    runs = np.split(idx, breaks + 1)
    run = max(runs, key=len)
    return t[run], y[run]


def _shape(t: np.ndarray, y: np.ndarray) -> tuple[bool, bool, bool, bool]:
    """(weakly convex, strictly convex, weakly concave, strictly concave) from divided differences."""
    s = np.diff(y) / np.diff(t)
    ds = np.diff(s)
    scale = MARGIN * (np.abs(s[1:]) + np.abs(s[:-1]))
    return (bool(np.all(ds >= -scale)), bool(np.all(ds > scale)),
            bool(np.all(ds <= scale)), bool(np.all(ds < -scale)))


def classify(phi: OrliczFn, n: int) -> Classification:
    """Tags from sampling phi and F(t) = phi(t^(-1/n)) on a log grid over [1e-6, 1e6].

    Tags: I or D; convex / concave / linear for phi; Phi1 (I with F strictly
    convex), Phi2 (D with F strictly concave), Psi (D with F strictly convex).  A numeric verdict only
    covers the sampled window.
    """
    check_dim(n)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        y = np.asarray(phi(CLASS_GRID), dtype=float)
        tF = CLASS_GRID
        yF = np.asarray(phi(tF ** (-1.0 / n)), dtype=float)
    t1, y1 = _finite_window(CLASS_GRID, y)
    t2, y2 = _finite_window(tF, yF)
    dy = np.diff(y1)
    if np.all(dy > 0):
        mono = "I"
    elif np.all(dy < 0):
        mono = "D"
    else:
        raise OrliczError("not strictly monotone")
    tags = {mono}
    wcx, scx, wcc, scc = _shape(t1, y1)
    if scx:
        tags.add("convex")
    if scc:
        tags.add("concave")
    if wcx and wcc:
        tags.add("linear")
    Fwcx, Fscx, Fwcc, Fscc = _shape(t2, y2)
    if mono == "I" and Fscx:
        tags.add("Phi1")
    if mono == "D" and Fscc:
        tags.add("Phi2")
    if mono == "D" and Fscx:
        tags.add("Psi")
    if mono == "D" and Fwcx and Fwcc:
        tags.add("boundary")
    full = len(t1) == len(CLASS_GRID) and len(t2) == len(CLASS_GRID)
    rng = (float(t1[0]), float(t1[-1]))
    prov = "numeric, grid-limited" if full else "numeric, grid-limited (trimmed)"
    return Classification(frozenset(tags), prov, rng)


def power_tags(p: float, n: int) -> frozenset:
    """Exact tags of t^p in dimension n."""
    tags = {"I" if p > 0 else "D"}
    if p > 1 or p < 0:
        tags.add("convex")
    elif 0 < p < 1:
        tags.add("concave")
    else:
        tags.add("linear")
    if p > 0:
        tags.add("Phi1")
    elif -n < p < 0:
        tags.add("Phi2")
    elif p < -n:
        tags.add("Psi")
    else:
        tags.add("boundary")
    return frozenset(tags)


def admissible_class(phi: OrliczFn, n: int) -> str:
    """One of "Phi1", "Phi2", "Psi", or "none"."""
    tags = power_tags(phi.power, n) if phi.power is not None else classify(phi, n).tags
    for c in ("Phi1", "Phi2", "Psi"):
        if c in tags:
            return c
    return "none"


# ---------------------------------------------------------------------------
# integrability over the sphere


@dataclass
class IntegrabilityReport:
    verdict: str
    scales: list
    values: list
    converged: list

    @property
    def satisfied(self) -> bool:
        return self.verdict == "satisfied"

    def require(self):
        if not self.satisfied:
            raise OrliczError(self.verdict)


def abs_dot_integral(phi: OrliczFn, s: float, grid: SphereGrid, direction=None):
    """Integral of phi(s |<u, v>|) over the sphere with graded refinement where <u, v> = 0."""
    n = grid.dim

    def g(c):
        return phi(s * np.abs(c))

    if n == 2:
        if direction is None:
            alpha = 0.0
        else:
            direction = np.asarray(direction, dtype=float)
            alpha = float(np.arctan2(direction[1], direction[0]))

        def gth(th):
            return phi(s * np.abs(np.cos(th - alpha)))

        def near(_, d):
            # |<u, v>| = |sin d| at offset d from either zero of the cosine
            return phi(s * np.abs(np.sin(d)))

        return circle_grid_integral(gth, grid, [alpha + np.pi / 2, alpha + 3 * np.pi / 2], near=near)
    return zonal_integral(g, n)


def check_symmetric_integrability(phi: OrliczFn, grid: SphereGrid, scales=(0.25, 0.5, 1.0, 2.0, 4.0)) -> IntegrabilityReport:
    """phi in D must have I(s) = int phi(s|<u, e1>|) finite and strictly decreasing in s."""
    if phi.kind != "D":
        raise OrliczError("integrability check applies to decreasing phi")
    if grid.dim == 2 and not grid.symmetric:
        raise OrliczError("grid must be symmetric")
    scales = sorted(float(s) for s in scales)
    vals, conv = [], []
    for s in scales:
        r = abs_dot_integral(phi, s, grid)
        vals.append(r.value)
        conv.append(r.converged)
    if not all(conv):
        verdict = "condition violated"
    elif all(b < a for a, b in zip(vals, vals[1:])):
        verdict = "satisfied"
    else:
        verdict = "condition violated"
    return IntegrabilityReport(verdict, scales, vals, conv)
