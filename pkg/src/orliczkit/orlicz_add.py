"""Linear Orlicz addition and the first variation of volume it induces."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bodies import Ball, Body, Polygon, aleksandrov_body
from .errors import OrliczError
from .mixed_vol import nonhom_mixed_volume
from .orlicz_fn import OrliczFn
from .sphere import SphereGrid, uniform_grid

BISECTION_STEPS = 110


@dataclass(eq=False)
class OrliczSum:
    """Support samples f of the Orlicz combination of K and L at ``directions``."""

    directions: np.ndarray
    f: np.ndarray
    h_K: np.ndarray
    h_L: np.ndarray
    eps: float
    phi1: OrliczFn
    phi2: OrliczFn

    @cached_property
    def body(self) -> Body:
        """Aleksandrov body of f."""
        return aleksandrov_body(self.directions, self.f)

    def residual(self) -> float:
        r = self.phi1(self.h_K / self.f) + self.eps * self.phi2(self.h_L / self.f) - 1.0
        return float(np.max(np.abs(r)))


def _solve_f(hK, hL, phi1, phi2, eps) -> np.ndarray:
    """Per-direction bisection in log f of phi1(hK/f) + eps phi2(hL/f) = 1."""

    def excess(f):
        return phi1(hK / f) + eps * phi2(hL / f) - 1.0

    # at f = hK the left side exceeds 1; it decreases in f for class I, increases for D
    grow = phi1.kind == "I"
    lo = np.log(hK)
    step = np.zeros_like(lo)
    other = lo.copy()
    for _ in range(2000):
        e = excess(np.exp(other))
        pending = e > 0
        if not np.any(pending):
            break
        step = np.where(pending, np.maximum(2 * step, np.log(2.0) * 1e-3), step)
        other = np.where(pending, lo + step if grow else lo - step, other)
    else:
        raise OrliczError("root not bracketed")
    a, b = (lo, other) if grow else (other, lo)
    # invariant: excess(exp(a)) >= 0 for I (<= 0 for D) and the reverse at b
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (a + b)
        e = excess(np.exp(mid))
        above = e > 0
        if grow:
            a = np.where(above, mid, a)
            b = np.where(above, b, mid)
        else:
            b = np.where(above, mid, b)
            a = np.where(above, a, mid)
    return np.exp(0.5 * (a + b))


def _dirs_for(K: Body, directions) -> np.ndarray:
    if directions is None:
        base = uniform_grid(1024).nodes
    elif isinstance(directions, SphereGrid):
        base = directions.nodes
    else:
        base = np.asarray(directions, dtype=float)
    if isinstance(K, Polygon):
        base = np.concatenate([K.edge_normals, base])
    return base


def orlicz_add(K: Body, L: Body, phi1: OrliczFn, phi2: OrliczFn, eps: float, directions=None) -> OrliczSum:
    """f_eps solving phi1(h_K/f) + eps phi2(h_L/f) = 1 direction by direction.

    Without explicit directions a 1024-node circle grid is used, joined with
    the edge normals of a polygonal K.
    """
    if phi1.kind != phi2.kind:
        raise OrliczError("phi1, phi2 must share monotonicity class")
    if not eps > 0:
        raise OrliczError("eps must be positive")
    if K.dim != 2:
        raise OrliczError("Orlicz addition is implemented for planar bodies")
    U = _dirs_for(K, directions)
    hK = np.asarray(K.support(U), dtype=float)
    hL = np.asarray(L.support(U), dtype=float)
    if np.any(hK <= 0) or np.any(hL <= 0):
        raise OrliczError("origin is not an interior point")
    f = _solve_f(hK, hL, phi1, phi2, float(eps))
    return OrliczSum(U, f, hK, hL, float(eps), phi1, phi2)


def lp_sum_support(hK, hL, p: float, eps: float) -> np.ndarray:
    """(h_K^p + eps h_L^p)^(1/p)."""
    return (np.asarray(hK) ** p + eps * np.asarray(hL) ** p) ** (1.0 / p)


@dataclass
class VariationalResult:
    estimate: float
    direct: float
    eps: list
    volumes: list
    quotients: list
    extrapolated: list
    derivative_at_one: float
    enrichment: dict | None = None

    @property
    def rel_error(self) -> float:
        return abs(self.estimate - self.direct) / abs(self.direct)

    def rows(self):
        return [
            {"eps": e, "volume": v, "quotient": q, "richardson": r}
            for e, v, q, r in zip(self.eps, self.volumes, self.quotients, self.extrapolated)
        ]


def default_schedule(k: int = 8, start: float = 0.1) -> list:
    return [start * 2.0**-i for i in range(k)]


def variational_mixed_volume(K: Body, L: Body, phi1: OrliczFn, phi2: OrliczFn, eps_schedule=None,
                             directions=None, check_enrichment: bool = False) -> VariationalResult:
    """Estimate V_phi2(K, L) from (phi1)'(1)/n * d|K_eps|/d eps at 0.

    K and K_eps are both taken as Aleksandrov bodies on one direction set so
    the difference quotient sees only the perturbation.  Quotients along a
    halving schedule are Richardson-extrapolated.  The left derivative of
    phi1 at 1 is used for class I, the right one for class D.

    With ``check_enrichment`` the run is repeated on twice as many uniform
    directions and the change in the largest-eps volume and in the estimate
    is reported.
    """
    if phi1.kind != phi2.kind:
        raise OrliczError("phi1, phi2 must share monotonicity class")
    d1 = phi1.left_d1 if phi1.kind == "I" else phi1.right_d1
    if phi1.kind == "I" and not (np.isfinite(d1) and d1 > 0):
        raise OrliczError("left derivative of phi1 at 1 must be positive and finite")
    if phi1.kind == "D" and not (np.isfinite(d1) and d1 < 0):
        raise OrliczError("right derivative of phi1 at 1 must be negative and finite")
    eps = sorted((float(e) for e in (eps_schedule or default_schedule())), reverse=True)
    if isinstance(K, Ball):
        K = K.as_grid(uniform_grid(1024))
    U = _dirs_for(K, directions)
    hK = np.asarray(K.support(U), dtype=float)
    base = aleksandrov_body(U, hK).volume()
    vols, quot = [], []
    for e in eps:
        s = orlicz_add(K, L, phi1, phi2, e, directions=directions)
        v = s.body.volume()
        vols.append(v)
        quot.append((v - base) / e)
    table = _richardson(eps, quot)
    est = d1 / K.dim * table[-1]
    direct = nonhom_mixed_volume(K, L, phi2)
    enrichment = None
    if check_enrichment:
        count = len(directions.nodes if isinstance(directions, SphereGrid) else _dirs_for(Ball(2), directions))
        finer = uniform_grid(2 * count)
        again = variational_mixed_volume(K, L, phi1, phi2, eps, finer)
        enrichment = {"directions": 2 * count, "volume_change": abs(again.volumes[0] - vols[0]),
                      "estimate_change": abs(again.estimate - est)}
    return VariationalResult(est, direct, eps, vols, quot, table, d1, enrichment)


def _richardson(eps: list, q: list) -> list:
    """Repeated Richardson elimination of the eps, eps^2, ... terms.

    Entry i of the output is the best estimate using the first i+1 quotients.
    """
    eps = np.asarray(eps)
    rows = [np.asarray(q, dtype=float)]
    best = [q[0]]
    for i in range(1, len(q)):
        col = rows[0][: i + 1].copy()
        for k in range(1, i + 1):
            col = np.array([(eps[j] * col[j + 1] - eps[j + k] * col[j]) / (eps[j] - eps[j + k])
                            for j in range(len(col) - 1)])
        best.append(float(col[-1]))
    return best
