"""Orlicz mixed volumes: nonhomogeneous sums and the homogeneous root."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bodies import Ball, Body, GridBody, StarGrid, SurfaceMeasure
from .errors import OrliczError
from .orlicz_fn import OrliczFn
from .sphere import ball_volume

ROOT_RESIDUAL = 1e-11


@dataclass
class MixedVolumeResult:
    value: float
    residual: float
    iterations: int
    bracket: tuple[float, float] | None
    search_bracket: tuple[float, float]
    warnings: list = field(default_factory=list)


def atoms(K: Body) -> SurfaceMeasure:
    """Surface measure atoms of K; a ball is sampled on its own grid."""
    return K.surface_measure()


def support_at(L: Body, sm: SurfaceMeasure) -> np.ndarray:
    """h_L at the atom directions, reading grid samples directly when the grids agree."""
    if isinstance(L, GridBody) and sm.grid is not None and L.grid is sm.grid:
        return L.h
    if isinstance(L, Ball):
        return np.full(len(sm.masses), L.radius)
    return np.asarray(L.support(sm.dirs), dtype=float)


def radial_at(L: Body, sm: SurfaceMeasure) -> np.ndarray:
    if isinstance(L, StarGrid) and sm.grid is not None and L.grid is sm.grid:
        return L.rho
    return np.asarray(L.radial(sm.dirs), dtype=float)


def _safe_phi(phi: OrliczFn, t: np.ndarray, warnings: list) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.asarray(phi(t), dtype=float)
    if not np.all(np.isfinite(out)):
        bad = ~np.isfinite(out)
        if np.any(np.isnan(out)):
            raise OrliczError("phi evaluation produced NaN")
        out = np.where(bad, np.finfo(float).max / max(len(out), 1), out)
        warnings.append("phi overflow clamped; accuracy reduced")
    return out


def nonhom_mixed_volume(K: Body, L: Body, phi: OrliczFn) -> float:
    """(1/n) sum phi(h_L / h_K) h_K S_K."""
    sm = atoms(K)
    hL = support_at(L, sm)
    if phi.kind == "D" and np.any((hL <= 0) & (sm.masses > 0)):
        raise OrliczError("h_L vanishes on the support of S_K")
    w = sm.support * sm.masses
    return float(np.dot(_safe_phi(phi, hL / sm.support, []), w)) / K.dim


def orlicz_root(weights: np.ndarray, c: np.ndarray, phi: OrliczFn, *, with_info: bool = False):
    """Solve sum weights * phi(c / lam) = 1 for lam > 0.

    ``weights`` are nonnegative and sum to one, ``c`` positive.  The root lies
    in [min c, max c] because phi(1) = 1 and phi is monotone; the search runs
    in log lam.
    """
    keep = weights > 0
    w, c = weights[keep], c[keep]
    lo, hi = float(c.min()), float(c.max())
    warnings: list = []
    if lo == hi:
        res = (lo, 0.0, 0, (lo, hi), warnings)
        return res if with_info else lo
    sign = 1.0 if phi.kind == "I" else -1.0
    logc = np.log(c)

    def g(x):
        return float(np.dot(w, _safe_phi(phi, np.exp(logc - x), warnings))) - 1.0

    a, b = np.log(lo), np.log(hi)
    ga, gb = g(a), g(b)
    # rounding can push a near-root endpoint to the wrong side
    if sign * ga < 0 and abs(ga) <= 1e-13:
        ga = 0.0
    if sign * gb > 0 and abs(gb) <= 1e-13:
        gb = 0.0
    if sign * ga < 0 or sign * gb > 0:
        raise OrliczError("root not bracketed")
    if ga == 0.0:
        x, it = a, 0
    elif gb == 0.0:
        x, it = b, 0
    else:
        x, r = brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200, full_output=True)
        it = r.iterations
    lam = float(np.exp(x))
    resid = abs(g(x))
    if with_info:
        return lam, resid, it, (lo, hi), warnings
    return lam


def _hom_from_supports(K: Body, sm: SurfaceMeasure, hL: np.ndarray, phi: OrliczFn, L: Body | None) -> MixedVolumeResult:
    hK = sm.support
    if np.any(hK <= 0):
        raise OrliczError("origin is not an interior point")
    if np.any(~np.isfinite(hL)) or np.any((hL <= 0) & (sm.masses > 0)):
        if phi.kind == "D" or np.all(hL[sm.masses > 0] <= 0):
            raise OrliczError("h_L vanishes on the support of S_K")
    nK = sm.n_volume
    w = hK * sm.masses / nK
    with np.errstate(divide="ignore"):
        c = nK * hL / hK
    if phi.kind == "I":
        c = np.where(c > 0, c, 0.0)
        pos = (c > 0) & (w > 0)
        if not np.any(pos):
            raise OrliczError("h_L vanishes on the support of S_K")
    lam, resid, it, sb, warns = _root_with_zero_atoms(w, c, phi)
    bracket = None
    if L is not None:
        try:
            rK, RK = K.inner_outer_radii()
            rL, RL = L.inner_outer_radii()
            n = K.dim
            wn = ball_volume(n)
            bracket = (n * wn * rK**n * rL / RK, n * wn * RK**n * RL / rK)
        except (NotImplementedError, OrliczError):
            bracket = None
    return MixedVolumeResult(lam, resid, it, bracket, sb, warns)


def _root_with_zero_atoms(w, c, phi):
    """Root where some c may be zero (phi in I, phi(0) = 0)."""
    zero = c <= 0
    if not np.any(zero & (w > 0)):
        return orlicz_root(w, c, phi, with_info=True)
    warnings: list = []
    pos = ~zero & (w > 0)
    logc = np.log(c[pos])
    wp = w[pos]

    def g(x):
        return float(np.dot(wp, _safe_phi(phi, np.exp(logc - x), warnings))) - 1.0

    hi = np.log(c[pos].max())
    lo = hi
    k = 0
    while g(lo) < 0:
        lo -= np.log(2.0)
        k += 1
        if k > 2000:
            raise OrliczError("root not bracketed")
    x = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200) if lo < hi else hi
    return float(np.exp(x)), abs(g(x)), k, (float(np.exp(lo)), float(np.exp(hi))), warnings


def hom_mixed_volume(K: Body, L: Body, phi: OrliczFn) -> MixedVolumeResult:
    """Homogeneous Orlicz mixed volume: lam with sum v_i phi(n|K| h_L / (lam h_K)) = 1.

    v_i are the cone-volume weights h_K S_K / (n|K|).  n|K| is the discrete
    sum of h_K S_K, so L = K returns n|K| exactly.
    """
    if K.dim != L.dim:
        raise OrliczError("bodies live in different dimensions")
    sm = atoms(K)
    return _hom_from_supports(K, sm, support_at(L, sm), phi, L)


def hom_mixed_volume_polar(K: Body, star: Body, phi: OrliczFn) -> MixedVolumeResult:
    """Same as hom_mixed_volume with h_{L} replaced by 1/rho_star, that is L = star polar."""
    sm = atoms(K)
    rho = radial_at(star, sm)
    return _hom_from_supports(K, sm, 1.0 / rho, phi, None)


def segment_mixed_volume(K: Body, v, phi: OrliczFn) -> MixedVolumeResult:
    """Mixed volume against the segment [0, v], h(u) = <u, v>_+ with phi(0) = 0."""
    if phi.kind != "I":
        raise OrliczError("segment mixed volume needs phi in I")
    v = np.asarray(v, dtype=float)
    sm = atoms(K)
    hL = np.maximum(sm.dirs @ v, 0.0)
    if not np.any((hL > 0) & (sm.masses > 0)):
        raise OrliczError("h_L vanishes on the support of S_K")
    return _hom_from_supports(K, sm, hL, phi, None)


def lp_closed_form(K: Body, L: Body, p: float) -> float:
    """(n|K|)^(1 - 1/p) (n V_p(K, L))^(1/p) with n V_p = sum h_L^p h_K^(1-p) S_K."""
    sm = atoms(K)
    hL = support_at(L, sm)
    nK = sm.n_volume
    nVp = float(np.dot(hL**p * sm.support ** (1 - p), sm.masses))
    return nK ** (1 - 1 / p) * nVp ** (1 / p)
