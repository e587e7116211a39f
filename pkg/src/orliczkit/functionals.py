"""Geominimal and affine surface areas, inequality certificates and probes."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .bodies import Ball, Body, GridBody, Polygon, hausdorff, regular_polygon, vrad
from .errors import OrliczError
from .mixed_vol import hom_mixed_volume, nonhom_mixed_volume
from .orlicz_fn import CLASS_GRID, OrliczFn, _shape, admissible_class, check_symmetric_integrability, classify
from .orlicz_fn import power_law, abs_dot_integral
from .petty import PettyOptions, PettyResult, solve_affine_star, solve_petty
from .serialize import body_to_dict, dumps
from .sphere import SphereGrid, ball_volume, uniform_grid

CERT_TOL = 1e-6


# ---------------------------------------------------------------------------
# functionals


def geominimal(K: Body, phi: OrliczFn, flavor: str = "hom", cone: str = "full",
               opts: PettyOptions | None = None) -> tuple[float, PettyResult]:
    """Homogeneous or nonhomogeneous Orlicz geominimal surface area with its Petty body.

    On the symmetric cone a decreasing phi from Phi2 additionally needs the
    integrability condition and a body with a curvature function.
    """
    if flavor not in ("hom", "nonhom"):
        raise OrliczError(f"unknown flavor {flavor!r}")
    if cone == "sym" and admissible_class(phi, K.dim) == "Phi2":
        if not (isinstance(K, Ball) or (isinstance(K, GridBody) and K.f is not None)):
            raise OrliczError("symmetric cone with phi in Phi2 needs a grid body with curvature")
        grid = K.grid
        check_symmetric_integrability(phi, grid).require()
    res = solve_petty(K, phi, flavor, cone, opts)
    return res.value, res


def affine(K: Body, phi: OrliczFn, grid: SphereGrid | None = None,
           opts: PettyOptions | None = None) -> tuple[float, PettyResult]:
    """Homogeneous Orlicz affine surface area via star bodies on a grid."""
    res = solve_affine_star(K, phi, grid, opts)
    return res.value, res


def ball_value(n: int) -> float:
    """Both functionals of the unit ball: n omega_n."""
    return n * ball_volume(n)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    id: str
    lhs: float
    rhs: float
    holds: bool
    slack: float
    tol: float
    hypotheses: dict
    digest: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "slack": self.slack,
            "tol": self.tol, "hypotheses": self.hypotheses, "digest": self.digest, "details": self.details,
        }


def _digest(**inputs) -> str:
    doc = {}
    for k, v in sorted(inputs.items()):
        if isinstance(v, Body):
            doc[k] = body_to_dict(v)
        elif isinstance(v, OrliczFn):
            doc[k] = v.name
        else:
            doc[k] = v
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


def _make(which: str, lhs: float, rhs: float, tol: float, hyp: dict, digest: str, **details) -> Certificate:
    slack = float(rhs - lhs)
    return Certificate(which, float(lhs), float(rhs), bool(slack >= -tol), slack, tol, hyp, digest, details)


def _centered(K: Body) -> Body:
    c = np.asarray(K.centroid(), dtype=float)
    return K if np.allclose(c, 0.0, atol=1e-15) else K.translate(-c)


def _phi_tags(phi: OrliczFn, n: int) -> frozenset:
    return phi.tags(n)


def _convex(phi: OrliczFn, n: int) -> bool:
    tags = _phi_tags(phi, n)
    return "convex" in tags or "linear" in tags


def _composition_shape(phi: OrliczFn, psi: OrliczFn) -> dict:
    """Convexity of H = phi o psi^-1 from samples (psi(t), phi(t))."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        s = np.asarray(psi(CLASS_GRID), dtype=float)
        y = np.asarray(phi(CLASS_GRID), dtype=float)
    ok = np.isfinite(s) & np.isfinite(y) & (np.abs(s) < 1e300) & (np.abs(y) < 1e300)
    s, y = s[ok], y[ok]
    order = np.argsort(s)
    s, y = s[order], y[order]
    keep = np.concatenate([[True], np.diff(s) > 0])
    wcx, _, wcc, _ = _shape(s[keep], y[keep])
    return {"convex": wcx, "concave": wcc}


def cyclic_condition(phi: OrliczFn, psi: OrliczFn, n: int) -> tuple[str | None, dict]:
    """Which of the four sufficient conditions for G_phi <= G_psi holds, if any."""
    cp, cq = admissible_class(phi, n), admissible_class(psi, n)
    H = _composition_shape(phi, psi)
    checks = {"phi_class": cp, "psi_class": cq, "H_convex": H["convex"], "H_concave": H["concave"]}
    if cp in ("Phi1", "Phi2") and cq == "Psi":
        return "a", checks
    if cp == "Phi2" and cq == "Phi1" and H["convex"]:
        return "b", checks
    if cp == "Phi1" and cq == "Phi1" and H["concave"]:
        return "c", checks
    if ((cp, cq) in (("Phi2", "Phi2"), ("Psi", "Psi"))) and H["convex"]:
        return "d", checks
    return None, checks


def certify(which: str, K: Body, phi: OrliczFn, *, psi: OrliczFn | None = None, L: Body | None = None,
            opts: PettyOptions | None = None, tol: float = CERT_TOL) -> Certificate:
    """Build a certificate with lhs <= rhs as the claim and slack = rhs - lhs.

    isoperimetric  G(K)/G(B) <= (|K|/omega_n)^((n-1)/n) for Phi-class phi,
                   K moved to its centroid; for Psi only the bound
                   n|K| vrad(K polar) <= G(K) is certified and the ratio
                   against the volume term is reported.
    santalo        G(K) G(K polar) / G(B)^2 <= 1 (same split for Psi).
    cyclic         G_phi(K) <= G_psi(K) under one of the four class conditions.
    mahler         |M| |M polar| <= |K| |K polar| for convex phi in Phi1.
    minkowski      n |K|^((n-1)/n) |L|^(1/n) <= V_phi(K, L) for convex increasing phi.
    bracket        V_phi(K, L) inside the inner/outer radius bounds, as a ratio <= 1.
    """
    opts = opts or PettyOptions()
    n = K.dim
    cls = admissible_class(phi, n)
    omega = ball_volume(n)
    if which == "isoperimetric":
        Kc = _centered(K)
        hyp = {"phi_class": cls, "centroid_at_origin": True}
        if cls == "none":
            raise OrliczError("hypotheses not satisfied: phi is in none of Phi1, Phi2, Psi")
        G, res = geominimal(Kc, phi, "hom", "full", opts)
        vol_term = (Kc.volume() / omega) ** ((n - 1) / n)
        ratio = G / ball_value(n)
        dig = _digest(which=which, K=K, phi=phi, tol=tol)
        if cls == "Psi":
            lower = n * Kc.volume() * vrad(Kc.polar())
            return _make(which, lower, G, tol * lower, hyp, dig, ratio_to_volume_term=ratio / vol_term,
                         flags=res.flags)
        return _make(which, ratio, vol_term, tol, hyp, dig, flags=res.flags)
    if which == "santalo":
        Kc = _centered(K)
        hyp = {"phi_class": cls, "centroid_at_origin": True}
        if cls == "none":
            raise OrliczError("hypotheses not satisfied: phi is in none of Phi1, Phi2, Psi")
        P = Kc.polar()
        G1, r1 = geominimal(Kc, phi, "hom", "full", opts)
        G2, r2 = geominimal(P, phi, "hom", "full", opts)
        prod = G1 * G2 / ball_value(n) ** 2
        dig = _digest(which=which, K=K, phi=phi, tol=tol)
        if cls == "Psi":
            lower = n * Kc.volume() * vrad(P) * n * P.volume() * vrad(Kc)
            return _make(which, lower, G1 * G2, tol * lower, hyp, dig, normalized_product=prod,
                         flags=r1.flags + r2.flags)
        return _make(which, prod, 1.0, tol, hyp, dig, flags=r1.flags + r2.flags)
    if which == "cyclic":
        if psi is None:
            raise OrliczError("cyclic certificate needs psi")
        cond, checks = cyclic_condition(phi, psi, n)
        if cond is None:
            raise OrliczError("hypotheses not satisfied")
        checks["condition"] = cond
        Gp, rp = geominimal(K, phi, "hom", "full", opts)
        Gq, rq = geominimal(K, psi, "hom", "full", opts)
        dig = _digest(which=which, K=K, phi=phi, psi=psi, tol=tol)
        return _make(which, Gp, Gq, tol * max(abs(Gq), 1.0), checks, dig, flags=rp.flags + rq.flags)
    if which == "mahler":
        if cls != "Phi1" or not _convex(phi, n):
            raise OrliczError("hypotheses not satisfied: mahler needs convex phi in Phi1")
        _, res = geominimal(K, phi, "hom", "full", opts)
        if res.M is None:
            raise OrliczError("Petty body could not be built")
        lhs = res.M.volume() * res.M.polar_volume()
        rhs = K.volume() * K.polar_volume()
        dig = _digest(which=which, K=K, phi=phi, tol=tol)
        return _make(which, lhs, rhs, tol, {"phi_class": cls, "phi_convex": True}, dig,
                     petty_value=res.value, flags=res.flags)
    if which == "minkowski":
        if L is None:
            raise OrliczError("minkowski certificate needs L")
        if phi.kind != "I" or not _convex(phi, n):
            raise OrliczError("hypotheses not satisfied: minkowski needs convex increasing phi")
        V = hom_mixed_volume(K, L, phi).value
        lhs = n * K.volume() ** ((n - 1) / n) * L.volume() ** (1 / n)
        dig = _digest(which=which, K=K, L=L, phi=phi, tol=tol)
        return _make(which, lhs, V, tol * lhs, {"phi_increasing": True, "phi_convex": True}, dig)
    if which == "bracket":
        if L is None:
            raise OrliczError("bracket certificate needs L")
        r = hom_mixed_volume(K, L, phi)
        rK, RK = K.inner_outer_radii()
        rL, RL = L.inner_outer_radii()
        lo = n * omega * rK**n * rL / RK
        hi = n * omega * RK**n * RL / rK
        worst = max(lo / r.value, r.value / hi)
        dig = _digest(which=which, K=K, L=L, phi=phi, tol=tol)
        return _make(which, worst, 1.0, tol, {"phi_monotone": phi.kind}, dig,
                     value=r.value, lower=lo, upper=hi)
    raise OrliczError(f"unknown certificate {which!r}")


# ---------------------------------------------------------------------------
# probes


@dataclass
class ProbeReport:
    parameter: str
    columns: dict
    reference: float
    verdict: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if len({len(v) for v in self.columns.values()}) > 1:
            raise OrliczError("probe columns differ in length")

    def to_dict(self) -> dict:
        return {"parameter": self.parameter, "columns": self.columns, "reference": self.reference,
                "verdict": self.verdict, "details": self.details}


def polygon_family(ms=(8, 16, 32, 64, 128, 256)) -> list:
    """Regular m-gons inscribed in the unit circle, converging to the unit disk."""
    return [(m, regular_polygon(m)) for m in ms]


def perturbed_family(K: Polygon, deltas=(1e-1, 1e-2, 1e-3, 1e-4), seed: int = 0) -> list:
    """K with each vertex moved by at most delta in a seeded random direction."""
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-1.0, 1.0, K.vertices.shape)
    jitter /= np.max(np.linalg.norm(jitter, axis=1))
    return [(d, Polygon(K.vertices + d * jitter)) for d in deltas]


def _strictly_decreasing(x) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.diff(x) < 0))


def probe_continuity(family: list, phi: OrliczFn, limit: Body, *, parameter: str = "m",
                     tol: float = 5e-3, opts: PettyOptions | None = None) -> ProbeReport:
    """Geominimal values along ``family`` (pairs (parameter, body)) against the limit body."""
    n = limit.dim
    if admissible_class(phi, n) != "Phi1":
        raise OrliczError("continuity probe needs phi in Phi1")
    if isinstance(limit, Ball) and limit.radius == 1.0:
        ref = ball_value(n)
    else:
        ref = geominimal(limit, phi, "hom", "full", opts)[0]
    params, dist, vals, errs = [], [], [], []
    for p, K in family:
        v = geominimal(K, phi, "hom", "full", opts)[0]
        params.append(p)
        dist.append(hausdorff(K, limit))
        vals.append(v)
        errs.append(abs(v - ref))
    ok = _strictly_decreasing(errs) and errs[-1] <= tol
    verdict = "converging" if ok else "not converging"
    cols = {parameter: params, "hausdorff": dist, "value": vals, "abs_error": errs}
    return ProbeReport(parameter, cols, ref, verdict, {"tol": tol})


def degeneracy_family(K: Body, eps_schedule) -> list:
    """(eps, diag(eps, 1/eps) K) for each eps."""
    return [(float(e), K.linear_image(np.diag([e, 1.0 / e]))) for e in eps_schedule]


def probe_degeneracy(K: Body, phi: OrliczFn, eps_schedule=None, *, hom_factor: float = 1e-3,
                     nonhom_factor: float = 1e3) -> ProbeReport:
    """Feasible values along L_eps = diag(eps, 1/eps) K, rescaled so |L polar| = omega_n.

    For a polytope and phi in Phi2 the homogeneous values drop toward 0 and
    the nonhomogeneous ones grow without bound.  The verdict asks for a
    decreasing homogeneous column that ends below ``hom_factor`` times its
    first entry and an increasing nonhomogeneous column that ends above
    ``nonhom_factor`` times its first entry.
    """
    if K.dim != 2:
        raise OrliczError("degeneracy probe is planar")
    if admissible_class(phi, 2) != "Phi2":
        raise OrliczError("degeneracy probe needs phi in Phi2")
    eps = list(eps_schedule) if eps_schedule is not None else [2.0**-k for k in range(9)]
    homs, nonhoms = [], []
    for e, L in degeneracy_family(K, eps):
        Ls = L.linear_image(vrad(L.polar()) * np.eye(2))
        homs.append(hom_mixed_volume(K, Ls, phi).value)
        nonhoms.append(K.dim * nonhom_mixed_volume(K, Ls, phi))
    hom_ok = _strictly_decreasing(homs) and homs[-1] < hom_factor * homs[0]
    non_ok = _strictly_decreasing([-v for v in nonhoms]) and nonhoms[-1] > nonhom_factor * nonhoms[0]
    verdict = "degenerate" if hom_ok and non_ok else "inconclusive"
    details = {
        "hom_ratio": homs[-1] / homs[0], "nonhom_ratio": nonhoms[-1] / nonhoms[0],
        "hom_below_factor": bool(hom_ok), "nonhom_above_factor": bool(non_ok),
        "hom_factor": hom_factor, "nonhom_factor": nonhom_factor,
    }
    ref = K.dim * K.volume() * vrad(K.polar())
    return ProbeReport("eps", {"eps": eps, "hom": homs, "nonhom": nonhoms}, ref, verdict, details)


def cnp_oracle(p: float, n: int) -> float:
    """Adaptive 1-d quadrature of the integral of |<u, v>|^p over the sphere."""
    if n == 2:
        # four quarter-periods of cos^p, singular at the right end
        val, _ = quad(lambda t: np.cos(t) ** p, 0.0, np.pi / 2, limit=200, epsabs=0, epsrel=1e-13)
        return 4.0 * val
    val, _ = quad(lambda t: t**p, 0.0, 1.0, limit=200, epsabs=0, epsrel=1e-13)
    return 2 * np.pi * 2.0 * val


def cnp_constant(p: float, grid: SphereGrid | None = None, trials: int = 64, seed: int = 0) -> ProbeReport:
    """The integral of |<u, v>|^p for ``trials`` random unit v, with spread and oracle."""
    if not -1.0 < p < 0.0:
        raise OrliczError("p must lie in (-1, 0)")
    grid = grid or uniform_grid(1024)
    n = grid.dim
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((trials, n))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    phi = power_law(p)
    vals = []
    for v in V:
        r = abs_dot_integral(phi, 1.0, grid, v)
        vals.append(r.value if r.converged else float("inf"))
    vals = np.asarray(vals)
    mean = float(vals.mean())
    spread = float((vals.max() - vals.min()) / abs(mean))
    oracle = cnp_oracle(p, n)
    rel = abs(mean - oracle) / oracle
    verdict = "constant" if spread <= 1e-6 and rel <= 1e-6 else "not constant"
    cols = {"trial": list(range(trials)), "value": vals.tolist()}
    if n == 2:
        cols["angle"] = np.arctan2(V[:, 1], V[:, 0]).tolist()
    return ProbeReport("trial", cols, oracle, verdict,
                       {"mean": mean, "relative_spread": spread, "relative_error": rel, "p": p, "grid": grid.name})


__all__ = [
    "geominimal", "affine", "ball_value", "Certificate", "certify", "cyclic_condition", "ProbeReport",
    "probe_continuity", "probe_degeneracy", "degeneracy_family", "polygon_family", "perturbed_family",
    "cnp_constant", "cnp_oracle",
]
