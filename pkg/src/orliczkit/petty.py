"""Orlicz-Petty bodies: extremize V_phi(K, L) over L with polar volume omega_n.

Candidate bodies are parametrized by their support numbers on a fixed normal
set, L = intersection of {<x, u_i> <= h_i}.  The polar of such an L is the
hull of the points u_i / h_i, so its volume and the gradient of that volume
come straight from a qhull triangulation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .bodies import Ball, Body, GridBody, HPolytope, Polygon, StarGrid, WulffPolytope
from .errors import OrliczError
from .mixed_vol import orlicz_root
from .orlicz_fn import OrliczFn, admissible_class
from .sphere import SphereGrid, ball_volume, uniform_grid

DEGENERATE_RATIO = 1e-6
LOG_BOX = np.log(1e8)
SUP_BOX = np.log(1e4)


@dataclass
class PettyOptions:
    starts: int = 8
    seed: int = 0
    tol: float = 1e-8
    max_iter: int = 3000
    method: str = "lbfgs"
    threads: int = 1
    grid: SphereGrid | None = None
    perturb: float = 0.25
    extra_dirs: np.ndarray | None = None


@dataclass
class StartRecord:
    label: str
    value: float
    iterations: int
    h: np.ndarray
    trace: list
    message: str


@dataclass
class PettyResult:
    value: float
    M: Body | None
    h: np.ndarray
    directions: np.ndarray
    mode: str
    cone: str
    phi: OrliczFn
    phi_class: str
    polar_residual: float
    tightness: np.ndarray
    trace: list
    starts: list
    flags: list = field(default_factory=list)
    reference: float = float("nan")

    @property
    def degenerate(self) -> bool:
        return any(f.startswith("degenerate") for f in self.flags)

    @property
    def verdict(self) -> str:
        return self.flags[0] if self.flags else "ok"


# ---------------------------------------------------------------------------
# problem data


@dataclass
class _Data:
    dirs: np.ndarray
    masses: np.ndarray
    hK: np.ndarray
    group: np.ndarray
    n_groups: int
    grid: SphereGrid | None


def _antipodal_groups(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Close U under u -> -u and pair each direction with its antipode."""
    dots = U @ U.T
    missing = ~np.any(np.abs(dots + 1.0) < 1e-12, axis=1)
    U = np.concatenate([U, -U[missing]])
    dots = U @ U.T
    anti = np.argmin(dots, axis=1)
    group = np.minimum(np.arange(len(U)), anti)
    _, group = np.unique(group, return_inverse=True)
    return U, group


def _problem_data(K: Body, cone: str, opts: PettyOptions) -> _Data:
    grid = None
    if isinstance(K, Ball):
        K = K.as_grid()
    sm = K.surface_measure()
    if isinstance(K, GridBody):
        grid = K.grid
    U, S, h = sm.dirs, sm.masses, sm.support
    if opts.extra_dirs is not None:
        X = np.asarray(opts.extra_dirs, dtype=float)
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
        U = np.concatenate([U, X])
        S = np.concatenate([S, np.zeros(len(X))])
        h = np.concatenate([h, K.support(X)])
    if cone == "sym":
        m = len(U)
        U2, group = _antipodal_groups(U)
        if len(U2) > m:
            extra = U2[m:]
            S = np.concatenate([S, np.zeros(len(extra))])
            h = np.concatenate([h, K.support(extra)])
        U = U2
        return _Data(U, S, h, group, int(group.max()) + 1, grid)
    if cone != "full":
        raise OrliczError(f"unknown cone {cone!r}")
    return _Data(U, S, h, np.arange(len(U)), len(U), grid)


def polar_hull_volume(U: np.ndarray, h: np.ndarray) -> tuple[float, np.ndarray]:
    """Volume of conv(u_i / h_i) and its gradient with respect to log h_i."""
    n = U.shape[1]
    q = U / h[:, None]
    try:
        hull = ConvexHull(q, qhull_options="QbB")
    except QhullError as exc:
        raise OrliczError("polar hull is numerically flat") from exc
    simp = hull.simplices
    cone = np.abs(np.linalg.det(q[simp])) / (2.0 if n == 2 else 6.0)
    grad = -np.bincount(simp.ravel(), weights=np.repeat(cone, n), minlength=len(h))
    return float(cone.sum()), grad


class _Objective:
    """log J(h) and its gradient in the log-support variables of each group."""

    def __init__(self, data: _Data, phi: OrliczFn, mode: str, sup: bool):
        self.d = data
        self.phi = phi
        self.mode = mode
        self.sign = -1.0 if sup else 1.0
        self.n = data.dirs.shape[1]
        self.omega = ball_volume(self.n)
        self.live = data.masses > 0
        self.nK = float(np.dot(data.hK, data.masses))
        self.w = data.hK * data.masses / self.nK
        self.center = 0.0

    def h_of(self, y):
        return np.exp(y[self.d.group])

    def value(self, y) -> float:
        return float(np.exp(self._logJ(y)[0]))

    def _logJ(self, y):
        h = self.h_of(y)
        A, dA = polar_hull_volume(self.d.dirs, h)
        return self.core(h, A, dA)

    def core(self, h, A, dA):
        """log J and its gradient in log h, given the polar volume and its log-h gradient."""
        d = self.d
        n = self.n
        if self.mode == "hom":
            c = self.nK * h / d.hK
            lam = orlicz_root(self.w, c, self.phi)
            a = c[self.live] / lam
            s = self.w[self.live] * self.phi.d(a) * a
            g = np.zeros_like(h)
            g[self.live] = s / s.sum()
            logJ = np.log(lam) + (np.log(A) - np.log(self.omega)) / n
            grad = g + dA / (n * A)
        else:
            scale = (A / self.omega) ** (1.0 / n)
            t = scale * h / d.hK
            mass = d.hK * d.masses
            J = float(np.dot(self.phi(t), mass))
            dt = self.phi.d(t) * t * mass
            dt = np.where(self.live, dt, 0.0)
            logJ = np.log(J)
            grad = (dt + dt.sum() * dA / (n * A)) / J
        return logJ, grad

    def __call__(self, y):
        try:
            logJ, gx = self._logJ(y)
        except OrliczError:
            return np.inf, np.zeros_like(y)
        gy = np.bincount(self.d.group, weights=gx, minlength=self.d.n_groups)
        m = y.mean() - self.center
        return self.sign * logJ + 0.5 * m * m, self.sign * gy + m / len(y)


# ---------------------------------------------------------------------------
# solver


def _starts(data: _Data, opts: PettyOptions) -> list[tuple[str, np.ndarray]]:
    y_K = np.log(np.bincount(data.group, weights=data.hK) / np.bincount(data.group))
    out = [("K", y_K), ("ball", np.full(data.n_groups, y_K.mean()))]
    for k in range(max(opts.starts - 2, 0)):
        rng = np.random.default_rng([opts.seed, k])
        out.append((f"random-{k}", y_K + opts.perturb * rng.standard_normal(data.n_groups)))
    return out[: max(opts.starts, 1)]


def _tracer(trace: list):
    # scipy passes an OptimizeResult only when the parameter has this name
    def cb(intermediate_result):
        trace.append(float(intermediate_result.fun))

    return cb


def _run(obj: _Objective, label: str, y0: np.ndarray, bounds, opts: PettyOptions) -> StartRecord:
    trace: list = []
    y = y0.copy()
    nit = 0
    msg = ""
    if opts.method == "nelder-mead":
        res = minimize(lambda z: obj(z)[0], y, method="Nelder-Mead", bounds=bounds,
                       options={"maxiter": opts.max_iter * 20, "xatol": 1e-12, "fatol": 1e-15, "adaptive": True},
                       callback=_tracer(trace))
        y, nit, msg = res.x, res.nit, str(res.message)
    else:
        prev = np.inf
        for _ in range(6):
            res = minimize(obj, y, jac=True, method="L-BFGS-B", bounds=bounds,
                           options={"maxiter": opts.max_iter, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-13},
                           callback=_tracer(trace))
            y, nit, msg = res.x, nit + res.nit, str(res.message)
            if prev - res.fun <= 1e-15 * max(1.0, abs(res.fun)):
                break
            prev = res.fun
    return _polish(obj, StartRecord(label, obj.value(y), nit, obj.h_of(y), trace, msg), opts)


class _FacetProblem:
    """Smooth reduction of the planar problem for a fixed set F of facet normals.

    Free variables are the supports of F.  Every other normal is held
    against the vertex between its two angular neighbours in F, so its
    support is a fixed linear combination of two facet supports.  The polar
    volume only involves the points of F, which makes the objective smooth
    as long as F is the facet set of the optimum.
    """

    def __init__(self, obj: _Objective, F: np.ndarray):
        d = obj.d
        ang = np.mod(np.arctan2(d.dirs[:, 1], d.dirs[:, 0]), 2 * np.pi)
        F = np.asarray(F)[np.argsort(ang[F])]
        m = len(F)
        self.obj, self.F = obj, F
        rest = np.setdiff1d(np.arange(len(d.hK)), F)
        # neighbours: F[b] is the first facet at or after the angle of u, F[a] the one before
        b = np.searchsorted(ang[F], ang[rest]) % m
        a = (b - 1) % m
        ua, ub = d.dirs[F[a]], d.dirs[F[b]]
        det = ua[:, 0] * ub[:, 1] - ua[:, 1] * ub[:, 0]
        if np.any(det <= 0):
            raise OrliczError("facet set does not bound a polygon")
        u = d.dirs[rest]
        self.alpha = (u[:, 0] * ub[:, 1] - u[:, 1] * ub[:, 0]) / det
        self.beta = (ua[:, 0] * u[:, 1] - ua[:, 1] * u[:, 0]) / det
        self.rest, self.a, self.b = rest, a, b
        self.groups, self.gidx = np.unique(d.group[F], return_inverse=True)

    def z_of(self, h):
        return np.log(np.bincount(self.gidx, weights=h[self.F]) / np.bincount(self.gidx))

    def full_h(self, z):
        hF = np.exp(z[self.gidx])
        h = np.empty(len(self.obj.d.hK))
        h[self.F] = hF
        h[self.rest] = self.alpha * hF[self.a] + self.beta * hF[self.b]
        return h, hF

    def __call__(self, z):
        obj = self.obj
        h, hF = self.full_h(z)
        if np.any(h <= 0):
            return np.inf, np.zeros_like(z)
        try:
            A, dAF = polar_hull_volume(obj.d.dirs[self.F], hF)
            dA = np.zeros(len(h))
            dA[self.F] = dAF
            logJ, g = obj.core(h, A, dA)
        except OrliczError:
            return np.inf, np.zeros_like(z)
        gh = g / h
        gF = gh[self.F].copy()
        np.add.at(gF, self.a, self.alpha * gh[self.rest])
        np.add.at(gF, self.b, self.beta * gh[self.rest])
        gz = np.bincount(self.gidx, weights=gF * hF, minlength=len(z))
        mz = z.mean() - obj.center
        return logJ + 0.5 * mz * mz, gz + mz / len(z)

    def release_slopes(self, h) -> np.ndarray:
        """Left derivative of log J in log h_i for each held normal.

        Lowering h_i pushes u_i / h_i out of the polar edge between its
        neighbours; a positive slope means that lowers the objective.
        """
        d = self.obj.d
        hF = h[self.F]
        q = d.dirs / h[:, None]
        qa, qb = q[self.F[self.a]], q[self.F[self.b]]
        e = qb - qa
        nu = np.column_stack([e[:, 1], -e[:, 0]])
        dA = np.zeros(len(h))
        dA[self.rest] = -0.5 * np.einsum("ij,ij->i", nu, q[self.rest])
        A, _ = polar_hull_volume(d.dirs[self.F], hF)
        _, g = self.obj.core(h, A, dA)
        out = g[self.rest]
        return np.where(d.masses[self.rest] > 0, out, -np.inf)


def _minimize_reduced(prob: _FacetProblem, z, opts: PettyOptions):
    nit = 0
    for _ in range(4):
        res = minimize(prob, z, jac=True, method="L-BFGS-B",
                       options={"maxiter": opts.max_iter, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-14})
        done = np.allclose(res.x, z, rtol=0, atol=1e-15)
        z, nit = res.x, nit + res.nit
        if done:
            break
    return z, nit


def _polish(obj: _Objective, rec: StartRecord, opts: PettyOptions) -> StartRecord:
    """Active-set refinement for increasing phi on planar problems.

    The facet set starts from M(h) minus near-degenerate edges, then facets
    that collapse are dropped and held normals with a positive release slope
    are freed until the set is stable.
    """
    if obj.n != 2 or obj.sign < 0 or obj.phi.kind != "I":
        return rec
    d = obj.d
    try:
        M = HPolytope(d.dirs, rec.h)
    except OrliczError:
        return rec
    per = M.edge_lengths.sum()
    F = M.tight[M.edge_lengths > 1e-4 * per]
    h = rec.h
    nit = rec.iterations
    seen = set()
    for _ in range(2 * len(d.hK)):
        key = tuple(sorted(F.tolist()))
        if key in seen:
            break
        seen.add(key)
        try:
            prob = _FacetProblem(obj, F)
            z, k = _minimize_reduced(prob, prob.z_of(h), opts)
            h_new, _ = prob.full_h(z)
            Mn = HPolytope(d.dirs, h_new)
        except OrliczError:
            return rec
        nit += k
        h = h_new
        per = Mn.edge_lengths.sum()
        live = set(Mn.tight[Mn.edge_lengths > 1e-9 * per].tolist())
        lost = [f for f in F.tolist() if f not in live]
        if lost:
            F = np.array([f for f in F.tolist() if f in live])
            continue
        slopes = prob.release_slopes(h)
        if len(slopes) and np.max(slopes) > 1e-10:
            F = np.append(F, prob.rest[int(np.argmax(slopes))])
            continue
        break
    y = np.log(h[np.unique(d.group, return_index=True)[1]])
    try:
        value = obj.value(y)
    except OrliczError:
        return rec
    if not value <= rec.value * (1 + 1e-13):
        return rec
    return StartRecord(rec.label, value, nit, obj.h_of(y), rec.trace, rec.message + "; polished")


def _body_from(U: np.ndarray, h: np.ndarray) -> Body:
    if U.shape[1] == 2:
        return HPolytope(U, h)
    return WulffPolytope(U, h)


def _reference_value(obj: _Objective) -> float:
    return obj.value(np.log(np.bincount(obj.d.group, weights=obj.d.hK) / np.bincount(obj.d.group)))


def solve_petty(K: Body, phi: OrliczFn, mode: str = "hom", cone: str = "full",
                opts: PettyOptions | None = None) -> PettyResult:
    """Extremize V_phi(K, L) over L with |L polar| = omega_n.

    The homogeneous problem is a minimum for Phi1 and Phi2 and a maximum for
    Psi; the nonhomogeneous one is a maximum for Phi2 and a minimum otherwise.

    Multistarts run in a thread pool and are reduced in start order, so the
    result does not depend on the thread count.
    """
    opts = opts or PettyOptions()
    if mode not in ("hom", "nonhom"):
        raise OrliczError(f"unknown mode {mode!r}")
    n = K.dim
    cls = admissible_class(phi, n)
    if cls == "none":
        raise OrliczError("phi is in none of Phi1, Phi2, Psi")
    flags: list = []
    # hom: inf over Phi1, Phi2 and sup over Psi; nonhom: sup over Phi2 only
    sup = cls == "Psi" if mode == "hom" else cls == "Phi2"
    toward = "infinity" if sup else "0"
    if cls == "Phi2" and cone != "sym":
        flags.append(f"degenerate: objective unbounded toward {toward} on the full cone")
    data = _problem_data(K, cone, opts)
    obj = _Objective(data, phi, mode, sup)
    y_ref = _starts(data, PettyOptions(starts=1))[0][1]
    obj.center = float(y_ref.mean())
    box = SUP_BOX if sup else LOG_BOX
    bounds = [(obj.center - box, obj.center + box)] * data.n_groups
    starts = _starts(data, opts)
    threads = max(1, int(opts.threads))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            records = list(ex.map(lambda s: _run(obj, s[0], s[1], bounds, opts), starts))
    else:
        records = [_run(obj, lab, y0, bounds, opts) for lab, y0 in starts]
    ref = obj.value(y_ref)
    pick = max if sup else min
    best = pick(records, key=lambda r: r.value)
    # rescale so the polar body has volume omega_n
    A, _ = polar_hull_volume(data.dirs, best.h)
    omega = ball_volume(n)
    for r in records:
        Ar, _ = polar_hull_volume(data.dirs, r.h)
        r.h = r.h * (Ar / omega) ** (1.0 / n)
    h = best.h
    try:
        M = _body_from(data.dirs, h)
        polar_res = abs(M.polar_volume() - omega) / omega
        slack = h - np.asarray(M.support(data.dirs))
    except OrliczError:
        # the minimizing sequence has flattened beyond what a polytope can represent
        M, polar_res, slack = None, float("nan"), np.full(len(h), np.nan)
        flags.insert(0, f"degenerate: objective unbounded toward {toward}")
    yb = np.log(h[np.unique(data.group, return_index=True)[1]])
    at_bound = np.any(np.abs(yb - yb.mean()) > box - 1.0)
    degenerate = any(f.startswith("degenerate") for f in flags)
    if sup:
        flags.append("maximizer existence unproven")
        if at_bound:
            flags.append("bound-active")
    elif not degenerate and (best.value <= DEGENERATE_RATIO * ref or (at_bound and best.value < 1e-3 * ref)):
        flags.insert(0, "degenerate: objective unbounded toward 0")
    return PettyResult(
        value=best.value, M=M, h=h, directions=data.dirs, mode=mode, cone=cone, phi=phi,
        phi_class=cls, polar_residual=polar_res, tightness=slack, trace=best.trace, starts=records,
        flags=flags, reference=ref,
    )


def objective_hom(K: Body, h, phi: OrliczFn, *, cone: str = "full") -> float:
    """V_phi(K, M(h)) * vrad(M(h) polar) for support numbers h on K's normal set."""
    data = _problem_data(K, cone, PettyOptions())
    obj = _Objective(data, phi, "hom", False)
    y = np.log(np.asarray(h, dtype=float))
    return obj.value(y)


def objective_nonhom(K: Body, h, phi: OrliczFn, *, cone: str = "full") -> float:
    data = _problem_data(K, cone, PettyOptions())
    obj = _Objective(data, phi, "nonhom", False)
    return obj.value(np.log(np.asarray(h, dtype=float)))


# ---------------------------------------------------------------------------
# star bodies


class _StarObjective:
    """log of vrad(L) * V_phi(K, L polar) over radial samples of L on a grid."""

    def __init__(self, K: Body, grid: SphereGrid, phi: OrliczFn, sup: bool):
        if isinstance(K, Ball):
            K = K.as_grid(grid)
        sm = K.surface_measure()
        self.grid = grid
        self.phi = phi
        self.sign = -1.0 if sup else 1.0
        self.n = grid.dim
        self.omega = ball_volume(self.n)
        live = sm.masses > 0
        self.hK = sm.support[live]
        self.nK = float(np.dot(sm.support, sm.masses))
        self.w = self.hK * sm.masses[live] / self.nK
        dirs = sm.dirs[live]
        if sm.grid is grid:
            idx = np.flatnonzero(live)
            self.j0, self.j1, self.t = idx, idx, np.zeros(len(idx))
        elif self.n == 2:
            th = grid.angles
            order = np.argsort(th)
            ths = th[order]
            q = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2 * np.pi)
            k = np.searchsorted(ths, q, side="right") - 1
            lo = np.where(k < 0, len(ths) - 1, k)
            hi = (lo + 1) % len(ths)
            left = np.where(k < 0, ths[-1] - 2 * np.pi, ths[lo])
            right = np.where(hi == 0, ths[0] + 2 * np.pi, ths[hi])
            q = np.where(k < 0, q, q)
            self.j0, self.j1 = order[lo], order[hi]
            self.t = (q - left) / (right - left)
        else:
            raise OrliczError("star-body solver on S^2 needs K sampled on the same grid")
        self.center = 0.0

    def rho_atoms(self, rho):
        return (1 - self.t) * rho[self.j0] + self.t * rho[self.j1]

    def _logJ(self, y):
        rho = np.exp(y)
        ra = self.rho_atoms(rho)
        c = self.nK / (ra * self.hK)
        lam = orlicz_root(self.w, c, self.phi)
        a = c / lam
        s = self.w * self.phi.d(a) * a
        g = s / s.sum()
        wq = self.grid.weights * rho**self.n
        V = wq.sum() / self.n
        logJ = np.log(lam) + (np.log(V) - np.log(self.omega)) / self.n
        coef = -g / ra
        grad = wq / wq.sum()
        grad = grad + np.bincount(self.j0, weights=coef * (1 - self.t), minlength=len(y)) * rho
        grad = grad + np.bincount(self.j1, weights=coef * self.t, minlength=len(y)) * rho
        return logJ, grad

    def value(self, y) -> float:
        return float(np.exp(self._logJ(y)[0]))

    def __call__(self, y):
        logJ, g = self._logJ(y)
        m = y.mean() - self.center
        return self.sign * logJ + 0.5 * m * m, self.sign * g + m / len(y)


def solve_affine_star(K: Body, phi: OrliczFn, grid: SphereGrid | None = None,
                      opts: PettyOptions | None = None) -> PettyResult:
    """Extremize vrad(L) V_phi(K, L polar) over star bodies L sampled on a grid."""
    opts = opts or PettyOptions()
    n = K.dim
    cls = admissible_class(phi, n)
    if cls == "none":
        raise OrliczError("phi is in none of Phi1, Phi2, Psi")
    sup = cls == "Psi"
    if grid is None:
        grid = K.grid if isinstance(K, (GridBody, Ball)) else (opts.grid or uniform_grid(1024))
    obj = _StarObjective(K, grid, phi, sup)
    y_K = -np.log(K.support(grid.nodes)) if not isinstance(K, GridBody) or K.grid is not grid else -np.log(K.h)
    obj.center = float(y_K.mean())
    box = SUP_BOX if sup else LOG_BOX
    bounds = [(obj.center - box, obj.center + box)] * len(grid)
    starts = [("K-polar", y_K), ("ball", np.full(len(grid), y_K.mean()))]
    for k in range(max(opts.starts - 2, 0)):
        rng = np.random.default_rng([opts.seed, k])
        starts.append((f"random-{k}", y_K + opts.perturb * rng.standard_normal(len(grid))))
    starts = starts[: max(opts.starts, 1)]
    records = []
    for lab, y0 in starts:
        trace: list = []
        y = y0
        nit = 0
        for _ in range(6):
            res = minimize(obj, y, jac=True, method="L-BFGS-B", bounds=bounds,
                           options={"maxiter": opts.max_iter, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-13},
                           callback=_tracer(trace))
            done = np.allclose(res.x, y, rtol=0, atol=1e-14)
            y, nit = res.x, nit + res.nit
            if done:
                break
        records.append(StartRecord(lab, obj.value(y), nit, np.exp(y), trace, str(res.message)))
    ref = obj.value(y_K)
    best = (max if sup else min)(records, key=lambda r: r.value)
    omega = ball_volume(n)
    rho = best.h
    vol = float(np.dot(grid.weights, rho**n)) / n
    rho = rho * (omega / vol) ** (1.0 / n)
    L = StarGrid(grid, rho)
    flags = []
    if sup:
        flags.append("maximizer existence unproven")
    elif best.value <= DEGENERATE_RATIO * ref:
        flags.append("degenerate: objective unbounded toward 0")
    return PettyResult(
        value=best.value, M=L, h=rho, directions=grid.nodes, mode="hom", cone="star", phi=phi,
        phi_class=cls, polar_residual=abs(L.volume() - omega) / omega, tightness=np.zeros(0),
        trace=best.trace, starts=records, flags=flags, reference=ref,
    )


# ---------------------------------------------------------------------------
# diagnostics


@dataclass
class TightnessReport:
    max_slack: float
    min_slack: float
    enriched_value: float
    drift: float


def tightness_check(K: Body, result: PettyResult, opts: PettyOptions | None = None) -> TightnessReport:
    """Slack of each support number and the value drift after adding zero-mass normals."""
    opts = opts or PettyOptions(starts=2)
    if K.dim != 2:
        raise OrliczError("tightness check is implemented for planar bodies")
    U = result.directions
    th = np.sort(np.mod(np.arctan2(U[:, 1], U[:, 0]), 2 * np.pi))
    mid = 0.5 * (th + np.append(th[1:], th[0] + 2 * np.pi))
    extra = np.column_stack([np.cos(mid), np.sin(mid)])
    enriched = solve_petty(K, result.phi, result.mode, result.cone,
                           PettyOptions(starts=opts.starts, seed=opts.seed, extra_dirs=extra, grid=opts.grid))
    return TightnessReport(
        max_slack=float(np.max(result.tightness)),
        min_slack=float(np.min(result.tightness)),
        enriched_value=enriched.value,
        drift=abs(enriched.value - result.value) / result.value,
    )


__all__ = [
    "PettyOptions",
    "PettyResult",
    "solve_petty",
    "solve_affine_star",
    "objective_hom",
    "objective_nonhom",
    "tightness_check",
    "polar_hull_volume",
    "Polygon",
]
