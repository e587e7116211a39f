"""Command-line front end.

Exit codes: 0 success, 1 bad input or failed precondition, 2 a certificate
that does not hold.  Every JSON report carries a ``config`` block with the
arguments that determine the numbers; the thread count is left out so
output is byte-identical for any ``--threads``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bodies import Ball, Body, vrad
from .errors import OrliczError
from .functionals import (
    affine,
    certify,
    cnp_constant,
    geominimal,
    perturbed_family,
    polygon_family,
    probe_continuity,
    probe_degeneracy,
)
from .mixed_vol import hom_mixed_volume, hom_mixed_volume_polar, nonhom_mixed_volume, segment_mixed_volume
from .orlicz_add import variational_mixed_volume
from .orlicz_fn import parse_phi
from .petty import PettyOptions, PettyResult
from .serialize import body_from_dict, body_to_dict, dumps, to_csv
from .sphere import ball_volume, grid_from_spec
from .svg import render

EXIT_OK, EXIT_PRECONDITION, EXIT_FALSE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PRECONDITION, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    env = os.environ.get("ORLICZKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise OrliczError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list:
    return [int(x) for x in _floats(text)]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", default="uniform-1024", help="sphere grid for balls and grid solvers")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: ORLICZKIT_THREADS or cores)")
    p.add_argument("--format", choices=("json", "csv", "svg"), default=None)
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orliczkit", description="Orlicz mixed volumes, Petty bodies and surface areas.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("body", help="inspect or render a body")
    b.add_argument("action", choices=("info", "render"))
    b.add_argument("path")
    _common(b)

    m = sub.add_parser("mv", help="Orlicz mixed volume")
    m.add_argument("--K", required=True)
    m.add_argument("--L")
    m.add_argument("--phi", required=True)
    kind = m.add_mutually_exclusive_group()
    kind.add_argument("--homogeneous", action="store_true")
    kind.add_argument("--polar-star", action="store_true", help="treat L as a star body; uses 1/rho_L")
    kind.add_argument("--segment", help="segment [0, v] given as comma-separated coordinates")
    _common(m)

    pt = sub.add_parser("petty", help="Orlicz-Petty body")
    pt.add_argument("--K", required=True)
    pt.add_argument("--phi", required=True)
    pt.add_argument("--mode", choices=("hom", "nonhom"), default="hom")
    pt.add_argument("--cone", choices=("full", "sym"), default="full")
    pt.add_argument("--starts", type=int, default=8)
    pt.add_argument("--out", help="write the Petty body as body JSON")
    pt.add_argument("--svg", help="write an overlay of K, its polar and the Petty body")
    _common(pt)

    f = sub.add_parser("functional", help="geominimal or affine surface area")
    f.add_argument("--which", choices=("geominimal", "affine"), required=True)
    f.add_argument("--K", required=True)
    f.add_argument("--phi", required=True)
    f.add_argument("--mode", choices=("hom", "nonhom"), default="hom")
    f.add_argument("--cone", choices=("full", "sym"), default="full")
    f.add_argument("--starts", type=int, default=8)
    _common(f)

    c = sub.add_parser("certify", help="inequality certificate")
    c.add_argument("--which", required=True,
                   choices=("isoperimetric", "santalo", "cyclic", "mahler", "minkowski", "bracket"))
    c.add_argument("--K", required=True)
    c.add_argument("--phi", required=True)
    c.add_argument("--psi")
    c.add_argument("--L")
    c.add_argument("--starts", type=int, default=8)
    c.add_argument("--cert-tol", type=float, default=1e-6)
    _common(c)

    i = sub.add_parser("interpret", help="first variation of volume under Orlicz addition")
    i.add_argument("--K", required=True)
    i.add_argument("--L", required=True)
    i.add_argument("--phi1", required=True)
    i.add_argument("--phi2", required=True)
    i.add_argument("--eps-schedule", default=None, help="comma-separated eps values")
    _common(i)

    pr = sub.add_parser("probe", help="continuity, degeneracy or C_{n,p} probes")
    pr.add_argument("--which", choices=("continuity", "degeneracy", "cnp"), required=True)
    pr.add_argument("--K", help="body for degeneracy, or base polygon for a perturbed continuity family")
    pr.add_argument("--phi", default=None)
    pr.add_argument("--ms", default="8,16,32,64,128,256", help="polygon sizes for the continuity probe")
    pr.add_argument("--deltas", default=None, help="vertex perturbations; switches continuity to perturbed --K")
    pr.add_argument("--eps-schedule", default=None)
    pr.add_argument("--p", type=float, default=-0.5)
    pr.add_argument("--trials", type=int, default=64)
    pr.add_argument("--starts", type=int, default=8)
    _common(pr)
    return ap


# ---------------------------------------------------------------------------
# helpers


def _load(path: str, args) -> Body:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise OrliczError(f"malformed JSON in {path}: {exc.msg}") from None
    except OSError as exc:
        raise OrliczError(f"cannot read {path}: {exc.strerror}") from None
    if isinstance(doc, dict) and doc.get("kind") == "ball" and "grid" not in doc:
        doc = dict(doc, grid=args.grid)
    return body_from_dict(doc)


def _config(args) -> dict:
    skip = {"threads", "output", "format", "command"}
    cfg = {"command": args.command}
    for k, v in sorted(vars(args).items()):
        if k not in skip:
            cfg[k] = v
    cfg["version"] = __version__
    return cfg


def _opts(args) -> PettyOptions:
    threads = args.threads if args.threads is not None else _default_threads()
    return PettyOptions(starts=getattr(args, "starts", 8), seed=args.seed, tol=args.tol,
                        threads=threads, grid=grid_from_spec(args.grid))


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(args, payload: dict) -> None:
    payload = dict(payload)
    payload["config"] = _config(args)
    _emit(args, dumps(payload))


def _csv(args, columns: dict) -> None:
    header = "".join(f"# {line}\n" for line in dumps(_config(args)).splitlines())
    _emit(args, header + to_csv(columns))


def _petty_payload(res: PettyResult) -> dict:
    return {
        "value": res.value,
        "verdict": res.verdict,
        "flags": res.flags,
        "phi": res.phi.name,
        "phi_class": res.phi_class,
        "mode": res.mode,
        "cone": res.cone,
        "polar_residual": res.polar_residual,
        "reference": res.reference,
        "starts": [{"label": s.label, "value": s.value, "iterations": s.iterations} for s in res.starts],
        "tightness_max": float(np.nanmax(np.abs(res.tightness))) if len(res.tightness) else 0.0,
        "objective_trace": res.trace,
        "M": body_to_dict(res.M) if res.M is not None else None,
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_body(args) -> int:
    K = _load(args.path, args)
    if args.action == "render" or args.format == "svg":
        _emit(args, render({"body": K, "polar": K.polar()}))
        return EXIT_OK
    n = K.dim
    omega = ball_volume(n)
    pv = K.polar_volume()
    rK, RK = K.inner_outer_radii()
    info = {
        "kind": K.kind, "dim": n, "volume": K.volume(), "polar_volume": pv, "omega_n": omega,
        "polar_residual": abs(pv - omega) / omega, "vrad": vrad(K), "centroid": K.centroid(),
        "inner_radius": rK, "outer_radius": RK,
    }
    _json(args, info)
    return EXIT_OK


def _cmd_mv(args) -> int:
    K = _load(args.K, args)
    phi = parse_phi(args.phi)
    if args.segment:
        r = segment_mixed_volume(K, _floats(args.segment), phi)
        payload = {"kind": "segment", "value": r.value, "residual": r.residual, "warnings": r.warnings}
    else:
        if not args.L:
            raise OrliczError("--L is required unless --segment is given")
        L = _load(args.L, args)
        if args.polar_star:
            r = hom_mixed_volume_polar(K, L, phi)
            payload = {"kind": "polar-star", "value": r.value, "residual": r.residual, "warnings": r.warnings}
        elif args.homogeneous:
            r = hom_mixed_volume(K, L, phi)
            payload = {"kind": "homogeneous", "value": r.value, "residual": r.residual,
                       "bracket": list(r.bracket) if r.bracket else None, "iterations": r.iterations,
                       "warnings": r.warnings}
        else:
            payload = {"kind": "nonhomogeneous", "value": nonhom_mixed_volume(K, L, phi)}
    _json(args, payload)
    return EXIT_OK


def _cmd_petty(args) -> int:
    from .petty import solve_petty

    K = _load(args.K, args)
    res = solve_petty(K, parse_phi(args.phi), args.mode, args.cone, _opts(args))
    if args.out:
        if res.M is None:
            raise OrliczError("Petty body could not be built: " + res.verdict)
        Path(args.out).write_text(dumps(body_to_dict(res.M)))
    if args.svg:
        Path(args.svg).write_text(render({"body": K, "polar": K.polar(), "petty": res.M}))
    if args.format == "csv":
        _csv(args, {"label": [s.label for s in res.starts], "value": [s.value for s in res.starts],
                    "iterations": [s.iterations for s in res.starts]})
    elif args.format == "svg":
        _emit(args, render({"body": K, "polar": K.polar(), "petty": res.M}))
    else:
        _json(args, _petty_payload(res))
    return EXIT_OK


def _cmd_functional(args) -> int:
    K = _load(args.K, args)
    phi = parse_phi(args.phi)
    if args.which == "geominimal":
        value, res = geominimal(K, phi, args.mode, args.cone, _opts(args))
    else:
        value, res = affine(K, phi, None, _opts(args))
    payload = {"which": args.which, "value": value}
    payload.update({k: v for k, v in _petty_payload(res).items() if k != "value"})
    _json(args, payload)
    return EXIT_OK


def _cmd_certify(args) -> int:
    K = _load(args.K, args)
    phi = parse_phi(args.phi)
    psi = parse_phi(args.psi) if args.psi else None
    L = _load(args.L, args) if args.L else None
    cert = certify(args.which, K, phi, psi=psi, L=L, opts=_opts(args), tol=args.cert_tol)
    if args.format == "csv":
        _csv(args, {"id": [cert.id], "lhs": [cert.lhs], "rhs": [cert.rhs], "holds": [cert.holds],
                    "slack": [cert.slack], "tol": [cert.tol], "digest": [cert.digest]})
    else:
        _json(args, cert.to_dict())
    return EXIT_OK if cert.holds else EXIT_FALSE


def _cmd_interpret(args) -> int:
    K = _load(args.K, args)
    L = _load(args.L, args)
    sched = _floats(args.eps_schedule) if args.eps_schedule else None
    r = variational_mixed_volume(K, L, parse_phi(args.phi1), parse_phi(args.phi2), sched)
    if args.format == "json":
        _json(args, {"estimate": r.estimate, "direct": r.direct, "rel_error": r.rel_error,
                     "derivative_at_one": r.derivative_at_one, "rows": r.rows()})
    else:
        rows = r.rows()
        _csv(args, {k: [row[k] for row in rows] for k in ("eps", "volume", "quotient", "richardson")})
    return EXIT_OK


def _cmd_probe(args) -> int:
    opts = _opts(args)
    if args.which == "continuity":
        phi = parse_phi(args.phi or "pow:1")
        if args.deltas:
            if not args.K:
                raise OrliczError("--deltas needs --K")
            K = _load(args.K, args)
            fam = perturbed_family(K, _floats(args.deltas), args.seed)
            rep = probe_continuity(fam, phi, K, parameter="delta", opts=opts)
        else:
            rep = probe_continuity(polygon_family(_ints(args.ms)), phi, Ball(2, 1.0, grid_from_spec(args.grid)),
                                   opts=opts)
    elif args.which == "degeneracy":
        if not args.K:
            raise OrliczError("degeneracy probe needs --K")
        sched = _floats(args.eps_schedule) if args.eps_schedule else None
        rep = probe_degeneracy(_load(args.K, args), parse_phi(args.phi or "pow:-1/2"), sched)
    else:
        rep = cnp_constant(args.p, grid_from_spec(args.grid), args.trials, args.seed)
    if args.format == "csv":
        _csv(args, rep.columns)
    else:
        _json(args, rep.to_dict())
    return EXIT_OK


COMMANDS = {
    "body": _cmd_body, "mv": _cmd_mv, "petty": _cmd_petty, "functional": _cmd_functional,
    "certify": _cmd_certify, "interpret": _cmd_interpret, "probe": _cmd_probe,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OrliczError as exc:
        sys.stderr.write(f"orliczkit: error: {exc}\n")
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
