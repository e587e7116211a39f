"""Body JSON format, stable number formatting and CSV tables.

Body documents::

    {"kind": "polygon", "vertices": [[x, y], ...]}
    {"kind": "hpolytope", "normals": [[...], ...], "supports": [...]}
    {"kind": "grid", "dim": n, "grid": "uniform-1024" | "sym3d-590",
     "support": [...], "curvature": [...]}        # curvature optional
    {"kind": "ball", "dim": n, "radius": r}

Floats are written with 17 significant digits so a dump/load cycle is exact
and identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .bodies import Ball, Body, GridBody, HPolytope, Polygon, StarGrid, WulffPolytope
from .errors import OrliczError
from .sphere import check_dim, grid_from_spec


def _plain(obj):
    """numpy scalars and arrays to Python lists and floats."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return f"{int(x)}.0"
    return f"{x:.17g}"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON with 17 significant digits for every float."""
    return _encode(_plain(obj), indent, 0) + "\n"


# ---------------------------------------------------------------------------
# bodies


def body_to_dict(K: Body) -> dict:
    if isinstance(K, HPolytope):
        return {"kind": "hpolytope", "normals": K.input_normals, "supports": K.input_supports}
    if isinstance(K, Polygon):
        return {"kind": "polygon", "vertices": K.vertices}
    if isinstance(K, WulffPolytope):
        return {"kind": "hpolytope", "normals": K.normals, "supports": K.supports}
    if isinstance(K, Ball):
        return {"kind": "ball", "dim": K.dim, "radius": K.radius}
    if isinstance(K, GridBody):
        _check_named(K.grid)
        out = {"kind": "grid", "dim": K.dim, "grid": K.grid.name, "support": K.h}
        if K.f is not None:
            out["curvature"] = K.f
        return out
    if isinstance(K, StarGrid):
        _check_named(K.grid)
        return {"kind": "star", "dim": K.dim, "grid": K.grid.name, "radial": K.rho}
    raise OrliczError(f"cannot serialize body of type {type(K).__name__}")


def _check_named(grid):
    try:
        grid_from_spec(grid.name)
    except OrliczError:
        raise OrliczError(f"grid {grid.name!r} has no spec string; cannot serialize") from None


def _array(doc: dict, key: str, ndim: int) -> np.ndarray:
    if key not in doc:
        raise OrliczError(f"body JSON lacks {key!r}")
    try:
        a = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise OrliczError(f"body JSON field {key!r} is not numeric") from None
    if a.ndim != ndim:
        raise OrliczError(f"body JSON field {key!r} has the wrong shape")
    return a


def body_from_dict(doc: dict) -> Body:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise OrliczError("body JSON needs a 'kind' field")
    kind = doc["kind"]
    if kind == "polygon":
        V = _array(doc, "vertices", 2)
        if V.shape[1] != 2:
            raise OrliczError(f"dimension {V.shape[1]} not supported for polygons")
        return Polygon(V)
    if kind == "hpolytope":
        U = _array(doc, "normals", 2)
        f = _array(doc, "supports", 1)
        check_dim(U.shape[1])
        return HPolytope(U, f) if U.shape[1] == 2 else WulffPolytope(U, f)
    if kind == "ball":
        dim = check_dim(int(doc.get("dim", 2)))
        grid = grid_from_spec(doc["grid"]) if "grid" in doc else None
        return Ball(dim, float(doc.get("radius", 1.0)), grid)
    if kind in ("grid", "star"):
        dim = check_dim(int(doc.get("dim", 2)))
        grid = grid_from_spec(doc.get("grid", "uniform-1024"))
        if grid.dim != dim:
            raise OrliczError("grid dimension does not match 'dim'")
        if kind == "star":
            return StarGrid(grid, _array(doc, "radial", 1))
        curv = _array(doc, "curvature", 1) if "curvature" in doc else None
        return GridBody(grid, _array(doc, "support", 1), curv)
    raise OrliczError(f"unknown body kind {kind!r}")


def load_body(path) -> Body:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise OrliczError(f"malformed JSON in {path}: {exc.msg}") from None
    except OSError as exc:
        raise OrliczError(f"cannot read {path}: {exc.strerror}") from None
    return body_from_dict(doc)


def save_body(K: Body, path) -> None:
    Path(path).write_text(dumps(body_to_dict(K)))


# ---------------------------------------------------------------------------
# tables


def to_csv(columns: dict) -> str:
    """Header row of column names, then one row per entry, floats at 17 digits."""
    names = list(columns)
    lengths = {len(columns[k]) for k in names}
    if len(lengths) > 1:
        raise OrliczError("CSV columns have different lengths")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*(columns[k] for k in names)):
        w.writerow([format_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
