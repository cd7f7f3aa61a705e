"""File formats: CSV grids with a JSON sidecar, lossless JSON, OBJ meshes of a 3-d projection.

CSV rows are grid points in s-major order.  Mandatory columns are
s,t,x0,x1,x2,x3; optional extras:

    g_p{k}_{plus,minus}   spinor g = p0 1 + i p1 I + p2 J + i p3 K, null components
    e2_s,e2_t,e3_s,e3_t   coordinate components of the tangent frame
    H0,H1                 mean curvature vector
    lam,mu | nu,rho       data of the expected metric (sign and kind in the sidecar)
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .dirac import ImmersionResult, SpinorField, XiForm
from .errors import InputError, SchemaError
from .flat import metric_neg
from .lorentz import h0_to_real8, real8_to_h0
from .surface import MetricField, NullChart

FORMAT_NAME = "lorspin-immersion"
FORMAT_VERSION = 1
BASE_COLUMNS = ["s", "t", "x0", "x1", "x2", "x3"]
SPINOR_COLUMNS = [f"g_p{k}_{side}" for k in range(4) for side in ("plus", "minus")]
FRAME_COLUMNS = ["e2_s", "e2_t", "e3_s", "e3_t"]
MEAN_COLUMNS = ["H0", "H1"]
GRID_RTOL = 1e-9


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest string that round-trips exactly
    return repr(float(x))


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def result_columns(result: ImmersionResult) -> dict:
    """Named per-point arrays, each of the grid shape."""
    chart = result.chart
    S, T = chart.grid()
    cols = {"s": S, "t": T}
    for k in range(4):
        cols[f"x{k}"] = result.F[..., k]
    if result.spinor is not None:
        g8 = h0_to_real8(result.spinor.g)
        for k, name in enumerate(SPINOR_COLUMNS):
            cols[name] = g8[..., k]
        fr = result.spinor.frame
        cols["e2_s"], cols["e2_t"] = fr[..., 0, 0], fr[..., 1, 0]
        cols["e3_s"], cols["e3_t"] = fr[..., 0, 1], fr[..., 1, 1]
    if result.mean_curvature is not None:
        cols["H0"] = result.mean_curvature[..., 0]
        cols["H1"] = result.mean_curvature[..., 1]
    for key in ("lam", "mu", "nu", "rho"):
        if key in result.fields:
            cols[key] = np.broadcast_to(result.fields[key], chart.shape)
    return cols


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def result_metadata(result: ImmersionResult, report: dict | None = None) -> dict:
    chart = result.chart
    meta = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": result.kind,
        "sign": int(result.sign),
        "grid": {"n_s": chart.n_s, "n_t": chart.n_t, "h_s": chart.h_s, "h_t": chart.h_t,
                 "origin": list(chart.origin)},
    }
    if "branch" in result.fields:
        meta["branch"] = result.fields["branch"]
    if "config" in result.fields:
        meta["config"] = result.fields["config"]
    if "identification" in result.fields:
        meta["identification"] = result.fields["identification"]
    if {"lam", "mu"} <= set(result.fields):
        meta["expected_metric"] = "lambda_mu"
    elif {"nu", "rho"} <= set(result.fields):
        meta["expected_metric"] = "nu_rho"
    if report is not None:
        meta["report"] = report
    return _jsonable(meta)


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1, allow_nan=False)


def write_csv(result: ImmersionResult, path, report: dict | None = None) -> None:
    cols = result_columns(result)
    names = list(cols)
    flat = [np.asarray(cols[n], float).ravel() for n in names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*flat):
            w.writerow([_fmt(v) for v in row])
    meta = result_metadata(result, report)
    meta["columns"] = names
    sidecar_path(path).write_text(dump_json(meta) + "\n")


def write_json(result: ImmersionResult, path, report: dict | None = None) -> None:
    meta = result_metadata(result, report)
    cols = result_columns(result)
    meta["columns"] = {name: np.asarray(v, float).ravel().tolist() for name, v in cols.items()}
    Path(path).write_text(dump_json(meta) + "\n")


def _grid_from_columns(s: np.ndarray, t: np.ndarray, meta: dict | None) -> NullChart:
    su = np.unique(s)
    tu = np.unique(t)
    n_s, n_t = len(su), len(tu)
    if n_s * n_t != len(s) or n_s < 3 or n_t < 3:
        raise SchemaError("points do not form a full rectangular grid of at least 3x3")
    if meta and "grid" in meta:
        g = meta["grid"]
        try:
            chart = NullChart(int(g["n_s"]), int(g["n_t"]), float(g["h_s"]), float(g["h_t"]), tuple(g["origin"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad grid block in sidecar: {exc}") from exc
        if (chart.n_s, chart.n_t) != (n_s, n_t):
            raise SchemaError("sidecar grid size disagrees with the CSV")
    else:
        chart = NullChart(n_s, n_t, (su[-1] - su[0]) / (n_s - 1), (tu[-1] - tu[0]) / (n_t - 1), (su[0], tu[0]))
    S, T = chart.grid()
    scale = max(1.0, float(np.max(np.abs(S))), float(np.max(np.abs(T))))
    if np.max(np.abs(S.ravel() - s)) > GRID_RTOL * scale or np.max(np.abs(T.ravel() - t)) > GRID_RTOL * scale:
        raise SchemaError("rows must be an evenly spaced grid in s-major order")
    return chart


def result_from_columns(cols: dict, meta: dict | None = None) -> ImmersionResult:
    missing = [c for c in BASE_COLUMNS if c not in cols]
    if missing:
        raise SchemaError(f"missing mandatory columns: {missing}")
    arrays = {}
    for name, v in cols.items():
        a = np.asarray(v, float)
        if a.ndim != 1 or not np.all(np.isfinite(a)):
            raise SchemaError(f"column {name} must hold finite numbers")
        arrays[name] = a
    lengths = {len(a) for a in arrays.values()}
    if len(lengths) != 1:
        raise SchemaError("columns have different lengths")
    chart = _grid_from_columns(arrays["s"], arrays["t"], meta)

    def grid(name):
        return arrays[name].reshape(chart.shape)

    F = np.stack([grid(f"x{k}") for k in range(4)], axis=-1)
    meta = meta or {}
    kind = meta.get("kind", "imported")
    sign = int(meta.get("sign", 1))
    spinor = None
    if all(c in arrays for c in SPINOR_COLUMNS + FRAME_COLUMNS):
        g = real8_to_h0(np.stack([grid(c) for c in SPINOR_COLUMNS], axis=-1))
        frame = np.empty(chart.shape + (2, 2))
        frame[..., 0, 0], frame[..., 1, 0] = grid("e2_s"), grid("e2_t")
        frame[..., 0, 1], frame[..., 1, 1] = grid("e3_s"), grid("e3_t")
        spinor = SpinorField(chart, g, frame)
    mean = None
    if all(c in arrays for c in MEAN_COLUMNS):
        mean = np.stack([grid("H0"), grid("H1")], axis=-1)
    S, T = chart.grid()
    xi = XiForm(chart, chart.d_ds(F), chart.d_dt(F))
    result = ImmersionResult(chart, F, xi, spinor=spinor, mean_curvature=mean, kind=kind, sign=sign)
    for key in ("lam", "mu", "nu", "rho"):
        if key in arrays:
            result.fields[key] = grid(key)
    expected = meta.get("expected_metric")
    if expected == "lambda_mu" and {"lam", "mu"} <= set(arrays):
        result.fields["expected_metric"] = MetricField.from_lambda_mu(chart, grid("lam"), grid("mu"), sign)
    elif expected == "nu_rho" and {"nu", "rho"} <= set(arrays):
        result.fields["expected_metric"] = metric_neg(chart, grid("nu"), grid("rho"), sign)
    for key in ("branch", "config", "identification"):
        if key in meta:
            result.fields[key] = meta[key]
    return result


def _load_sidecar(path: Path) -> dict | None:
    side = sidecar_path(path)
    if not side.exists():
        return None
    try:
        meta = json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"sidecar {side} is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict) or meta.get("format") != FORMAT_NAME:
        raise SchemaError(f"sidecar {side} is not a {FORMAT_NAME} file")
    return meta


def read_csv(path) -> ImmersionResult:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError("empty CSV file")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise SchemaError("duplicate column names")
    if any(not h for h in header) or not set(BASE_COLUMNS) <= set(header):
        raise SchemaError(f"header must name the columns {BASE_COLUMNS} (got {header})")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(x) for x in r] for r in body], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"non-numeric entry: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != len(header):
        raise SchemaError("every row must have one value per header column")
    cols = {h: data[:, k] for k, h in enumerate(header)}
    return result_from_columns(cols, _load_sidecar(path))


def read_json(path) -> ImmersionResult:
    try:
        meta = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(meta, dict) or meta.get("format") != FORMAT_NAME or not isinstance(meta.get("columns"), dict):
        raise SchemaError(f"{path} is not a {FORMAT_NAME} JSON file")
    return result_from_columns(meta["columns"], meta)


def read_result(path) -> ImmersionResult:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return read_json(path)
    return read_csv(path)


# ------------------------------------------------------------------ OBJ

DEFAULT_PROJECTION = np.array([[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])


def check_projection(P) -> np.ndarray:
    P = np.asarray(P, float)
    if P.shape != (3, 4):
        raise InputError(f"projection must be a 3x4 matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InputError("projection has non-finite entries")
    sv = np.linalg.svd(P, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise InputError("projection matrix is singular (rank < 3)")
    return P


def grid_triangles(n_s: int, n_t: int) -> np.ndarray:
    """Two triangles per grid cell, vertex indices 0-based in s-major order."""
    i, j = np.meshgrid(np.arange(n_s - 1), np.arange(n_t - 1), indexing="ij")
    a = (i * n_t + j).ravel()
    b = a + n_t
    return np.concatenate([np.stack([a, b, a + 1], -1), np.stack([a + 1, b, b + 1], -1)], axis=0)


def write_obj(result: ImmersionResult, path, projection=None) -> int:
    P = check_projection(DEFAULT_PROJECTION if projection is None else projection)
    verts = result.F.reshape(-1, 4) @ P.T
    tris = grid_triangles(result.chart.n_s, result.chart.n_t)
    lines = ["# lorspin grid mesh, projection rows: " + "; ".join(" ".join(_fmt(v) for v in r) for r in P)]
    lines += ["v " + " ".join(_fmt(c) for c in v) for v in verts]
    lines += ["f " + " ".join(str(k + 1) for k in tri) for tri in tris]
    Path(path).write_text("\n".join(lines) + "\n")
    return len(tris)


__all__ = [
    "FORMAT_NAME", "BASE_COLUMNS", "SPINOR_COLUMNS", "FRAME_COLUMNS", "write_csv", "write_json", "read_csv",
    "read_json", "read_result", "result_columns", "result_from_columns", "write_obj", "grid_triangles",
    "check_projection", "DEFAULT_PROJECTION", "sidecar_path", "dump_json",
]
