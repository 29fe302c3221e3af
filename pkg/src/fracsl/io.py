"""Configuration ingestion and result emission (CSV, JSON, SVG).

The config is a single JSON document::

    {
      "alpha": 1.5, "beta": 0.5, "lambda": 0.1, "p_lap": 2.0,
      "p_coef": "sin(t)", "q_coef": "1",
      "impulses": [{"t": 1.0, "I": "0.1*y+0.05", "I_star": "0"}],
      "mesh":   {"nodes_per_subinterval": 256},
      "solver": {"mode": "rederived", "tol": 1e-10, "max_iter": 500,
                 "damping": 0.5, "nu": 1.0, "theta": 1.0, "accel_depth": 8}
    }

Coefficient expressions use the variable ``t``, impulse maps the variable
``y``; the grammar is documented in :mod:`fracsl.exprlang`. Unknown keys are
rejected. ``mesh`` and ``solver`` are optional and every solver key has the
default shown above (``nodes_per_subinterval`` defaults to 128).

Solution tables are CSV with columns ``t, side, y, yprime`` (side L/R/I for
left-limit, right-limit, interior samples), one row per stored sample, 17
significant digits so binary doubles round-trip exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import exprlang
from .errors import ExprSyntaxError, ValidationError
from .grid import GridFunction, Mesh
from .problem import Impulse, ProblemSpec
from .solver import AssemblyMode

DEFAULT_NODES = 128
DEFAULT_SOLVER = {
    "mode": "rederived",
    "tol": 1e-10,
    "max_iter": 500,
    "damping": 0.5,
    "nu": 1.0,
    "theta": 1.0,
    "accel_depth": 8,
}


@dataclass
class SolverSettings:
    mode: AssemblyMode = AssemblyMode.REDERIVED
    tol: float = 1e-10
    max_iter: int = 500
    damping: float = 0.5
    nu: float = 1.0
    theta: float = 1.0
    accel_depth: int = 8


@dataclass
class LoadedConfig:
    spec: ProblemSpec
    nodes_per_subinterval: int
    solver: SolverSettings


def _require_number(obj, field, lo=None, hi=None):
    if not isinstance(obj, (int, float)) or isinstance(obj, bool) or not math.isfinite(float(obj)):
        raise ValidationError("expected a finite number", field=field)
    v = float(obj)
    if lo is not None and v < lo:
        raise ValidationError(f"value {v} below {lo}", field=field)
    if hi is not None and v > hi:
        raise ValidationError(f"value {v} above {hi}", field=field)
    return v


def _parse_expr(source, variable, field):
    if not isinstance(source, str):
        raise ValidationError("expected an expression string", field=field)
    try:
        return exprlang.parse(source, variable)
    except ExprSyntaxError as err:
        err.field = field
        raise


def _reject_unknown(mapping, allowed, context):
    if not isinstance(mapping, dict):
        raise ValidationError("expected a JSON object", field=context)
    for key in mapping:
        if key not in allowed:
            raise ValidationError(f"unknown key {key!r}", field=context)


def load_config(path) -> LoadedConfig:
    """Load and validate a problem configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ValidationError(f"cannot read config: {err}", field="path") from None
    except UnicodeDecodeError as err:
        raise ValidationError(f"config is not UTF-8 text: {err}", field="path") from None
    except json.JSONDecodeError as err:
        raise ValidationError(f"malformed JSON: {err}", field="json") from None
    return parse_config(raw)


def parse_config(raw) -> LoadedConfig:
    _reject_unknown(raw, {"alpha", "beta", "lambda", "p_lap", "p_coef", "q_coef", "impulses", "mesh", "solver"}, "config")
    for required in ("alpha", "beta", "lambda", "p_lap", "p_coef", "q_coef"):
        if required not in raw:
            raise ValidationError("missing required key", field=required)

    alpha = _require_number(raw["alpha"], "alpha")
    beta = _require_number(raw["beta"], "beta")
    lam = _require_number(raw["lambda"], "lambda")
    p_lap = _require_number(raw["p_lap"], "p_lap")
    p_coef = _parse_expr(raw["p_coef"], "t", "p_coef")
    q_coef = _parse_expr(raw["q_coef"], "t", "q_coef")

    impulses = []
    raw_impulses = raw.get("impulses", [])
    if not isinstance(raw_impulses, list):
        raise ValidationError("expected a list", field="impulses")
    for i, item in enumerate(raw_impulses):
        ctx = f"impulses[{i}]"
        _reject_unknown(item, {"t", "I", "I_star"}, ctx)
        for required in ("t", "I", "I_star"):
            if required not in item:
                raise ValidationError("missing required key", field=f"{ctx}.{required}")
        t = _require_number(item["t"], f"{ctx}.t")
        if not 0.0 < t < math.pi:
            raise ValidationError(f"impulse point {t} outside (0, pi)", field=f"{ctx}.t")
        impulses.append(
            Impulse(t, _parse_expr(item["I"], "y", f"{ctx}.I"), _parse_expr(item["I_star"], "y", f"{ctx}.I_star"))
        )

    spec = ProblemSpec(alpha, beta, lam, p_coef, q_coef, p_lap, tuple(impulses))

    mesh_raw = raw.get("mesh", {})
    _reject_unknown(mesh_raw, {"nodes_per_subinterval"}, "mesh")
    nodes = mesh_raw.get("nodes_per_subinterval", DEFAULT_NODES)
    if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 4:
        raise ValidationError("nodes_per_subinterval must be an integer >= 4", field="mesh.nodes_per_subinterval")

    solver_raw = raw.get("solver", {})
    _reject_unknown(solver_raw, set(DEFAULT_SOLVER), "solver")
    merged = {**DEFAULT_SOLVER, **solver_raw}
    try:
        mode = AssemblyMode(merged["mode"])
    except ValueError:
        raise ValidationError(f"unknown mode {merged['mode']!r}", field="solver.mode") from None
    max_iter = merged["max_iter"]
    if not isinstance(max_iter, int) or isinstance(max_iter, bool) or max_iter < 1:
        raise ValidationError("max_iter must be a positive integer", field="solver.max_iter")
    accel_depth = merged["accel_depth"]
    if not isinstance(accel_depth, int) or isinstance(accel_depth, bool) or accel_depth < 0:
        raise ValidationError("accel_depth must be a nonnegative integer", field="solver.accel_depth")
    settings = SolverSettings(
        mode=mode,
        tol=_require_number(merged["tol"], "solver.tol"),
        max_iter=max_iter,
        damping=_require_number(merged["damping"], "solver.damping"),
        nu=_require_number(merged["nu"], "solver.nu"),
        theta=_require_number(merged["theta"], "solver.theta"),
        accel_depth=accel_depth,
    )
    if settings.tol <= 0.0:
        raise ValidationError("tolerance must be positive", field="solver.tol")
    if not 0.0 < settings.damping <= 1.0:
        raise ValidationError("damping must lie in (0, 1]", field="solver.damping")
    if not 0.0 < settings.theta <= 1.0:
        raise ValidationError("theta must lie in (0, 1]", field="solver.theta")
    if settings.nu <= 0.0:
        raise ValidationError("nu must be positive", field="solver.nu")
    return LoadedConfig(spec, nodes, settings)


# -- solution tables ----------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _side(mesh: Mesh, q: int, i: int) -> str:
    if q > 0 and i == 0:
        return "R"
    if q < mesh.n_pieces - 1 and i == mesh.nodes_per_subinterval:
        return "L"
    return "I"


def write_solution_csv(path, y: GridFunction):
    mesh = y.mesh
    dv = y.derivative_values
    lines = ["t,side,y,yprime"]
    for q in range(mesh.n_pieces):
        s = mesh.piece_nodes[q]
        for i in range(len(s)):
            yp = dv[q][i] if dv is not None else math.nan
            lines.append(f"{_fmt(s[i])},{_side(mesh, q, i)},{_fmt(y.values[q][i])},{_fmt(yp)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_solution_csv(path, mesh: Mesh) -> GridFunction:
    """Read a solution table back onto its mesh, checking the layout."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as err:
        raise ValidationError(f"cannot read solution: {err}", field="path") from None
    except UnicodeDecodeError as err:
        raise ValidationError(f"solution file is not UTF-8 text: {err}", field="path") from None
    if not lines or lines[0] != "t,side,y,yprime":
        raise ValidationError("bad or missing CSV header", field="csv")
    rows = lines[1:]
    if len(rows) != mesh.flat_size:
        raise ValidationError(f"{len(rows)} rows for {mesh.flat_size} mesh samples", field="csv")
    vals = [np.empty(len(p)) for p in mesh.piece_nodes]
    dvals = [np.empty(len(p)) for p in mesh.piece_nodes]
    row = 0
    for q in range(mesh.n_pieces):
        s = mesh.piece_nodes[q]
        for i in range(len(s)):
            parts = rows[row].split(",")
            if len(parts) != 4:
                raise ValidationError(f"row {row + 2}: expected 4 columns", field="csv")
            try:
                t, yv, yp = float(parts[0]), float(parts[2]), float(parts[3])
            except ValueError:
                raise ValidationError(f"row {row + 2}: bad number", field="csv") from None
            if t != s[i]:
                raise ValidationError(f"row {row + 2}: abscissa {parts[0]} is not mesh node {s[i]!r}", field="csv")
            if parts[1] != _side(mesh, q, i):
                raise ValidationError(f"row {row + 2}: side {parts[1]!r}, expected {_side(mesh, q, i)!r}", field="csv")
            vals[q][i] = yv
            dvals[q][i] = yp
            row += 1
    return GridFunction(mesh, vals, dvals)


def write_report_json(path, report: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def emit_svg(path, y: GridFunction, width: int = 800, height: int = 480):
    """Static plot: one polyline per smooth piece, impulse points marked."""
    mesh = y.mesh
    pad = 50.0
    lo = min(float(np.min(v)) for v in y.values)
    hi = max(float(np.max(v)) for v in y.values)
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo

    def sx(t):
        return pad + (width - 2 * pad) * t / mesh.interval_end

    def sy(v):
        return height - pad - (height - 2 * pad) * (v - lo) / span

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for tk in mesh.impulse_points:
        parts.append(
            f'<line x1="{sx(tk):.2f}" y1="{pad}" x2="{sx(tk):.2f}" y2="{height - pad}" '
            f'stroke="gray" stroke-dasharray="4 3"/>'
        )
    for q in range(mesh.n_pieces):
        pts = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in zip(mesh.piece_nodes[q], y.values[q]))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>')
    for k in range(1, mesh.n_impulses + 1):
        tk = mesh.impulse_points[k - 1]
        parts.append(f'<circle cx="{sx(tk):.2f}" cy="{sy(y.left_value(k)):.2f}" r="3" fill="#1f6fb2"/>')
        parts.append(f'<circle cx="{sx(tk):.2f}" cy="{sy(y.right_value(k)):.2f}" r="3" fill="white" stroke="#1f6fb2"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
