"""Command-line surface.

Subcommands: ``solve`` (solution CSV + report JSON), ``verify`` (re-check a
stored solution), ``bound`` (print the hypothesis/bound report), ``homotopy``
(boundedness diagnostic table over theta), ``sweep`` (spectral-parameter
sweep CSV). Exit codes: 0 success, 1 validation error, 2 solver
non-convergence, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import json

from .errors import FracslError, ValidationError
from .grid import Mesh, build_mesh, pc_norm
from .io import LoadedConfig, emit_svg, load_config, read_solution_csv, write_report_json, write_solution_csv
from .problem import bound_report
from .solver import AssemblyMode, assemble_constants, homotopy_bound_check, lambda_sweep, picard_solve
from .verification import (
    BC_RTOL,
    IDENTITY_RTOL,
    JUMP_RTOL,
    ResidualMode,
    check_delta_bound,
    max_jump_residual,
    residual_bc,
    residual_ode,
    residual_scale,
)
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NO_CONVERGENCE = 2
EXIT_VERIFICATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracsl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="problem configuration JSON")
        p.add_argument("--out", default="fracsl-out", help="output directory")
        p.add_argument("--mode", choices=[m.value for m in AssemblyMode], help="constant-assembly mode override")
        p.add_argument("--tol", type=float, help="Picard tolerance override")
        p.add_argument("--max-iter", type=int, help="iteration cap override")
        p.add_argument("--damping", type=float, help="damping factor override")
        p.add_argument("--mesh", type=int, help="nodes per subinterval override")
        p.add_argument("--nu", type=float, help="ball radius for the bound report")
        p.add_argument("--accel-depth", type=int, help="residual-mixing depth (0 = plain damped iteration)")
        p.add_argument("--emit-svg", action="store_true", help="also write a solution plot")

    common(sub.add_parser("solve", help="solve and write solution.csv + report.json"))
    common(sub.add_parser("verify", help="re-check a stored solution table"))
    common(sub.add_parser("bound", help="print the hypothesis constants and delta"))
    p_h = sub.add_parser("homotopy", help="boundedness diagnostic over theta")
    common(p_h)
    p_h.add_argument("--thetas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0", help="comma-separated theta list")
    p_s = sub.add_parser("sweep", help="solve across spectral-parameter values")
    common(p_s)
    p_s.add_argument("--lambdas", required=True, help="comma-separated lambda list")
    return parser


def _float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}", field=flag) from None


def _load(args) -> tuple[LoadedConfig, Mesh]:
    cfg = load_config(args.config)
    if args.mode:
        cfg.solver.mode = AssemblyMode(args.mode)
    if args.tol is not None:
        cfg.solver.tol = args.tol
    if args.max_iter is not None:
        cfg.solver.max_iter = args.max_iter
    if args.damping is not None:
        cfg.solver.damping = args.damping
    if args.nu is not None:
        cfg.solver.nu = args.nu
    if args.accel_depth is not None:
        cfg.solver.accel_depth = args.accel_depth
    nodes = args.mesh if args.mesh is not None else cfg.nodes_per_subinterval
    mesh = build_mesh(cfg.spec.interval_end, cfg.spec.impulse_points, nodes)
    return cfg, mesh


def _residual_summary(y, spec, report):
    scale = residual_scale(y)
    jump = max_jump_residual(y, spec)
    bc0, bc1 = residual_bc(y)
    identity = pc_norm(residual_ode(y, spec, ResidualMode.IDENTITY))
    ok = (
        jump <= JUMP_RTOL * scale
        and max(abs(bc0), abs(bc1)) <= BC_RTOL * scale
        and identity <= IDENTITY_RTOL * scale
        and check_delta_bound(y, report)
    )
    summary = {
        "jump_max": jump,
        "bc_0": bc0,
        "bc_end": bc1,
        "identity_max": identity,
        "scale": scale,
        "delta_bound_ok": check_delta_bound(y, report),
        "all_ok": bool(ok),
    }
    return summary, bool(ok)


def _cmd_solve(args) -> int:
    cfg, mesh = _load(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    result = picard_solve(
        cfg.spec,
        mesh,
        mode=cfg.solver.mode,
        theta=cfg.solver.theta,
        tol=cfg.solver.tol,
        max_iter=cfg.solver.max_iter,
        damping=cfg.solver.damping,
        accel_depth=cfg.solver.accel_depth,
    )
    wall = time.perf_counter() - start
    y = result.solution
    report = bound_report(cfg.spec, cfg.solver.nu, mesh)
    summary, checks_ok = _residual_summary(y, cfg.spec, report)
    coeffs = assemble_constants(y, cfg.spec, cfg.solver.mode)
    doc = {
        "mode": cfg.solver.mode.value,
        "theta": cfg.solver.theta,
        "converged": result.converged,
        "diverged": result.diverged,
        "iterations": result.iterations,
        "final_update_norm": result.final_update_norm,
        "history": result.history,
        "pc_norm": pc_norm(y),
        "coefficients": {"b0": coeffs.b0, "b1": coeffs.b1},
        "mesh": {
            "interval_end": mesh.interval_end,
            "impulse_points": list(mesh.impulse_points),
            "nodes_per_subinterval": mesh.nodes_per_subinterval,
        },
        "solver": {
            "tol": cfg.solver.tol,
            "max_iter": cfg.solver.max_iter,
            "damping": cfg.solver.damping,
            "nu": cfg.solver.nu,
            "accel_depth": cfg.solver.accel_depth,
        },
        "residuals": summary,
        "bound_report": report.as_dict(),
        "wall_time_seconds": wall,
    }
    write_solution_csv(out_dir / "solution.csv", y)
    write_report_json(out_dir / "report.json", doc)
    if args.emit_svg:
        emit_svg(out_dir / "solution.svg", y)
    if not result.converged:
        print(f"not converged after {result.iterations} iterations", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    if not checks_ok:
        print("solution failed verification thresholds", file=sys.stderr)
        return EXIT_VERIFICATION
    print(f"converged in {result.iterations} iterations; outputs in {out_dir}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg, mesh = _load(args)
    y = read_solution_csv(Path(args.out) / "solution.csv", mesh)
    report = bound_report(cfg.spec, cfg.solver.nu, mesh)
    summary, ok = _residual_summary(y, cfg.spec, report)
    for key, value in summary.items():
        print(f"{key}: {value}")
    if not ok:
        print("verification FAILED", file=sys.stderr)
        return EXIT_VERIFICATION
    print("verification passed")
    return EXIT_OK


def _cmd_bound(args) -> int:
    cfg, mesh = _load(args)
    report = bound_report(cfg.spec, cfg.solver.nu, mesh)
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_homotopy(args) -> int:
    cfg, mesh = _load(args)
    thetas = _float_list(args.thetas, "--thetas")
    entries = homotopy_bound_check(
        cfg.spec,
        mesh,
        thetas,
        nu=cfg.solver.nu,
        mode=cfg.solver.mode,
        tol=cfg.solver.tol,
        max_iter=cfg.solver.max_iter,
        damping=cfg.solver.damping,
        accel_depth=cfg.solver.accel_depth,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["theta,pc_norm,delta,within_bound,converged"]
    print(f"{'theta':>6} {'pc_norm':>14} {'delta':>14} within converged")
    for e in entries:
        print(f"{e.theta:6.3f} {e.pc_norm:14.6e} {e.delta:14.6e} {str(e.within_bound):>6} {e.converged}")
        lines.append(f"{e.theta!r},{e.pc_norm!r},{e.delta!r},{e.within_bound},{e.converged}")
    (out_dir / "homotopy.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if any(e.converged and not e.within_bound for e in entries):
        print("bound violated for a converged homotopy solve", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg, mesh = _load(args)
    lambdas = _float_list(args.lambdas, "--lambdas")
    results = lambda_sweep(
        cfg.spec,
        mesh,
        lambdas,
        mode=cfg.solver.mode,
        tol=cfg.solver.tol,
        max_iter=cfg.solver.max_iter,
        damping=cfg.solver.damping,
        accel_depth=cfg.solver.accel_depth,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["lambda,converged,iterations,pc_norm,final_update_norm"]
    for lam, res in results:
        lines.append(f"{lam!r},{res.converged},{res.iterations},{pc_norm(res.solution)!r},{res.final_update_norm!r}")
        print(lines[-1])
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "bound": _cmd_bound,
    "homotopy": _cmd_homotopy,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FracslError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
