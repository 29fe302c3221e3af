"""Impulsive fractional p-Laplacian Sturm-Liouville boundary value problems.

The package evaluates the problem's exact integral representation as a
fixed-point operator on piecewise-continuous functions, solves y = T(y) by
damped Picard iteration, computes the hypothesis constants and the a-priori
sup-norm bound, and verifies solutions independently against the
differential equation, the jump conditions, and the boundary conditions.
"""

from .errors import ExprEvalError, ExprSyntaxError, FracslError, OracleError, ValidationError
from .exprlang import Expr, bound_on_interval, evaluate, parse
from .frac_ops import (
    ProductWeights,
    caputo_derivative,
    caputo_grid,
    product_weights,
    rl_derivative,
    rl_derivative_grid,
    rl_integral,
    rl_integral_grid,
)
from .grid import GridFunction, Mesh, build_mesh, jump_at, pc_norm
from .io import LoadedConfig, SolverSettings, load_config, parse_config, read_solution_csv, write_solution_csv
from .plaplacian import ExponentPair, conjugate, phi, phi_inverse
from .problem import BoundReport, Impulse, ProblemSpec, bound_report, check_hypotheses, coarse_K, estimate_K, schaefer_delta
from .solver import (
    AssemblyMode,
    HomotopyEntry,
    SolveResult,
    TCoefficients,
    apply_T,
    assemble_constants,
    homotopy_bound_check,
    inner_field,
    lambda_sweep,
    picard_solve,
)
from .verification import (
    EquivalenceReport,
    ResidualMode,
    check_delta_bound,
    classical_oracle,
    equivalence_check,
    interior_max,
    max_jump_residual,
    residual_bc,
    residual_jumps,
    residual_ode,
)

__version__ = "0.1.0"

__all__ = [
    "AssemblyMode",
    "BoundReport",
    "EquivalenceReport",
    "ExponentPair",
    "Expr",
    "ExprEvalError",
    "ExprSyntaxError",
    "FracslError",
    "GridFunction",
    "HomotopyEntry",
    "Impulse",
    "LoadedConfig",
    "Mesh",
    "OracleError",
    "ProblemSpec",
    "ProductWeights",
    "ResidualMode",
    "SolveResult",
    "SolverSettings",
    "TCoefficients",
    "ValidationError",
    "apply_T",
    "assemble_constants",
    "bound_on_interval",
    "bound_report",
    "build_mesh",
    "caputo_derivative",
    "caputo_grid",
    "check_delta_bound",
    "check_hypotheses",
    "classical_oracle",
    "coarse_K",
    "conjugate",
    "equivalence_check",
    "estimate_K",
    "evaluate",
    "homotopy_bound_check",
    "inner_field",
    "interior_max",
    "jump_at",
    "lambda_sweep",
    "load_config",
    "max_jump_residual",
    "parse",
    "parse_config",
    "pc_norm",
    "phi",
    "phi_inverse",
    "picard_solve",
    "product_weights",
    "read_solution_csv",
    "residual_bc",
    "residual_jumps",
    "residual_ode",
    "rl_derivative",
    "rl_derivative_grid",
    "rl_integral",
    "rl_integral_grid",
    "schaefer_delta",
    "write_solution_csv",
]
