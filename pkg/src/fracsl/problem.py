"""Problem data, hypothesis constants, and the a-priori sup-norm bound.

The bound is the explicit constant produced by the boundedness step of the
fixed-point argument: with K a witness for |I^beta[(2 lambda p + q) y]| on
the ball of radius nu, every solution of the homotopy family y = theta T(y)
satisfies ||y|| <= delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import exprlang
from .errors import ValidationError
from .frac_ops import cumulative_matrix, gamma
from .grid import GridFunction, Mesh
from .plaplacian import conjugate


@dataclass(frozen=True)
class Impulse:
    """One interior impulse: position and the value/derivative jump maps."""

    t: float
    value_map: exprlang.Expr  # jump of y as a function of y(t_k^-)
    slope_map: exprlang.Expr  # jump of y' as a function of y(t_k^-)


@dataclass(frozen=True)
class ProblemSpec:
    """All data of the impulsive fractional p-Laplacian boundary value problem."""

    alpha: float
    beta: float
    lam: float
    p_coef: exprlang.Expr
    q_coef: exprlang.Expr
    plap_p: float
    impulses: tuple[Impulse, ...] = field(default_factory=tuple)
    interval_end: float = math.pi

    def __post_init__(self):
        if not (1.0 < self.alpha <= 2.0):
            raise ValidationError(f"alpha {self.alpha} outside (1, 2]", field="alpha")
        if not (0.0 < self.beta <= 1.0):
            raise ValidationError(f"beta {self.beta} outside (0, 1]", field="beta")
        if not self.plap_p > 1.0:
            raise ValidationError(f"p-Laplacian exponent {self.plap_p} must exceed 1", field="p_lap")
        if not math.isfinite(self.lam):
            raise ValidationError("lambda must be finite", field="lambda")
        pts = [imp.t for imp in self.impulses]
        if any(not (0.0 < t < self.interval_end) for t in pts):
            raise ValidationError("impulse points must lie strictly inside the interval", field="impulses")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValidationError("impulse points must be strictly increasing", field="impulses")

    @property
    def n_impulses(self) -> int:
        return len(self.impulses)

    @property
    def impulse_points(self) -> list[float]:
        return [imp.t for imp in self.impulses]

    def with_lambda(self, lam: float) -> "ProblemSpec":
        return replace(self, lam=float(lam))

    def coefficient(self, t) -> float:
        """The combined coefficient 2*lambda*p(t) + q(t)."""
        return 2.0 * self.lam * exprlang.evaluate(self.p_coef, t) + exprlang.evaluate(self.q_coef, t)

    def coefficient_grid(self, mesh: Mesh) -> GridFunction:
        return GridFunction.from_callable(mesh, self.coefficient)


@dataclass
class BoundReport:
    """Hypothesis constants, the integral witness K, and the bound delta."""

    N: float
    R: float
    M: float
    r1: float
    r2: float
    nu: float
    hypotheses_hold: bool
    K: float = math.nan
    k_coarse: float = math.nan
    delta: float = math.nan

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "R": self.R,
            "M": self.M,
            "r1": self.r1,
            "r2": self.r2,
            "nu": self.nu,
            "hypotheses_hold": self.hypotheses_hold,
            "K": self.K,
            "k_coarse": self.k_coarse,
            "delta": self.delta,
        }


def check_hypotheses(spec: ProblemSpec, nu: float, samples: int = 1025) -> BoundReport:
    """Certify-by-sampling the boundedness constants.

    N bounds |lambda|, R and M bound |p| and |q| on the interval, r1 and r2
    bound the impulse maps on [-nu, nu]. Sampling estimates, not rigorous
    bounds; expression evaluation errors propagate.
    """
    if not nu > 0.0:
        raise ValidationError("ball radius nu must be positive", field="nu")
    end = spec.interval_end
    N = abs(spec.lam)
    R = exprlang.bound_on_interval(spec.p_coef, 0.0, end, samples)
    M = exprlang.bound_on_interval(spec.q_coef, 0.0, end, samples)
    r1 = max(
        (exprlang.bound_on_interval(imp.value_map, -nu, nu, samples) for imp in spec.impulses),
        default=0.0,
    )
    r2 = max(
        (exprlang.bound_on_interval(imp.slope_map, -nu, nu, samples) for imp in spec.impulses),
        default=0.0,
    )
    hold = all(map(math.isfinite, (N, R, M, r1, r2)))
    return BoundReport(N=N, R=R, M=M, r1=r1, r2=r2, nu=nu, hypotheses_hold=hold)


def estimate_K(spec: ProblemSpec, nu: float, mesh: Mesh) -> float:
    """Witness K with |I^beta[(2 lambda p + q) y]| <= K on the ball |y| <= nu.

    Computed as the max over mesh nodes of I^beta applied to
    nu * |2 lambda p + q|, which dominates the integral for every y in the
    ball because the kernel is nonnegative.
    """
    if nu < 0.0:
        raise ValidationError("ball radius nu must be nonnegative", field="nu")
    w = GridFunction.from_callable(mesh, lambda t: nu * abs(spec.coefficient(t)))
    vals = cumulative_matrix(mesh, spec.beta - 1.0) @ w.flat / gamma(spec.beta)
    return float(np.max(vals)) if vals.size else 0.0


def coarse_K(spec: ProblemSpec, nu: float, report: BoundReport) -> float:
    """Closed-form witness nu*(2NR + M)*L^beta/Gamma(beta+1), for comparison."""
    end = spec.interval_end
    return nu * (2.0 * report.N * report.R + report.M) * end**spec.beta / gamma(spec.beta + 1.0)


def schaefer_delta(K: float, plap_p: float, alpha: float, n: int, r1: float, r2: float) -> float:
    """The explicit sup-norm bound delta of the boundedness step.

    delta = K^(q-1) pi^alpha [ (n+1)(pi+1)/(pi G(a+1)) + n(pi+1)/(pi G(a)) ]
          + K^(q-1) pi^(alpha-1) (n+1)/(G(a) pi) + n(pi+1)(r1+r2)/pi,
    with q the conjugate of the p-Laplacian exponent.
    """
    if K < 0.0 or r1 < 0.0 or r2 < 0.0 or n < 0:
        raise ValidationError("K, r1, r2 and n must be nonnegative", field="K")
    q = conjugate(plap_p)
    pi = math.pi
    kq = K ** (q - 1.0)
    term1 = kq * pi**alpha * (
        (n + 1) * (pi + 1.0) / (pi * gamma(alpha + 1.0)) + n * (pi + 1.0) / (pi * gamma(alpha))
    )
    term2 = kq * pi ** (alpha - 1.0) * (n + 1) / (gamma(alpha) * pi)
    term3 = n * (pi + 1.0) * (r1 + r2) / pi
    return term1 + term2 + term3


def bound_report(spec: ProblemSpec, nu: float, mesh: Mesh, samples: int = 1025) -> BoundReport:
    """Full report: hypothesis constants, both K witnesses, and delta."""
    report = check_hypotheses(spec, nu, samples)
    report.K = estimate_K(spec, nu, mesh)
    report.k_coarse = coarse_K(spec, nu, report)
    report.delta = schaefer_delta(report.K, spec.plap_p, spec.alpha, spec.n_impulses, report.r1, report.r2)
    return report
