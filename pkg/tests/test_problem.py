import math

import mpmath
import pytest

import fracsl as F
from fracsl import ExprEvalError, ValidationError
from tests.conftest import make_spec


def test_check_hypotheses_trivial():
    spec = make_spec(lam=0.0, p_coef="0", q_coef="0", impulses=())
    rep = F.check_hypotheses(spec, nu=1.0)
    assert (rep.N, rep.R, rep.M, rep.r1, rep.r2) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert rep.hypotheses_hold


def test_check_hypotheses_reference_constants():
    spec = make_spec(lam=1.0, p_coef="sin(t)", q_coef="1", impulses=((1.0, "y/2", "0"),))
    rep = F.check_hypotheses(spec, nu=2.0)
    assert rep.N == 1.0
    assert rep.R == pytest.approx(1.0, abs=1e-6)
    assert rep.M == 1.0
    assert rep.r1 == pytest.approx(1.0, abs=1e-12)
    assert rep.r2 == 0.0


def test_check_hypotheses_error_propagates():
    # pole placed at t=0, which the sample grid always contains
    spec = make_spec(q_coef="1/t")
    with pytest.raises(ExprEvalError):
        F.check_hypotheses(spec, nu=1.0)


def test_check_hypotheses_scale_consistency():
    spec = make_spec(q_coef="1+sin(3*t)")
    doubled = make_spec(q_coef="2*(1+sin(3*t))")
    m1 = F.check_hypotheses(spec, nu=1.0).M
    m2 = F.check_hypotheses(doubled, nu=1.0).M
    assert m2 == 2.0 * m1


def test_check_hypotheses_requires_positive_nu():
    with pytest.raises(ValidationError):
        F.check_hypotheses(make_spec(), nu=0.0)


def test_estimate_k_zero_ball():
    mesh = F.build_mesh(math.pi, [1.0, 2.0], 32)
    assert F.estimate_K(make_spec(), 0.0, mesh) == 0.0


def test_estimate_k_integer_order():
    spec = make_spec(lam=0.0, q_coef="1", beta=1.0, impulses=())
    mesh = F.build_mesh(math.pi, [], 64)
    assert F.estimate_K(spec, 1.0, mesh) == pytest.approx(math.pi, abs=1e-12)


def test_estimate_k_half_order():
    # I^(1/2) of 1 at pi equals pi^(1/2)/Gamma(3/2) = 2; confirmed by
    # brute-force quadrature of the singular integrand
    mpmath.mp.dps = 30
    brute = float(mpmath.quad(lambda s: (mpmath.pi - s) ** mpmath.mpf("-0.5"), [0, mpmath.pi]) / mpmath.gamma("0.5"))
    spec = make_spec(lam=0.0, q_coef="1", beta=0.5, impulses=())
    mesh = F.build_mesh(math.pi, [], 64)
    K = F.estimate_K(spec, 1.0, mesh)
    assert K == pytest.approx(math.pi**0.5 / F.frac_ops.gamma(1.5), abs=1e-12)
    assert K == pytest.approx(brute, abs=1e-12)
    assert K == pytest.approx(2.0, abs=1e-12)


def _delta_highprec(K, p, alpha, n, r1, r2):
    mpmath.mp.dps = 40
    K, alpha, r1, r2 = map(mpmath.mpf, (K, alpha, r1, r2))
    q = mpmath.mpf(p) / (mpmath.mpf(p) - 1)
    pi = mpmath.pi
    out = K ** (q - 1) * pi**alpha * (
        (n + 1) * (pi + 1) / (pi * mpmath.gamma(alpha + 1)) + n * (pi + 1) / (pi * mpmath.gamma(alpha))
    )
    out += K ** (q - 1) * pi ** (alpha - 1) * (n + 1) / (mpmath.gamma(alpha) * pi)
    out += n * (pi + 1) * (r1 + r2) / pi
    return float(out)


def test_schaefer_delta_zero():
    assert F.schaefer_delta(0.0, 2.0, 1.5, 0, 0.0, 0.0) == 0.0


def test_schaefer_delta_example_one_impulse():
    got = F.schaefer_delta(1.0, 2.0, 2.0, 1, 1.0, 1.0)
    pi = math.pi
    by_hand = 2.0 * pi * (pi + 1.0) + 2.0 + 2.0 * (pi + 1.0) / pi
    assert got == pytest.approx(by_hand, rel=1e-14)
    assert got == pytest.approx(_delta_highprec(1, 2, 2, 1, 1, 1), rel=1e-9)
    assert got == pytest.approx(30.66, abs=0.01)


def test_schaefer_delta_example_no_impulses():
    got = F.schaefer_delta(1.0, 2.0, 2.0, 0, 0.0, 0.0)
    pi = math.pi
    assert got == pytest.approx(pi * (pi + 1.0) / 2.0 + 1.0, rel=1e-14)
    assert got == pytest.approx(_delta_highprec(1, 2, 2, 0, 0, 0), rel=1e-9)


def test_schaefer_delta_monotone():
    import numpy as np

    rng = np.random.default_rng(9)
    for _ in range(100):
        K, r1, r2 = rng.uniform(0.0, 5.0, size=3)
        n = int(rng.integers(0, 5))
        alpha = rng.uniform(1.01, 2.0)
        p = rng.uniform(1.1, 4.0)
        base = F.schaefer_delta(K, p, alpha, n, r1, r2)
        assert F.schaefer_delta(K + 0.5, p, alpha, n, r1, r2) >= base
        assert F.schaefer_delta(K, p, alpha, n + 1, r1, r2) >= base
        assert F.schaefer_delta(K, p, alpha, n, r1 + 0.5, r2) >= base
        assert F.schaefer_delta(K, p, alpha, n, r1, r2 + 0.5) >= base


def test_schaefer_delta_rejects_negative():
    with pytest.raises(ValidationError):
        F.schaefer_delta(-1.0, 2.0, 1.5, 0, 0.0, 0.0)


def test_bound_report_coarse_dominates_witness():
    # the closed-form bound is coarser than the quadrature witness
    spec = make_spec()
    mesh = F.build_mesh(math.pi, [1.0, 2.0], 64)
    rep = F.bound_report(spec, 2.0, mesh)
    assert rep.hypotheses_hold
    assert rep.K <= rep.k_coarse + 1e-12
    assert math.isfinite(rep.delta)


def test_problem_spec_validation():
    with pytest.raises(ValidationError):
        make_spec(alpha=1.0)
    with pytest.raises(ValidationError):
        make_spec(alpha=2.5)
    with pytest.raises(ValidationError):
        make_spec(beta=0.0)
    with pytest.raises(ValidationError):
        make_spec(plap_p=1.0)
    with pytest.raises(ValidationError):
        make_spec(impulses=((2.0, "0", "0"), (1.0, "0", "0")))
    with pytest.raises(ValidationError):
        make_spec(impulses=((4.0, "0", "0"),))
