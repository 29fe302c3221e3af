import math

import pytest

import fracsl as F


def make_spec(
    alpha=1.5,
    beta=0.5,
    lam=0.1,
    p_coef="sin(t)",
    q_coef="1",
    plap_p=2.0,
    impulses=((1.0, "0.1*y+0.05", "0"), (2.0, "0.1*y+0.05", "0")),
):
    imps = tuple(F.Impulse(t, F.parse(i_src, "y"), F.parse(istar_src, "y")) for t, i_src, istar_src in impulses)
    return F.ProblemSpec(alpha, beta, lam, F.parse(p_coef, "t"), F.parse(q_coef, "t"), plap_p, imps)


@pytest.fixture(scope="session")
def reference_spec():
    """The reference impulsive configuration used across the suite."""
    return make_spec()


@pytest.fixture(scope="session")
def reference_mesh():
    return F.build_mesh(math.pi, [1.0, 2.0], 256)


@pytest.fixture(scope="session")
def reference_solve(reference_spec, reference_mesh):
    res = F.picard_solve(reference_spec, reference_mesh)
    assert res.converged
    return res


@pytest.fixture(scope="session")
def homogeneous_spec():
    return make_spec(impulses=((1.0, "0", "0"), (2.0, "0", "0")))


CONFIG_TEMPLATE = {
    "alpha": 1.5,
    "beta": 0.5,
    "lambda": 0.1,
    "p_lap": 2.0,
    "p_coef": "sin(t)",
    "q_coef": "1",
    "impulses": [
        {"t": 1.0, "I": "0.1*y+0.05", "I_star": "0"},
        {"t": 2.0, "I": "0.1*y+0.05", "I_star": "0"},
    ],
    "mesh": {"nodes_per_subinterval": 64},
    "solver": {"tol": 1e-10, "max_iter": 300},
}


@pytest.fixture()
def config_dict():
    import copy

    return copy.deepcopy(CONFIG_TEMPLATE)
