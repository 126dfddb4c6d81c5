import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_lab import special
from burgers_lab.errors import JacobianSingular, ParameterPole, PoleInRange


def test_wp_degenerate():
    assert special.wp(2.0, 0.0)[0] == pytest.approx(0.25, rel=1e-14)
    assert special.wp(0.5, 0.0)[0] == pytest.approx(4.0, rel=1e-14)


def test_wp_invariant():
    p, dp = special.wp(0.3, 4.0)
    assert abs(dp * dp - 4 * p ** 3 + 4.0) / p ** 3 < 1e-8


def test_wp_near_origin():
    for g3 in (-3.0, 1.0, 5.0):
        z = 1e-3
        assert special.wp(z, g3)[0] - z ** -2 == pytest.approx(g3 * z ** 4 / 28, abs=1e-12)


@given(st.floats(-5, 5).filter(lambda g: abs(g) > 1e-3), st.floats(0.02, 0.98))
def test_wp_ode_residual_on_period(g3, frac):
    w = special.real_half_period(g3)
    z = 2 * w * frac
    assert abs(special.WeierstrassP(g3).ode_residual(z)) < 1e-8


@given(st.floats(-4, 4).filter(lambda g: abs(g) > 1e-3), st.floats(0.05, 0.9))
def test_wp_periodic_and_even(g3, z):
    w = special.real_half_period(g3)
    if not math.isfinite(w):
        return
    p = special.wp(z, g3)[0]
    assert special.wp(-z, g3)[0] == pytest.approx(p, rel=1e-9)
    assert special.wp(z + 2 * w, g3)[0] == pytest.approx(p, rel=1e-8)


def test_lame_solution():
    sol = special.lame_solve(1.0, 0.5, (0.2, 1.0), (1.0, 0.2), 0.5)
    for z in np.linspace(0.25, 0.95, 15):
        assert abs(sol.residual(z)) < 1e-8
    with pytest.raises(PoleInRange):
        special.lame_solve(1.0, 0.5, (-0.5, 0.5), (1.0, 0.0), 0.2)


def test_heun_ivp_data():
    a, b, g, d, e = 1.3, 0.5, -0.7, 0.4, 0.2
    H = special.HeunC(a, b, g, d, e)
    Y, dY, _ = H(0.0)
    assert Y == 1.0
    assert dY == pytest.approx(0.5 * ((2 * e - 1) / (b + 1) + g + 1 - a), abs=1e-12)
    assert special.heun_c(a, b, g, d, e, 0.0) == 1.0


def test_heun_constant_case():
    # Y = 1 solves the equation when alpha = delta = 0 and (beta+1)(gamma+1) + 2 eta - 1 = 0
    H = special.HeunC(0.0, 0.0, 0.0, 0.0, 0.0)
    for z in (-2.0, -0.5, 0.1, 0.6):
        assert H(z)[0] == pytest.approx(1.0, abs=1e-12)
    # eta = 1/2 breaks that condition: the slope at 0 is 1/2, so Y is not constant
    assert special.HeunC(0.0, 0.0, 0.0, 0.0, 0.5)(0.0)[1] == pytest.approx(0.5)


def test_heun_parameter_pole():
    with pytest.raises(ParameterPole):
        special.HeunC(1.0, -1.0, 0.0, 0.0, 0.0)


@given(st.floats(-3, 0.85))
def test_heun_path_residual(z):
    H = special.HeunC(2.5 * (3 + math.sqrt(6)), 0.5, -5.0, 1.2, -3.0)
    assert abs(H.path_residual(z)) < 1e-7


def test_hj_root_examples():
    a = special.hj_root(special.ComplexRootProblem((0.0, 0.0, 0.5), 0.0, 1 + 0j))
    assert a == pytest.approx(-1.0)
    a = special.hj_root(special.ComplexRootProblem((), 1.0, 1j))
    assert a == pytest.approx(1.0)
    with pytest.raises(JacobianSingular):
        special.hj_root(special.ComplexRootProblem((), 0.0, 1j))


@given(st.floats(0.3, 1.5), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.5, 2), st.sampled_from([1, -1]))
def test_cubic_branch_closed_form(t, x, y, beta, branch):
    pr = special.ComplexRootProblem((0.0, 0.0, beta / 2, 1.0 / 3.0), t, complex(x, y))
    closed = special.cubic_closed_form(t, x, y, beta, branch)
    assert abs(pr.G(closed)) < 1e-10
    roots = pr.polynomial_roots()
    assert min(abs(r - closed) for r in roots) < 1e-8
