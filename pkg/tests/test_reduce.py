import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_lab import _jet, heat_kit as hk, reduce as rd
from burgers_lab.errors import ConfigError, ParameterOutOfDomain
from burgers_lab.fields import Point


@pytest.mark.parametrize("aid", rd.ANSATZ_IDS)
def test_controls(aid):
    reports = rd.check_controls(aid)
    assert any(r.expect == "solution" for r in reports)
    assert any(r.expect == "non-solution" for r in reports)
    for r in reports:
        assert r.passed, r.to_json()


def test_reconstruct_26_zero():
    rs = rd.constant("2.6", 0.0, 0.0, {"mu": 1.0}, rd.RING)
    fld = rd.reconstruct(rs)
    t, x, y = 0.7, 0.4, -0.3
    u, v = fld.eval(Point(t, x, y))
    assert u == pytest.approx((t * x - y) / (t * t + 1))
    assert v == pytest.approx((x + t * y) / (t * t + 1))
    # u_y - v_x = -2/(t^2+1), matching factor -(1+mu)/(t^2+mu) times the constant 1
    assert rd.reduced_constraint(rs, np.array([t]))[0] == 1.0
    rep = rd.consistency_check(rs, expect="solution")
    assert rep.passed and rep.constraint_max_abs == 1.0


def test_zero_of_16_is_not_a_solution():
    rep = rd.consistency_check(rd.constant("1.6", 0.0, 0.0, None, rd.RING), expect="non-solution")
    assert rep.full_max > 1e-3 and rep.reduced_max > 1e-3 and rep.passed


def test_constant_w2_on_18_has_zero_constraint():
    rs = rd.constant("1.8", 0.0, 0.4, None, rd.RING)
    z = (np.linspace(0, 1, 5), np.linspace(-1, 1, 5))
    assert np.all(rd.reduced_constraint(rs, *z) == 0)
    assert np.abs(rd.reduced_residual(rs, *z)[0]).max() == 0


@pytest.mark.parametrize("aid,params", [("1.1", {"kappa": 1}), ("1.1", {"kappa": 0}), ("1.2", {}), ("1.3", {"kappa": 0.3}),
                                        ("1.3", {"kappa": 0.3, "sign": -1}), ("1.4", {"kappa": 1.2}),
                                        ("1.5", {"mu": 0.4})])
def test_grouped_table(aid, params):
    assert rd.check_grouped_table(rd.ansatz(aid, **params)) < 1e-12


def test_grouped_table_rejects_other_ansatze():
    with pytest.raises(ConfigError):
        rd.grouped_parameters(rd.ansatz("1.6"))


def test_parameter_domain():
    with pytest.raises(ParameterOutOfDomain):
        rd.ansatz("2.6", mu=-1.0)
    with pytest.raises(ConfigError):
        rd.ansatz("1.1", lam=1.0)
    with pytest.raises(ConfigError):
        rd.ansatz("3.1")


def test_linearize_18_cosh():
    rs = rd.hopf_cole_18(hk.e_t_cosh(), hk.exp_mode(0.5, 1), box=rd.RING)
    z1, z2 = np.array([0.2, 0.5]), np.array([-0.3, 0.4])
    th1, _ = rd.linearize_18(rs)
    assert np.allclose(th1(z1, z2), np.exp(z1) * np.cosh(z2), rtol=1e-11)
    assert rd.round_trip_error(rs, z1, z2) < 1e-9
    assert np.abs(rd.heat_residual(th1, z1, z2)).max() < 1e-6
    assert np.abs(rd.conserved_current_divergence(rs, z1, z2)).max() < 1e-12


def test_solution_from_spec():
    rs, expect = rd.solution_from_spec("2.5", {"kind": "constant", "value": [0, 0], "ansatz_params": {"mu": 0.0}})
    assert rd.consistency_check(rs).full_solves
    with pytest.raises(ConfigError):
        rd.solution_from_spec("2.5", {"kind": "constant", "colour": 1})
    with pytest.raises(ConfigError):
        rd.solution_from_spec("2.5", {"kind": "control", "index": 99})


def test_pullback_reconstruct_round_trip():
    from burgers_lab import catalog
    fld = catalog.hj_mu_display(1.0)
    rs = rd.pullback(fld, "1.7", None, catalog.BOX_STD)
    back = rd.reconstruct(rs)
    T, X, Y = np.array([0.6, 1.1]), np.array([0.2, -0.5]), np.array([0.9, 0.1])
    assert np.allclose(back.jets(T, X, Y), fld.jets(T, X, Y), atol=1e-12)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
def test_constant_26_always_solves_never_linearizable(c1, c2, mu):
    rep = rd.consistency_check(rd.constant("2.6", c1, c2, {"mu": mu}, rd.RING), n=30)
    assert rep.full_solves and rep.reduced_solves
    assert rep.constraint_max_abs == 1.0 and rep.constraint_match < 1e-10


@given(st.sampled_from(rd.PDE_IDS), st.integers(0, 10))
def test_random_jets_fail_both_sides(aid, seed):
    params = {"1.5": {"mu": 0.8}}.get(aid, {})
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(0.2, 0.6, 2)

    def fn(zj):
        return a * _jet.sin(zj[0]) + 0.3 * zj[1] * zj[1] + 0.2, b * _jet.cos(zj[0] - zj[1])
    rep = rd.consistency_check(rd.from_jets(aid, fn, params, rd.RING), n=40)
    assert rep.equivalent and rep.constraint_match < 1e-8
