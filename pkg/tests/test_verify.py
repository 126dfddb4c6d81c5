import numpy as np
import pytest

from burgers_lab import _jet, catalog, heat_kit as hk, verify
from burgers_lab.errors import ConfigError, NotACommonSolution
from burgers_lab.fields import Grid, SpaceTimeField, from_jets

GRID = Grid.box((0.5, 1.5), (-1, 1), (-1, 1), n=(3, 5, 5))


def field(fn):
    return from_jets(fn)


def test_u_equals_x():
    fld = field(lambda t, x, y: (x, 0.0 * x))
    rep = verify.burgers_residual(fld, GRID)
    T, X, Y, _ = GRID.points(fld)
    assert rep.max["R1"] == pytest.approx(np.abs(X).max())
    assert not rep.passed


def test_inviscid_similarity():
    fld = field(lambda t, x, y: (x / t, y / t))
    assert verify.inviscid_residual(fld, GRID).max_residual < 1e-15
    assert verify.burgers_residual(fld, GRID).max_residual < 1e-15


def test_tanh_is_viscid_only():
    fld = field(lambda t, x, y: (-2 * _jet.tanh(x), 0.0 * x))
    assert verify.burgers_residual(fld, GRID).max_residual < 1e-14
    assert verify.inviscid_residual(fld, GRID).max_residual > 0.1
    with pytest.raises(NotACommonSolution):
        verify.common_viscid_inviscid_classify(fld, GRID)


def test_ns_prolongation():
    fld = field(lambda t, x, y: (x / (1 + t), y / (1 + t)))
    rep = verify.ns_prolongation_check(fld, GRID)
    assert rep.max["R1"] < 1e-15
    assert rep.max["R3"] == pytest.approx(2 / 1.5)
    with pytest.raises(ConfigError):
        verify.residual_report(fld, GRID, system="euler")


def test_potential_eq17():
    t, x, y = np.array([0.7]), np.array([0.3]), np.array([-0.4])
    psi = verify.ScalarField(lambda T, X, Y: X * Y / T, jet=lambda tj, xj, yj: xj * yj / tj)
    assert abs(verify.potential_residuals(psi, "eq17", t, x, y)["eq17"][0]) < 1e-15
    fd = verify.ScalarField(lambda T, X, Y: X * Y / T)
    assert abs(verify.potential_residuals(fd, "eq17", t, x, y)["eq17"][0]) < 1e-7


def test_hopf_cole_potential_eq15():
    phi = hk.HeatSolution2D([(1.0, hk.e_t_cosh(), hk.constant()), (0.5, hk.constant(), hk.exp_mode(1.0, 1))])
    psi = verify.hopf_cole_potential(phi)
    r = verify.potential_residuals(psi, "eq15", np.array([0.6]), np.array([0.2]), np.array([0.3]))["eq15"]
    assert abs(r[0]) < 1e-12


def test_line_potential():
    fld = catalog.hopf_cole_2d(hk.HeatSolution2D([(1.0, hk.e_t_cosh(), hk.constant()),
                                                   (0.5, hk.constant(), hk.exp_mode(1.0, 1))]))
    lp = verify.LinePotential(fld, "eq15", anchor=(0.0, 0.0))
    assert lp.path_difference(0.8, 0.4, -0.3) < 1e-10
    assert abs(lp.residual(0.8, 0.4, -0.3)) < 1e-8
    with pytest.raises(ConfigError):
        verify.LinePotential(fld, "eq99")


def test_classify_subsets():
    grid = catalog.default_grid(catalog.BOX_STD, (3, 5, 5))
    assert verify.common_viscid_inviscid_classify(catalog.hj_mu_display(1.0), grid)["class"] == "intersection"
    aff = catalog.affine_general([[1.0, 0.3], [0.2, 2.0]])
    assert verify.common_viscid_inviscid_classify(aff, grid)["class"] == "subset_B"


def test_flagged_constraints():
    p, box = catalog.family("ns_common").defaults[0]
    fld = catalog.make("ns_common", p, box)
    ok, vals = verify.flagged_constraints_hold(fld, catalog.default_grid(box, (3, 5, 5)))
    assert ok
    assert all(ok.values())


def test_thread_count_does_not_change_results(monkeypatch):
    p, box = catalog.family("heun_family").defaults[0]
    fld = catalog.make("heun_family", p, box)
    grid = catalog.default_grid(box, (3, 6, 6))
    a = verify.burgers_residual(fld, grid, threads=1).to_json()
    b = verify.burgers_residual(fld, grid, threads=4).to_json()
    assert a == b
    monkeypatch.setenv("BURGERS_LAB_THREADS", "3")
    assert verify.n_threads() == 3
    monkeypatch.setenv("BURGERS_LAB_THREADS", "x")
    with pytest.raises(ConfigError):
        verify.n_threads()
