import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_lab import _jet, catalog, heat_kit as hk, special, verify
from burgers_lab.errors import ConfigError, InvalidCase, SingularTime
from burgers_lab.fields import Grid, Point, SpaceTimeField, from_jets

SQ6 = math.sqrt(6.0)


def at(fld, t, x, y):
    return fld.eval(Point(t, x, y))


def max_residual(fld, box, n=(3, 7, 7)):
    return verify.burgers_residual(fld, catalog.default_grid(box, n)).max_residual


def test_registry():
    assert len(catalog.FAMILIES) == 13
    for fam in catalog.FAMILIES.values():
        assert len(fam.defaults) == 3
    with pytest.raises(ConfigError):
        catalog.family("nope")
    with pytest.raises(ConfigError):
        catalog.make("hopf_cole_2d", {"psi": []})


def test_hopf_cole_examples():
    one = catalog.hopf_cole_2d(hk.HeatSolution2D([(1.0, hk.constant(), hk.constant())]))
    assert at(one, 0.5, 0.1, 0.2) == (0.0, 0.0)
    e = catalog.hopf_cole_2d(hk.HeatSolution2D([(1.0, hk.exp_mode(1.0, 1), hk.constant())]))
    assert at(e, 0.5, 0.1, 0.2) == pytest.approx((-2.0, 0.0))


def test_shift_invariant_examples():
    f = catalog.shift_invariant(hk.constant(), hk.constant(0.7))
    assert at(f, 0.5, 0.3, 9.0) == pytest.approx((0.0, 0.7))
    f = catalog.shift_invariant(hk.e_t_cosh(), hk.constant(0.0))
    assert at(f, 0.5, 0.3, 9.0) == pytest.approx((-2 * math.tanh(0.3), 0.0))
    wave = catalog.shift_invariant(hk.superpose([(1.0, hk.constant()), (1.0, hk.exp_mode(1.0, -1))]),
                                   hk.exp_mode(1.0, -1))
    assert max_residual(wave, catalog.BOX_STD) < 1e-10


def test_affine_in_y_examples():
    f = catalog.affine_in_y_family(hk.constant(), hk.heat_polynomial(1))
    assert at(f, 0.5, 0.3, 0.2) == pytest.approx((0.0, 1.0))
    f = catalog.affine_in_y_family(hk.e_t_cosh(), hk.constant(0.0))
    assert max_residual(f, catalog.BOX_STD) < 1e-10


def test_affine_in_x_is_the_permuted_affine_in_y():
    th1 = hk.superpose([(1.5, hk.constant()), (1.0, hk.gaussian(-1.0, 0.3))])
    th0 = hk.superpose([(1.0, hk.heat_polynomial(3)), (1.0, hk.trig_mode(1.0, "sin"))])
    fx = catalog.affine_in_x_family(th1, th0)
    fy = catalog.permute(catalog.affine_in_y_family(th1, th0))
    rng = np.random.default_rng(3)
    T, X, Y = rng.uniform(0.5, 1.5, 30), rng.uniform(-1, 1, 30), rng.uniform(-1, 1, 30)
    assert np.allclose(fx.jets(T, X, Y), fy.jets(T, X, Y), rtol=1e-13, atol=1e-13)


def test_stationary_examples():
    f = catalog.stationary_similarity(0, 0.0, 1.0, 0.0)
    assert at(f, 0.0, 0.3, 1.2) == pytest.approx((0.0, 0.0))
    f = catalog.stationary_similarity(-2, 0.0, 1.0, 0.0)
    assert at(f, 0.0, 0.3, 1.2) == pytest.approx((0.0, -2 / 1.2))
    assert max_residual(f, catalog.BOX_XY) < 1e-12
    with pytest.raises(InvalidCase):
        catalog.stationary_similarity(1, 0.0, 1.0, 0.0)


def _pq_linear_residual(beta, C1, C2, w, signs):
    """(1+w^2) psi'' + 4 w psi' - A psi/(1+w^2) with A = 1 - beta^2 for
    psi = N(w) (1+w^2)^(-m), N = C1 (w P + s1 beta Q) + C2 (w Q + s2 beta P)."""
    P = np.polynomial.Polynomial([0.0])
    Q = np.polynomial.Polynomial([0.0])
    for i in range(beta // 2 + 1):
        P += (-1) ** i * math.comb(beta, 2 * i) * np.polynomial.Polynomial.basis(beta - 2 * i)
    for i in range((beta - 1) // 2 + 1):
        Q += (-1) ** i * math.comb(beta, 2 * i + 1) * np.polynomial.Polynomial.basis(beta - 2 * i - 1)
    X = np.polynomial.Polynomial([0.0, 1.0])
    s1, s2 = signs
    N = C1 * (X * P + s1 * beta * Q) + C2 * (X * Q + s2 * beta * P)
    m = (beta + 1) / 2.0
    q = 1 + w * w
    n0, n1, n2 = N(w), N.deriv()(w), N.deriv(2)(w)
    psi = n0 * q ** -m
    d1 = n1 * q ** -m - 2 * m * w * n0 * q ** (-m - 1)
    d2 = (n2 * q ** -m - 4 * m * w * n1 * q ** (-m - 1) - 2 * m * n0 * q ** (-m - 1)
          + 4 * m * (m + 1) * w * w * n0 * q ** (-m - 2))
    A = 1 - beta * beta
    return q * d2 + 4 * w * d1 - A * psi / q, np.abs(psi).max()


def test_polynomial_form_signs():
    w = np.linspace(-2, 2, 41)
    for beta in (2, 3, 4):
        for C1, C2 in [(1.0, 0.0), (0.0, 1.0)]:
            good, _ = _pq_linear_residual(beta, C1, C2, w, (+1, -1))
            assert np.abs(good).max() < 1e-10
            printed, scale = _pq_linear_residual(beta, C1, C2, w, (-1, +1))
            assert np.abs(printed).max() > 1e-2 * scale


def test_polynomial_and_trig_forms_agree_after_rotation():
    rng = np.random.default_rng(0)
    T, X, Y = np.zeros(20), rng.uniform(0.5, 1.5, 20), rng.uniform(0.5, 1.5, 20)
    for beta in (2, 3):
        C1, C2 = 0.4, 1.0
        K1, K2 = catalog.pq_constants(beta, C1, C2)
        pq = catalog.stationary_similarity(0, 1 - beta * beta, C1, C2, form="pq")
        tr = catalog.stationary_similarity(0, 1 - beta * beta, K1, K2, form="trig")
        assert np.allclose(pq.jets(T, X, Y), tr.jets(T, X, Y), rtol=1e-10, atol=1e-10)


def test_affine_general_examples():
    disp = catalog.affine_general([[0, 1], [-1, 0]])
    assert at(disp, 0.0, 1.0, 0.0) == pytest.approx((0.0, 1.0))
    literal = catalog.affine_general([[0, -1], [1, 0]])
    assert at(literal, 0.0, 1.0, 0.0) == pytest.approx((0.0, -1.0))
    ident = catalog.affine_general([[1, 0], [0, 1]])
    assert at(ident, 0.7, 0.3, -0.2) == pytest.approx((0.3 / 1.7, -0.2 / 1.7))
    assert max_residual(ident, catalog.BOX_STD) < 1e-15
    shifted = catalog.affine_general([[1, 0], [0, 1]], [1, 0])
    assert at(shifted, 0.0, 0.0, 0.0) == pytest.approx((1.0, 0.0))
    with pytest.raises(SingularTime):
        catalog.affine_general([[1, 0], [0, 1]], box={"t": [-2, 0], "x": [0, 1], "y": [0, 1]})


def test_affine_degenerate_examples():
    nil = catalog.affine_degenerate("nilpotent")
    assert at(nil, 0.3, 0.2, 0.7) == (0.7, 0.0)
    assert max_residual(nil, catalog.BOX_STD) == 0.0
    assert max_residual(catalog.affine_degenerate("constant", 1.5, -0.5), catalog.BOX_STD) == 0.0
    assert at(catalog.affine_degenerate("trace_nonzero", 2.0), 1.0, 1.0, 1.0) == pytest.approx((3.0, 0.0))


def test_ns_common_examples():
    f = catalog.ns_common(0.8, 0.3, hk.HeatSolution1D())
    assert at(f, 0.5, 0.1, 0.2) == pytest.approx((0.8, 0.0))
    f = catalog.ns_common(0.0, math.pi / 2, hk.heat_polynomial(2))
    u, v = at(f, 0.5, 0.3, 0.2)
    assert u == pytest.approx(0.0, abs=1e-15) and v == pytest.approx(0.3 ** 2 + 2 * 0.5)


def test_potential_reduction_examples():
    f = catalog.potential_reduction(0.0, 1.0, 0.0)
    assert at(f, 0.1, 2.0, 0.7) == (0.0, 0.0)
    for s in (1.0, 1.25):
        box = {"t": [0.0, 1.0], "x": [2.5, 3.5], "y": [0.5, 1.0]}
        assert max_residual(catalog.potential_reduction(s, 1.0, 0.0, box), box) < 1e-8


def test_potential_reduction_literal_display_fails():
    """The display with varsigma/x in v (instead of 2 varsigma/x) is not a solution."""
    box = {"t": [0.0, 1.0], "x": [2.0, 3.0], "y": [0.5, 1.0]}
    s = 1.0
    good = catalog.potential_reduction(s, 1.0, 0.0, box)

    def jet(t, x, y):
        arr = good.jets(t, x, y).copy()
        x = np.asarray(x, dtype=float)
        arr[1, 0] -= s / x
        arr[1, 2] += s / x ** 2
        arr[1, 7] -= 2 * s / x ** 3
        return arr

    literal = SpaceTimeField(jet=jet)
    assert max_residual(good, box) < 1e-8
    assert max_residual(literal, box) > 1e-2


def test_hj_examples():
    f = catalog.hj_family([])
    assert at(f, 0.5, 0.3, -0.2) == pytest.approx((0.3 / 0.5, -0.2 / 0.5))
    mu = catalog.hj_mu_display(1.0)
    assert at(mu, 0.0, 1.0, 0.0) == pytest.approx((0.0, 1.0))
    t, x, y = 0.4, 0.3, -0.6
    assert at(mu, t, x, y) == pytest.approx(((t * x - y) / (t * t + 1), (x + t * y) / (t * t + 1)))


def test_weierstrass_examples():
    f = catalog.weierstrass_family(0.0, 0.0, 0.0)
    assert at(f, 0.5, 0.3, 1.2) == pytest.approx((6 * 0.3 / 1.44, 0.0), rel=1e-12)
    assert max_residual(f, catalog.BOX_Y) < 1e-10
    z0 = 0.5
    g = catalog.weierstrass_family(0.0, 0.0, 0.0, ic=(z0 ** 3, 3 * z0 ** 2), z0=z0)
    y = 1.2
    assert at(g, 0.5, 0.3, y)[0] == pytest.approx(6 * 0.3 / y ** 2 + (y / SQ6) ** 3, rel=1e-9)
    assert max_residual(g, catalog.BOX_Y) < 1e-8
    h = catalog.weierstrass_family(1.0, 0.0, 0.5, ic=(1.0, 0.2))
    assert max_residual(h, catalog.BOX_Y) < 1e-7


def test_darboux_examples():
    base = catalog.darboux_family(hk.HeatSolution1D())
    assert at(base, 0.5, 0.3, 1.2) == pytest.approx((6 * 0.3 / 1.44, 0.0))
    kern = catalog.darboux_family(hk.heat_polynomial(1))
    assert at(kern, 0.5, 0.3, 1.2) == pytest.approx(at(base, 0.5, 0.3, 1.2), abs=1e-14)
    quad = catalog.darboux_family(hk.heat_polynomial(2))
    assert at(quad, 0.5, 0.3, 1.2)[0] == pytest.approx(6 * 0.3 / 1.44 + 6 * 0.5 / 1.44 - 1)
    assert max_residual(quad, catalog.BOX_Y) < 1e-10


def _heun_c1_field(beta):
    """Linear part plus the C1 term of the Heun family, with the given beta in HeunC."""
    lam, params = catalog.heun_parameters(1, 0.0, beta)
    H = special.HeunC(*params)
    k0, k1 = 12 * (4 + SQ6), 18 + 8 * SQ6

    def fn(t, x, y):
        y2 = y * y
        rden2 = ((y2 + 10 * lam * t) * (y2 + 10 * lam * t)).reciprocal()
        z = -1.0 * y2 / (10 * lam * t)
        Hz = z.unary(*H.evaluate(z.f))
        pre = _jet.exp(1.5 * _jet.log(t) - y2 / (4.0 * t)) * rden2
        return k0 * (y2 + k1 * t) * rden2 * x + pre * y * Hz, 0.0 * t
    return from_jets(fn)


def test_heun_c1_term_needs_positive_beta():
    box = catalog.BOX_Y
    assert max_residual(_heun_c1_field(0.5), box) < 1e-5
    assert max_residual(_heun_c1_field(-0.5), box) > 1e-3


def test_heun_family_requires_positive_time():
    f = catalog.heun_family(1, 0.0, 1.0, 0.0)
    with pytest.raises(SingularTime):
        f.jets(np.array([-0.5]), np.array([0.0]), np.array([1.0]))


def test_flags_and_invariance_metadata():
    for fid, fam in catalog.FAMILIES.items():
        for p, box in fam.defaults:
            meta = fam.make(p, box).meta
            assert set(meta["flags"]) <= set(catalog.FLAG_NAMES)
            assert meta["tolerance"] in (catalog.TOL_ALGEBRAIC, catalog.TOL_WP, catalog.TOL_LAME, catalog.TOL_HEUN)


@given(st.floats(0.1, 3), st.floats(-2, 2), st.floats(0.1, 2), st.floats(-1, 1))
def test_random_hopf_cole_fields_solve(lam, q0, c, s0):
    phi = hk.HeatSolution2D([(c, hk.exp_mode(lam, 1), hk.gaussian(s0 - 1.5, q0)),
                             (1.0, hk.constant(), hk.constant())])
    fld = catalog.hopf_cole_2d(phi)
    grid = Grid.box((0.5, 1.0), (-1, 1), (-1, 1), n=(2, 4, 4))
    arr = fld.jets(*grid.points()[:3])
    res = verify.residual_arrays(arr)
    scale = 1 + np.abs(arr).max() ** 2
    assert np.abs(res["R1"]).max() < 1e-12 * scale
    assert np.abs(res["R2"]).max() < 1e-12 * scale
