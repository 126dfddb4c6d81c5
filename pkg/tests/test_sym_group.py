import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_lab import sym_group as sg, verify
from burgers_lab.errors import ConfigError
from burgers_lab.fields import Grid, Point, from_jets

small = st.floats(-1.5, 1.5)


@st.composite
def elements(draw):
    a, b, c = draw(small), draw(small), draw(small)
    d = draw(st.floats(0.5, 2.0))
    if a * d - b * c < 0.2:
        a = (0.2 + b * c) / d + 0.5
    return sg.GroupElement(a, b, c, d, draw(st.floats(-3, 3)), draw(st.booleans()),
                           draw(small), draw(small), draw(small), draw(small))


def zero():
    return from_jets(lambda t, x, y: (0.0 * t, 0.0 * t))


def test_act_point_examples():
    p, uv = sg.act_point(sg.IDENTITY, (0.3, 1.0, 2.0), (4.0, 5.0))
    assert p.as_tuple() == (0.3, 1.0, 2.0) and uv == (4.0, 5.0)
    p, uv = sg.act_point(sg.GroupElement(m1=1.0), (2.0, 0.0, 0.0), (0.0, 0.0))
    assert p.as_tuple() == (2.0, 2.0, 0.0) and uv == (1.0, 0.0)
    p, uv = sg.act_point(sg.MIRROR, (0.0, 1.0, 2.0), (3.0, 4.0))
    assert p.as_tuple() == (0.0, -1.0, 2.0) and uv == (-3.0, 4.0)


def test_act_field_examples():
    shear = from_jets(lambda t, x, y: (y, 0.0 * y))
    T, X, Y = np.array([0.1, 0.7]), np.array([0.3, -0.2]), np.array([1.0, -0.4])
    same = sg.act_field(sg.IDENTITY, shear).uv(T, X, Y)
    assert np.allclose(same, shear.uv(T, X, Y), atol=1e-15)
    shifted = sg.act_field(sg.flow("Pt", 1.0), shear).uv(T, X, Y)
    assert np.allclose(shifted, shear.uv(T, X, Y), atol=1e-15)
    boosted = sg.act_field(sg.flow("Gx", 1.0), zero())
    u, v = boosted.uv(T, X, Y)
    assert np.allclose(u, 1.0) and np.allclose(v, 0.0)
    rep = verify.burgers_residual(boosted, Grid.box((0, 1), (-1, 1), (-1, 1)))
    assert rep.max_residual == 0.0


def test_compose_examples():
    g = sg.compose(sg.flow("Pt", 0.3), sg.flow("Pt", 0.4))
    assert g.close_to(sg.flow("Pt", 0.7), 1e-15)
    assert sg.compose(sg.MIRROR, sg.MIRROR).is_identity()


def test_flow_examples():
    e = 0.3
    p, uv = sg.act_point(sg.flow("D", e), (0.5, 1.0, 2.0), (1.0, -1.0))
    assert p.t == pytest.approx(math.exp(2 * e) * 0.5)
    assert p.x == pytest.approx(math.exp(e) * 1.0)
    assert uv[0] == pytest.approx(math.exp(-e))
    assert sg.flow("Gx", 0.2).close_to(sg.GroupElement(m1=0.2))
    # D and Pt flows compose as the [Pt, D] = 2 Pt relation predicts
    lhs = sg.compose(sg.compose(sg.flow("D", e), sg.flow("Pt", 0.1)), sg.flow("D", -e))
    assert lhs.close_to(sg.flow("Pt", 0.1 * math.exp(2 * e)), 1e-12)


def test_json_round_trip_and_validation():
    g = sg.GroupElement(1.0, 0.2, -0.1, 1.3, 0.4, True, 0.1, 0.2, 0.3, 0.4)
    h = sg.GroupElement.from_json(g.to_json())
    assert h.close_to(g, 1e-15)
    with pytest.raises(ConfigError):
        sg.GroupElement(1.0, 0.0, 0.0, -1.0)
    with pytest.raises(ConfigError):
        sg.GroupElement.from_json({"shear": 1})


def test_denominator_vanishing_is_masked():
    g = sg.GroupElement(-1.0, 0.0, 10.0, -10.0)
    fld = sg.act_field(g, zero())
    gi = sg.inverse(g)
    t_bad = -gi.d / gi.c
    assert fld.singular(np.array([t_bad]), np.array([0.0]), np.array([0.0]))[0]


@given(elements(), elements(), st.floats(0.1, 0.5), small, small, small, small)
def test_action_is_a_group_action(g1, g2, t, x, y, u, v):
    if abs(sg.denominator(g2, t)) < 0.05:
        return
    p2, uv2 = sg.act_point(g2, (t, x, y), (u, v))
    if abs(sg.denominator(g1, p2.t)) < 0.05:
        return
    try:
        g12 = sg.compose(g1, g2)
    except Exception:
        return
    p12, uv12 = sg.act_point(g12, (t, x, y), (u, v))
    p1, uv1 = sg.act_point(g1, p2, uv2)
    scale = 1 + max(map(abs, (*p1.as_tuple(), *uv1)))
    assert np.allclose(p12.as_tuple(), p1.as_tuple(), atol=1e-9 * scale)
    assert np.allclose(uv12, uv1, atol=1e-9 * scale)


@given(elements())
def test_inverse(g):
    assert sg.compose(g, sg.inverse(g)).is_identity(1e-9)


@given(elements(), st.floats(0.6, 1.4), small, small)
def test_transformed_solution_solves(g, t, x, y):
    shear = from_jets(lambda tj, xj, yj: (yj, 0.0 * yj))
    F = sg.act_field(g, shear)
    gi = sg.inverse(g)
    if abs(sg.denominator(gi, t)) < 0.1:
        return
    arr = F.jets(np.array([t]), np.array([x]), np.array([y]))
    res = verify.residual_arrays(arr)
    assert abs(res["R1"][0]) < 1e-8 and abs(res["R2"][0]) < 1e-8
