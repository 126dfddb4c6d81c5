import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_lab import lie_algebra as la
from burgers_lab.errors import ParameterOutOfDomain
from burgers_lab.fields import Point, from_jets

names = st.sampled_from(la.BASIS_NAMES)
coef = st.integers(-3, 3)


def test_commutator_examples():
    assert la.commutator(la.basis("Pt"), la.basis("D")) == la.basis("Pt") * 2
    assert la.commutator(la.basis("J"), la.basis("J")).is_zero()
    assert la.commutator(la.basis("Px"), la.basis("Pi")) == la.basis("Gx")


def test_table_entries():
    t = la.table_as_names()
    assert t[("Pt", "Pi")] == {"D": 1}
    assert t[("Gy", "J")] == {"Gx": -1}
    assert ("Px", "Py") not in t


def test_closure_examples():
    assert la.subalgebra_closure_check(la.subalgebra("2.1"), {"kappa": 0.0})
    assert la.subalgebra_closure_check(la.subalgebra("1.4"), {"kappa": 1.0})
    assert not la.closure_check_fields([la.basis("Pt"), la.basis("Pi")])


def test_parameter_domain_is_checked():
    s = la.subalgebra("1.4")
    with pytest.raises(ParameterOutOfDomain):
        s.basis({})


def test_apply_to_field_examples():
    zero = from_jets(lambda t, x, y: (0.0 * t, 0.0 * t))
    assert la.apply_to_field(la.basis("Pt"), zero, Point(0.3, 0.2, 0.1)) == (0.0, 0.0)
    assert la.apply_to_field(la.basis("Gx"), zero, Point(0.3, 0.2, 0.1)) == (1.0, 0.0)
    shear = from_jets(lambda t, x, y: (y, 0.0 * y))
    assert la.apply_to_field(la.basis("D"), shear, Point(0.0, 0.0, 1.0)) == pytest.approx((-2.0, 0.0))


def test_subalgebra_descriptions():
    for d in (1, 2):
        for s in la.subalgebras(d):
            info = s.describe()
            assert info["dim"] == d and len(info["basis"]) == d


@given(names, names, coef, coef)
def test_antisymmetry_and_bilinearity(a, b, m, n):
    A, B = la.basis(a), la.basis(b)
    assert la.commutator(A, B) == -la.commutator(B, A)
    lhs = la.commutator(A * m + B * n, B)
    assert lhs == la.commutator(A, B) * m


@given(st.lists(st.tuples(names, coef), min_size=1, max_size=4))
def test_coordinates_round_trip(terms):
    V = la.combo({})
    for name, c in terms:
        V = V + la.basis(name) * c
    coords = la.coordinates(V)
    W = la.combo({n: c for n, c in zip(la.BASIS_NAMES, coords) if c})
    assert W == V


@given(st.sampled_from([s.id for d in (1, 2) for s in la.subalgebras(d)]), st.integers(0, 1000))
def test_sampled_parameters_close(sid, seed):
    s = la.subalgebra(sid)
    for p in la.sample_parameters(s, n=2, seed=seed):
        assert la.subalgebra_closure_check(s, p, tol=1e-12)
