import numpy as np
import pytest

from burgers_lab import catalog, evolve as ev, heat_kit as hk
from burgers_lab.errors import ConfigError, UnstableStep
from burgers_lab.fields import from_jets


def setup_for(fld, n=9, t=(0.0, 0.05), **kw):
    return ev.IbvpSetup(fld, (-1.0, 1.0), (-1.0, 1.0), n, n, t[0], t[1], **kw)


@pytest.mark.parametrize("scheme", ev.SCHEMES)
def test_stationary_fields_are_kept(scheme):
    for fld in (catalog.affine_degenerate("constant", 0.4, -0.7), catalog.affine_degenerate("nilpotent")):
        final, err = ev.evolve(setup_for(fld, scheme=scheme))
        assert err < 1e-13


def test_dt_above_limit():
    fld = catalog.affine_degenerate("constant", 0.0, 0.0)
    with pytest.raises(ConfigError):
        setup_for(fld, dt=1.0)
    s = setup_for(fld)
    with pytest.raises(ConfigError):
        ev.step(s, ev.Solver(s).initial_state(), dt=10 * s.stability_limit)
    with pytest.raises(ConfigError):
        setup_for(fld, scheme="leapfrog")


def test_unstable_step():
    big = from_jets(lambda t, x, y: (2e3 * x * y + 1.0, 0.0 * x))
    s = setup_for(big, n=9, cfl=1.0)
    solver = ev.Solver(s)
    state = solver.initial_state()
    with pytest.raises(UnstableStep):
        for _ in range(200):
            state = solver.step(state)


def test_mirror_commutes_with_solver():
    fld = catalog.hopf_cole_2d(hk.HeatSolution2D([(1.0, hk.e_t_cosh(), hk.constant()),
                                                   (0.5, hk.constant(), hk.exp_mode(1.0, 1))]))
    swapped = catalog.permute(fld)
    s1, s2 = setup_for(fld, 17, (0.5, 0.55)), setup_for(swapped, 17, (0.5, 0.55))
    a, _ = ev.evolve(s1)
    b, _ = ev.evolve(s2)
    assert np.allclose(a.u, b.v.T, atol=1e-13) and np.allclose(a.v, b.u.T, atol=1e-13)


@pytest.mark.parametrize("fid,k,box", [("hopf_cole_2d", 1, None),
                                       ("darboux_family", 1, {"t": [0.5, 0.6], "x": [-1, 1], "y": [1, 2]})])
def test_second_order(fid, k, box):
    p, b = catalog.family(fid).defaults[k]
    box = box or b
    fld = catalog.make(fid, p, box)
    t0 = box["t"][0]
    rep = ev.cross_validate(fld, box, t_range=(t0, t0 + 0.1))
    assert all(1.7 <= o <= 2.3 for o in rep.orders), rep.orders
    assert rep.passed()


def test_snapshot_csv(tmp_path):
    fld = catalog.affine_degenerate("constant", 1.0, 2.0)
    snaps = []
    ev.cross_validate(fld, {"t": [0, 0.01], "x": [0, 1], "y": [0, 1]}, levels=(5,), snapshots=snaps)
    n, X, Y, state = snaps[0]
    path = tmp_path / "s.csv"
    ev.write_snapshot_csv(path, X, Y, state)
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert data.size == 25 and np.allclose(data["u"], 1.0) and np.allclose(data["v"], 2.0)


def test_semi_discrete_exact_for_affine():
    fld = catalog.affine_general([[1.0, 0.3], [0.2, 2.0]])
    s = setup_for(fld, 9, (0.5, 0.6))
    assert ev.semi_discrete_residual(fld, s) < 1e-13
