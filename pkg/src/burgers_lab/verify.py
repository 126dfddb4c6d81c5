"""Residual oracles for the Burgers system and its relatives.

Residual labels follow the usual notation

    R1 = u_t + u u_x + v u_y - u_xx - u_yy
    R2 = v_t + u v_x + v v_y - v_xx - v_yy
    R3 = u_x + v_y

and I1, I2 for the inviscid system (no Laplacians).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import _jet
from .errors import ConfigError, NotACommonSolution, QuadratureFailure
from .fields import Grid, SpaceTimeField

IDX = {lab: k for k, lab in enumerate(_jet.LABELS)}


def n_threads(default=None):
    env = os.environ.get("BURGERS_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("BURGERS_LAB_THREADS must be an integer") from None
        return max(1, n)
    return default or min(8, os.cpu_count() or 1)


def residual_arrays(arr):
    """All residuals from a jet array of shape (2, 10, ...)."""
    U, V = arr[0], arr[1]
    u, v = U[0], V[0]
    conv_u = U[IDX["t"]] + u * U[IDX["x"]] + v * U[IDX["y"]]
    conv_v = V[IDX["t"]] + u * V[IDX["x"]] + v * V[IDX["y"]]
    lap_u = U[IDX["xx"]] + U[IDX["yy"]]
    lap_v = V[IDX["xx"]] + V[IDX["yy"]]
    return {
        "R1": conv_u - lap_u,
        "R2": conv_v - lap_v,
        "R3": U[IDX["x"]] + V[IDX["y"]],
        "I1": conv_u,
        "I2": conv_v,
        "lap_u": lap_u,
        "lap_v": lap_v,
    }


def constraint_arrays(arr):
    U, V = arr[0], arr[1]
    return {
        "u_y-v_x": U[IDX["y"]] - V[IDX["x"]],
        "u_x-v_y": U[IDX["x"]] - V[IDX["y"]],
        "u_x+v_y": U[IDX["x"]] + V[IDX["y"]],
        "v": V[0],
        "u_xx": U[IDX["xx"]],
    }


FLAG_TO_CONSTRAINT = {"u_y=v_x": "u_y-v_x", "u_x=v_y": "u_x-v_y", "u_x+v_y=0": "u_x+v_y", "v=0": "v"}


def evaluate_jets(fld: SpaceTimeField, T, X, Y, threads=None, chunk=256):
    """Jets at the flat point list (T, X, Y), split across worker threads."""
    T, X, Y = (np.ravel(np.asarray(a, dtype=float)) for a in (T, X, Y))
    n = T.size
    if n == 0:
        return np.zeros((2, 10, 0))
    workers = n_threads(threads)
    if workers == 1 or n <= chunk:
        return fld.jets(T, X, Y)
    bounds = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda b: fld.jets(T[b[0]:b[1]], X[b[0]:b[1]], Y[b[0]:b[1]]), bounds))
    return np.concatenate(parts, axis=-1)


@dataclass
class ResidualReport:
    system: str
    field: str
    n_points: int
    n_masked: int
    max: dict
    mean: dict
    tolerance: float
    constraints: dict = field(default_factory=dict)

    @property
    def max_residual(self):
        return max(self.max.values()) if self.max else 0.0

    @property
    def passed(self):
        return bool(np.isfinite(self.max_residual) and self.max_residual <= self.tolerance)

    def to_json(self):
        return {"system": self.system, "field": self.field, "n_points": self.n_points,
                "n_masked": self.n_masked, "max": self.max, "mean": self.mean,
                "tolerance": self.tolerance, "constraints": self.constraints,
                "max_residual": self.max_residual, "verdict": "pass" if self.passed else "fail"}


SYSTEMS = {
    "burgers": ("R1", "R2"),
    "inviscid": ("I1", "I2"),
    "ns": ("R1", "R2", "R3"),
    "both": ("R1", "R2", "I1", "I2"),
}


def _grid_jets(fld, grid, threads):
    T, X, Y, n_masked = grid.points(fld)
    return evaluate_jets(fld, T, X, Y, threads), n_masked


def _tol(fld, tol):
    if tol is not None:
        return float(tol)
    return float(fld.meta.get("tolerance", 1e-10))


def residual_report(fld: SpaceTimeField, grid: Grid, system="burgers", tol=None, threads=None):
    if system not in SYSTEMS:
        raise ConfigError(f"unknown system {system!r}; expected one of {sorted(SYSTEMS)}")
    arr, n_masked = _grid_jets(fld, grid, threads)
    res = residual_arrays(arr)
    mx, mn = {}, {}
    for k in SYSTEMS[system]:
        a = np.abs(res[k])
        mx[k] = float(np.max(a)) if a.size else 0.0
        mn[k] = float(np.mean(a)) if a.size else 0.0
    cons = {k: float(np.max(np.abs(v))) if v.size else 0.0 for k, v in constraint_arrays(arr).items()}
    return ResidualReport(system, fld.name, int(arr.shape[-1]), int(n_masked), mx, mn, _tol(fld, tol), cons)


def burgers_residual(fld, grid, tol=None, threads=None):
    return residual_report(fld, grid, "burgers", tol, threads)


def inviscid_residual(fld, grid, tol=None, threads=None):
    return residual_report(fld, grid, "inviscid", tol, threads)


def ns_prolongation_check(fld, grid, tol=None, threads=None):
    """(u, v, p = const) solves the Navier-Stokes equations iff R1 = R2 = R3 = 0."""
    return residual_report(fld, grid, "ns", tol, threads)


def constraint_values(fld, grid, threads=None):
    """Max abs of u_y - v_x, u_x - v_y, u_x + v_y, v and u_xx over the grid."""
    arr, _ = _grid_jets(fld, grid, threads)
    return {k: float(np.max(np.abs(v))) if v.size else 0.0 for k, v in constraint_arrays(arr).items()}


def flagged_constraints_hold(fld, grid, tol=1e-10):
    vals = constraint_values(fld, grid)
    flags = fld.meta.get("flags") or {}
    return {name: vals[FLAG_TO_CONSTRAINT[name]] <= tol for name, on in flags.items() if on}, vals


def common_viscid_inviscid_classify(fld, grid, tol=1e-8, threads=None):
    """Sort a common solution of the viscid and inviscid systems into the two known subsets.

    subset_A: u, v harmonic with u_x = v_y; subset_B: affine in (x, y).
    """
    arr, _ = _grid_jets(fld, grid, threads)
    res = residual_arrays(arr)
    worst = max(float(np.max(np.abs(res[k]))) for k in ("R1", "R2", "I1", "I2"))
    if worst > tol:
        raise NotACommonSolution(f"max residual {worst:.3e} exceeds {tol:g}")
    U, V = arr[0], arr[1]
    harmonic = max(np.max(np.abs(res["lap_u"])), np.max(np.abs(res["lap_v"])))
    cr = np.max(np.abs(U[IDX["x"]] - V[IDX["y"]]))
    second = max(np.max(np.abs(C[IDX[k]])) for C in (U, V) for k in ("xx", "xy", "yy"))
    a = bool(harmonic <= tol and cr <= tol)
    b = bool(second <= tol)
    label = "intersection" if a and b else ("subset_A" if a else ("subset_B" if b else "neither"))
    return {"subset_A": a, "subset_B": b, "class": label,
            "laplacian": float(harmonic), "u_x-v_y": float(cr), "second_derivatives": float(second)}


# ---------------------------------------------------------------------------
# potentials


class ScalarField:
    """Scalar function of (t, x, y), optionally with a jet evaluator for exact derivatives."""

    def __init__(self, value, jet=None):
        self.value = value
        self.jet = jet

    def derivs(self, t, x, y, h=1e-3):
        if self.jet is not None:
            tj, xj, yj = _jet.Jet.variables(t, x, y)
            return _jet.to_array(self.jet(tj, xj, yj))
        from .fields import fd_jets
        f = SpaceTimeField(uv=lambda T, X, Y: (self.value(T, X, Y), np.zeros(np.shape(T))))
        return fd_jets(f, t, x, y, h=h)[0]


def _potential_terms(d, which):
    p_t, p_x, p_y = d[IDX["t"]], d[IDX["x"]], d[IDX["y"]]
    lap = d[IDX["xx"]] + d[IDX["yy"]]
    if which == "eq15":
        return {"eq15": p_t + 0.5 * p_x ** 2 + 0.5 * p_y ** 2 - lap}
    if which == "eq17":
        return {"eq17": p_t + p_x * p_y - lap}
    if which == "harmonic_pair":
        return {"hj": p_t + p_x * p_y, "laplace": lap}
    raise ConfigError(f"unknown potential equation {which!r}")


def potential_residuals(psi, which, t, x, y):
    """Residual arrays of the potential equations at the given points.

    eq15:  psi_t + psi_x^2/2 + psi_y^2/2 - psi_xx - psi_yy (u = psi_x, v = psi_y),
    eq17:  psi_t + psi_x psi_y - psi_xx - psi_yy          (u = psi_y, v = psi_x),
    harmonic_pair: (psi_t + psi_x psi_y, psi_xx + psi_yy).
    """
    if not isinstance(psi, ScalarField):
        psi = ScalarField(psi)
    d = psi.derivs(np.asarray(t, dtype=float), np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return _potential_terms(d, which)


def hopf_cole_potential(phi):
    """psi = -2 log phi as a ScalarField with exact derivatives."""
    def value(t, x, y):
        return -2.0 * np.log(phi.eval(t, x, y))

    def jet(tj, xj, yj):
        p, _, _ = phi.jets(tj, xj, yj)
        return -2.0 * _jet.log(p)
    return ScalarField(value, jet)


class LinePotential:
    """Potential of a field by integration along two axis-parallel segments.

    kind 'eq15': psi_x = u, psi_y = v (needs u_y = v_x);
    kind 'eq17': psi_x = v, psi_y = u (needs u_x = v_y).
    The t-dependent gauge is fixed so that the potential equation holds at the anchor.
    """

    def __init__(self, fld: SpaceTimeField, kind="eq15", anchor=(0.0, 0.0), epsabs=1e-13, epsrel=1e-13):
        if kind not in ("eq15", "eq17"):
            raise ConfigError("kind must be 'eq15' or 'eq17'")
        self.fld = fld
        self.kind = kind
        self.anchor = (float(anchor[0]), float(anchor[1]))
        self.eps = (epsabs, epsrel)

    def _gx_gy(self, arr, k):
        """(psi_x, psi_y) components of derivative slot k."""
        U, V = arr[0, k], arr[1, k]
        return (U, V) if self.kind == "eq15" else (V, U)

    def _integrate(self, fn, a, b):
        val, err = quad(fn, a, b, epsabs=self.eps[0], epsrel=self.eps[1], limit=200)
        if not np.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
            raise QuadratureFailure(f"quadrature error estimate {err:.2e}")
        return val

    def _path(self, t, x, y, slot, order):
        x0, y0 = self.anchor

        def gx(s, yy):
            return float(self._gx_gy(self.fld.jets(np.array([t]), np.array([s]), np.array([yy])), slot)[0][0])

        def gy(xx, s):
            return float(self._gx_gy(self.fld.jets(np.array([t]), np.array([xx]), np.array([s])), slot)[1][0])

        if order == "xy":
            return (self._integrate(lambda s: gx(s, y0), x0, x)
                    + self._integrate(lambda s: gy(x, s), y0, y))
        return (self._integrate(lambda s: gy(x0, s), y0, y)
                + self._integrate(lambda s: gx(s, y), x0, x))

    def value(self, t, x, y, order="xy"):
        """Potential with zero gauge (psi(t, anchor) = 0)."""
        return self._path(t, x, y, 0, order)

    def path_difference(self, t, x, y):
        return abs(self.value(t, x, y, "xy") - self.value(t, x, y, "yx"))

    def _raw_residual(self, t, x, y, order="xy"):
        psi_t = self._path(t, x, y, IDX["t"], order)
        arr = self.fld.jets(np.array([t]), np.array([x]), np.array([y]))
        px, py = (a[0] for a in self._gx_gy(arr, 0))
        if self.kind == "eq15":
            lap = arr[0, IDX["x"]][0] + arr[1, IDX["y"]][0]
            return psi_t + 0.5 * px * px + 0.5 * py * py - lap
        lap = arr[1, IDX["x"]][0] + arr[0, IDX["y"]][0]
        return psi_t + px * py - lap

    def residual(self, t, x, y, order="xy"):
        """Potential-equation residual after the gauge g'(t) = -R(t, anchor)."""
        return self._raw_residual(t, x, y, order) - self._raw_residual(t, *self.anchor)
