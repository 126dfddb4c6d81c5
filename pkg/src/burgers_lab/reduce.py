"""Lie reductions of the Burgers system.

Every ansatz knows its invariant variables, the map from invariant functions
to (u, v), the inverse map, a section of the orbit space (a point in
space-time for each value of the invariants) and the left-hand sides of the
reduced equations together with the reduced form of the constraint u_y = v_x.

A :class:`ReducedSolution` stores the invariant functions as a callable on
jets, ``w(zj) -> (Jet, Jet)``.  Called with the invariants of (t, x, y) it
yields (u, v) with exact space-time derivatives, and called with the jet
variables of the invariants themselves it yields the derivatives entering
the reduced system.  Pulling a space-time field back to invariant variables
works the same way by composing the field jets with the section.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from . import _jet
from .errors import (ConfigError, NoConvergence, ParameterOutOfDomain, QuadratureFailure,
                     SingularPoint, ZeroDenominator)
from .fields import SpaceTimeField
from .verify import residual_arrays

PDE_IDS = ("1.1", "1.2", "1.3", "1.4", "1.5", "1.6", "1.7", "1.8")
ODE_IDS = ("2.1", "2.2", "2.3", "2.4", "2.5", "2.6")
ANSATZ_IDS = PDE_IDS + ODE_IDS

R_EPS = 1e-12


def _const(c, like):
    return _jet.Jet.const(c, like.f.shape)


def _rot(cj, sj, a, b):
    """Rotate (a, b) by the angle with cosine cj and sine sj."""
    return a * cj - b * sj, a * sj + b * cj


def _radius(xj, yj):
    return _jet.sqrt(xj * xj + yj * yj)


def _conv(w1, w2, d):
    return w1 * d["1"] + w2 * d["2"] - d["11"] - d["22"]


def _evol(w1, d):
    return d["1"] + w1 * d["2"] - d["22"]


class Ansatz:
    """Base class; subclasses fill in the formulas."""

    id = ""
    dim = 2
    param_names: tuple = ()
    generator = ""

    def __init__(self, **params):
        unknown = set(params) - set(self.param_names)
        if unknown:
            raise ConfigError(f"ansatz {self.id}: unknown parameters {sorted(unknown)}")
        self.params = {k: params.get(k, self.defaults().get(k)) for k in self.param_names}
        self.check_params()

    def defaults(self):
        return {}

    def check_params(self):
        pass

    def __repr__(self):
        return f"Ansatz({self.id}, {self.params})"

    # space-time side ----------------------------------------------------------
    def singular(self, t, x, y):
        return np.zeros(np.broadcast(np.asarray(t), np.asarray(x), np.asarray(y)).shape, dtype=bool)

    def invariants(self, tj, xj, yj):
        raise NotImplementedError

    def ansatz(self, tj, xj, yj, W):
        raise NotImplementedError

    def inverse(self, tj, xj, yj, uj, vj):
        raise NotImplementedError

    def section(self, zj):
        raise NotImplementedError

    # reduced side ---------------------------------------------------------------
    def reduced_singular(self, z):
        return np.zeros(np.shape(z[0]), dtype=bool)

    def reduced(self, z, d1, d2):
        raise NotImplementedError

    def constraint(self, z, d1, d2):
        raise NotImplementedError


def _nonneg(name, val):
    if not (math.isfinite(val) and val >= 0):
        raise ParameterOutOfDomain(f"{name} must be >= 0, got {val}")


def _positive(name, val):
    if not (math.isfinite(val) and val > 0):
        raise ParameterOutOfDomain(f"{name} must be > 0, got {val}")


# ---------------------------------------------------------------------------
# codimension one


class A11(Ansatz):
    id, param_names, generator = "1.1", ("kappa",), "Pt + kappa J"

    def defaults(self):
        return {"kappa": 0}

    def check_params(self):
        if self.params["kappa"] not in (0, 1):
            raise ParameterOutOfDomain("kappa must be 0 or 1 for ansatz 1.1")

    def _cs(self, tj):
        k = self.params["kappa"]
        return _jet.cos(tj * k), _jet.sin(tj * k)

    def invariants(self, tj, xj, yj):
        c, s = self._cs(tj)
        return [xj * c + yj * s, -xj * s + yj * c]

    def ansatz(self, tj, xj, yj, W):
        k = self.params["kappa"]
        c, s = self._cs(tj)
        a, b = _rot(c, s, W[0], W[1])
        return a - k * yj, b + k * xj

    def inverse(self, tj, xj, yj, uj, vj):
        k = self.params["kappa"]
        c, s = self._cs(tj)
        return _rot(c, -1.0 * s, uj + k * yj, vj - k * xj)

    def section(self, zj):
        return _const(0.0, zj[0]), zj[0], zj[1]

    def reduced(self, z, d1, d2):
        k = self.params["kappa"]
        w1, w2 = d1[""], d2[""]
        return (_conv(w1, w2, d1) - 2 * k * w2 - k * z[0],
                _conv(w1, w2, d2) + 2 * k * w1 - k * z[1])

    def constraint(self, z, d1, d2):
        return d1["2"] - d2["1"] - 2 * self.params["kappa"]


class A12(Ansatz):
    id, generator = "1.2", "Pt + Gy"

    def invariants(self, tj, xj, yj):
        return [xj, yj - 0.5 * tj * tj]

    def ansatz(self, tj, xj, yj, W):
        return W[0], W[1] + tj

    def inverse(self, tj, xj, yj, uj, vj):
        return uj, vj - tj

    def section(self, zj):
        return _const(0.0, zj[0]), zj[0], zj[1]

    def reduced(self, z, d1, d2):
        w1, w2 = d1[""], d2[""]
        return _conv(w1, w2, d1), _conv(w1, w2, d2) + 1.0

    def constraint(self, z, d1, d2):
        return d1["2"] - d2["1"]


class A13(Ansatz):
    """D + 2 kappa J on a single sign of t (the ansatz is not smooth across t = 0)."""

    id, param_names, generator = "1.3", ("kappa", "sign"), "D + 2 kappa J"

    def defaults(self):
        return {"kappa": 0.0, "sign": 1}

    def check_params(self):
        _nonneg("kappa", self.params["kappa"])
        if self.params["sign"] not in (1, -1):
            raise ParameterOutOfDomain("sign must be +1 or -1")

    def singular(self, t, x, y):
        t = np.broadcast_to(np.asarray(t, float), np.broadcast(np.asarray(t), np.asarray(x), np.asarray(y)).shape)
        return self.params["sign"] * t <= 0

    def _parts(self, tj):
        at = tj * self.params["sign"]
        tau = _jet.log(at) * self.params["kappa"]
        return _jet.sqrt(at), _jet.cos(tau), _jet.sin(tau)

    def invariants(self, tj, xj, yj):
        rho, c, s = self._parts(tj)
        a, b = _rot(c, -1.0 * s, xj, yj)
        return [a / rho, b / rho]

    def ansatz(self, tj, xj, yj, W):
        k = self.params["kappa"]
        rho, c, s = self._parts(tj)
        a, b = _rot(c, s, W[0], W[1])
        return (a / rho + (0.5 * xj - k * yj) / tj,
                b / rho + (0.5 * yj + k * xj) / tj)

    def inverse(self, tj, xj, yj, uj, vj):
        k = self.params["kappa"]
        rho, c, s = self._parts(tj)
        U = (uj - (0.5 * xj - k * yj) / tj) * rho
        V = (vj - (0.5 * yj + k * xj) / tj) * rho
        return _rot(c, -1.0 * s, U, V)

    def section(self, zj):
        return _const(float(self.params["sign"]), zj[0]), zj[0], zj[1]

    def reduced(self, z, d1, d2):
        k = self.params["kappa"]
        kh = k * self.params["sign"]
        a = k * k + 0.25
        w1, w2 = d1[""], d2[""]
        return (_conv(w1, w2, d1) - 2 * kh * w2 - a * z[0],
                _conv(w1, w2, d2) + 2 * kh * w1 - a * z[1])

    def constraint(self, z, d1, d2):
        return d1["2"] - d2["1"] - 2 * self.params["kappa"] * self.params["sign"]


class A14(Ansatz):
    id, param_names, generator = "1.4", ("kappa",), "Pt + Pi + kappa J"

    def defaults(self):
        return {"kappa": 0.0}

    def check_params(self):
        _nonneg("kappa", self.params["kappa"])

    def _parts(self, tj):
        tau = _jet.arctan(tj) * self.params["kappa"]
        return _jet.sqrt(tj * tj + 1.0), _jet.cos(tau), _jet.sin(tau)

    def invariants(self, tj, xj, yj):
        rho, c, s = self._parts(tj)
        a, b = _rot(c, -1.0 * s, xj, yj)
        return [a / rho, b / rho]

    def ansatz(self, tj, xj, yj, W):
        k = self.params["kappa"]
        rho, c, s = self._parts(tj)
        a, b = _rot(c, s, W[0], W[1])
        q = tj * tj + 1.0
        return a / rho + (tj * xj - k * yj) / q, b / rho + (tj * yj + k * xj) / q

    def inverse(self, tj, xj, yj, uj, vj):
        k = self.params["kappa"]
        rho, c, s = self._parts(tj)
        q = tj * tj + 1.0
        U = (uj - (tj * xj - k * yj) / q) * rho
        V = (vj - (tj * yj + k * xj) / q) * rho
        return _rot(c, -1.0 * s, U, V)

    def section(self, zj):
        return _const(0.0, zj[0]), zj[0], zj[1]

    def reduced(self, z, d1, d2):
        k = self.params["kappa"]
        a = 1.0 - k * k
        w1, w2 = d1[""], d2[""]
        return (_conv(w1, w2, d1) - 2 * k * w2 + a * z[0],
                _conv(w1, w2, d2) + 2 * k * w1 + a * z[1])

    def constraint(self, z, d1, d2):
        return d1["2"] - d2["1"] - 2 * self.params["kappa"]


class A15(Ansatz):
    id, param_names, generator = "1.5", ("mu",), "Pt + Pi + J + mu (Gx - Py)"

    def defaults(self):
        return {"mu": 1.0}

    def check_params(self):
        _positive("mu", self.params["mu"])

    def invariants(self, tj, xj, yj):
        mu = self.params["mu"]
        q = tj * tj + 1.0
        return [(tj * xj - yj) / q - mu * _jet.arctan(tj), (xj + tj * yj) / q]

    def ansatz(self, tj, xj, yj, W):
        mu = self.params["mu"]
        q = tj * tj + 1.0
        w1, w2 = W
        return ((tj * w1 + w2 + tj * (xj + mu) - yj) / q,
                (-1.0 * w1 + tj * w2 + tj * yj + xj - mu) / q)

    def inverse(self, tj, xj, yj, uj, vj):
        mu = self.params["mu"]
        q = tj * tj + 1.0
        A = q * uj - tj * (xj + mu) + yj
        B = q * vj - tj * yj - xj + mu
        return (tj * A - B) / q, (A + tj * B) / q

    def section(self, zj):
        return _const(0.0, zj[0]), zj[1], -1.0 * zj[0]

    def reduced(self, z, d1, d2):
        mu = self.params["mu"]
        w1, w2 = d1[""], d2[""]
        return _conv(w1, w2, d1) - 2 * w2, _conv(w1, w2, d2) + 2 * w1 + 2 * mu

    def constraint(self, z, d1, d2):
        return d1["2"] - d2["1"] - 2.0


class _Radial:
    """Shared pieces of the rotation-invariant ansatzes (1.6 and 2.2-2.4)."""

    def singular(self, t, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(t, float))[:2]
        return np.hypot(x, y) <= R_EPS

    @staticmethod
    def _from_w(xj, yj, rj, W, scale):
        a = (xj * W[0] - yj * W[1]) / (rj * scale)
        b = (yj * W[0] + xj * W[1]) / (rj * scale)
        r2 = rj * rj
        return a + xj / r2, b + yj / r2

    @staticmethod
    def _to_w(xj, yj, rj, uj, vj, scale):
        r2 = rj * rj
        a, b = uj - xj / r2, vj - yj / r2
        return (xj * a + yj * b) / rj * scale, (xj * b - yj * a) / rj * scale


class A16(_Radial, Ansatz):
    id, generator = "1.6", "J"

    def invariants(self, tj, xj, yj):
        return [tj, _radius(xj, yj)]

    def ansatz(self, tj, xj, yj, W):
        return self._from_w(xj, yj, _radius(xj, yj), W, 1.0)

    def inverse(self, tj, xj, yj, uj, vj):
        return self._to_w(xj, yj, _radius(xj, yj), uj, vj, 1.0)

    def section(self, zj):
        return zj[0], zj[1], _const(0.0, zj[0])

    def reduced_singular(self, z):
        return np.asarray(z[1]) <= 0

    def reduced(self, z, d1, d2):
        z2 = z[1]
        w1, w2 = d1[""], d2[""]
        return (_evol(w1, d1) - w2 * w2 / z2 - 1.0 / z2 ** 3,
                _evol(w1, d2) + w1 * w2 / z2 + 2 * w2 / z2 ** 2)

    def constraint(self, z, d1, d2):
        return z[1] * d2["2"] + d2[""]


class A17(Ansatz):
    id, generator = "1.7", "Gx - Py"

    def invariants(self, tj, xj, yj):
        return [_jet.arctan(tj), (xj + tj * yj) / (tj * tj + 1.0)]

    def ansatz(self, tj, xj, yj, W):
        q = tj * tj + 1.0
        w1, w2 = W
        return (w1 - tj * w2 + tj * xj - yj) / q, (tj * w1 + w2 + xj + tj * yj) / q

    def inverse(self, tj, xj, yj, uj, vj):
        q = tj * tj + 1.0
        A = q * uj - tj * xj + yj
        B = q * vj - xj - tj * yj
        return (A + tj * B) / q, (B - tj * A) / q

    def section(self, zj):
        tj = _jet.sin(zj[0]) / _jet.cos(zj[0])
        return tj, zj[1] * (tj * tj + 1.0), _const(0.0, zj[0])

    def reduced(self, z, d1, d2):
        w1, w2 = d1[""], d2[""]
        return _evol(w1, d1) - 2 * w2, _evol(w1, d2) + 2 * w1

    def constraint(self, z, d1, d2):
        return d2["2"] + 2.0


class A18(Ansatz):
    id, generator = "1.8", "Py"

    def invariants(self, tj, xj, yj):
        return [tj, xj]

    def ansatz(self, tj, xj, yj, W):
        return W[0], W[1]

    def inverse(self, tj, xj, yj, uj, vj):
        return uj, vj

    def section(self, zj):
        return zj[0], zj[1], _const(0.0, zj[0])

    def reduced(self, z, d1, d2):
        return _evol(d1[""], d1), _evol(d1[""], d2)

    def constraint(self, z, d1, d2):
        return d2["2"]


# ---------------------------------------------------------------------------
# codimension two


class A21(Ansatz):
    """Angle variable on the principal branch; the domain is x > 0."""

    id, dim, param_names, generator = "2.1", 1, ("kappa",), "Pt, D + kappa J"

    def defaults(self):
        return {"kappa": 0.0}

    def check_params(self):
        _nonneg("kappa", self.params["kappa"])

    def singular(self, t, x, y):
        x = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float), np.asarray(y, float))[0]
        return x <= 0

    def invariants(self, tj, xj, yj):
        return [_jet.arctan2(yj, xj) - self.params["kappa"] * _jet.log(_radius(xj, yj))]

    def ansatz(self, tj, xj, yj, W):
        r2 = xj * xj + yj * yj
        return (xj * W[0] - yj * W[1]) / r2, (yj * W[0] + xj * W[1]) / r2

    def inverse(self, tj, xj, yj, uj, vj):
        return xj * uj + yj * vj, xj * vj - yj * uj

    def section(self, zj):
        return _const(1.0, zj[0]), _jet.cos(zj[0]), _jet.sin(zj[0])

    def reduced(self, z, d1, d2):
        k = self.params["kappa"]
        p1, p2 = d1[""], d2[""]
        A = p2 - k * p1 - 2 * k
        return (A * d1["1"] - (k * k + 1) * d1["11"] + 2 * d2["1"] - p1 * p1 - p2 * p2,
                A * d2["1"] - (k * k + 1) * d2["11"] - 2 * d1["1"])

    def constraint(self, z, d1, d2):
        return d1["1"] + self.params["kappa"] * d2["1"]


class _RadialODE(_Radial, Ansatz):
    dim = 1
    extra = 0.0     # coefficient of omega in the first reduced equation

    def _scale(self, tj):
        raise NotImplementedError

    def _shift(self, tj, xj, yj):
        raise NotImplementedError

    def invariants(self, tj, xj, yj):
        return [_radius(xj, yj) / self._scale(tj)]

    def ansatz(self, tj, xj, yj, W):
        u, v = self._from_w(xj, yj, _radius(xj, yj), W, self._scale(tj))
        a, b = self._shift(tj, xj, yj)
        return u + a, v + b

    def inverse(self, tj, xj, yj, uj, vj):
        a, b = self._shift(tj, xj, yj)
        return self._to_w(xj, yj, _radius(xj, yj), uj - a, vj - b, self._scale(tj))

    def reduced_singular(self, z):
        return np.asarray(z[0]) <= 0

    def reduced(self, z, d1, d2):
        om = z[0]
        p1, p2 = d1[""], d2[""]
        return (p1 * d1["1"] - d1["11"] - p2 * p2 / om - 1.0 / om ** 3 + self.extra * om,
                p1 * d2["1"] - d2["11"] + p1 * p2 / om + 2 * p2 / om ** 2)

    def constraint(self, z, d1, d2):
        return z[0] * d2["1"] + d2[""]


class A22(_RadialODE):
    id, generator = "2.2", "Pt, J"

    def _scale(self, tj):
        return _const(1.0, tj)

    def _shift(self, tj, xj, yj):
        return 0.0, 0.0

    def section(self, zj):
        return _const(1.0, zj[0]), zj[0], _const(0.0, zj[0])


class A23(_RadialODE):
    id, param_names, generator, extra = "2.3", ("sign",), "D, J", -0.25

    def defaults(self):
        return {"sign": 1}

    def check_params(self):
        if self.params["sign"] not in (1, -1):
            raise ParameterOutOfDomain("sign must be +1 or -1")

    def singular(self, t, x, y):
        t = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float), np.asarray(y, float))[0]
        return super().singular(t, x, y) | (self.params["sign"] * t <= 0)

    def _scale(self, tj):
        return _jet.sqrt(tj * self.params["sign"])

    def _shift(self, tj, xj, yj):
        return 0.5 * xj / tj, 0.5 * yj / tj

    def section(self, zj):
        return _const(float(self.params["sign"]), zj[0]), zj[0], _const(0.0, zj[0])


class A24(_RadialODE):
    id, generator, extra = "2.4", "Pt + Pi, J", 1.0

    def _scale(self, tj):
        return _jet.sqrt(tj * tj + 1.0)

    def _shift(self, tj, xj, yj):
        q = tj * tj + 1.0
        return tj * xj / q, tj * yj / q

    def section(self, zj):
        return _const(0.0, zj[0]), zj[0], _const(0.0, zj[0])


class A25(Ansatz):
    id, dim, param_names, generator = "2.5", 1, ("mu",), "Pt + Pi + J + mu (Gy + Px), Gx - Py"

    def defaults(self):
        return {"mu": 0.0}

    def check_params(self):
        _nonneg("mu", self.params["mu"])

    def invariants(self, tj, xj, yj):
        return [(xj + tj * yj) / (tj * tj + 1.0) - self.params["mu"] * _jet.arctan(tj)]

    def ansatz(self, tj, xj, yj, W):
        mu = self.params["mu"]
        q = tj * tj + 1.0
        p1, p2 = W
        return ((p1 - tj * p2 + tj * xj - yj + mu) / q,
                (tj * p1 + p2 + xj + tj * yj + mu * tj) / q)

    def inverse(self, tj, xj, yj, uj, vj):
        mu = self.params["mu"]
        q = tj * tj + 1.0
        A = q * uj - tj * xj + yj - mu
        B = q * vj - xj - tj * yj - mu * tj
        return (A + tj * B) / q, (B - tj * A) / q

    def section(self, zj):
        return _const(0.0, zj[0]), zj[0], _const(0.0, zj[0])

    def reduced(self, z, d1, d2):
        mu = self.params["mu"]
        p1, p2 = d1[""], d2[""]
        return (p1 * d1["1"] - d1["11"] - 2 * p2,
                p1 * d2["1"] - d2["11"] + 2 * p1 + 2 * mu)

    def constraint(self, z, d1, d2):
        return d2["1"] + 2.0


class A26(Ansatz):
    id, dim, param_names, generator = "2.6", 1, ("mu",), "Gx - Py, Gy + mu Px"

    def defaults(self):
        return {"mu": 1.0}

    def check_params(self):
        _positive("mu", self.params["mu"])

    def invariants(self, tj, xj, yj):
        return [tj]

    def ansatz(self, tj, xj, yj, W):
        mu = self.params["mu"]
        q = tj * tj + mu
        p1, p2 = W
        return ((tj * p1 - mu * p2 + tj * xj - mu * yj) / q,
                (p1 + tj * p2 + xj + tj * yj) / q)

    def inverse(self, tj, xj, yj, uj, vj):
        mu = self.params["mu"]
        q = tj * tj + mu
        A = q * uj - tj * xj + mu * yj
        B = q * vj - xj - tj * yj
        return (tj * A + mu * B) / q, (tj * B - A) / q

    def section(self, zj):
        return zj[0], _const(0.0, zj[0]), _const(0.0, zj[0])

    def reduced(self, z, d1, d2):
        return d1["1"], d2["1"]

    def constraint(self, z, d1, d2):
        # u_y - v_x reduces to the contradiction 1 = 0
        return np.ones_like(np.asarray(z[0], dtype=float))


_CLASSES = {c.id: c for c in (A11, A12, A13, A14, A15, A16, A17, A18, A21, A22, A23, A24, A25, A26)}


def ansatz(aid: str, **params) -> Ansatz:
    try:
        cls = _CLASSES[str(aid)]
    except KeyError:
        raise ConfigError(f"unknown ansatz {aid!r}; known: {list(ANSATZ_IDS)}") from None
    return cls(**params)


# ---------------------------------------------------------------------------
# reduced solutions


def _ders(J, dim):
    d = {"": J.f, "1": J.g[0], "11": J.h[0, 0]}
    if dim == 2:
        d.update({"2": J.g[1], "12": J.h[0, 1], "22": J.h[1, 1]})
    return d


def _reduced_vars(dim, z):
    z = [np.asarray(a, dtype=float) for a in z]
    if len(z) != dim:
        raise ConfigError(f"expected {dim} invariant variables, got {len(z)}")
    zs = np.broadcast_arrays(*z)
    if dim == 2:
        return list(_jet.Jet.variables(zs[0], zs[1], 0.0)[:2]), zs
    return [_jet.Jet.variables(zs[0], 0.0, 0.0)[0]], zs


@dataclass
class ReducedSolution:
    """Invariant functions of an ansatz, as a jet callable ``w(zj) -> (Jet, Jet)``.

    ``box`` is a space-time box ({"t": [..], "x": [..], "y": [..]}) on which
    the reconstructed field is sampled by the consistency check.
    """
    ansatz: Ansatz
    w: Callable
    box: Optional[dict] = None
    name: str = "w"
    meta: dict = dc_field(default_factory=dict)

    @property
    def ansatz_id(self):
        return self.ansatz.id

    @property
    def dim(self):
        return self.ansatz.dim

    def derivatives(self, *z):
        """Value and derivatives of (w1, w2) at invariant points, as two dicts."""
        zj, zs = _reduced_vars(self.dim, z)
        W1, W2 = self.w(zj)
        return _ders(W1, self.dim), _ders(W2, self.dim), zs

    def values(self, *z):
        d1, d2, _ = self.derivatives(*z)
        return d1[""], d2[""]


def reconstruct(rs: ReducedSolution) -> SpaceTimeField:
    """Space-time field (u, v) given by the ansatz applied to the invariant functions."""
    A = rs.ansatz

    def jet(t, x, y):
        if np.any(A.singular(t, x, y)):
            raise SingularPoint(f"ansatz {A.id} is singular at some of the requested points")
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        W = rs.w(A.invariants(tj, xj, yj))
        return A.ansatz(tj, xj, yj, W)

    meta = {"ansatz": A.id, "ansatz_params": dict(A.params), "reduced": rs.name}
    if rs.box is not None:
        meta["box"] = rs.box
    return SpaceTimeField(jet=jet, singular=A.singular, name=f"{A.id}[{rs.name}]", meta=meta)


def _check_reduced_domain(A, zs):
    if np.any(A.reduced_singular(zs)):
        raise SingularPoint(f"reduced system {A.id} is singular at some of the requested points")


def reduced_residual(rs: ReducedSolution, *z):
    """Left-hand sides of the two reduced equations at invariant points."""
    d1, d2, zs = rs.derivatives(*z)
    _check_reduced_domain(rs.ansatz, zs)
    return rs.ansatz.reduced(zs, d1, d2)


def reduced_constraint(rs: ReducedSolution, *z):
    """Reduced form of u_y - v_x (zero exactly on the linearizable subset)."""
    d1, d2, zs = rs.derivatives(*z)
    _check_reduced_domain(rs.ansatz, zs)
    return np.broadcast_to(rs.ansatz.constraint(zs, d1, d2), zs[0].shape)


def from_jets(aid, fn, params=None, box=None, name="w"):
    """Reduced solution from explicit jet formulas ``fn(zj) -> (Jet, Jet)``."""
    return ReducedSolution(ansatz(aid, **(params or {})), fn, box, name)


def constant(aid, c1, c2, params=None, box=None):
    def fn(zj):
        return _const(c1, zj[0]), _const(c2, zj[0])
    return from_jets(aid, fn, params, box, name=f"const({c1},{c2})")


def pullback(fld: SpaceTimeField, aid, params=None, box=None, name=None) -> ReducedSolution:
    """Invariant functions of an invariant field, read off along the section."""
    A = ansatz(aid, **(params or {}))

    def fn(zj):
        tj, xj, yj = A.section(zj)
        arr = fld.jets(tj.f, xj.f, yj.f)
        uj = _jet.compose_array(arr[0], tj, xj, yj)
        vj = _jet.compose_array(arr[1], tj, xj, yj)
        return A.inverse(tj, xj, yj, uj, vj)

    return ReducedSolution(A, fn, box or fld.meta.get("box"), name or f"pullback({fld.name})",
                           {"source": fld.name})


# ---------------------------------------------------------------------------
# ODE reductions solved numerically


def _box_samples(box, n=9):
    axes = [np.linspace(float(box[k][0]), float(box[k][1]), n) for k in ("t", "x", "y")]
    return [a.ravel() for a in np.meshgrid(*axes, indexing="ij")]


def invariant_range(A: Ansatz, box, n=9):
    t, x, y = _box_samples(box, n)
    ok = ~A.singular(t, x, y)
    zj = A.invariants(*_jet.Jet.variables(t[ok], x[ok], y[ok]))
    return [(float(z.f.min()), float(z.f.max())) for z in zj]


def _second_derivatives(A, om, p, dp):
    """Solve the (linear in the top order) reduced ODEs for phi''."""
    z = (np.asarray(om, dtype=float),)
    base1 = {"": p[0], "1": dp[0], "11": 0.0}
    base2 = {"": p[1], "1": dp[1], "11": 0.0}
    e0 = A.reduced(z, base1, base2)
    e1 = A.reduced(z, dict(base1, **{"11": 1.0}), dict(base2, **{"11": 1.0}))
    out = []
    for a, b in zip(e0, e1):
        lead = b - a
        if np.any(np.abs(lead) < 1e-300):
            raise ZeroDenominator(f"reduced system {A.id} has no second-order term")
        out.append(-a / lead)
    return out


def ode_solution(aid, params=None, phi0=(0.0, 0.0), dphi0=(0.0, 0.0), box=None, omega0=None,
                 margin=0.05, rtol=1e-12, atol=1e-12) -> ReducedSolution:
    """Reduced solution of one of the ODE systems 2.1-2.5 from Cauchy data at omega0."""
    A = ansatz(aid, **(params or {}))
    if A.dim != 1 or A.id == "2.6":
        raise ConfigError(f"ode_solution needs one of 2.1-2.5, got {A.id}")
    if box is None:
        raise ConfigError("ode_solution needs a space-time box")
    lo, hi = invariant_range(A, box)[0]
    pad = margin * (hi - lo) + 1e-3
    lo, hi = lo - pad, hi + pad
    if omega0 is None:
        omega0 = 0.5 * (lo + hi)
    lo, hi = min(lo, omega0), max(hi, omega0)
    if np.any(A.reduced_singular((np.array([lo, hi]),))):
        raise SingularPoint(f"integration interval [{lo}, {hi}] meets the singular set of {A.id}")

    def rhs(om, y):
        acc = _second_derivatives(A, om, y[:2], y[2:])
        return [y[2], y[3], acc[0], acc[1]]

    y0 = [phi0[0], phi0[1], dphi0[0], dphi0[1]]
    parts = []
    for end in (lo, hi):
        if end == omega0:
            continue
        sol = integrate.solve_ivp(rhs, (omega0, end), y0, method="DOP853", rtol=rtol, atol=atol,
                                  dense_output=True)
        if sol.status != 0:
            raise NoConvergence(f"integration of {A.id} stopped: {sol.message}")
        parts.append((min(omega0, end), max(omega0, end), sol.sol))

    def state(om):
        om = np.asarray(om, dtype=float)
        flat = om.ravel()
        out = np.empty((4, flat.size))
        done = np.zeros(flat.size, dtype=bool)
        for a, b, s in parts:
            sel = ~done & (flat >= a - 1e-12) & (flat <= b + 1e-12)
            if sel.any():
                out[:, sel] = s(np.clip(flat[sel], a, b))
                done |= sel
        if not done.all():
            raise SingularPoint(f"omega outside the integrated range [{lo}, {hi}]")
        return out.reshape((4,) + om.shape)

    def fn(zj):
        om = zj[0]
        y = state(om.f)
        acc = _second_derivatives(A, om.f, y[:2], y[2:])
        return om.unary(y[0], y[2], acc[0]), om.unary(y[1], y[3], acc[1])

    name = f"ode{A.id}(phi0={list(phi0)}, dphi0={list(dphi0)})"
    return ReducedSolution(A, fn, box, name, {"omega_range": [lo, hi], "omega0": omega0})


# ---------------------------------------------------------------------------
# consistency between the full system and the reduced one


@dataclass
class ConsistencyReport:
    ansatz_id: str
    ansatz_params: dict
    solution: str
    n_points: int
    full_max: float
    reduced_max: float
    constraint_max_abs: float
    constraint_match: float
    tolerance: float
    expect: Optional[str] = None

    @property
    def full_solves(self):
        return self.full_max <= self.tolerance

    @property
    def reduced_solves(self):
        return self.reduced_max <= self.tolerance

    @property
    def equivalent(self):
        return self.full_solves == self.reduced_solves

    @property
    def passed(self):
        ok = self.equivalent and self.constraint_match <= max(self.tolerance, 1e-8)
        if self.expect == "solution":
            ok = ok and self.full_solves
        elif self.expect == "non-solution":
            ok = ok and self.full_max > 1e-3 and self.reduced_max > 1e-3
        return ok

    def to_json(self):
        return {
            "ansatz": self.ansatz_id, "ansatz_params": self.ansatz_params, "solution": self.solution,
            "n_points": self.n_points, "full_residual_max": self.full_max,
            "reduced_residual_max": self.reduced_max, "constraint_max_abs": self.constraint_max_abs,
            "constraint_mismatch": self.constraint_match, "tolerance": self.tolerance,
            "expect": self.expect, "equivalent": self.equivalent,
            "verdict": "pass" if self.passed else "fail",
        }


# u_y - v_x of the reconstructed field equals factor * (reduced constraint value)
def _constraint_factor(A, t, x, y):
    aid = A.id
    r = np.hypot(x, y)
    q = t * t + 1.0
    if aid in ("1.1", "1.2"):
        return np.ones_like(t)
    if aid == "1.3":
        return 1.0 / np.abs(t)
    if aid in ("1.4", "1.5"):
        return 1.0 / q
    if aid in ("1.6", "2.2"):
        return -1.0 / r
    if aid in ("1.7", "2.5"):
        return -1.0 / q
    if aid == "1.8":
        return -np.ones_like(t)
    if aid == "2.1":
        return 1.0 / r ** 2
    if aid == "2.3":
        return -1.0 / (r * np.sqrt(np.abs(t)))
    if aid == "2.4":
        return -1.0 / (r * np.sqrt(q))
    if aid == "2.6":
        mu = A.params["mu"]
        return -(1.0 + mu) / (t * t + mu)
    raise ConfigError(aid)


def consistency_check(rs: ReducedSolution, n=120, seed=0, tol=1e-8, expect=None, box=None):
    """Compare the full residual of the reconstructed field with the reduced residual.

    Both are evaluated on the same random space-time sample (the reduced one
    at the invariants of the sample points).  The reduced constraint is also
    compared with u_y - v_x of the reconstructed field.
    """
    A = rs.ansatz
    box = box or rs.box
    if box is None:
        raise ConfigError("consistency_check needs a space-time box")
    rng = np.random.default_rng(seed)
    t, x, y = (rng.uniform(float(box[k][0]), float(box[k][1]), n) for k in ("t", "x", "y"))
    ok = ~A.singular(t, x, y)
    t, x, y = t[ok], x[ok], y[ok]
    fld = reconstruct(rs)
    arr = fld.jets(t, x, y)
    res = residual_arrays(arr)
    full = np.maximum(np.abs(res["R1"]), np.abs(res["R2"]))
    z = [zj.f for zj in A.invariants(*_jet.Jet.variables(t, x, y))]
    E1, E2 = reduced_residual(rs, *z)
    red = np.maximum(np.abs(E1), np.abs(E2))
    C = reduced_constraint(rs, *z)
    curl = arr[0, 3] - arr[1, 2]
    mismatch = np.abs(curl - _constraint_factor(A, t, x, y) * C)
    scale = np.maximum(1.0, np.abs(curl))
    return ConsistencyReport(A.id, dict(A.params), rs.name, int(t.size), float(full.max()), float(red.max()),
                             float(np.abs(C).max()), float((mismatch / scale).max()), tol, expect)


# ---------------------------------------------------------------------------
# grouped form of reduced systems 1.1-1.5


def grouped_parameters(A: Ansatz):
    """(kappa, alpha, beta) placing reduced system 1.1-1.5 in the common form."""
    p = A.params
    if A.id == "1.1":
        return float(p["kappa"]), -float(p["kappa"]), 0.0
    if A.id == "1.2":
        return 0.0, 0.0, 1.0
    if A.id == "1.3":
        k = p["kappa"]
        return k * p["sign"], -(k * k + 0.25), 0.0
    if A.id == "1.4":
        k = p["kappa"]
        return k, 1.0 - k * k, 0.0
    if A.id == "1.5":
        return 1.0, 0.0, 2.0 * p["mu"]
    raise ConfigError(f"ansatz {A.id} is not of the grouped form")


def grouped_residual(kappa, alpha, beta, z, d1, d2):
    w1, w2 = d1[""], d2[""]
    return (_conv(w1, w2, d1) - 2 * kappa * w2 + alpha * z[0],
            _conv(w1, w2, d2) + 2 * kappa * w1 + alpha * z[1] + beta)


def check_grouped_table(A: Ansatz, n=200, seed=0):
    """Largest difference between the per-ansatz display and the grouped form on random jets."""
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=n), rng.normal(size=n))
    keys = ("", "1", "2", "11", "12", "22")
    d1 = {k: rng.normal(size=n) for k in keys}
    d2 = {k: rng.normal(size=n) for k in keys}
    a = A.reduced(z, d1, d2)
    b = grouped_residual(*grouped_parameters(A), z, d1, d2)
    return max(float(np.abs(a[0] - b[0]).max()), float(np.abs(a[1] - b[1]).max()))


# ---------------------------------------------------------------------------
# reduced system 1.8: conserved current and linearization


def conserved_current_divergence(rs: ReducedSolution, z1, z2):
    """D1(w1) + D2(w1^2/2 - w1_2) for a reduced solution of ansatz 1.8."""
    if rs.ansatz_id != "1.8":
        raise ConfigError("the conserved current belongs to reduced system 1.8")
    d1, _, _ = rs.derivatives(z1, z2)
    return d1["1"] + d1[""] * d1["2"] - d1["22"]


class Theta:
    """theta1 = exp(-1/2 int_a^z2 w1 + g(z1)), with g chosen so that theta1 solves the heat equation.

    Heat equation for theta1 forces g'(z1) = -(w1_2 - w1^2/2)(z1, a)/2; g(z1_0) = 0.
    """

    def __init__(self, rs: ReducedSolution, anchor=(0.0, 0.0), epsabs=1e-13, epsrel=1e-13):
        self.rs = rs
        self.z1_0, self.a = float(anchor[0]), float(anchor[1])
        self.epsabs, self.epsrel = epsabs, epsrel

    def _quad(self, f, lo, hi):
        val, err = integrate.quad(f, lo, hi, epsabs=self.epsabs, epsrel=self.epsrel, limit=200)
        if not np.isfinite(val) or err > 1e3 * max(self.epsabs, self.epsrel * abs(val)):
            raise QuadratureFailure(f"quadrature error estimate {err:g} on [{lo}, {hi}]")
        return val

    def _w1(self, z1, z2):
        return float(self.rs.values(np.float64(z1), np.float64(z2))[0])

    def gauge(self, z1):
        def integrand(s):
            d1, _, _ = self.rs.derivatives(np.float64(s), np.float64(self.a))
            return -0.5 * (float(d1["2"]) - 0.5 * float(d1[""]) ** 2)
        return self._quad(integrand, self.z1_0, float(z1))

    def log_theta(self, z1, z2):
        return -0.5 * self._quad(lambda s: self._w1(z1, s), self.a, float(z2)) + self.gauge(z1)

    def __call__(self, z1, z2):
        z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
        out = np.array([math.exp(self.log_theta(a, b)) for a, b in zip(z1.ravel(), z2.ravel())])
        return out.reshape(z1.shape)


def heat_residual(theta, z1, z2, h=1e-2):
    """theta_1 - theta_22 by fourth-order central differences (for plain callables)."""
    d1 = (8 * (theta(z1 + h, z2) - theta(z1 - h, z2)) - (theta(z1 + 2 * h, z2) - theta(z1 - 2 * h, z2))) / (12 * h)
    d22 = (-(theta(z1, z2 + 2 * h) + theta(z1, z2 - 2 * h)) + 16 * (theta(z1, z2 + h) + theta(z1, z2 - h))
           - 30 * theta(z1, z2)) / (12 * h * h)
    return d1 - d22


def linearize_18(rs: ReducedSolution, anchor=(0.0, 0.0)):
    """(theta1, theta2) with w1 = -2 theta1_2/theta1 and w2 = theta2/theta1."""
    if rs.ansatz_id != "1.8":
        raise ConfigError("linearize_18 needs a reduced solution of ansatz 1.8")
    th1 = Theta(rs, anchor)

    def th2(z1, z2):
        return rs.values(np.asarray(z1, float), np.asarray(z2, float))[1] * th1(z1, z2)

    return th1, th2


def _fd_q(f, z1, z2, h):
    return (8 * (f(z1, z2 + h) - f(z1, z2 - h)) - (f(z1, z2 + 2 * h) - f(z1, z2 - 2 * h))) / (12 * h)


def hopf_cole_18(theta1, theta2, box=None, h=1e-3) -> ReducedSolution:
    """Reduced solution of ansatz 1.8 from two solutions of the heat equation.

    Heat solutions with a ``jet(sj, qj, k)`` method (as in heat_kit) give exact
    derivatives.  Plain callables are differentiated in z2 by a fourth-order
    central difference; the result then only carries values (no jets).
    """
    A = ansatz("1.8")
    if hasattr(theta1, "jet") and hasattr(theta2, "jet"):
        def fn(zj):
            T1 = theta1.jet(zj[0], zj[1], 0)
            if np.any(np.abs(T1.f) < 1e-300):
                raise ZeroDenominator("theta1 vanishes")
            return -2.0 * theta1.jet(zj[0], zj[1], 1) / T1, theta2.jet(zj[0], zj[1], 0) / T1
        return ReducedSolution(A, fn, box, "hopf_cole_18")

    def values(z1, z2):
        t1 = np.asarray(theta1(z1, z2), dtype=float)
        if np.any(np.abs(t1) < 1e-300):
            raise ZeroDenominator("theta1 vanishes")
        return -2.0 * _fd_q(theta1, z1, z2, h) / t1, np.asarray(theta2(z1, z2), dtype=float) / t1

    def fn(zj):
        w1, w2 = values(zj[0].f, zj[1].f)
        nan = np.full((3,) + w1.shape, np.nan)
        hess = np.full((3, 3) + w1.shape, np.nan)
        return _jet.Jet(w1, nan, hess), _jet.Jet(w2, nan.copy(), hess.copy())

    rs = ReducedSolution(A, fn, box, "hopf_cole_18[fd]")
    rs.meta["values"] = values
    return rs


def round_trip_error(rs: ReducedSolution, z1, z2, anchor=(0.0, 0.0)):
    """max |hopf_cole_18(linearize_18(w)) - w| at the given points."""
    th1, th2 = linearize_18(rs, anchor)
    back = hopf_cole_18(th1, th2)
    z1, z2 = np.broadcast_arrays(np.asarray(z1, float), np.asarray(z2, float))
    w1b, w2b = back.meta["values"](z1, z2)
    w1, w2 = rs.values(z1, z2)
    return float(max(np.abs(w1b - w1).max(), np.abs(w2b - w2).max()))


# ---------------------------------------------------------------------------
# standard positive and negative controls

RING = {"t": [0.5, 1.5], "x": [0.5, 1.5], "y": [-0.5, 0.5]}
RING_NEG = {"t": [-1.5, -0.5], "x": [0.5, 1.5], "y": [-0.5, 0.5]}

_ODE_DATA = {
    "a": ((0.3, 0.4), (0.0, 0.1)),
    "b": ((-0.2, 0.1), (0.3, -0.2)),
    "c": ((0.5, 0.2), (0.1, -0.3)),
}

_ode_cache = {}


def _ode(aid, params, data, box=RING):
    key = (aid, tuple(sorted(params.items())), data, tuple(map(tuple, box.values())))
    if key not in _ode_cache:
        phi0, dphi0 = _ODE_DATA[data]
        _ode_cache[key] = ode_solution(aid, params, phi0, dphi0, box=box)
    return _ode_cache[key]


def _ode_field(aid, params, data, box=RING):
    return reconstruct(_ode(aid, params, data, box))


def _random_pde(zj):
    z1, z2 = zj
    return 0.5 * _jet.sin(z1) + 0.3 * z2 * z2 + 0.2, 0.4 * _jet.cos(z1 - z2) + 0.2 * z1


def _random_ode(zj):
    om = zj[0]
    return 0.5 * _jet.sin(om) + 0.2, 0.3 * om * om - 0.1


def _burgers_12(c, d):
    def fn(zj):
        z1 = zj[0]
        th = _jet.tanh(z1)
        return -2.0 * th, 0.5 * z1 * th + c * th + d
    return fn


def _linear_12(zj):
    z1 = zj[0]
    return _const(1.0, z1), -1.0 * z1 + 0.5 * _jet.exp(z1)


def _quadratic_12(zj):
    z1 = zj[0]
    return _const(0.0, z1), 0.5 * z1 * z1 - 0.3 * z1 + 0.2


def _catalog_instance(fid, k):
    from . import catalog
    p, b = catalog.family(fid).defaults[k]
    return catalog.family(fid).make(p, b), b


def controls(aid):
    """Standard controls for one ansatz: list of (ReducedSolution, expected outcome)."""
    from . import catalog
    aid = str(aid)
    pos, neg = [], []
    rnd = _random_pde if aid in PDE_IDS else _random_ode
    if aid == "1.1":
        pos += [pullback(_ode_field("2.2", {}, "a"), aid, {"kappa": 0}, RING),
                pullback(_ode_field("2.2", {}, "b"), aid, {"kappa": 1}, RING),
                pullback(_ode_field("2.1", {"kappa": 0.0}, "c"), aid, {"kappa": 0}, RING)]
        fld, b = _catalog_instance("stationary_similarity", 1)
        pos.append(pullback(fld, aid, {"kappa": 0}, b))
        neg += [from_jets(aid, rnd, {"kappa": 0}, RING), from_jets(aid, rnd, {"kappa": 1}, RING)]
    elif aid == "1.2":
        pos += [from_jets(aid, _burgers_12(0.0, 0.0), None, RING, "tanh"),
                from_jets(aid, _burgers_12(1.0, -0.5), None, RING, "tanh shifted"),
                from_jets(aid, _linear_12, None, RING, "w1=1"),
                from_jets(aid, _quadratic_12, None, RING, "w1=0")]
        neg.append(from_jets(aid, rnd, None, RING))
    elif aid == "1.3":
        pos += [pullback(_ode_field("2.3", {}, "a"), aid, {"kappa": 0.3}, RING),
                pullback(_ode_field("2.1", {"kappa": 1.0}, "c"), aid, {"kappa": 0.5}, RING),
                pullback(_ode_field("2.3", {"sign": -1}, "b", RING_NEG), aid, {"kappa": 0.4, "sign": -1},
                         RING_NEG)]
        fld, b = _catalog_instance("stationary_similarity", 1)
        pos.append(pullback(fld, aid, {"kappa": 0.0}, dict(b, t=[0.8, 1.2])))
        neg += [from_jets(aid, rnd, {"kappa": 0.3}, RING),
                from_jets(aid, rnd, {"kappa": 0.3, "sign": -1}, RING_NEG)]
    elif aid == "1.4":
        pos += [pullback(_ode_field("2.4", {}, "a"), aid, {"kappa": 0.6}, RING),
                pullback(_ode_field("2.4", {}, "b"), aid, {"kappa": 1.0}, RING),
                pullback(_ode_field("2.4", {}, "c"), aid, {"kappa": 0.0}, RING)]
        neg.append(from_jets(aid, rnd, {"kappa": 0.6}, RING))
    elif aid == "1.5":
        pos += [pullback(_ode_field("2.5", {"mu": 0.0}, "a"), aid, {"mu": 0.8}, RING),
                pullback(_ode_field("2.5", {"mu": 0.0}, "b"), aid, {"mu": 2.0}, RING),
                pullback(_ode_field("2.5", {"mu": 0.0}, "c"), aid, {"mu": 0.5}, RING)]
        neg.append(from_jets(aid, rnd, {"mu": 0.8}, RING))
    elif aid == "1.6":
        pos += [pullback(_ode_field(a, {}, d), aid, None, RING) for a, d in (("2.2", "a"), ("2.3", "b"), ("2.4", "c"))]
        neg += [from_jets(aid, rnd, None, RING), constant(aid, 0.0, 0.0, None, RING)]
    elif aid == "1.7":
        pos += [pullback(_ode_field("2.5", {"mu": 0.7}, "a"), aid, None, RING),
                pullback(_ode_field("2.5", {"mu": 0.0}, "b"), aid, None, RING),
                pullback(catalog.hj_mu_display(1.0), aid, None, catalog.BOX_STD)]
        neg.append(from_jets(aid, rnd, None, RING))
    elif aid == "1.8":
        for k in range(3):
            fld, b = _catalog_instance("shift_invariant", k)
            pos.append(pullback(fld, aid, None, b))
        fld, b = _catalog_instance("ns_common", 0)
        pos.append(pullback(fld, aid, None, b))
        neg.append(from_jets(aid, rnd, None, RING))
    elif aid == "2.1":
        pos += [_ode(aid, {"kappa": 0.0}, "c"), _ode(aid, {"kappa": 1.0}, "c"), _ode(aid, {"kappa": 0.5}, "b")]
        fld, b = _catalog_instance("stationary_similarity", 1)
        pos.append(pullback(fld, aid, {"kappa": 0.0}, b))
        neg.append(from_jets(aid, rnd, {"kappa": 0.5}, RING))
    elif aid in ("2.2", "2.4"):
        pos += [_ode(aid, {}, d) for d in ("a", "b", "c")]
        neg.append(from_jets(aid, rnd, None, RING))
    elif aid == "2.3":
        pos += [_ode(aid, {}, "a"), _ode(aid, {}, "c"), _ode(aid, {"sign": -1}, "b", RING_NEG)]
        neg.append(from_jets(aid, rnd, None, RING))
    elif aid == "2.5":
        pos += [_ode(aid, {"mu": 0.0}, "a"), _ode(aid, {"mu": 0.7}, "b"), constant(aid, 0.0, 0.0, {"mu": 0.0}, RING)]
        neg.append(from_jets(aid, rnd, {"mu": 0.7}, RING))
    elif aid == "2.6":
        pos += [constant(aid, 0.0, 0.0, {"mu": 1.0}, RING), constant(aid, 0.3, -0.2, {"mu": 1.3}, RING),
                pullback(catalog.hj_mu_display(2.0), aid, {"mu": 2.0}, catalog.BOX_STD)]
        neg.append(from_jets(aid, rnd, {"mu": 1.0}, RING))
    else:
        raise ConfigError(f"unknown ansatz {aid!r}")
    for rs in neg:
        rs.name = f"non-solution {rs.name}"
    return [(rs, "solution") for rs in pos] + [(rs, "non-solution") for rs in neg]


def check_controls(aid, n=120, seed=0, tol=1e-8):
    return [consistency_check(rs, n=n, seed=seed, tol=tol, expect=e) for rs, e in controls(aid)]


_SPEC_KEYS = {"kind", "index", "value", "phi0", "dphi0", "omega0", "family", "params", "box", "ansatz_params"}


def solution_from_spec(aid, spec):
    """Reduced solution from a JSON-like description.

    kinds: "control" (index into :func:`controls`), "constant" (value [c1, c2]),
    "ode" (phi0, dphi0, optional omega0), "pullback" (catalog family and params).
    """
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise ConfigError(f"unknown solution keys {sorted(unknown)}")
    kind = spec.get("kind", "control")
    aparams = spec.get("ansatz_params") or {}
    box = spec.get("box")
    if kind == "control":
        items = controls(aid)
        k = int(spec.get("index", 0))
        if not 0 <= k < len(items):
            raise ConfigError(f"control index {k} out of range (0..{len(items) - 1})")
        return items[k]
    if kind == "constant":
        c1, c2 = spec.get("value", [0.0, 0.0])
        return constant(aid, float(c1), float(c2), aparams, box or RING), None
    if kind == "ode":
        rs = ode_solution(aid, aparams, spec.get("phi0", (0.0, 0.0)), spec.get("dphi0", (0.0, 0.0)),
                          box=box or RING, omega0=spec.get("omega0"))
        return rs, "solution"
    if kind == "pullback":
        from . import catalog
        fld = catalog.make(spec["family"], spec.get("params"), box)
        return pullback(fld, aid, aparams, box or fld.meta.get("box") or catalog.BOX_STD), None
    raise ConfigError(f"unknown solution kind {kind!r}")
