"""Exact solution families of the Burgers system

    u_t + u u_x + v u_y - u_xx - u_yy = 0,
    v_t + u v_x + v v_y - v_xx - v_yy = 0.

Every constructor returns a SpaceTimeField with analytic derivatives (via
jets), a singular-set predicate and metadata: which differential
constraints hold, an invariance subalgebra if one is known, the residual
tolerance and a default test box.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _jet
from .errors import (CaseBoundary, ConfigError, InvalidCase, SingularTime, ZeroDenominator)
from .fields import Grid, SpaceTimeField
from .heat_kit import HeatSolution1D, HeatSolution2D, DarbouxImage
from .special import (ComplexRootProblem, HeunC, WeierstrassP, hj_root, lame_solve, wp)

TOL_ALGEBRAIC = 1e-10
TOL_WP = 1e-8
TOL_LAME = 1e-7
TOL_HEUN = 1e-5

FLAG_NAMES = ("u_y=v_x", "u_x=v_y", "u_x+v_y=0", "v=0")
SQ6 = math.sqrt(6.0)


def _flags(*names):
    bad = set(names) - set(FLAG_NAMES)
    if bad:
        raise ValueError(bad)
    return {k: (k in names) for k in FLAG_NAMES}


def _zero_like(j):
    return j * 0.0


def _one_var(w):
    """Jet in a single scalar variable (stored in the t slot)."""
    w = np.asarray(w, dtype=float)
    return _jet.Jet.variables(w, np.zeros_like(w), np.zeros_like(w))[0]


def _d012(j):
    return j.f, j.g[0], j.h[0, 0]


def _small(a, tol=1e-12):
    return np.abs(np.asarray(a)) <= tol


def _box_points(box, n=9):
    axes = [np.linspace(lo, hi, n) for lo, hi in (box["t"], box["x"], box["y"])]
    return np.meshgrid(*axes, indexing="ij")


def _check_nonvanishing(fn, box, what):
    if box is None:
        return
    T, X, Y = _box_points(box)
    vals = np.asarray(fn(T, X, Y))
    if not np.all(np.isfinite(vals)) or np.any(vals == 0) or (np.min(vals) < 0 < np.max(vals)):
        raise ZeroDenominator(f"{what} vanishes or changes sign on the test box {box}")


def _field(jet, singular, name, meta):
    return SpaceTimeField(jet=jet, singular=singular, name=name, meta=meta)


def _meta(family, flags, invariance=None, tol=TOL_ALGEBRAIC, **extra):
    m = {"family": family, "flags": flags, "invariance": invariance, "tolerance": tol}
    m.update(extra)
    return m


# ---------------------------------------------------------------------------
# Hopf-Cole and the linearizable families


def hopf_cole_2d(phi: HeatSolution2D, box=None) -> SpaceTimeField:
    """u = -2 phi_x / phi, v = -2 phi_y / phi for a solution phi of phi_t = phi_xx + phi_yy."""
    _check_nonvanishing(phi.eval, box, "phi")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        p, px, py = phi.jets(tj, xj, yj)
        r = p.reciprocal()
        return -2.0 * px * r, -2.0 * py * r

    def singular(t, x, y):
        ok = phi.valid(t, x, y)
        with np.errstate(all="ignore"):
            val = np.where(ok, phi.eval(np.where(ok, t, 1.0), x, y), 0.0)
        return ~ok | _small(val, 1e-300)

    return _field(jet, singular, "hopf_cole_2d",
                  _meta("hopf_cole_2d", _flags("u_y=v_x"), phi=phi.to_spec()))


def potential_of_hopf_cole(phi: HeatSolution2D):
    """psi = -2 log phi, whose gradient is (u, v)."""
    def psi(t, x, y):
        return -2.0 * np.log(phi.eval(t, x, y))
    return psi


def _theta_jets(theta: HeatSolution1D, sj, qj, k_max=2):
    return [theta.jet(sj, qj, k) for k in range(k_max + 1)]


def shift_invariant(theta1: HeatSolution1D, theta2: HeatSolution1D, box=None) -> SpaceTimeField:
    """y-independent solutions u = -2 theta1_x / theta1, v = theta2 / theta1."""
    _check_nonvanishing(lambda t, x, y: theta1.eval(t, x), box, "theta1")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        th1 = theta1.jet(tj, xj, 0)
        th1x = theta1.jet(tj, xj, 1)
        th2 = theta2.jet(tj, xj, 0)
        r = th1.reciprocal()
        return -2.0 * th1x * r, th2 * r

    def singular(t, x, y):
        ok = theta1.valid(t, x) & theta2.valid(t, x) & np.ones(np.shape(y), dtype=bool)
        with np.errstate(all="ignore"):
            val = np.where(ok, theta1.eval(np.where(ok, t, 1.0), x), 0.0)
        return ~ok | _small(val, 1e-300)

    flags = _flags("v=0") if theta2.is_zero() else _flags()
    return _field(jet, singular, "shift_invariant",
                  _meta("shift_invariant", flags, {"id": "1.8", "params": {}},
                        theta1=theta1.to_spec(), theta2=theta2.to_spec()))


def affine_in_y_family(theta1: HeatSolution1D, theta0: HeatSolution1D, box=None) -> SpaceTimeField:
    """u = -2 theta1_x / theta1,  v = (-2 (theta1_x / theta1) y + theta0 / theta1)_x, theta's in (t, x)."""
    _check_nonvanishing(lambda t, x, y: theta1.eval(t, x), box, "theta1")

    def parts(tj, qj):
        a0 = theta1.jet(tj, qj, 0)
        a1 = theta1.jet(tj, qj, 1)
        a2 = theta1.jet(tj, qj, 2)
        b0 = theta0.jet(tj, qj, 0)
        b1 = theta0.jet(tj, qj, 1)
        r = a0.reciprocal()
        rho = a1 * r                       # theta1_q / theta1
        rho_q = a2 * r - rho * rho
        ratio_q = b1 * r - b0 * a1 * r * r
        return rho, rho_q, ratio_q

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        rho, rho_q, ratio_q = parts(tj, xj)
        return -2.0 * rho, -2.0 * rho_q * yj + ratio_q

    def singular(t, x, y):
        ok = theta1.valid(t, x) & theta0.valid(t, x) & np.ones(np.shape(y), dtype=bool)
        with np.errstate(all="ignore"):
            val = np.where(ok, theta1.eval(np.where(ok, t, 1.0), x), 0.0)
        return ~ok | _small(val, 1e-300)

    return _field(jet, singular, "affine_in_y_family",
                  _meta("affine_in_y_family", _flags(), theta1=theta1.to_spec(), theta0=theta0.to_spec()))


def affine_in_x_family(theta1: HeatSolution1D, theta0: HeatSolution1D, box=None) -> SpaceTimeField:
    """v = -2 theta1_y / theta1,  u = (-2 (theta1_y / theta1) x + theta0 / theta1)_y, theta's in (t, y)."""
    _check_nonvanishing(lambda t, x, y: theta1.eval(t, y), box, "theta1")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        a0 = theta1.jet(tj, yj, 0)
        a1 = theta1.jet(tj, yj, 1)
        a2 = theta1.jet(tj, yj, 2)
        b0 = theta0.jet(tj, yj, 0)
        b1 = theta0.jet(tj, yj, 1)
        r = a0.reciprocal()
        rho = a1 * r
        rho_q = a2 * r - rho * rho
        ratio_q = b1 * r - b0 * a1 * r * r
        return -2.0 * rho_q * xj + ratio_q, -2.0 * rho

    def singular(t, x, y):
        ok = theta1.valid(t, y) & theta0.valid(t, y) & np.ones(np.shape(x), dtype=bool)
        with np.errstate(all="ignore"):
            val = np.where(ok, theta1.eval(np.where(ok, t, 1.0), y), 0.0)
        return ~ok | _small(val, 1e-300)

    return _field(jet, singular, "affine_in_x_family",
                  _meta("affine_in_x_family", _flags(), theta1=theta1.to_spec(), theta0=theta0.to_spec()))


_SWAP = np.array([0, 1, 3, 2, 4, 6, 5, 9, 8, 7])   # relabel derivative slots under x <-> y


def permute(fld: SpaceTimeField) -> SpaceTimeField:
    """Image under the discrete symmetry (t, x, y, u, v) -> (t, y, x, v, u)."""
    def jet(t, x, y):
        arr = fld.jets(t, y, x)
        return np.stack([arr[1][_SWAP], arr[0][_SWAP]])

    def singular(t, x, y):
        return fld.singular(t, y, x)

    meta = dict(fld.meta)
    flags = dict(meta.get("flags") or _flags())
    flags["v=0"] = False
    meta["flags"] = flags
    meta["permuted"] = True
    return _field(jet, singular, f"perm*{fld.name}", meta)


# ---------------------------------------------------------------------------
# stationary similarity solutions u = phi1(w)/y, v = phi2/y, w = x/y


def _psi_jet(phi2, A, C1, C2, wj):
    """psi(w) as a jet in w, trigonometric/exponential forms."""
    rho = _jet.sqrt(1.0 + wj * wj)
    zeta = _jet.arctan(wj)
    if phi2 == 0:
        if A == 0:
            return C1 + C2 * (zeta + wj / (1.0 + wj * wj))
        if A == 1:
            return (C1 * wj + C2 * (wj * zeta + 1.0)) / rho
        if A > 1:
            al = math.sqrt(A - 1)
            return (C1 * (wj - al) * _jet.exp(-al * zeta) + C2 * (wj + al) * _jet.exp(al * zeta)) / rho
        be = math.sqrt(1 - A)
        c, s = _jet.cos(be * zeta), _jet.sin(be * zeta)
        return (C1 * (wj * c - be * s) + C2 * (wj * s + be * c)) / rho
    # phi2 == -2
    if A == 0:
        return C1 + C2 * zeta
    if A > 0:
        al = math.sqrt(A)
        return C1 * _jet.exp(-al * zeta) + C2 * _jet.exp(al * zeta)
    be = math.sqrt(-A)
    return C1 * _jet.cos(be * zeta) + C2 * _jet.sin(be * zeta)


def _pq_terms(beta):
    """Ascending-index terms (sign * binomial, power) of P and Q."""
    P = [((-1) ** i * math.comb(beta, 2 * i), beta - 2 * i) for i in range(beta // 2 + 1)]
    Q = [((-1) ** i * math.comb(beta, 2 * i + 1), beta - 2 * i - 1) for i in range((beta - 1) // 2 + 1)]
    return P, Q


def pq_polynomials(beta: int, w):
    """P(w) = sum (-1)^i C(beta, 2i) w^(beta-2i), Q(w) = sum (-1)^i C(beta, 2i+1) w^(beta-2i-1)."""
    w = np.asarray(w, dtype=float)
    P, Q = _pq_terms(beta)
    return sum(c * w ** k for c, k in P), sum(c * w ** k for c, k in Q) + 0.0 * w


def _pq_psi_jet(phi2, beta, C1, C2, wj):
    """Polynomial form of the integer-beta cases."""
    Pt, Qt = _pq_terms(beta)
    P = sum((c * wj ** k if k else c + 0.0 * wj) for c, k in Pt)
    Q = sum((c * wj ** k if k else c + 0.0 * wj) for c, k in Qt)
    rho2 = 1.0 + wj * wj
    if phi2 == -2:
        return (C1 * P + C2 * Q) * rho2 ** (-beta / 2.0)
    return (C1 * (wj * P + beta * Q) + C2 * (wj * Q - beta * P)) * rho2 ** (-(beta + 1) / 2.0)


def pq_constants(beta, C1, C2):
    """Constants (K1, K2) of the trigonometric form equal to C1, C2 in the polynomial form.

    P / rho^beta = cos(beta (pi/2 - zeta)) and Q / rho^beta = sin(beta (pi/2 - zeta)),
    so the two bases differ by a rotation through beta pi / 2.
    """
    ph = beta * math.pi / 2
    return C1 * math.cos(ph) + C2 * math.sin(ph), C1 * math.sin(ph) - C2 * math.cos(ph)


def stationary_beta(phi2, A):
    if phi2 == 0 and A < 1 and A != 0:
        return math.sqrt(1 - A)
    if phi2 == -2 and A < 0:
        return math.sqrt(-A)
    return None


def stationary_similarity(phi2, A, C1, C2, form="trig", box=None) -> SpaceTimeField:
    """u = phi1(w)/y, v = phi2/y, w = x/y, phi1 = -2 (1 + w^2) psi_w / psi."""
    if phi2 not in (0, -2):
        raise InvalidCase("phi2 must be 0 or -2")
    if C1 == 0 and C2 == 0:
        raise InvalidCase("(C1, C2) must not both vanish")
    A, C1, C2 = float(A), float(C1), float(C2)
    if form == "pq":
        beta = stationary_beta(phi2, A)
        if beta is None or abs(beta - round(beta)) > 1e-12 or round(beta) < 1:
            raise InvalidCase("the polynomial form needs a positive integer beta")
        beta = int(round(beta))
        psi_fn = lambda wj: _pq_psi_jet(phi2, beta, C1, C2, wj)   # noqa: E731
    elif form == "trig":
        psi_fn = lambda wj: _psi_jet(phi2, A, C1, C2, wj)   # noqa: E731
    else:
        raise InvalidCase(f"unknown form {form!r}")

    def psi(w):
        return _d012(psi_fn(_one_var(w)))

    def phi1_derivs(w):
        p, p1, _ = psi(w)
        w = np.asarray(w, dtype=float)
        q = 1 + w * w
        f = -2 * q * p1 / p
        # Riccati: q f' + (phi2 + 2) w f - f^2/2 = -2A, differentiated once more for f''
        f1 = (-2 * A - (phi2 + 2) * w * f + 0.5 * f * f) / q
        f2 = (-(phi2 + 2) * (f + w * f1) + f * f1 - 2 * w * f1) / q
        return f, f1, f2

    _check_nonvanishing(lambda t, x, y: psi(x / y)[0], box, "psi")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        wj = xj / yj
        f, f1, f2 = phi1_derivs(wj.f)
        r = yj.reciprocal()
        return wj.unary(f, f1, f2) * r, phi2 * r

    def singular(t, x, y):
        y = np.asarray(y, dtype=float)
        bad = _small(y)
        with np.errstate(all="ignore"):
            val = psi(np.where(bad, 0.0, x / np.where(bad, 1.0, y)))[0]
        return bad | _small(val, 1e-300) | (np.zeros(np.shape(t)) != 0)

    return _field(jet, singular, "stationary_similarity",
                  _meta("stationary_similarity", _flags(), {"id": "2.1", "params": {"kappa": 0.0}},
                        form=form))


# ---------------------------------------------------------------------------
# solutions affine in the space variables


def affine_general(C, b0=(0.0, 0.0), box=None) -> SpaceTimeField:
    """(u, v) = (t E + C)^(-1) ((x, y) + b0)."""
    C = np.asarray(C, dtype=float).reshape(2, 2)
    b0 = np.asarray(b0, dtype=float).reshape(2)

    def det(t):
        return (t + C[0, 0]) * (t + C[1, 1]) - C[0, 1] * C[1, 0]

    if box is not None:
        ts = np.linspace(box["t"][0], box["t"][1], 257)
        d = det(ts)
        if np.any(np.abs(d) < 1e-9) or (d.min() < 0 < d.max()):
            raise SingularTime("det(t E + C) vanishes on the requested time interval")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        r = det(tj).reciprocal()
        X = xj + b0[0]
        Y = yj + b0[1]
        u = ((tj + C[1, 1]) * X - C[0, 1] * Y) * r
        v = (-C[1, 0] * X + (tj + C[0, 0]) * Y) * r
        return u, v

    def singular(t, x, y):
        return _small(det(np.asarray(t, dtype=float)), 1e-9) | (np.zeros(np.broadcast(x, y).shape) != 0)

    names = []
    if C[0, 1] == C[1, 0]:
        names.append("u_y=v_x")
    if C[0, 0] == C[1, 1]:
        names.append("u_x=v_y")
    return _field(jet, singular, "affine_general",
                  _meta("affine_general", _flags(*names), C=C.tolist(), b0=b0.tolist()))


def affine_degenerate(kind: str, c1=0.0, c2=0.0) -> SpaceTimeField:
    """Canonical degenerate cases: u = (x + c1 y)/t; u = y; constants (c1, c2). v = 0 unless constant."""
    c1, c2 = float(c1), float(c2)
    if kind == "trace_nonzero":
        def jet(t, x, y):
            tj, xj, yj = _jet.Jet.variables(t, x, y)
            return (xj + c1 * yj) / tj, _zero_like(tj)

        def singular(t, x, y):
            return _small(np.asarray(t, dtype=float)) | (np.zeros(np.broadcast(x, y).shape) != 0)
        flags = _flags("v=0")
    elif kind == "nilpotent":
        def jet(t, x, y):
            tj, xj, yj = _jet.Jet.variables(t, x, y)
            return 1.0 * yj, _zero_like(tj)
        singular = None
        flags = _flags("u_x=v_y", "u_x+v_y=0", "v=0")
    elif kind == "constant":
        def jet(t, x, y):
            tj, xj, yj = _jet.Jet.variables(t, x, y)
            return _zero_like(tj) + c1, _zero_like(tj) + c2
        singular = None
        flags = _flags("u_y=v_x", "u_x=v_y", "u_x+v_y=0", *(["v=0"] if c2 == 0 else []))
    else:
        raise InvalidCase(f"unknown degenerate kind {kind!r}")
    return _field(jet, singular, f"affine_degenerate[{kind}]",
                  _meta("affine_degenerate", flags, kind=kind, c1=c1, c2=c2))


# ---------------------------------------------------------------------------
# common solutions with the Navier-Stokes equations


def ns_common(a0, angle, w: HeatSolution1D) -> SpaceTimeField:
    """u = a1 w + a0, v = a2 w with (a1, a2) = (cos angle, sin angle), z = a2 x - a1 y.

    Substitution gives R1 = a1 E, R2 = a2 E with E = w_t + a0 a2 w_z - w_zz, so the
    drift speed is a0 a2 and w(t, z) = theta(t, z - a0 a2 t) for a heat solution theta.
    """
    a0 = float(a0)
    a1, a2 = math.cos(angle), math.sin(angle)

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        q = a2 * xj - a1 * yj - a0 * a2 * tj
        wj = w.jet(tj, q, 0)
        return a1 * wj + a0, a2 * wj

    def singular(t, x, y):
        q = a2 * np.asarray(x) - a1 * np.asarray(y) - a0 * a2 * np.asarray(t)
        return ~w.valid(t, q)

    return _field(jet, singular, "ns_common",
                  _meta("ns_common", _flags("u_x+v_y=0"), a0=a0, angle=float(angle), w=w.to_spec()))


# ---------------------------------------------------------------------------
# stationary solutions from the potential equation psi_t + psi_x psi_y = psi_xx + psi_yy


def _potential_F(varsigma, C1, C2, wj):
    """phi_w as a jet in w for the three ranges of varsigma."""
    s = varsigma
    if s == 0.0:
        # the displayed phi_w carries the factor 2 varsigma while its denominator
        # vanishes identically; the limit solution is phi_w = 0
        return 0.0 * wj
    zeta = _jet.arctan(wj)
    if abs(s) == 1.0:
        num = C1 + C2 * (zeta - s)
        den = C1 * (wj - s) + C2 * (zeta * (wj - s) + 1.0)
        return 2.0 * num / (wj * den)
    if abs(abs(s) - 1.0) < 1e-8:
        raise CaseBoundary("|varsigma| too close to 1: use exactly +1 or -1")
    if abs(s) > 1:
        r = math.sqrt(s * s - 1)
        n1, n2 = s + r, s - r
        e1, e2 = _jet.exp(-n1 * zeta), _jet.exp(-n2 * zeta)
        num = C1 * n1 * e1 + C2 * n2 * e2
        den = C1 * e1 * (wj - n1) + C2 * e2 * (wj - n2)
        return 2.0 * s * num / (wj * den)
    mu = math.sqrt(1 - s * s)
    c, sn = _jet.cos(mu * zeta), _jet.sin(mu * zeta)
    num = C1 * (s * c + mu * sn) + C2 * (s * sn - mu * c)
    den = C1 * ((wj - s) * c - mu * sn) + C2 * ((wj - s) * sn + mu * c)
    return 2.0 * s * num / (wj * den)


def _potential_den(varsigma, C1, C2, w):
    s = varsigma
    w = np.asarray(w, dtype=float)
    if s == 0.0:
        return w
    zeta = np.arctan(w)
    if abs(s) == 1.0:
        return w * (C1 * (w - s) + C2 * (zeta * (w - s) + 1.0))
    if abs(s) > 1:
        r = math.sqrt(s * s - 1)
        n1, n2 = s + r, s - r
        return w * (C1 * np.exp(-n1 * zeta) * (w - n1) + C2 * np.exp(-n2 * zeta) * (w - n2))
    mu = math.sqrt(1 - s * s)
    c, sn = np.cos(mu * zeta), np.sin(mu * zeta)
    return w * (C1 * ((w - s) * c - mu * sn) + C2 * ((w - s) * sn + mu * c))


def potential_reduction(varsigma, C1, C2, box=None) -> SpaceTimeField:
    """u = -(x/y^2) F(w), v = F(w)/y + 2 varsigma/x with F = phi_w, w = x/y."""
    s, C1, C2 = float(varsigma), float(C1), float(C2)
    if C1 == 0 and C2 == 0:
        raise InvalidCase("(C1, C2) must not both vanish")
    if abs(abs(s) - 1.0) < 1e-8 and abs(s) != 1.0:
        raise CaseBoundary("|varsigma| too close to 1: use exactly +1 or -1")
    _check_nonvanishing(lambda t, x, y: _potential_den(s, C1, C2, x / y), box, "phi_w denominator")

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        wj = xj / yj
        F = wj.unary(*_d012(_potential_F(s, C1, C2, _one_var(wj.f))))
        ry = yj.reciprocal()
        return -1.0 * xj * ry * ry * F, F * ry + 2.0 * s * xj.reciprocal()

    def singular(t, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        bad = _small(x) | _small(y)
        with np.errstate(all="ignore"):
            den = _potential_den(s, C1, C2, np.where(bad, 1.0, x) / np.where(bad, 1.0, y))
        return bad | _small(den, 1e-12) | (np.zeros(np.shape(t)) != 0)

    return _field(jet, singular, "potential_reduction",
                  _meta("potential_reduction", _flags("u_x=v_y"), {"id": "2.1", "params": {"kappa": 0.0}},
                        varsigma=s))


# ---------------------------------------------------------------------------
# complex Hamilton-Jacobi family


def _complex(c):
    if isinstance(c, (list, tuple)):
        return complex(float(c[0]), float(c[1]))
    return complex(c)


class _HJSolver:
    def __init__(self, coeffs, branch, seed):
        c = [_complex(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        if len(c) > 7:
            raise ConfigError("deg F must not exceed 6")
        self.coeffs = tuple(c) or (0j,)
        self.deg = len(c) - 1
        self.branch = 1 if branch >= 0 else -1
        self.seed = _complex(seed)

    def root(self, t, x, y):
        z = complex(x, y)
        prob = ComplexRootProblem(self.coeffs, t, z)
        c = list(self.coeffs) + [0j] * 4
        if self.deg <= 2:
            # linear in a: z + c1 + (2 c2 - i t) a = 0
            den = 2 * c[2] - 1j * t
            if abs(den) < 1e-14:
                from .errors import JacobianSingular
                raise JacobianSingular("-i t + F'' vanishes")
            return -(z + c[1]) / den, prob
        if self.deg == 3:
            A3, B, G = 3 * c[3], 2 * c[2] - 1j * t, c[1] + z
            disc = B * B - 4 * A3 * G
            seed = (-B + self.branch * np.sqrt(disc)) / (2 * A3)
        else:
            roots = prob.polynomial_roots()
            seed = roots[np.argmin(np.abs(roots - self.seed))]
        return hj_root(prob, seed), prob

    def discriminant(self, t, x, y):
        c = list(self.coeffs) + [0j] * 4
        B = 2 * c[2] - 1j * t
        return B * B - 4 * 3 * c[3] * (c[1] + complex(x, y))


def hj_family(F_coeffs, branch=1, seed=0j) -> SpaceTimeField:
    """u = -Im a, v = Re a where z - i a t + F'(a) = 0, z = x + i y, F = sum F_coeffs[k] a^k."""
    solver = _HJSolver(F_coeffs, branch, seed)

    def roots(t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, y)))
        A = np.empty(t.shape, dtype=complex)
        D = np.empty(t.shape, dtype=complex)
        F3 = np.empty(t.shape, dtype=complex)
        for idx in np.ndindex(t.shape):
            a, prob = solver.root(t[idx], x[idx], y[idx])
            A[idx] = a
            D[idx] = prob.dG(a)
            F3[idx] = prob.derivs(a, 2)
        return A, D, F3

    def jet(t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, y)))
        a, D, F3 = roots(t, x, y)
        a_z = -1.0 / D
        a_t = 1j * a / D
        D_z = F3 * a_z
        D_t = F3 * a_t - 1j
        a_zz = D_z / D ** 2                     # d/dz (-1/D)
        a_tz = (1j * a_z * D - 1j * a * D_z) / D ** 2
        a_tt = (1j * a_t * D - 1j * a * D_t) / D ** 2
        # real coordinates: d/dx = d/dz, d/dy = i d/dz
        comp = [a, a_t, a_z, 1j * a_z, a_tt, a_tz, 1j * a_tz, a_zz, 1j * a_zz, -a_zz]
        arr = np.stack(comp)
        return np.stack([-arr.imag, arr.real])

    def singular(t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, y)))
        out = np.zeros(t.shape, dtype=bool)
        for idx in np.ndindex(t.shape):
            if solver.deg == 3:
                d = solver.discriminant(t[idx], x[idx], y[idx])
                if abs(d.imag) <= 1e-9 * max(1.0, abs(d)) and d.real <= 0:
                    out[idx] = True
                    continue
            try:
                a, prob = solver.root(t[idx], x[idx], y[idx])
                out[idx] = abs(prob.dG(a)) < 1e-6
            except Exception:
                out[idx] = True
        return out

    meta = _meta("hj_family", _flags("u_x=v_y"), F=[[c.real, c.imag] for c in solver.coeffs],
                 branch=solver.branch)
    c = list(solver.coeffs) + [0j] * 4
    if solver.deg == 2 and c[1] == 0 and c[2].imag == 0 and c[2].real < 0:
        meta["invariance"] = {"id": "2.6", "params": {"mu": -2.0 * c[2].real}}
    return _field(jet, singular, "hj_family", meta)


def hj_mu_display(mu):
    """u = (t x - mu y)/(t^2 + mu^2), v = (mu x + t y)/(t^2 + mu^2): F = -mu a^2 / 2."""
    return hj_family([0.0, 0.0, -0.5 * mu])


# ---------------------------------------------------------------------------
# v = 0 families: (1+2)-dimensional Burgers equation u_t + u u_x = u_xx + u_yy


def darboux_family(theta: HeatSolution1D) -> SpaceTimeField:
    """u = 6x/y^2 + theta_yy - 3 theta_y / y + 3 theta / y^2, v = 0, theta = theta(t, y)."""
    D = DarbouxImage(theta)

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        ry = yj.reciprocal()
        return 6.0 * xj * ry * ry + D.jet(tj, yj), _zero_like(tj)

    def singular(t, x, y):
        return _small(np.asarray(y, dtype=float)) | ~theta.valid(t, y) | (np.zeros(np.shape(x)) != 0)

    return _field(jet, singular, "darboux_family", _meta("darboux_family", _flags("v=0"), theta=theta.to_spec()))


def weierstrass_family(C1, C2, C3, ic=(0.0, 0.0), z0=None, y_range=(0.5, 2.0)) -> SpaceTimeField:
    """u = p(y/sqrt6 + C2; 0, C1) x + exp(C3 t) phi(y/sqrt6), v = 0.

    phi solves phi'' = 6 (C3 + p(z + C2; 0, C1)) phi with (phi, phi') = ic at z0.
    """
    C1, C2, C3 = float(C1), float(C2), float(C3)
    zr = (y_range[0] / SQ6, y_range[1] / SQ6)
    if WeierstrassP(C1).poles_in(zr[0] + C2, zr[1] + C2, margin=1e-3):
        from .errors import PoleInRange
        raise PoleInRange("p has a pole for y in the requested range")
    zero_phi = ic[0] == 0 and ic[1] == 0
    lame = None
    if not zero_phi:
        z0 = 0.5 * (zr[0] + zr[1]) if z0 is None else float(z0)
        lame = lame_solve(C1, C3, zr, ic, z0, shift=C2)

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        z = yj.f / SQ6
        P = np.empty(z.shape)
        for idx in np.ndindex(z.shape):
            P[idx] = wp(z[idx] + C2, C1)[0]
        dP = np.empty(z.shape)
        for idx in np.ndindex(z.shape):
            dP[idx] = wp(z[idx] + C2, C1)[1]
        W1 = yj.unary(P, dP / SQ6, P * P)          # p'' = 6 p^2 when g2 = 0
        u = W1 * xj
        if lame is not None:
            ph = lame.evaluate(z)
            u = u + _jet.exp(C3 * tj) * yj.unary(ph[0], ph[1] / SQ6, ph[2] / 6.0)
        return u, _zero_like(tj)

    def singular(t, x, y):
        y = np.asarray(y, dtype=float)
        out = (y < y_range[0] - 1e-12) | (y > y_range[1] + 1e-12)
        return out | (np.zeros(np.broadcast(t, x).shape) != 0)

    tol = TOL_WP if zero_phi else TOL_LAME
    return _field(jet, singular, "weierstrass_family",
                  _meta("weierstrass_family", _flags("v=0"), tol=tol, C1=C1, C2=C2, C3=C3,
                        ic=list(map(float, ic)), y_range=list(y_range)))


def heun_parameters(branch, nu, beta):
    s = 1 if branch in (1, "+", "+1") else -1
    lam = 3 + s * SQ6
    eta = -2.5 * lam * nu - 59 / 8 - s * 29 / 8 * SQ6
    return lam, (2.5 * lam, beta, -5.0, 0.625 * lam * (4 * nu + 1), eta)


def heun_family(branch=1, nu=0.0, C1=0.0, C2=0.0) -> SpaceTimeField:
    """v = 0 solution built from the confluent Heun function, defined for t > 0.

    u = 12(4 +- sqrt6)(y^2 + (18 +- 8 sqrt6) t)/(y^2 + 10 lam t)^2 x
        + t^(nu + 3/2) exp(-y^2/4t) (C1 y H_{+1/2}(z) + C2 t^(1/2) H_{-1/2}(z)) / (y^2 + 10 lam t)^2,
    z = -y^2/(10 lam t), lam = 3 +- sqrt6, H_beta = HeunC(5 lam/2, beta, -5, ...).
    """
    if branch not in (1, -1, "+", "-", "+1", "-1"):
        raise ConfigError("branch must be +1 or -1")
    s = 1 if branch in (1, "+", "+1") else -1
    nu, C1, C2 = float(nu), float(C1), float(C2)
    lam, p_plus = heun_parameters(s, nu, 0.5)
    _, p_minus = heun_parameters(s, nu, -0.5)
    H_plus = HeunC(*p_plus) if C1 else None
    H_minus = HeunC(*p_minus) if C2 else None
    k0 = 12 * (4 + s * SQ6)
    k1 = 18 + s * 8 * SQ6

    def heun_jet(H, zj):
        vals = H.evaluate(zj.f)
        return zj.unary(vals[0], vals[1], vals[2])

    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        if np.any(tj.f <= 0):
            raise SingularTime("the Heun family is constructed for t > 0")
        y2 = yj * yj
        den = y2 + 10 * lam * tj
        rden2 = (den * den).reciprocal()
        u = k0 * (y2 + k1 * tj) * rden2 * xj
        if H_plus is not None or H_minus is not None:
            zj = -1.0 * y2 / (10 * lam * tj)
            pre = _jet.exp((nu + 1.5) * _jet.log(tj) - y2 / (4.0 * tj)) * rden2
            inner = 0.0
            if H_plus is not None:
                inner = inner + C1 * yj * heun_jet(H_plus, zj)
            if H_minus is not None:
                inner = inner + C2 * _jet.sqrt(tj) * heun_jet(H_minus, zj)
            u = u + pre * inner
        return u, _zero_like(tj)

    def singular(t, x, y):
        t = np.asarray(t, dtype=float)
        y = np.asarray(y, dtype=float)
        den = y * y + 10 * lam * t
        return (t <= 0) | _small(den, 1e-12) | (np.zeros(np.shape(x)) != 0)

    tol = TOL_HEUN if (C1 or C2) else TOL_ALGEBRAIC
    return _field(jet, singular, "heun_family",
                  _meta("heun_family", _flags("v=0"), tol=tol, branch=s, nu=nu, C1=C1, C2=C2))


# ---------------------------------------------------------------------------
# registry


def _heat1(spec):
    return HeatSolution1D.from_spec(spec)


def _heat2(spec):
    return HeatSolution2D.from_spec(spec)


def _box(t, x, y):
    return {"t": list(t), "x": list(x), "y": list(y)}


def _check_keys(params, allowed, fam):
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"{fam}: unknown parameters {sorted(unknown)}")


CONST1 = [{"kind": "poly", "params": {"n": 0}, "coeff": 1.0}]
COSH = [{"kind": "exp", "params": {"lam": 1.0, "sign": 1}, "coeff": 0.5},
        {"kind": "exp", "params": {"lam": 1.0, "sign": -1}, "coeff": 0.5}]


@dataclass
class Family:
    id: str
    description: str
    params: tuple
    build: Callable
    defaults: list                      # [(params, box)]
    tolerance: float = TOL_ALGEBRAIC
    notes: dict = field(default_factory=dict)

    def make(self, params=None, box=None):
        params = dict(params or {})
        _check_keys(params, self.params, self.id)
        fld = self.build(params, box)
        if box is not None:
            fld.meta["box"] = box
        return fld

    def default_instances(self):
        return [(p, b, self.make(p, b)) for p, b in self.defaults]

    def summary(self):
        return {"id": self.id, "description": self.description, "parameters": list(self.params),
                "tolerance": self.tolerance, "defaults": [{"params": p, "box": b} for p, b in self.defaults]}


def _b_hopf(p, box):
    return hopf_cole_2d(_heat2(p.get("phi", [{"coeff": 1.0}])), box)


def _b_shift(p, box):
    return shift_invariant(_heat1(p.get("theta1", CONST1)), _heat1(p.get("theta2", [])), box)


def _b_aff_y(p, box):
    return affine_in_y_family(_heat1(p.get("theta1", CONST1)), _heat1(p.get("theta0", [])), box)


def _b_aff_x(p, box):
    return affine_in_x_family(_heat1(p.get("theta1", CONST1)), _heat1(p.get("theta0", [])), box)


def _b_stat(p, box):
    return stationary_similarity(p.get("phi2", 0), p.get("A", 0.0), p.get("C1", 1.0), p.get("C2", 0.0),
                                 p.get("form", "trig"), box)


def _b_aff(p, box):
    return affine_general(p.get("C", [[1, 0], [0, 1]]), p.get("b0", [0, 0]), box)


def _b_deg(p, box):
    return affine_degenerate(p.get("kind", "nilpotent"), p.get("c1", 0.0), p.get("c2", 0.0))


def _b_ns(p, box):
    return ns_common(p.get("a0", 0.0), p.get("angle", 0.0), _heat1(p.get("w", [])))


def _b_pot(p, box):
    return potential_reduction(p.get("varsigma", 0.0), p.get("C1", 1.0), p.get("C2", 0.0), box)


def _b_hj(p, box):
    return hj_family(p.get("F", []), p.get("branch", 1), p.get("seed", 0.0))


def _b_wp(p, box):
    y_range = p.get("y_range") or (box["y"] if box else (0.5, 2.0))
    return weierstrass_family(p.get("C1", 0.0), p.get("C2", 0.0), p.get("C3", 0.0),
                              p.get("ic", (0.0, 0.0)), p.get("z0"), tuple(y_range))


def _b_darboux(p, box):
    return darboux_family(_heat1(p.get("theta", [])))


def _b_heun(p, box):
    return heun_family(p.get("branch", 1), p.get("nu", 0.0), p.get("C1", 0.0), p.get("C2", 0.0))


def _gauss(s0, q0, c=1.0):
    return {"kind": "gauss", "params": {"s0": s0, "q0": q0}, "coeff": c}


def _poly(n, c=1.0):
    return {"kind": "poly", "params": {"n": n}, "coeff": c}


def _exp(lam, sign, c=1.0):
    return {"kind": "exp", "params": {"lam": lam, "sign": sign}, "coeff": c}


def _trig(lam, fn, c=1.0):
    return {"kind": "trig", "params": {"lam": lam, "fn": fn}, "coeff": c}


BOX_STD = _box((0.5, 1.5), (-1.0, 1.0), (-1.0, 1.0))
BOX_Y = _box((0.5, 1.5), (-1.0, 1.0), (0.5, 2.0))
BOX_XY = _box((0.0, 1.0), (0.5, 1.5), (0.5, 1.5))

FAMILIES = {f.id: f for f in [
    Family("hopf_cole_2d", "u = -2 phi_x/phi, v = -2 phi_y/phi with phi_t = phi_xx + phi_yy", ("phi",), _b_hopf, [
        ({"phi": [{"coeff": 1.0, "x": COSH, "y": [_exp(1.0, 1, 0.0), _poly(0)]}]}, BOX_STD),
        ({"phi": [{"coeff": 0.5}, {"coeff": 1.0, "x": [_gauss(-1.0, 0.2)], "y": [_gauss(-1.0, -0.1)]}]}, BOX_STD),
        ({"phi": [{"coeff": 2.0}, {"coeff": 0.3, "x": [_trig(1.0, "cos")], "y": [_exp(0.5, -1)]},
                  {"coeff": 0.2, "x": [_poly(1)], "y": [_poly(1)]}]}, BOX_STD),
    ]),
    Family("shift_invariant", "u = -2 theta1_x/theta1, v = theta2/theta1 (independent of y)",
           ("theta1", "theta2"), _b_shift, [
        ({"theta1": CONST1, "theta2": [_poly(0, 0.7)]}, BOX_STD),
        ({"theta1": COSH, "theta2": []}, BOX_STD),
        ({"theta1": [_poly(0), _exp(1.0, -1)], "theta2": [_exp(1.0, -1)]}, BOX_STD),
    ]),
    Family("affine_in_y_family", "u = -2 theta1_x/theta1, v = (-2 (theta1_x/theta1) y + theta0/theta1)_x",
           ("theta1", "theta0"), _b_aff_y, [
        ({"theta1": CONST1, "theta0": [_poly(1)]}, BOX_STD),
        ({"theta1": COSH, "theta0": []}, BOX_STD),
        ({"theta1": [_poly(0, 1.5), _gauss(-1.0, 0.3)], "theta0": [_poly(3), _trig(1.0, "sin")]}, BOX_STD),
    ]),
    Family("affine_in_x_family", "v = -2 theta1_y/theta1, u = (-2 (theta1_y/theta1) x + theta0/theta1)_y",
           ("theta1", "theta0"), _b_aff_x, [
        ({"theta1": CONST1, "theta0": [_poly(2)]}, BOX_STD),
        ({"theta1": COSH, "theta0": []}, BOX_STD),
        ({"theta1": [_poly(0, 1.5), _gauss(-1.0, 0.3)], "theta0": [_poly(3), _trig(1.0, "sin")]}, BOX_STD),
    ]),
    Family("stationary_similarity", "u = phi1(x/y)/y, v = phi2/y with phi1 from a linear ODE for psi",
           ("phi2", "A", "C1", "C2", "form"), _b_stat, [
        ({"phi2": 0, "A": -3.0, "C1": 0.3, "C2": 1.0}, _box((0.0, 1.0), (0.1, 0.6), (1.0, 1.5))),
        ({"phi2": -2, "A": 2.0, "C1": 1.0, "C2": 0.5}, BOX_XY),
        ({"phi2": 0, "A": 2.0, "C1": 0.0, "C2": 1.0}, BOX_XY),
    ]),
    Family("affine_general", "(u, v) = (t E + C)^(-1) ((x, y) + b0)", ("C", "b0"), _b_aff, [
        ({"C": [[0, 1], [-1, 0]], "b0": [0, 0]}, _box((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))),
        ({"C": [[1, 0], [0, 1]], "b0": [1, 0]}, BOX_STD),
        ({"C": [[2, 0.5], [0.3, 1]], "b0": [0.2, -0.4]}, BOX_STD),
    ]),
    Family("affine_degenerate", "canonical degenerate affine solutions", ("kind", "c1", "c2"), _b_deg, [
        ({"kind": "trace_nonzero", "c1": 2.0}, BOX_STD),
        ({"kind": "nilpotent"}, BOX_STD),
        ({"kind": "constant", "c1": 1.5, "c2": -0.5}, BOX_STD),
    ]),
    Family("ns_common", "u = a1 w + a0, v = a2 w, w_t + a0 a2 w_z = w_zz, z = a2 x - a1 y",
           ("a0", "angle", "w"), _b_ns, [
        ({"a0": 0.0, "angle": math.pi / 2, "w": [_poly(2)]}, BOX_STD),
        ({"a0": 1.0, "angle": math.pi / 4, "w": COSH}, BOX_STD),
        ({"a0": -0.5, "angle": 1.0, "w": [_gauss(-1.0, 0.0), _trig(1.0, "sin", 0.3)]}, BOX_STD),
    ]),
    Family("potential_reduction", "u = -(x/y^2) phi_w, v = phi_w/y + 2 varsigma/x, w = x/y",
           ("varsigma", "C1", "C2"), _b_pot, [
        ({"varsigma": 1.0, "C1": 1.0, "C2": 0.0}, _box((0.0, 1.0), (2.0, 3.0), (0.5, 1.0))),
        ({"varsigma": 1.25, "C1": 1.0, "C2": 0.0}, _box((0.0, 1.0), (2.5, 3.5), (0.5, 1.0))),
        ({"varsigma": 0.5, "C1": 1.0, "C2": 0.5}, _box((0.0, 1.0), (1.5, 2.5), (0.5, 1.0))),
    ]),
    Family("hj_family", "u = -Im a, v = Re a with z - i a t + F'(a) = 0", ("F", "branch", "seed"), _b_hj, [
        ({"F": []}, BOX_STD),
        ({"F": [0, 0, -0.5]}, _box((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))),
        ({"F": [0, 0, 0, 1.0 / 3.0], "branch": 1}, _box((0.5, 1.5), (-1.0, 1.0), (0.5, 1.5))),
    ]),
    Family("weierstrass_family", "u = p(y/sqrt6 + C2; 0, C1) x + exp(C3 t) phi(y/sqrt6), v = 0",
           ("C1", "C2", "C3", "ic", "z0", "y_range"), _b_wp, [
        ({"C1": 0.0, "C2": 0.0, "C3": 0.0}, BOX_Y),
        ({"C1": 0.0, "C2": 0.0, "C3": 0.0, "ic": [0.5 ** 3, 3 * 0.5 ** 2], "z0": 0.5}, BOX_Y),
        ({"C1": 1.0, "C2": 0.0, "C3": 0.5, "ic": [1.0, 0.2]}, BOX_Y),
    ], tolerance=TOL_LAME),
    Family("darboux_family", "u = 6x/y^2 + theta_yy - 3 theta_y/y + 3 theta/y^2, v = 0", ("theta",),
           _b_darboux, [
        ({"theta": []}, BOX_Y),
        ({"theta": [_poly(2)]}, BOX_Y),
        ({"theta": [_poly(5, 0.2), _gauss(-1.0, 0.5), _exp(0.7, -1, 0.5)]}, BOX_Y),
    ]),
    Family("heun_family", "v = 0 solution through the confluent Heun function (t > 0)",
           ("branch", "nu", "C1", "C2"), _b_heun, [
        ({"branch": 1, "nu": 0.0, "C1": 0.0, "C2": 0.0}, BOX_Y),
        ({"branch": 1, "nu": 0.0, "C1": 1.0, "C2": 0.0}, BOX_Y),
        ({"branch": -1, "nu": 0.5, "C1": 0.5, "C2": 1.0}, BOX_Y),
    ], tolerance=TOL_HEUN),
]}


def family(fid: str) -> Family:
    try:
        return FAMILIES[fid]
    except KeyError:
        raise ConfigError(f"unknown family {fid!r}; known: {sorted(FAMILIES)}") from None


def make(fid: str, params=None, box=None) -> SpaceTimeField:
    if isinstance(params, str):
        params = json.loads(params)
    return family(fid).make(params, box)


def list_families():
    return [FAMILIES[k].summary() for k in FAMILIES]


def default_grid(box, n=(3, 7, 7)) -> Grid:
    return Grid.box(box["t"], box["x"], box["y"], n)
