"""Closed-form solutions of the linear heat equations theta_s = theta_qq and
phi_t = phi_xx + phi_yy, plus the Darboux operator with kernel {y, y^3 + 6t}.

One-dimensional solutions are finite linear combinations of atoms (heat
polynomials, Gaussian kernels, exponential and trigonometric modes).  Each
atom knows its q-derivatives up to order 6 and, separately, its own time
derivative, so the heat residual is a genuine check and not an identity.
"""
from __future__ import annotations

import json
import math

import numpy as np
from numpy.polynomial import hermite as _herm

from . import _jet
from .errors import ConfigError, DegreeTooLarge, SingularAt, ZeroDenominator

MAX_Q_ORDER = 6
MAX_POLY_DEGREE = 12


# ---------------------------------------------------------------------------
# atoms

class _Atom:
    kind = "?"

    def dq(self, s, q, k):
        raise NotImplementedError

    def ds(self, s, q):
        raise NotImplementedError

    def valid(self, s, q):
        return np.ones(np.broadcast(np.asarray(s), np.asarray(q)).shape, dtype=bool)


class HeatPoly(_Atom):
    """h_n(s, q) = sum_k n!/(k!(n-2k)!) s^k q^(n-2k)."""
    kind = "poly"

    def __init__(self, n):
        n = int(n)
        if n < 0:
            raise ConfigError("degree must be nonnegative")
        if n > MAX_POLY_DEGREE:
            raise DegreeTooLarge(f"heat polynomial degree {n} exceeds {MAX_POLY_DEGREE}")
        self.n = n
        self.params = {"n": n}

    @staticmethod
    def _h(n, s, q):
        s = np.asarray(s, dtype=float)
        q = np.asarray(q, dtype=float)
        if n < 0:
            return np.zeros(np.broadcast(s, q).shape)
        out = np.zeros(np.broadcast(s, q).shape)
        for k in range(n // 2 + 1):
            out = out + math.factorial(n) / (math.factorial(k) * math.factorial(n - 2 * k)) * s ** k * q ** (n - 2 * k)
        return out

    def dq(self, s, q, k):
        n = self.n
        if k > n:
            return np.zeros(np.broadcast(np.asarray(s), np.asarray(q)).shape)
        return math.factorial(n) / math.factorial(n - k) * self._h(n - k, s, q)

    def ds(self, s, q):
        n = self.n
        return n * (n - 1) * self._h(n - 2, s, q)


class Gauss(_Atom):
    """Heat kernel (4 pi (s - s0))^(-1/2) exp(-(q - q0)^2 / (4 (s - s0))), for s > s0."""
    kind = "gauss"

    def __init__(self, s0=0.0, q0=0.0):
        self.s0 = float(s0)
        self.q0 = float(q0)
        self.params = {"s0": self.s0, "q0": self.q0}

    def valid(self, s, q):
        return np.asarray(s) > self.s0

    def dq(self, s, q, k):
        tau = np.asarray(s, dtype=float) - self.s0
        if np.any(tau <= 0):
            raise SingularAt("Gaussian kernel evaluated at s <= s0")
        xi = (np.asarray(q, dtype=float) - self.q0) / (2 * np.sqrt(tau))
        coef = np.zeros(k + 1)
        coef[k] = 1.0
        hk = _herm.hermval(xi, coef)
        return (-1) ** k * hk * np.exp(-xi * xi) / np.sqrt(4 * np.pi * tau) / (2 * np.sqrt(tau)) ** k

    def ds(self, s, q):
        tau = np.asarray(s, dtype=float) - self.s0
        if np.any(tau <= 0):
            raise SingularAt("Gaussian kernel evaluated at s <= s0")
        d = np.asarray(q, dtype=float) - self.q0
        g = np.exp(-d * d / (4 * tau)) / np.sqrt(4 * np.pi * tau)
        return g * (-0.5 / tau + d * d / (4 * tau * tau))


class ExpMode(_Atom):
    """exp(lam^2 s + sign lam q)."""
    kind = "exp"

    def __init__(self, lam=1.0, sign=1):
        self.lam = float(lam)
        self.sign = 1 if sign >= 0 else -1
        self.params = {"lam": self.lam, "sign": self.sign}

    def _val(self, s, q):
        return np.exp(self.lam ** 2 * np.asarray(s, dtype=float) + self.sign * self.lam * np.asarray(q, dtype=float))

    def dq(self, s, q, k):
        return (self.sign * self.lam) ** k * self._val(s, q)

    def ds(self, s, q):
        return self.lam ** 2 * self._val(s, q)


class TrigMode(_Atom):
    """exp(-lam^2 s) times sin(lam q) or cos(lam q)."""
    kind = "trig"

    def __init__(self, lam=1.0, fn="cos"):
        if fn not in ("sin", "cos"):
            raise ConfigError("trig atom needs fn 'sin' or 'cos'")
        self.lam = float(lam)
        self.fn = fn
        self.params = {"lam": self.lam, "fn": fn}

    def dq(self, s, q, k):
        phase = 0.0 if self.fn == "sin" else 0.5 * np.pi
        arg = self.lam * np.asarray(q, dtype=float) + phase + 0.5 * k * np.pi
        return self.lam ** k * np.exp(-self.lam ** 2 * np.asarray(s, dtype=float)) * np.sin(arg)

    def ds(self, s, q):
        return -self.lam ** 2 * self.dq(s, q, 0)


_ATOMS = {"poly": HeatPoly, "gauss": Gauss, "exp": ExpMode, "trig": TrigMode}


def atom(kind, **params):
    try:
        cls = _ATOMS[kind]
    except KeyError:
        raise ConfigError(f"unknown atom kind {kind!r}") from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind} atom: {exc}") from exc


# ---------------------------------------------------------------------------
# one-dimensional solutions

class HeatSolution1D:
    """Linear combination of heat atoms in (s, q)."""

    def __init__(self, terms=()):
        self.terms = tuple((float(c), a) for c, a in terms)

    # construction helpers
    @classmethod
    def single(cls, a, coeff=1.0):
        return cls([(coeff, a)])

    @classmethod
    def from_spec(cls, spec):
        """JSON atom list [{"kind": ..., "params": {...}, "coeff": c}, ...]."""
        if isinstance(spec, str):
            spec = json.loads(spec)
        if isinstance(spec, dict):
            spec = [spec]
        terms = []
        for item in spec:
            unknown = set(item) - {"kind", "params", "coeff"}
            if unknown:
                raise ConfigError(f"unknown atom keys {sorted(unknown)}")
            terms.append((item.get("coeff", 1.0), atom(item["kind"], **item.get("params", {}))))
        return cls(terms)

    def to_spec(self):
        return [{"kind": a.kind, "params": dict(a.params), "coeff": c} for c, a in self.terms]

    def __add__(self, other):
        return HeatSolution1D(self.terms + other.terms)

    def scaled(self, c):
        return HeatSolution1D([(c * k, a) for k, a in self.terms])

    def is_zero(self):
        return all(c == 0 for c, _ in self.terms)

    # evaluation
    def dq(self, s, q, k=0):
        if k > MAX_Q_ORDER:
            raise ConfigError(f"q-derivative order {k} above {MAX_Q_ORDER}")
        shape = np.broadcast(np.asarray(s), np.asarray(q)).shape
        out = np.zeros(shape)
        for c, a in self.terms:
            if c:
                out = out + c * a.dq(s, q, k)
        return out

    def ds(self, s, q):
        shape = np.broadcast(np.asarray(s), np.asarray(q)).shape
        out = np.zeros(shape)
        for c, a in self.terms:
            if c:
                out = out + c * a.ds(s, q)
        return out

    def eval(self, s, q):
        return self.dq(s, q, 0)

    def deriv(self, s, q, ns=0, nq=0):
        """Mixed derivative; time derivatives beyond the first use theta_s = theta_qq."""
        if ns == 0:
            return self.dq(s, q, nq)
        if ns == 1 and nq == 0:
            return self.ds(s, q)
        return self.dq(s, q, 2 * ns + nq)

    def residual(self, s, q):
        return self.ds(s, q) - self.dq(s, q, 2)

    def valid(self, s, q):
        ok = np.ones(np.broadcast(np.asarray(s), np.asarray(q)).shape, dtype=bool)
        for c, a in self.terms:
            if c:
                ok &= a.valid(s, q)
        return ok

    def jet(self, sj, qj, k=0):
        """Jet in (t,x,y) of d^k theta/dq^k evaluated at (s(.), q(.))."""
        if k + 4 > MAX_Q_ORDER:
            raise ConfigError("jet of a derivative of order above 2 is not available")
        s, q = sj.f, qj.f
        d = [self.dq(s, q, k + i) for i in range(5)]
        # partials in (s, q): d_s = d_qq, d_ss = d_qqqq, d_sq = d_qqq
        return _jet.compose2(sj, qj, d[0], d[2], d[1], d[4], d[3], d[2])

    def positive_on(self, s_range, q_range, n=41):
        S, Q = np.meshgrid(np.linspace(*s_range, n), np.linspace(*q_range, n))
        vals = self.eval(S, Q)
        return bool(np.all(vals > 0)), float(np.min(vals))


def heat_polynomial(n: int) -> HeatSolution1D:
    if n < 0:
        raise ConfigError("degree must be nonnegative")
    if n > MAX_POLY_DEGREE:
        raise DegreeTooLarge(f"heat polynomial degree {n} exceeds {MAX_POLY_DEGREE}")
    return HeatSolution1D.single(HeatPoly(n))


def gaussian(s0=0.0, q0=0.0, coeff=1.0):
    return HeatSolution1D.single(Gauss(s0, q0), coeff)


def exp_mode(lam=1.0, sign=1, coeff=1.0):
    return HeatSolution1D.single(ExpMode(lam, sign), coeff)


def trig_mode(lam=1.0, fn="cos", coeff=1.0):
    return HeatSolution1D.single(TrigMode(lam, fn), coeff)


def constant(c=1.0):
    return HeatSolution1D.single(HeatPoly(0), c)


def e_t_cosh():
    """e^s cosh q, the standard kink generator."""
    return HeatSolution1D([(0.5, ExpMode(1.0, 1)), (0.5, ExpMode(1.0, -1))])


# ---------------------------------------------------------------------------
# two-dimensional solutions

class HeatSolution2D:
    """Sum of products X(t, x) Y(t, y) of one-dimensional solutions."""

    def __init__(self, terms=()):
        self.terms = tuple((float(c), X, Y) for c, X, Y in terms)

    @classmethod
    def product(cls, X, Y, coeff=1.0):
        return cls([(coeff, X, Y)])

    @classmethod
    def gaussian(cls, t0=0.0, x0=0.0, y0=0.0, coeff=1.0):
        """(4 pi (t - t0))^(-1) exp(-((x-x0)^2 + (y-y0)^2) / (4 (t - t0)))."""
        return cls([(coeff, gaussian(t0, x0), gaussian(t0, y0))])

    @classmethod
    def from_spec(cls, spec):
        """[{"coeff": c, "x": [atoms...], "y": [atoms...]}, ...]"""
        if isinstance(spec, str):
            spec = json.loads(spec)
        terms = []
        for item in spec:
            unknown = set(item) - {"coeff", "x", "y"}
            if unknown:
                raise ConfigError(f"unknown 2D term keys {sorted(unknown)}")
            X = HeatSolution1D.from_spec(item.get("x", [{"kind": "poly", "params": {"n": 0}}]))
            Y = HeatSolution1D.from_spec(item.get("y", [{"kind": "poly", "params": {"n": 0}}]))
            terms.append((item.get("coeff", 1.0), X, Y))
        return cls(terms)

    def to_spec(self):
        return [{"coeff": c, "x": X.to_spec(), "y": Y.to_spec()} for c, X, Y in self.terms]

    def __add__(self, other):
        return HeatSolution2D(self.terms + other.terms)

    def scaled(self, c):
        return HeatSolution2D([(c * k, X, Y) for k, X, Y in self.terms])

    def eval(self, t, x, y):
        out = 0.0
        for c, X, Y in self.terms:
            out = out + c * X.eval(t, x) * Y.eval(t, y)
        return out

    def deriv(self, t, x, y, nt=0, nx=0, ny=0):
        """Partial derivative, with t-derivatives of order 1 taken from the atoms directly."""
        out = 0.0
        for c, X, Y in self.terms:
            if nt == 0:
                out = out + c * X.dq(t, x, nx) * Y.dq(t, y, ny)
            elif nt == 1 and nx == 0 and ny == 0:
                out = out + c * (X.ds(t, x) * Y.eval(t, y) + X.eval(t, x) * Y.ds(t, y))
            else:
                raise ConfigError("mixed time derivatives: use jets")
        return out

    def residual(self, t, x, y):
        return (self.deriv(t, x, y, nt=1) - self.deriv(t, x, y, nx=2) - self.deriv(t, x, y, ny=2))

    def jets(self, tj, xj, yj):
        """Jets of phi, phi_x, phi_y."""
        phi = phx = phy = 0.0
        for c, X, Y in self.terms:
            X0, X1 = X.jet(tj, xj, 0), X.jet(tj, xj, 1)
            Y0, Y1 = Y.jet(tj, yj, 0), Y.jet(tj, yj, 1)
            phi = phi + c * X0 * Y0
            phx = phx + c * X1 * Y0
            phy = phy + c * X0 * Y1
        return phi, phx, phy

    def valid(self, t, x, y):
        ok = True
        for c, X, Y in self.terms:
            ok = ok & X.valid(t, x) & Y.valid(t, y)
        return ok


def superpose(items):
    """Linear combination of solutions of the same dimension: [(coeff, solution), ...]."""
    items = list(items)
    if not items:
        raise ConfigError("nothing to superpose")
    kinds = {type(sol) for _, sol in items}
    if len(kinds) != 1:
        raise ConfigError("cannot superpose solutions of different dimension")
    cls = kinds.pop()
    # like terms are merged so that exact cancellations (theta - theta) give exact zeros
    merged = {}
    if cls is HeatSolution1D:
        for c, sol in items:
            for k, a in sol.terms:
                key = json.dumps([a.kind, a.params], sort_keys=True)
                merged[key] = (merged.get(key, (0.0, a))[0] + c * k, a)
        return HeatSolution1D([(c, a) for c, a in merged.values() if c != 0])
    for c, sol in items:
        for k, X, Y in sol.terms:
            key = json.dumps([X.to_spec(), Y.to_spec()], sort_keys=True)
            merged[key] = (merged.get(key, (0.0, X, Y))[0] + c * k, X, Y)
    return HeatSolution2D([(c, X, Y) for c, X, Y in merged.values() if c != 0])


# ---------------------------------------------------------------------------
# Darboux transformation DT[y, y^3 + 6t]

class DarbouxImage:
    """w0(t, y) = theta_yy - 3 theta_y / y + 3 theta / y^2.

    Solves w_t - w_yy + (6 / y^2) w = 0 wherever y != 0.
    """

    def __init__(self, theta: HeatSolution1D):
        self.theta = theta

    def _check(self, y):
        if np.any(np.asarray(y) == 0):
            raise SingularAt("Darboux image is singular at y = 0")

    def eval(self, t, y):
        self._check(y)
        th = self.theta
        return th.dq(t, y, 2) - 3 * th.dq(t, y, 1) / y + 3 * th.dq(t, y, 0) / y ** 2

    def derivs(self, t, y):
        """(w, w_t, w_y, w_yy) in closed form."""
        self._check(y)
        d = [self.theta.dq(t, y, k) for k in range(5)]
        y = np.asarray(y, dtype=float)
        w = d[2] - 3 * d[1] / y + 3 * d[0] / y ** 2
        w_t = d[4] - 3 * d[3] / y + 3 * d[2] / y ** 2
        w_y = d[3] - 3 * d[2] / y + 6 * d[1] / y ** 2 - 6 * d[0] / y ** 3
        w_yy = d[4] - 3 * d[3] / y + 9 * d[2] / y ** 2 - 18 * d[1] / y ** 3 + 18 * d[0] / y ** 4
        return w, w_t, w_y, w_yy

    def residual(self, t, y):
        w, w_t, _, w_yy = self.derivs(t, y)
        return w_t - w_yy + 6 * w / np.asarray(y, dtype=float) ** 2

    def jet(self, tj, yj):
        th = self.theta
        return th.jet(tj, yj, 2) - 3 * th.jet(tj, yj, 1) / yj + 3 * th.jet(tj, yj, 0) / (yj * yj)


def darboux_dt(theta: HeatSolution1D) -> DarbouxImage:
    return DarbouxImage(theta)


def require_positive(values, what="denominator"):
    vals = np.asarray(values)
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise ZeroDenominator(f"{what} vanishes or is not finite")
    return vals
