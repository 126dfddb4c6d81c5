"""Special functions used by the catalog.

* Weierstrass p(z; 0, g3) on the real axis (Laurent seed + duplication),
* the Lame equation phi'' = 6 (C3 + p(z; 0, C1)) phi,
* the confluent Heun Cauchy problem Y(0) = 1,
* Newton's method for the implicit equation z - i a t + F'(a) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import ellipk

from .errors import (ConfigError, JacobianSingular, NearPole, NoConvergence, ParameterPole,
                     PoleInRange, SingularPath)

POLE_TOL = 1e-6

# ---------------------------------------------------------------------------
# Weierstrass p with g2 = 0


def _laurent_coeffs(g3, n_terms=7):
    """c_k with p(z) = z^-2 + sum_{k>=2} c_k z^(2k-2) for invariants (0, g3)."""
    c = {2: 0.0, 3: g3 / 28.0}
    for k in range(4, n_terms + 2):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return [(k, c[k]) for k in range(2, n_terms + 2)]


@lru_cache(maxsize=64)
def real_half_period(g3: float) -> float:
    """omega > 0 such that the real poles of p(z; 0, g3) sit at 2 k omega (inf for g3 = 0)."""
    g3 = float(g3)
    if g3 == 0.0:
        return math.inf
    e1 = math.copysign(abs(g3 / 4.0) ** (1.0 / 3.0), g3)
    H = math.sqrt(3.0) * abs(e1)            # sqrt((e1-e2)(e1-e3)) when g2 = 0
    m = 0.5 - 3.0 * e1 / (4.0 * H)
    return float(ellipk(m)) / math.sqrt(H)


def _reduce(z, g3):
    w = real_half_period(g3)
    if math.isinf(w):
        return z, w
    per = 2.0 * w
    return z - per * round(z / per), w


def wp(z: float, g3: float):
    """(p, p') at real z for invariants g2 = 0, g3."""
    z = float(z)
    g3 = float(g3)
    zr, w = _reduce(z, g3)
    if abs(zr) < POLE_TOL:
        raise NearPole(f"z = {z} is within {POLE_TOL} of a pole of p(.; 0, {g3})")
    if g3 == 0.0:
        return zr ** -2, -2.0 * zr ** -3
    coeffs = _laurent_coeffs(g3)
    # The g2 = 0 lattice is hexagonal.  Its nearest nonzero point lies at 2 omega
    # for g3 > 0 and at 2 omega / sqrt(3) (off the real axis) for g3 < 0.
    radius = 2.0 * w if g3 > 0 else 2.0 * w / math.sqrt(3.0)
    limit = 0.125 * radius
    n = 0
    s = zr
    while abs(s) > limit:
        s *= 0.5
        n += 1
    P = s ** -2 + sum(ck * s ** (2 * k - 2) for k, ck in coeffs)
    dP = -2.0 * s ** -3 + sum(ck * (2 * k - 2) * s ** (2 * k - 3) for k, ck in coeffs)
    for _ in range(n):
        if dP == 0.0:
            raise NearPole("duplication passed through a half period exactly")
        slope = 6.0 * P * P / dP
        P2 = slope * slope / 4.0 - 2.0 * P
        dP = -(dP + slope * (P2 - P))
        P = P2
    return P, dP


def wp_array(z, g3):
    z = np.asarray(z, dtype=float)
    out = np.empty((2,) + z.shape)
    for idx in np.ndindex(z.shape):
        out[(slice(None),) + idx] = wp(z[idx], g3)
    return out[0], out[1]


@dataclass(frozen=True)
class WeierstrassP:
    g3: float

    def __call__(self, z):
        return wp(z, self.g3)

    def ode_residual(self, z):
        p, dp = wp(z, self.g3)
        return (dp * dp - 4 * p ** 3 + self.g3) / max(1.0, abs(p) ** 3)

    def poles_in(self, a, b, margin=0.0):
        w = real_half_period(self.g3)
        if math.isinf(w):
            return [0.0] if a - margin <= 0.0 <= b + margin else []
        per = 2 * w
        k0 = math.ceil((a - margin) / per)
        k1 = math.floor((b + margin) / per)
        return [k * per for k in range(k0, k1 + 1)]


# ---------------------------------------------------------------------------
# Lame equation


class LameSolution:
    """phi on an interval, from phi'' = 6 (C3 + p(z + shift; 0, C1)) phi."""

    def __init__(self, C1, C3, z_range, ic, z0, shift=0.0, rtol=1e-12, atol=1e-14):
        self.C1, self.C3, self.shift = float(C1), float(C3), float(shift)
        a, b = sorted(map(float, z_range))
        z0 = float(z0)
        if not a <= z0 <= b:
            raise ConfigError("z0 must lie in z_range")
        poles = WeierstrassP(self.C1).poles_in(a + self.shift, b + self.shift, margin=1e-3)
        if poles:
            raise PoleInRange(f"p has a pole at z = {poles[0] - self.shift} inside [{a}, {b}]")
        self.z_range = (a, b)
        self.z0 = z0
        self.ic = (float(ic[0]), float(ic[1]))
        self._parts = []
        for end in (a, b):
            if end == z0:
                continue
            sol = solve_ivp(self._rhs, (z0, end), self.ic, method="DOP853", rtol=rtol, atol=atol,
                            dense_output=True)
            if not sol.success:
                raise PoleInRange(f"Lame integration failed: {sol.message}")
            self._parts.append((min(z0, end), max(z0, end), sol.sol))

    def coefficient(self, z):
        return 6.0 * (self.C3 + wp(z + self.shift, self.C1)[0])

    def _rhs(self, z, Y):
        return [Y[1], self.coefficient(z) * Y[0]]

    def _state(self, z):
        z = float(z)
        a, b = self.z_range
        if z < a - 1e-12 or z > b + 1e-12:
            raise ConfigError(f"z = {z} outside the integration range [{a}, {b}]")
        z = min(max(z, a), b)
        if z == self.z0:
            return self.ic
        for lo, hi, fn in self._parts:
            if lo <= z <= hi:
                y = fn(z)
                return float(y[0]), float(y[1])
        raise ConfigError("internal: no branch covers z")

    def __call__(self, z):
        """(phi, phi', phi'') with phi'' taken from the equation."""
        phi, dphi = self._state(z)
        return phi, dphi, self.coefficient(z) * phi

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        out = np.empty((3,) + z.shape)
        for idx in np.ndindex(z.shape):
            out[(slice(None),) + idx] = self(z[idx])
        return out

    def _state_at_step_end(self, z):
        """State by integrating from z0 exactly to z (no dense-output interpolation)."""
        if z == self.z0:
            return self.ic
        sol = solve_ivp(self._rhs, (self.z0, z), self.ic, method="DOP853", rtol=1e-13, atol=1e-15)
        return float(sol.y[0, -1]), float(sol.y[1, -1])

    def residual(self, z, h=2.5e-4):
        """phi'' by a five-point difference of phi' minus the right-hand side, over max(1, |phi''|).

        The stencil states are integrated to their exact abscissae; differencing
        the dense interpolant instead would magnify its error by 1/h.
        """
        a, b = self.z_range
        if z - 2 * h < a or z + 2 * h > b:
            h = min(z - a, b - z) / 2.0
        d = [self._state_at_step_end(z + k * h)[1] for k in (-2, -1, 1, 2)]
        d2 = (d[0] - 8 * d[1] + 8 * d[2] - d[3]) / (12 * h)
        rhs = self.coefficient(z) * self._state_at_step_end(z)[0]
        return (d2 - rhs) / max(1.0, abs(rhs))


def lame_solve(C1, C3, z_range, ic, z0, shift=0.0):
    return LameSolution(C1, C3, z_range, ic, z0, shift)


# ---------------------------------------------------------------------------
# confluent Heun


HEUN_SERIES_RADIUS = 0.25
_SERIES_TERMS = 400


def _heun_coefficients(alpha, beta, gamma, delta, eta, nmax=_SERIES_TERMS):
    D = 0.5 * (alpha * (beta + 1) + alpha * (gamma + 1) + 2 * delta)
    E = 0.5 * (-alpha * (beta + 1) + (beta + 1) * (gamma + 1) + 2 * eta - 1)
    c = np.zeros(nmax + 1)
    c[0] = 1.0
    c[1] = E / (beta + 1)
    for n in range(1, nmax):
        num = (n * (n + beta + gamma + 1 - alpha) + E) * c[n] + (alpha * (n - 1) + D) * c[n - 1]
        c[n + 1] = num / ((n + 1) * (n + beta + 1))
    return c


def _series(c, z):
    n = np.arange(len(c))
    Y = np.polyval(c[::-1], z)
    dY = np.polyval((c[1:] * n[1:])[::-1], z)
    d2Y = np.polyval((c[2:] * n[2:] * (n[2:] - 1))[::-1], z)
    return float(Y), float(dY), float(d2Y)


class HeunC:
    """Confluent Heun function with the normalisation Y(0) = 1."""

    def __init__(self, alpha, beta, gamma, delta, eta):
        if abs(beta + 1) < 1e-14 or (beta < 0 and float(beta).is_integer()):
            raise ParameterPole("beta must not be a negative integer (Y'(0) has a pole at beta = -1)")
        self.params = tuple(float(p) for p in (alpha, beta, gamma, delta, eta))
        self._c = _heun_coefficients(*self.params)
        self._cache = {}

    def initial_slope(self):
        a, b, g, d, e = self.params
        return 0.5 * ((2 * e - 1) / (b + 1) + g + 1 - a)

    def second_derivative(self, z, Y, dY):
        a, b, g, d, e = self.params
        p = a * z * (z - 1) + (b + 1) * (z - 1) + (g + 1) * z
        q = 0.5 * (a * (b + 1) * (z - 1) + a * (g + 1) * z + 2 * d * z + (b + 1) * (g + 1) + 2 * e - 1)
        return -(p * dY + q * Y) / (z * (z - 1))

    def residual(self, z, Y, dY, d2Y):
        a, b, g, d, e = self.params
        p = a * z * (z - 1) + (b + 1) * (z - 1) + (g + 1) * z
        q = 0.5 * (a * (b + 1) * (z - 1) + a * (g + 1) * z + 2 * d * z + (b + 1) * (g + 1) + 2 * e - 1)
        return z * (z - 1) * d2Y + p * dY + q * Y

    def _branch(self, sign):
        if sign not in self._cache:
            z0 = sign * HEUN_SERIES_RADIUS
            Y0, dY0, _ = _series(self._c, z0)
            self._cache[sign] = (z0, Y0, dY0, [])
        return self._cache[sign]

    def __call__(self, z):
        """(Y, Y', Y'') at real z."""
        z = float(z)
        if z >= 1.0 - 1e-3:
            raise SingularPath(f"path [0, {z}] reaches the singular point z = 1")
        if abs(z) <= HEUN_SERIES_RADIUS:
            return _series(self._c, z)
        sign = 1.0 if z > 0 else -1.0
        z0, Y0, dY0, segs = self._branch(sign)
        for lo, hi, fn in segs:
            if lo <= z <= hi:
                Y, dY = fn(z)
                return float(Y), float(dY), self.second_derivative(z, Y, dY)
        # extend the integration far enough to cover z (with some headroom)
        end = z * 1.25 if sign < 0 else min(z + 0.25 * (1.0 - z), 1.0 - 1e-3)
        if sign < 0 and segs:
            end = min(end, min(s[0] for s in segs) * 2)
        sol = solve_ivp(lambda s, Y: [Y[1], self.second_derivative(s, Y[0], Y[1])], (z0, end), [Y0, dY0],
                        method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True)
        if not sol.success:
            raise SingularPath(f"Heun integration failed: {sol.message}")
        segs.clear()
        segs.append((min(z0, end), max(z0, end), sol.sol))
        Y, dY = sol.sol(z)
        return float(Y), float(dY), self.second_derivative(z, Y, dY)

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        out = np.empty((3,) + z.shape)
        for idx in np.ndindex(z.shape):
            out[(slice(None),) + idx] = self(z[idx])
        return out

    def path_residual(self, z, h=1e-3):
        """Relative equation residual with Y'' from a five-point difference of Y'."""
        d = [self(z + k * h)[1] for k in (-2, -1, 1, 2)]
        d2 = (d[0] - 8 * d[1] + 8 * d[2] - d[3]) / (12 * h)
        Y, dY, _ = self(z)
        a, b, g, dd, e = self.params
        p = a * z * (z - 1) + (b + 1) * (z - 1) + (g + 1) * z
        q = 0.5 * (a * (b + 1) * (z - 1) + a * (g + 1) * z + 2 * dd * z + (b + 1) * (g + 1) + 2 * e - 1)
        scale = abs(z * (z - 1) * d2) + abs(p * dY) + abs(q * Y)
        return self.residual(z, Y, dY, d2) / max(scale, 1e-300)


def heun_c(alpha, beta, gamma, delta, eta, z):
    """Value of HeunC(alpha, beta, gamma, delta, eta, z)."""
    return HeunC(alpha, beta, gamma, delta, eta)(z)[0]


# ---------------------------------------------------------------------------
# complex Hamilton-Jacobi root


@dataclass
class ComplexRootProblem:
    """z - i a t + F'(a) = 0 with F = sum_k coeffs[k] a^k."""
    coeffs: tuple
    t: float
    z: complex
    _dF: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray([complex(x) for x in self.coeffs], dtype=complex)
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        self.coeffs = tuple(c)
        # ascending coefficients of F', F'', F'''
        self._dF = np.array([k * c[k] for k in range(1, c.size)] or [0j], dtype=complex)

    @staticmethod
    def _ev(asc, a):
        return np.polynomial.polynomial.polyval(a, asc)

    def derivs(self, a, k):
        asc = self._dF
        for _ in range(k):
            asc = np.array([j * asc[j] for j in range(1, asc.size)] or [0j], dtype=complex)
        return self._ev(asc, a)

    def G(self, a):
        return self.z - 1j * a * self.t + self.derivs(a, 0)

    def dG(self, a):
        return -1j * self.t + self.derivs(a, 1)

    def polynomial_roots(self):
        asc = self._dF.copy()
        asc[0] += self.z
        if asc.size < 2:
            asc = np.append(asc, 0j)
        asc[1] += -1j * self.t
        while asc.size > 1 and asc[-1] == 0:
            asc = asc[:-1]
        if asc.size == 1:
            return np.array([], dtype=complex)
        return np.roots(asc[::-1])


def hj_root(problem: ComplexRootProblem, seed: complex = 0j, tol=1e-12, maxiter=100) -> complex:
    a = complex(seed)
    for _ in range(maxiter):
        g = problem.G(a)
        if abs(g) < tol:
            return a
        d = problem.dG(a)
        if abs(d) < 1e-14:
            raise JacobianSingular(f"-i t + F''(a) vanishes near a = {a}")
        a -= g / d
    g = problem.G(a)
    if abs(g) < tol:
        return a
    raise NoConvergence(f"Newton did not converge in {maxiter} iterations (|G| = {abs(g):.3e})")


def cubic_closed_form(t, x, y, beta, branch):
    """Root of a^2 + (beta - i t) a + z = 0 on the named branch (+1 or -1).

    Branch +1 is the one with Re a = -beta/2 + (1/2) sqrt((|w| + zeta)/2).
    """
    zeta = beta * beta - t * t - 4 * x
    theta = 2 * beta * t + 4 * y
    mod = math.hypot(zeta, theta)
    p = math.sqrt(max(0.0, (mod + zeta) / 2))
    q = math.sqrt(max(0.0, (mod - zeta) / 2))
    sgn = 1.0 if theta >= 0 else -1.0
    u = -t / 2 + branch * 0.5 * q * sgn
    v = -beta / 2 + branch * 0.5 * p
    return complex(v, -u)

