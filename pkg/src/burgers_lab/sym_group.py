"""Point symmetry group of the Burgers system in explicit parameterized form.

An element acts by

    t~ = (a t + b)/(c t + d)
    x~ = sigma/(c t + d) O x + t~ m + n
    u~ = (c t + d)/sigma O u - c/sigma O x + m,      sigma = sqrt(a d - b c),

with O orthogonal.  Negating (a, b, c, d) is the same transformation as
replacing O by -O, so the canonical representative has a d - b c = 1 and a
positive first nonzero entry, with the sign absorbed into O.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _jet
from .errors import ConfigError, DenominatorVanishes
from .fields import Point, SpaceTimeField

_S = np.diag([-1.0, 1.0])
DENOM_TOL = 1e-9


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _angle_reflect(O):
    reflect = bool(np.linalg.det(O) < 0)
    R = O @ _S if reflect else O
    return math.atan2(R[1, 0], R[0, 0]), reflect


@dataclass(frozen=True)
class GroupElement:
    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    angle: float = 0.0
    reflect: bool = False
    m1: float = 0.0
    m2: float = 0.0
    n1: float = 0.0
    n2: float = 0.0

    def __post_init__(self):
        vals = [self.a, self.b, self.c, self.d, self.angle, self.m1, self.m2, self.n1, self.n2]
        if not all(math.isfinite(float(v)) for v in vals):
            raise ConfigError("group parameters must be finite")
        det = self.a * self.d - self.b * self.c
        if not det > 0:
            raise ConfigError(f"need a d - b c > 0, got {det}")
        s = 1.0 / math.sqrt(det)
        a, b, c, d = (float(v) * s for v in (self.a, self.b, self.c, self.d))
        angle = float(self.angle)
        first = next(v for v in (a, b, c, d) if v != 0)
        if first < 0:
            a, b, c, d = -a, -b, -c, -d
            angle += math.pi
        angle = math.remainder(angle, 2 * math.pi)
        if angle <= -math.pi + 1e-15:
            angle = math.pi
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "angle", angle)
        object.__setattr__(self, "reflect", bool(self.reflect))
        for name in ("m1", "m2", "n1", "n2"):
            object.__setattr__(self, name, float(getattr(self, name)))

    # ------------------------------------------------------------------
    @classmethod
    def from_matrix(cls, M, O, m, n):
        angle, reflect = _angle_reflect(np.asarray(O, dtype=float))
        return cls(M[0][0], M[0][1], M[1][0], M[1][1], angle, reflect, m[0], m[1], n[0], n[1])

    @property
    def O(self):
        R = rotation(self.angle)
        return R @ _S if self.reflect else R

    @property
    def M(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def boost(self):
        return np.array([self.m1, self.m2])

    @property
    def shift(self):
        return np.array([self.n1, self.n2])

    def to_json(self):
        return {"sl2": [self.a, self.b, self.c, self.d], "angle": self.angle, "reflect": self.reflect,
                "boost": [self.m1, self.m2], "shift": [self.n1, self.n2]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        allowed = {"sl2", "angle", "reflect", "boost", "shift"}
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigError(f"unknown group element keys {sorted(unknown)}")
        try:
            a, b, c, d = obj.get("sl2", [1, 0, 0, 1])
            m1, m2 = obj.get("boost", [0, 0])
            n1, n2 = obj.get("shift", [0, 0])
            return cls(float(a), float(b), float(c), float(d), float(obj.get("angle", 0.0)),
                       bool(obj.get("reflect", False)), float(m1), float(m2), float(n1), float(n2))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad group element: {exc}") from exc

    def close_to(self, other, tol=1e-10):
        if self.reflect != other.reflect:
            return False
        da = abs(math.remainder(self.angle - other.angle, 2 * math.pi))
        diffs = [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d,
                 self.m1 - other.m1, self.m2 - other.m2, self.n1 - other.n1, self.n2 - other.n2, da]
        return max(abs(x) for x in diffs) <= tol

    def is_identity(self, tol=1e-10):
        return self.close_to(IDENTITY, tol)


IDENTITY = GroupElement()
MIRROR = GroupElement(reflect=True)


def denominator(g: GroupElement, t):
    return g.c * t + g.d


def act_point(g: GroupElement, p, uv):
    """Image of the point (t,x,y) with values (u,v) under g."""
    if not isinstance(p, Point):
        p = Point(*p)
    s = denominator(g, p.t)
    if abs(s) <= DENOM_TOL:
        raise DenominatorVanishes(f"c t + d = {s} at t = {p.t}")
    O = g.O
    tt = (g.a * p.t + g.b) / s
    X = np.array([p.x, p.y])
    U = np.array([float(uv[0]), float(uv[1])])
    xn = O @ X / s + tt * g.boost + g.shift
    un = s * (O @ U) - g.c * (O @ X) + g.boost
    return Point(tt, xn[0], xn[1]), (float(un[0]), float(un[1]))


def act_points(g: GroupElement, t, x, y):
    """Vectorised spatial-temporal part of the action (no values)."""
    s = denominator(g, t)
    O = g.O
    tt = (g.a * t + g.b) / s
    X = (O[0, 0] * x + O[0, 1] * y) / s + tt * g.m1 + g.n1
    Y = (O[1, 0] * x + O[1, 1] * y) / s + tt * g.m2 + g.n2
    return tt, X, Y


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Element acting as g1 after g2."""
    M = g1.M @ g2.M
    O1 = g1.O
    O = O1 @ g2.O
    m = g1.boost + O1 @ (g1.d * g2.boost - g1.c * g2.shift)
    n = g1.shift + O1 @ (g1.a * g2.shift - g1.b * g2.boost)
    if not np.all(np.isfinite(M)) or np.linalg.det(M) <= 0:
        raise DenominatorVanishes("composition left the chart")
    return GroupElement.from_matrix(M, O, m, n)


def inverse(g: GroupElement) -> GroupElement:
    Minv = np.array([[g.d, -g.b], [-g.c, g.a]])
    OT = g.O.T
    rhs_m = -(OT @ g.boost)
    rhs_n = -(OT @ g.shift)
    # solve d*m2 - c*n2 = rhs_m, a*n2 - b*m2 = rhs_n componentwise
    A = np.array([[g.d, -g.c], [-g.b, g.a]])
    sol = np.linalg.solve(A, np.vstack([rhs_m, rhs_n]))
    return GroupElement.from_matrix(Minv, OT, sol[0], sol[1])


def flow(generator: str, eps: float) -> GroupElement:
    """One-parameter group exp(eps V) for a basis element V."""
    e = float(eps)
    if generator == "Pt":
        return GroupElement(b=e)
    if generator == "D":
        return GroupElement(a=math.exp(e), d=math.exp(-e))
    if generator == "Pi":
        return GroupElement(c=-e)
    if generator == "J":
        return GroupElement(angle=e)
    if generator == "Px":
        return GroupElement(n1=e)
    if generator == "Py":
        return GroupElement(n2=e)
    if generator == "Gx":
        return GroupElement(m1=e)
    if generator == "Gy":
        return GroupElement(m2=e)
    raise ConfigError(f"unknown generator {generator!r}")


def act_field(g: GroupElement, field: SpaceTimeField) -> SpaceTimeField:
    """Transformed solution: graph of the output is g applied to the graph of the input."""
    gi = inverse(g)
    O = g.O

    def preimage(T, X, Y):
        return act_points(gi, T, X, Y)

    def singular(T, X, Y):
        T = np.asarray(T, dtype=float)
        bad = np.abs(denominator(gi, T)) <= DENOM_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            t, x, y = preimage(np.where(bad, 0.0, T), X, Y)
        return bad | field.singular(t, x, y)

    def jet(T, X, Y):
        Tj, Xj, Yj = _jet.Jet.variables(T, X, Y)
        if np.any(np.abs(denominator(gi, Tj.f)) <= DENOM_TOL):
            raise DenominatorVanishes("evaluation on the line c t + d = 0")
        sinv = gi.c * Tj + gi.d
        Oi = gi.O
        tj = (gi.a * Tj + gi.b) / sinv
        xj = (Oi[0, 0] * Xj + Oi[0, 1] * Yj) / sinv + tj * gi.m1 + gi.n1
        yj = (Oi[1, 0] * Xj + Oi[1, 1] * Yj) / sinv + tj * gi.m2 + gi.n2
        arr = field.jets(tj.f, xj.f, yj.f)
        uj = _jet.compose_array(arr[0], tj, xj, yj)
        vj = _jet.compose_array(arr[1], tj, xj, yj)
        s = g.c * tj + g.d
        un = s * (O[0, 0] * uj + O[0, 1] * vj) - g.c * (O[0, 0] * xj + O[0, 1] * yj) + g.m1
        vn = s * (O[1, 0] * uj + O[1, 1] * vj) - g.c * (O[1, 0] * xj + O[1, 1] * yj) + g.m2
        return un, vn

    meta = dict(field.meta)
    meta["transformed_by"] = g.to_json()
    return SpaceTimeField(jet=jet, singular=singular, name=f"g*{field.name}", meta=meta)


def random_element(rng, t_range=None, lo=-2.0, hi=2.0, margin=0.5, max_tries=10000):
    """Random element with parameters in [lo, hi].

    When t_range is given, c t + d of the normalized element stays within
    [margin, 1/margin] in absolute value on that interval.
    """
    for _ in range(max_tries):
        a, b, c, d = rng.uniform(lo, hi, 4)
        if a * d - b * c < 0.2:
            continue
        g = GroupElement(a, b, c, d, rng.uniform(-math.pi, math.pi), bool(rng.integers(0, 2)),
                         *rng.uniform(lo, hi, 4))
        if t_range is not None:
            ts = np.linspace(t_range[0], t_range[1], 33)
            s = np.abs(denominator(g, ts))
            if s.min() < margin or s.max() > 1.0 / margin:
                continue
        return g
    raise DenominatorVanishes("could not draw an element with c t + d bounded away from 0")
