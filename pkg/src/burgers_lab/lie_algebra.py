"""The eight-dimensional Lie invariance algebra of the Burgers system.

Vector fields on (t, x, y, u, v) have polynomial coefficients stored as
sparse maps from exponent tuples to exact rationals, so commutators and the
commutation table are computed without rounding.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Mapping, Tuple

import numpy as np

from .errors import ConfigError, DegreeOverflow, ParameterOutOfDomain
from .fields import Point, SpaceTimeField

VARS = ("t", "x", "y", "u", "v")
Monomial = Tuple[int, int, int, int, int]
Poly = Dict[Monomial, object]

BASIS_NAMES = ("Pt", "D", "Pi", "J", "Px", "Py", "Gx", "Gy")
RADICAL = ("J", "Px", "Py", "Gx", "Gy")
PRETTY = {"Pt": "P^t", "D": "D", "Pi": "Π", "J": "J", "Px": "P^x", "Py": "P^y", "Gx": "G^x", "Gy": "G^y"}


def _mono(**powers) -> Monomial:
    return tuple(powers.get(v, 0) for v in VARS)


def _clean(p: Mapping) -> Poly:
    return {m: c for m, c in p.items() if c != 0}


def poly_add(a: Mapping, b: Mapping, sb=1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + sb * c
    return _clean(out)


def poly_mul(a: Mapping, b: Mapping) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(i + j for i, j in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return _clean(out)


def poly_diff(a: Mapping, k: int) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        if m[k]:
            mm = list(m)
            mm[k] -= 1
            out[tuple(mm)] = out.get(tuple(mm), 0) + c * m[k]
    return _clean(out)


def poly_degree(a: Mapping) -> int:
    return max((sum(m) for m in a), default=0)


def poly_eval(a: Mapping, vals):
    """Evaluate at numeric (t,x,y,u,v); vals entries may be arrays."""
    total = 0.0
    for m, c in a.items():
        term = float(c)
        for k, e in enumerate(m):
            if e:
                term = term * vals[k] ** e
        total = total + term
    return total


class VectorFieldG:
    """First-order operator  xi^t d_t + xi^x d_x + xi^y d_y + eta^u d_u + eta^v d_v."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        if len(coeffs) != 5:
            raise ConfigError("a vector field needs five coefficient polynomials")
        self.coeffs = tuple(_clean(dict(c)) for c in coeffs)

    # linear structure
    def __add__(self, other):
        return VectorFieldG([poly_add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return VectorFieldG([poly_add(a, b, -1) for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, s):
        return VectorFieldG([{m: c * s for m, c in a.items()} for a in self.coeffs])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, VectorFieldG):
            return NotImplemented
        return all(_clean(poly_add(a, b, -1)) == {} for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(frozenset(c.items()) for c in self.coeffs))

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for a in self.coeffs for c in a.values())

    def degree(self):
        return max(poly_degree(a) for a in self.coeffs)

    def apply(self, poly: Mapping) -> Poly:
        """The derivation applied to a polynomial."""
        out: Poly = {}
        for k, xi in enumerate(self.coeffs):
            if xi:
                out = poly_add(out, poly_mul(xi, poly_diff(poly, k)))
        return out

    def evaluate(self, t, x, y, u, v):
        vals = (t, x, y, u, v)
        return tuple(poly_eval(a, vals) for a in self.coeffs)

    def __repr__(self):
        try:
            c = coordinates(self)
        except ValueError:
            c = None
        if c is not None:
            terms = [f"{_fmt(k)}*{n}" for n, k in zip(BASIS_NAMES, c) if k != 0]
            return "VectorFieldG(" + (" + ".join(terms) or "0") + ")"
        return f"VectorFieldG({self.coeffs!r})"


def _fmt(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


def commutator(a: VectorFieldG, b: VectorFieldG) -> VectorFieldG:
    """[a, b] = a(b) - b(a), component by component."""
    out = VectorFieldG([poly_add(a.apply(bk), b.apply(ak), -1) for ak, bk in zip(a.coeffs, b.coeffs)])
    if out.degree() > 2:
        raise DegreeOverflow("commutator left the degree-2 polynomial class")
    return out


# ---------------------------------------------------------------------------
# the basis

def _build_basis():
    one = Fraction(1)
    t, x, y, u, v = (_mono(**{n: 1}) for n in VARS)
    c0 = _mono()
    tt, tx, ty, tu, tv = _mono(t=2), _mono(t=1, x=1), _mono(t=1, y=1), _mono(t=1, u=1), _mono(t=1, v=1)
    B = {
        "Pt": [{c0: one}, {}, {}, {}, {}],
        "D": [{t: 2 * one}, {x: one}, {y: one}, {u: -one}, {v: -one}],
        "Pi": [{tt: one}, {tx: one}, {ty: one}, {x: one, tu: -one}, {y: one, tv: -one}],
        "J": [{}, {y: -one}, {x: one}, {v: -one}, {u: one}],
        "Px": [{}, {c0: one}, {}, {}, {}],
        "Py": [{}, {}, {c0: one}, {}, {}],
        "Gx": [{}, {t: one}, {}, {c0: one}, {}],
        "Gy": [{}, {}, {t: one}, {}, {c0: one}],
    }
    return {k: VectorFieldG(vf) for k, vf in B.items()}


BASIS = _build_basis()


def basis(name: str) -> VectorFieldG:
    try:
        return BASIS[name]
    except KeyError:
        raise ConfigError(f"unknown basis element {name!r}; expected one of {BASIS_NAMES}") from None


def combo(terms: Mapping[str, object]) -> VectorFieldG:
    """Linear combination {name: coefficient} of basis elements."""
    out = VectorFieldG([{}] * 5)
    for name, c in terms.items():
        if c != 0:
            out = out + basis(name) * c
    return out


def _coefficient_matrix(fields):
    keys = sorted({(k, m) for f in fields for k, a in enumerate(f.coeffs) for m in a})
    return keys, [[f.coeffs[k].get(m, 0) for (k, m) in keys] for f in fields]


def coordinates(V: VectorFieldG):
    """Exact coordinates of V in the basis (raises ValueError if V is not in the algebra)."""
    fields = [BASIS[n] for n in BASIS_NAMES]
    keys = sorted({(k, m) for f in fields + [V] for k, a in enumerate(f.coeffs) for m in a})
    rows = [[Fraction(f.coeffs[k].get(m, 0)) for f in fields] + [Fraction(V.coeffs[k].get(m, 0))]
            for (k, m) in keys]
    # Gaussian elimination on the augmented system
    ncol = len(fields)
    piv_cols = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [e / pv for e in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        raise ValueError("vector field is not in the span of the basis")
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


def commutation_table():
    """8x8 table: entry [i][j] = coordinates of [B_i, B_j] in the basis."""
    return [[coordinates(commutator(BASIS[a], BASIS[b])) for b in BASIS_NAMES] for a in BASIS_NAMES]


def table_as_names():
    """Human-readable table {(a, b): {name: coefficient}} of the nonzero brackets."""
    out = {}
    for i, a in enumerate(BASIS_NAMES):
        for j, b in enumerate(BASIS_NAMES):
            coords = coordinates(commutator(BASIS[a], BASIS[b]))
            nz = {BASIS_NAMES[k]: c for k, c in enumerate(coords) if c != 0}
            if nz:
                out[(a, b)] = nz
    return out


# ---------------------------------------------------------------------------
# subalgebras

class Subalgebra:
    def __init__(self, sid, terms, params=(), domain=None, domain_text=""):
        self.id = sid
        self._terms = terms
        self.params = tuple(params)
        self._domain = domain or (lambda **kw: True)
        self.domain_text = domain_text

    @property
    def dim(self):
        return len(self._terms({p: 0.5 for p in self.params}))

    def check_params(self, params: Mapping):
        missing = [p for p in self.params if p not in params]
        extra = [p for p in params if p not in self.params]
        if missing or extra:
            raise ParameterOutOfDomain(f"{self.id}: expected parameters {self.params}, got {sorted(params)}")
        if not self._domain(**params):
            raise ParameterOutOfDomain(f"{self.id}: parameters {dict(params)} violate {self.domain_text}")

    def terms(self, params: Mapping = None):
        params = dict(params or {})
        self.check_params(params)
        return self._terms(params)

    def basis(self, params: Mapping = None):
        return [combo(t) for t in self.terms(params)]

    def describe(self):
        return {"id": self.id, "dim": self.dim, "parameters": list(self.params),
                "domain": self.domain_text, "basis": _symbolic_terms(self._terms, self.params)}


def _symbolic_terms(fn, params):
    """Render basis elements with parameters left symbolic (by probing linearity)."""
    base = fn({p: 0.0 for p in params})
    out = []
    for i, t0 in enumerate(base):
        coeffs = {k: _num(v) for k, v in t0.items() if v != 0}
        desc = {k: [_num(v)] for k, v in coeffs.items()}
        for p in params:
            probe = {q: 0.0 for q in params}
            probe[p] = 1.0
            t1 = fn(probe)[i]
            for k in set(t1) | set(t0):
                d = t1.get(k, 0) - t0.get(k, 0)
                if d != 0:
                    desc.setdefault(k, [0])
                    d = _num(d)
                    desc[k].append(p if d == 1 else ("-" + p if d == -1 else f"{d}*{p}"))
        parts = []
        for k in BASIS_NAMES:
            if k in desc:
                items = [str(e) for e in desc[k] if e != 0]
                parts.append("(" + " + ".join(items) + ")*" + PRETTY[k] if len(items) > 1 or items[0] != "1"
                             else PRETTY[k])
        out.append(" + ".join(parts))
    return out


def _num(v):
    v = float(v)
    return int(v) if v.is_integer() else v


def _sub(sid, fn, params=(), domain=None, text=""):
    return Subalgebra(sid, fn, params, domain, text)


SUBALGEBRAS_1D = {s.id: s for s in [
    _sub("1.1", lambda p: [{"Pt": 1, "J": p["kappa"]}], ("kappa",), lambda kappa: kappa in (0, 1), "kappa in {0,1}"),
    _sub("1.2", lambda p: [{"Pt": 1, "Gy": 1}]),
    _sub("1.3", lambda p: [{"D": 1, "J": 2 * p["kappa"]}], ("kappa",), lambda kappa: kappa >= 0, "kappa >= 0"),
    _sub("1.4", lambda p: [{"Pt": 1, "Pi": 1, "J": p["kappa"]}], ("kappa",), lambda kappa: kappa >= 0, "kappa >= 0"),
    _sub("1.5", lambda p: [{"Pt": 1, "Pi": 1, "J": 1, "Gx": p["mu"], "Py": -p["mu"]}], ("mu",),
         lambda mu: mu > 0, "mu > 0"),
    _sub("1.6", lambda p: [{"J": 1}]),
    _sub("1.7", lambda p: [{"Gx": 1, "Py": -1}]),
    _sub("1.8", lambda p: [{"Py": 1}]),
]}

SUBALGEBRAS_2D = {s.id: s for s in [
    _sub("2.1", lambda p: [{"Pt": 1}, {"D": 1, "J": p["kappa"]}], ("kappa",), lambda kappa: kappa >= 0, "kappa >= 0"),
    _sub("2.2", lambda p: [{"Pt": 1}, {"J": 1}]),
    _sub("2.3", lambda p: [{"D": 1}, {"J": 1}]),
    _sub("2.4", lambda p: [{"Pt": 1, "Pi": 1}, {"J": 1}]),
    _sub("2.5", lambda p: [{"Pt": 1, "Pi": 1, "J": 1, "Gy": p["mu"], "Px": p["mu"]}, {"Gx": 1, "Py": -1}],
         ("mu",), lambda mu: mu >= 0, "mu >= 0"),
    _sub("2.6", lambda p: [{"Gx": 1, "Py": -1}, {"Gy": 1, "Px": p["mu"]}], ("mu",), lambda mu: mu > 0, "mu > 0"),
    _sub("2.7", lambda p: [{"Py": 1}, {"Pt": 1, "Gx": p["mu"], "Gy": p["nu"]}], ("mu", "nu"),
         lambda mu, nu: mu >= 0 and nu >= 0 and (abs(mu * mu + nu * nu) < 1e-12 or abs(mu * mu + nu * nu - 1) < 1e-12),
         "mu, nu >= 0 and mu^2 + nu^2 in {0, 1}"),
    _sub("2.8", lambda p: [{"Py": 1}, {"D": 1}]),
    _sub("2.9", lambda p: [{"Py": 1}, {"Px": 1}]),
    _sub("2.10", lambda p: [{"Py": 1}, {"Gy": 1}]),
    _sub("2.11", lambda p: [{"Py": 1}, {"Gx": 1, "Gy": p["mu"]}], ("mu",), lambda mu: mu >= 0, "mu >= 0"),
    _sub("2.12", lambda p: [{"Py": 1}, {"Gy": 1, "Px": 1}]),
]}


def subalgebra(sid: str) -> Subalgebra:
    key = sid[1:] if sid.startswith("g") else sid
    for table in (SUBALGEBRAS_1D, SUBALGEBRAS_2D):
        if key in table:
            return table[key]
    raise ConfigError(f"unknown subalgebra {sid!r}")


def subalgebras(dim: int):
    if dim == 1:
        return list(SUBALGEBRAS_1D.values())
    if dim == 2:
        return list(SUBALGEBRAS_2D.values())
    raise ConfigError("dim must be 1 or 2")


def _float_vector(V: VectorFieldG, keys):
    return np.array([float(V.coeffs[k].get(m, 0)) for (k, m) in keys])


def span_residual(elements, V: VectorFieldG) -> float:
    """Coefficient-wise residual of the least-squares projection of V on span(elements)."""
    keys = sorted({(k, m) for f in list(elements) + [V] for k, a in enumerate(f.coeffs) for m in a})
    if not keys:
        return 0.0
    target = _float_vector(V, keys)
    if not elements:
        return float(np.max(np.abs(target))) if target.size else 0.0
    A = np.column_stack([_float_vector(e, keys) for e in elements])
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    return float(np.max(np.abs(A @ coef - target)))


def closure_check_fields(elements, tol=1e-12) -> bool:
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if span_residual(elements, commutator(a, b)) >= tol:
                return False
    return True


def subalgebra_closure_check(s, params: Mapping = None, tol=1e-12) -> bool:
    """True iff every pairwise commutator of the basis lies in its span."""
    if isinstance(s, str):
        s = subalgebra(s)
    if isinstance(s, Subalgebra):
        elements = s.basis(params)
    else:
        elements = list(s)
    return closure_check_fields(elements, tol)


def sample_parameters(s: Subalgebra, n=5, seed=0):
    """n admissible parameter assignments (deterministic)."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        p = {}
        if s.id == "1.1":
            p["kappa"] = k % 2
        elif s.id == "2.7":
            if k == 0:
                p = {"mu": 0.0, "nu": 0.0}
            else:
                a = rng.uniform(0, math.pi / 2) if k > 2 else (0.0 if k == 1 else math.pi / 2)
                p = {"mu": math.cos(a), "nu": math.sin(a)}
        else:
            for name in s.params:
                p[name] = float(rng.uniform(0.05, 3.0)) if k else (0.0 if s.id not in ("1.5", "2.6") else 1.0)
        out.append(p)
    return out


# ---------------------------------------------------------------------------
# action on fields

def characteristic(V: VectorFieldG, t, x, y, jets):
    """Characteristic (eta^u - xi.grad u, eta^v - xi.grad v) from a jet array (2,10,...)."""
    u, v = jets[0, 0], jets[1, 0]
    xt, xx, xy, eu, ev = V.evaluate(t, x, y, u, v)
    qu = eu - xt * jets[0, 1] - xx * jets[0, 2] - xy * jets[0, 3]
    qv = ev - xt * jets[1, 1] - xx * jets[1, 2] - xy * jets[1, 3]
    return qu, qv


def apply_to_field(V: VectorFieldG, field: SpaceTimeField, p: Point):
    if field.is_singular(p):
        from .errors import SingularPoint
        raise SingularPoint(f"{p} lies in the singular set of {field.name}")
    jets = field.jets(np.float64(p.t), np.float64(p.x), np.float64(p.y))
    qu, qv = characteristic(V, p.t, p.x, p.y, jets)
    return float(qu), float(qv)
