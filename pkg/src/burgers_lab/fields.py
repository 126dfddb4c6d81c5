"""Fields on (t, x, y): points, velocity fields with derivative access, grids."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _jet
from .errors import ConfigError, StencilHitsSingularity, StepTooSmall

LABELS = _jet.LABELS
EXACT = "exact"
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Point:
    t: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("t", "x", "y"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"Point.{name} must be finite, got {val!r}")
            object.__setattr__(self, name, val)

    def as_tuple(self):
        return (self.t, self.x, self.y)

    def shifted(self, axis, step):
        c = [self.t, self.x, self.y]
        c[axis] += step
        return Point(*c)


def parse_multi_index(mi) -> tuple:
    """Accept "xy", "", (0,1,1) or [0,1,1]; return counts (nt, nx, ny)."""
    if isinstance(mi, str):
        counts = [mi.count("t"), mi.count("x"), mi.count("y")]
        if sum(counts) != len(mi):
            raise ConfigError(f"bad multi-index {mi!r}")
    else:
        counts = [int(c) for c in mi]
        if len(counts) != 3 or min(counts) < 0:
            raise ConfigError(f"bad multi-index {mi!r}")
    if sum(counts) > 2:
        raise ConfigError("derivatives above total order 2 are not supported")
    return tuple(counts)


def label_of(mi) -> str:
    nt, nx, ny = parse_multi_index(mi)
    return "t" * nt + "x" * nx + "y" * ny


def _component_index(component):
    if component in (0, "u"):
        return 0
    if component in (1, "v"):
        return 1
    raise ConfigError(f"component must be 'u' or 'v', got {component!r}")


def _never(t, x, y):
    return np.zeros(np.broadcast(np.asarray(t), np.asarray(x), np.asarray(y)).shape, dtype=bool)


class SpaceTimeField:
    """Velocity field (u, v) of the Burgers system with derivatives up to order 2.

    Built either from a jet function (analytic mode) returning two
    :class:`Jet` objects or an array of shape (2, 10, ...), or from a plain
    vectorised evaluator ``uv(t, x, y) -> (u, v)`` (finite-difference mode).
    """

    def __init__(self, uv=None, jet=None, singular=None, name="field", meta=None, fd_step=None):
        if uv is None and jet is None:
            raise ConfigError("need uv or jet")
        self._uv = uv
        self._jet = jet
        self._singular = singular or _never
        self.name = name
        self.meta = dict(meta or {})
        self._fd_step = fd_step

    @property
    def derivative_mode(self):
        return "analytic" if self._jet is not None else "finite-difference"

    # -- singular set -----------------------------------------------------
    def singular(self, t, x, y):
        return np.asarray(self._singular(t, x, y), dtype=bool)

    def is_singular(self, p: Point) -> bool:
        return bool(self.singular(p.t, p.x, p.y))

    # -- values -----------------------------------------------------------
    def uv(self, t, x, y):
        """Vectorised (u, v)."""
        if self._uv is not None:
            u, v = self._uv(t, x, y)
            shape = np.broadcast(np.asarray(t), np.asarray(x), np.asarray(y)).shape
            return (np.broadcast_to(np.asarray(u, dtype=float), shape),
                    np.broadcast_to(np.asarray(v, dtype=float), shape))
        arr = self.jets(t, x, y)
        return arr[0, 0], arr[1, 0]

    def eval(self, p: Point):
        u, v = self.uv(np.float64(p.t), np.float64(p.x), np.float64(p.y))
        return float(u), float(v)

    def jets(self, t, x, y):
        """All derivatives up to order 2: array (2, 10, ...) ordered as LABELS."""
        if self._jet is None:
            return fd_jets(self, t, x, y, h=self._fd_step)
        res = self._jet(t, x, y)
        if isinstance(res, np.ndarray):
            return res
        ju, jv = res
        return np.stack([_jet.to_array(ju), _jet.to_array(jv)])

    def deriv(self, p: Point, component, multi_index) -> float:
        lab = label_of(multi_index)
        c = _component_index(component)
        if self._jet is None:
            if lab == "":
                return self.eval(p)[c]
            return fd_derivative(self, p, component, multi_index, h=self._fd_step)
        arr = self.jets(np.float64(p.t), np.float64(p.x), np.float64(p.y))
        k = LABELS.index(_canonical(lab))
        return float(arr[c, k])


def _canonical(lab):
    order = {"t": 0, "x": 1, "y": 2}
    return "".join(sorted(lab, key=order.__getitem__))


def from_jets(fn, singular=None, name="field", meta=None):
    """Wrap fn(tj, xj, yj) -> (Jet u, Jet v) operating on jets as a field."""
    def jet(t, x, y):
        tj, xj, yj = _jet.Jet.variables(t, x, y)
        return fn(tj, xj, yj)
    return SpaceTimeField(jet=jet, singular=singular, name=name, meta=meta)


# ---------------------------------------------------------------------------
# finite differences

_D1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_D2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def default_step(p: Point, axis: int) -> float:
    return 1e-4 * max(1.0, abs(p.as_tuple()[axis]))


def _stencil(nt, nx, ny):
    """List of (offset-in-steps along (t,x,y), weight) for the 4th-order stencil."""
    axes = [a for a, n in enumerate((nt, nx, ny)) for _ in range(n)]
    if not axes:
        return [((0, 0, 0), 1.0)]
    if len(axes) == 1:
        out = []
        for k, w in _D1:
            off = [0, 0, 0]
            off[axes[0]] = k
            out.append((tuple(off), w))
        return out
    if axes[0] == axes[1]:
        out = []
        for k, w in _D2:
            off = [0, 0, 0]
            off[axes[0]] = k
            out.append((tuple(off), w))
        return out
    out = []
    for k1, w1 in _D1:
        for k2, w2 in _D1:
            off = [0, 0, 0]
            off[axes[0]] = k1
            off[axes[1]] = k2
            out.append((tuple(off), w1 * w2))
    return out


def fd_derivative(field: SpaceTimeField, p: Point, component, multi_index, h: Optional[float] = None) -> float:
    """Central 4th-order finite-difference derivative of one component."""
    counts = parse_multi_index(multi_index)
    c = _component_index(component)
    steps = []
    for axis in range(3):
        scale = max(1.0, abs(p.as_tuple()[axis]))
        hh = default_step(p, axis) if h is None else float(h)
        if counts[axis] and hh < 64 * _EPS * scale:
            raise StepTooSmall(f"step {hh:g} below 64 eps * {scale:g}")
        if hh <= 0:
            raise StepTooSmall("step must be positive")
        steps.append(hh)
    stencil = _stencil(*counts)
    pts = np.array([[p.t + o[0] * steps[0], p.x + o[1] * steps[1], p.y + o[2] * steps[2]]
                    for o, _ in stencil])
    if np.any(field.singular(pts[:, 0], pts[:, 1], pts[:, 2])):
        raise StencilHitsSingularity(f"stencil around {p} meets the singular set")
    vals = field.uv(pts[:, 0], pts[:, 1], pts[:, 2])[c]
    if sum(counts):
        # derivative weights sum to zero; subtracting the centre value keeps constants exact
        vals = vals - field.uv(np.float64(p.t), np.float64(p.x), np.float64(p.y))[c]
    weights = np.array([w for _, w in stencil])
    denom = 1.0
    for axis, n in enumerate(counts):
        denom *= steps[axis] ** n
    return float(np.dot(weights, vals) / denom)


def fd_jets(field: SpaceTimeField, t, x, y, h=None):
    """Vectorised finite-difference jets (2, 10, ...) from field.uv only."""
    t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, y)))
    coords = (t, x, y)
    if h is None:
        steps = [1e-4 * np.maximum(1.0, np.abs(a)) for a in coords]
    else:
        steps = [np.full(t.shape, float(h)) for _ in coords]
    out = np.empty((2, 10) + t.shape)
    u0, v0 = field.uv(t, x, y)
    for k, lab in enumerate(LABELS):
        counts = parse_multi_index(lab)
        acc = np.zeros((2,) + t.shape)
        for off, w in _stencil(*counts):
            u, v = field.uv(t + off[0] * steps[0], x + off[1] * steps[1], y + off[2] * steps[2])
            if k:
                u, v = u - u0, v - v0
            acc[0] += w * u
            acc[1] += w * v
        denom = np.ones(t.shape)
        for axis, n in enumerate(counts):
            denom = denom * steps[axis] ** n
        out[:, k] = acc / denom
    return out


def richardson_order(field: SpaceTimeField, p: Point, component, multi_index, h0: float = 0.1):
    """Observed convergence order of the fd stencil using h0, h0/2, h0/4.

    When the field carries analytic derivatives these serve as the
    reference; otherwise successive differences are used.  Returns the
    sentinel ``EXACT`` when the errors sit at rounding level.
    """
    hs = [h0, h0 / 2, h0 / 4]
    vals = [fd_derivative(field, p, component, multi_index, h=h) for h in hs]
    scale = max(1.0, max(abs(v) for v in vals))
    n = sum(parse_multi_index(multi_index))
    floor = 1e3 * _EPS * scale / max(hs[-1], 1e-300) ** n
    if field.derivative_mode == "analytic":
        ref = field.deriv(p, component, multi_index)
        errs = [abs(v - ref) for v in vals]
        if max(errs) <= floor:
            return EXACT
        errs = [max(e, 1e-300) for e in errs]
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        return float(slope)
    e1 = abs(vals[0] - vals[1])
    e2 = abs(vals[1] - vals[2])
    if max(e1, e2) <= floor:
        return EXACT
    return float(math.log2(max(e1, 1e-300) / max(e2, 1e-300)))


# ---------------------------------------------------------------------------
# grids

def _axis(vals, name):
    arr = np.asarray(vals, dtype=float).ravel()
    if arr.size < 2:
        raise ConfigError(f"{name} axis needs at least 2 points")
    if np.any(np.diff(arr) <= 0):
        raise ConfigError(f"{name} axis must be strictly increasing")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} axis must be finite")
    return arr


@dataclass(frozen=True)
class Grid:
    t_values: np.ndarray
    x_values: np.ndarray
    y_values: np.ndarray
    mask: Optional[Callable] = dc_field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "t_values", _axis(self.t_values, "t"))
        object.__setattr__(self, "x_values", _axis(self.x_values, "x"))
        object.__setattr__(self, "y_values", _axis(self.y_values, "y"))

    @classmethod
    def box(cls, t_range, x_range, y_range, n=(3, 5, 5)):
        if isinstance(n, int):
            n = (n, n, n)
        return cls(np.linspace(*t_range, n[0]), np.linspace(*x_range, n[1]), np.linspace(*y_range, n[2]))

    @classmethod
    def from_spec(cls, spec):
        """spec: {"t":[a,b,n], "x":[a,b,n], "y":[a,b,n]} or explicit value lists under "values"."""
        try:
            if "values" in spec:
                v = spec["values"]
                return cls(v["t"], v["x"], v["y"])
            axes = []
            for key in ("t", "x", "y"):
                a, b, n = spec[key]
                axes.append(np.linspace(float(a), float(b), int(n)))
            return cls(*axes)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid spec: {exc}") from exc

    @property
    def shape(self):
        return (self.t_values.size, self.x_values.size, self.y_values.size)

    def mesh(self):
        return np.meshgrid(self.t_values, self.x_values, self.y_values, indexing="ij")

    def points(self, field: Optional[SpaceTimeField] = None):
        """Flattened (t, x, y) arrays row-major over (t, x, y), minus masked points."""
        T, X, Y = (a.ravel() for a in self.mesh())
        keep = np.ones(T.shape, dtype=bool)
        if self.mask is not None:
            keep &= ~np.asarray(self.mask(T, X, Y), dtype=bool)
        if field is not None:
            keep &= ~field.singular(T, X, Y)
        return T[keep], X[keep], Y[keep], int((~keep).sum())


def export_csv(field: SpaceTimeField, grid: Grid, path, residuals: bool = False):
    """Write t,x,y,u,v[,R1,R2] rows with round-trip (17 significant digit) formatting."""
    T, X, Y, _ = grid.points(field)
    arr = field.jets(T, X, Y)
    cols = [T, X, Y, arr[0, 0], arr[1, 0]]
    header = ["t", "x", "y", "u", "v"]
    if residuals:
        from .verify import residual_arrays
        res = residual_arrays(arr)
        cols += [res["R1"], res["R2"]]
        header += ["R1", "R2"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([format(float(v), ".17g") for v in row])
    return len(T)


def sample_points(rng, box, n):
    """n uniform random points in a box ((t0,t1),(x0,x1),(y0,y1))."""
    return tuple(rng.uniform(lo, hi, n) for lo, hi in box)
