"""Explicit finite-difference solver for the 2D Burgers system on a rectangle.

Second-order central differences in space for both convection and diffusion,
forward Euler or the classical four-stage Runge-Kutta scheme in time, and
time-dependent Dirichlet data sampled from a given field (usually the exact
solution being cross-validated).  The solver exists to check exact solutions,
not to be a CFD code, so no shock capturing and no implicit machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import ConfigError, UnstableStep
from .fields import SpaceTimeField

SCHEMES = ("euler", "rk4")
GROWTH_LIMIT = 1e3


@dataclass
class IbvpSetup:
    exact: SpaceTimeField                 # supplies initial and boundary data
    x_range: tuple
    y_range: tuple
    nx: int
    ny: int
    t0: float
    t1: float
    dt: Optional[float] = None            # default: cfl * min(dx^2, dy^2) / 4
    scheme: str = "euler"
    cfl: float = 1.0
    initial: Optional[SpaceTimeField] = None
    boundary: Optional[SpaceTimeField] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.nx < 3 or self.ny < 3:
            raise ConfigError("need at least 3 nodes per direction")
        if not self.t1 > self.t0:
            raise ConfigError("need t1 > t0")
        limit = self.stability_limit
        if self.dt is None:
            if not 0 < self.cfl <= 1:
                raise ConfigError("cfl must be in (0, 1]")
            dt = self.cfl * limit
            nsteps = math.ceil((self.t1 - self.t0) / dt - 1e-12)
            self.dt = (self.t1 - self.t0) / nsteps
        elif self.dt > limit * (1 + 1e-12):
            raise ConfigError(f"dt = {self.dt:g} exceeds the explicit stability bound {limit:g}")

    @property
    def x(self):
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def y(self):
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    @property
    def dx(self):
        return (self.x_range[1] - self.x_range[0]) / (self.nx - 1)

    @property
    def dy(self):
        return (self.y_range[1] - self.y_range[0]) / (self.ny - 1)

    @property
    def stability_limit(self):
        return min(self.dx ** 2, self.dy ** 2) / 4.0

    @property
    def n_steps(self):
        return int(round((self.t1 - self.t0) / self.dt))

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")


@dataclass
class State:
    t: float
    u: np.ndarray
    v: np.ndarray
    steps: int = 0
    meta: dict = dc_field(default_factory=dict)


def _sample(fld: SpaceTimeField, t, X, Y):
    u, v = fld.uv(np.full_like(X, t), X, Y)
    return np.array(u, dtype=float), np.array(v, dtype=float)


def rhs(u, v, dx, dy):
    """-(u u_x + v u_y) + Laplacian, on interior nodes (shape (nx-2, ny-2))."""
    def parts(f):
        c = f[1:-1, 1:-1]
        fx = (f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * dx)
        fy = (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * dy)
        lap = ((f[2:, 1:-1] - 2 * c + f[:-2, 1:-1]) / dx ** 2
               + (f[1:-1, 2:] - 2 * c + f[1:-1, :-2]) / dy ** 2)
        return fx, fy, lap

    uc, vc = u[1:-1, 1:-1], v[1:-1, 1:-1]
    ux, uy, lu = parts(u)
    vx, vy, lv = parts(v)
    return -(uc * ux + vc * uy) + lu, -(uc * vx + vc * vy) + lv


class Solver:
    def __init__(self, setup: IbvpSetup):
        self.setup = setup
        self.X, self.Y = setup.mesh()
        self._bmask = np.ones(self.X.shape, dtype=bool)
        self._bmask[1:-1, 1:-1] = False
        self._bfield = setup.boundary or setup.exact
        self._bX, self._bY = self.X[self._bmask], self.Y[self._bmask]

    def initial_state(self) -> State:
        s = self.setup
        u, v = _sample(s.initial or s.exact, s.t0, self.X, self.Y)
        scale = max(1.0, float(np.abs(u).max()), float(np.abs(v).max()))
        return State(s.t0, u, v, 0, {"scale0": scale})

    def _apply_bc(self, t, u, v):
        ub, vb = _sample(self._bfield, t, self._bX, self._bY)
        u[self._bmask] = ub
        v[self._bmask] = vb
        return u, v

    def _stage(self, t, u, v, ku, kv, h):
        un, vn = u.copy(), v.copy()
        un[1:-1, 1:-1] += h * ku
        vn[1:-1, 1:-1] += h * kv
        return self._apply_bc(t, un, vn)

    def step(self, state: State, dt=None) -> State:
        s = self.setup
        dt = s.dt if dt is None else dt
        if dt > s.stability_limit * (1 + 1e-12):
            raise ConfigError(f"dt = {dt:g} exceeds the explicit stability bound {s.stability_limit:g}")
        t, u, v = state.t, state.u, state.v
        if s.scheme == "euler":
            ku, kv = rhs(u, v, s.dx, s.dy)
            un, vn = self._stage(t + dt, u, v, ku, kv, dt)
        else:
            k1 = rhs(u, v, s.dx, s.dy)
            u2, v2 = self._stage(t + dt / 2, u, v, *k1, dt / 2)
            k2 = rhs(u2, v2, s.dx, s.dy)
            u3, v3 = self._stage(t + dt / 2, u, v, *k2, dt / 2)
            k3 = rhs(u3, v3, s.dx, s.dy)
            u4, v4 = self._stage(t + dt, u, v, *k3, dt)
            k4 = rhs(u4, v4, s.dx, s.dy)
            ku = (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6
            kv = (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6
            un, vn = self._stage(t + dt, u, v, ku, kv, dt)
        scale0 = state.meta.get("scale0", 1.0)
        big = max(float(np.abs(un).max()), float(np.abs(vn).max()))
        if not np.isfinite(big) or big > GROWTH_LIMIT * scale0:
            raise UnstableStep(f"solution grew to {big:g} at t = {t + dt:g}")
        return State(t + dt, un, vn, state.steps + 1, state.meta)

    def run(self, state: Optional[State] = None) -> State:
        state = state or self.initial_state()
        for _ in range(self.setup.n_steps):
            state = self.step(state)
        return state

    def error(self, state: State):
        """Max-norm difference from the exact field at the state's time."""
        ue, ve = _sample(self.setup.exact, state.t, self.X, self.Y)
        return float(max(np.abs(state.u - ue).max(), np.abs(state.v - ve).max()))


def step(setup: IbvpSetup, state: State, dt=None) -> State:
    return Solver(setup).step(state, dt)


def evolve(setup: IbvpSetup):
    solver = Solver(setup)
    final = solver.run()
    return final, solver.error(final)


@dataclass
class ConvergenceReport:
    family: str
    levels: list
    errors: list
    dts: list
    orders: list
    scheme: str
    exact_tol: float

    @property
    def exact(self):
        return all(e <= self.exact_tol for e in self.errors)

    @property
    def order(self):
        if self.exact:
            return "exact"
        return self.orders[-1] if self.orders else None

    def passed(self, min_order=1.5):
        if self.exact:
            return True
        return bool(self.orders) and min(self.orders) >= min_order

    def to_json(self, min_order=1.5):
        return {"family": self.family, "levels": self.levels, "errors": self.errors, "dt": self.dts,
                "observed_orders": [o if math.isfinite(o) else None for o in self.orders],
                "order": self.order, "scheme": self.scheme,
                "verdict": "pass" if self.passed(min_order) else "fail"}


def cross_validate(fld: SpaceTimeField, box, t_range=None, levels=(9, 17, 33), scheme="euler",
                   cfl=1.0, exact_tol=1e-10, snapshots=None) -> ConvergenceReport:
    """Evolve the field's own data on refined grids (dt tied to dx^2) and measure the error decay.

    ``box`` holds "x" and "y" ranges, and "t" unless ``t_range`` is given.
    Orders are log2(e_j / e_{j+1}), meaningful when each level halves dx.
    """
    if t_range is None:
        t_range = box["t"]
    t0, t1 = float(t_range[0]), float(t_range[1])
    errors, dts = [], []
    for n in levels:
        setup = IbvpSetup(fld, tuple(box["x"]), tuple(box["y"]), int(n), int(n), t0, t1, scheme=scheme, cfl=cfl)
        solver = Solver(setup)
        final = solver.run()
        errors.append(solver.error(final))
        dts.append(setup.dt)
        if snapshots is not None:
            snapshots.append((int(n), solver.X, solver.Y, final))
    orders = []
    for a, b in zip(errors, errors[1:]):
        orders.append(math.log2(a / b) if a > 0 and b > 0 else float("inf"))
    return ConvergenceReport(fld.name, [int(n) for n in levels], errors, dts, orders, scheme, exact_tol)


def write_snapshot_csv(path, X, Y, state: State):
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "y", "u", "v"])
        for x, y, u, v in zip(X.ravel(), Y.ravel(), state.u.ravel(), state.v.ravel()):
            w.writerow([repr(state.t), repr(float(x)), repr(float(y)), repr(float(u)), repr(float(v))])


def semi_discrete_residual(fld: SpaceTimeField, setup: IbvpSetup, t=None):
    """max |discrete right-hand side - u_t| of the exact field at interior nodes.

    Zero up to rounding when the stencils are exact for the field (affine and
    constant fields), whatever the time integrator does afterwards.
    """
    t = setup.t0 if t is None else t
    X, Y = setup.mesh()
    arr = fld.jets(np.full_like(X, t), X, Y)
    ku, kv = rhs(arr[0, 0], arr[1, 0], setup.dx, setup.dy)
    return float(max(np.abs(ku - arr[0, 1][1:-1, 1:-1]).max(), np.abs(kv - arr[1, 1][1:-1, 1:-1]).max()))
