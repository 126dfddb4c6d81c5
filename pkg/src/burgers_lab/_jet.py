"""Second-order truncated Taylor arithmetic in (t, x, y).

Internal helper used to get exact first and second partial derivatives of
composite closed-form expressions.  A Jet holds the value, gradient (3, ...)
and symmetric Hessian (3, 3, ...) of a scalar function at a batch of points.
"""
import numpy as np

# order of the flattened derivative vector used throughout the package
LABELS = ("", "t", "x", "y", "tt", "tx", "ty", "xx", "xy", "yy")
_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class Jet:
    __slots__ = ("f", "g", "h")

    def __init__(self, f, g, h):
        self.f = f
        self.g = g
        self.h = h

    # constructors ---------------------------------------------------------
    @staticmethod
    def const(c, shape):
        c = np.broadcast_to(np.asarray(c, dtype=float), shape).copy()
        return Jet(c, np.zeros((3,) + shape), np.zeros((3, 3) + shape))

    @staticmethod
    def variables(t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, y)))
        shape = t.shape
        out = []
        for k, a in enumerate((t, x, y)):
            g = np.zeros((3,) + shape)
            g[k] = 1.0
            out.append(Jet(a.copy(), g, np.zeros((3, 3) + shape)))
        return out

    @property
    def shape(self):
        return self.f.shape

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.const(other, self.f.shape)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.f + other, self.g, self.h)
        return Jet(self.f + other.f, self.g + other.g, self.h + other.h)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.f, -self.g, -self.h)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.f * other, self.g * other, self.h * other)
        f = self.f * other.f
        g = self.g * other.f + self.f * other.g
        outer = self.g[:, None] * other.g[None, :]
        h = self.h * other.f + self.f * other.h + outer + np.swapaxes(outer, 0, 1)
        return Jet(f, g, h)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if p == 2:
            return self * self
        f = self.f
        return self.unary(f ** p, p * f ** (p - 1), p * (p - 1) * f ** (p - 2))

    # composition ----------------------------------------------------------
    def unary(self, d0, d1, d2):
        """Compose with a scalar function whose value and first two derivatives at self.f are given."""
        g = d1 * self.g
        h = d1 * self.h + d2 * (self.g[:, None] * self.g[None, :])
        return Jet(np.asarray(d0, dtype=float) * np.ones_like(self.f), g, h)

    def reciprocal(self):
        r = 1.0 / self.f
        return self.unary(r, -r * r, 2 * r * r * r)


def compose2(a, b, w, w1, w2, w11, w12, w22):
    """Jet of W(a, b) from the partials of W evaluated at (a.f, b.f)."""
    g = w1 * a.g + w2 * b.g
    ab = a.g[:, None] * b.g[None, :]
    h = (w1 * a.h + w2 * b.h + w11 * (a.g[:, None] * a.g[None, :])
         + w12 * (ab + np.swapaxes(ab, 0, 1)) + w22 * (b.g[:, None] * b.g[None, :]))
    return Jet(np.asarray(w, dtype=float) * np.ones_like(a.f), g, h)


def exp(a):
    e = np.exp(a.f)
    return a.unary(e, e, e)


def log(a):
    return a.unary(np.log(a.f), 1.0 / a.f, -1.0 / a.f ** 2)


def sqrt(a):
    s = np.sqrt(a.f)
    return a.unary(s, 0.5 / s, -0.25 / (s * a.f))


def sin(a):
    s, c = np.sin(a.f), np.cos(a.f)
    return a.unary(s, c, -s)


def cos(a):
    s, c = np.sin(a.f), np.cos(a.f)
    return a.unary(c, -s, -c)


def tanh(a):
    th = np.tanh(a.f)
    d1 = 1 - th * th
    return a.unary(th, d1, -2 * th * d1)


def arctan(a):
    d1 = 1.0 / (1 + a.f ** 2)
    return a.unary(np.arctan(a.f), d1, -2 * a.f * d1 * d1)


def arctan2(yj, xj):
    """Jet of the polar angle; gradient (-y, x)/r^2 as usual."""
    x, y = xj.f, yj.f
    r2 = x * x + y * y
    a1 = -y / r2    # d/dx
    a2 = x / r2     # d/dy
    a11 = 2 * x * y / r2 ** 2
    a22 = -2 * x * y / r2 ** 2
    a12 = (y * y - x * x) / r2 ** 2
    return compose2(xj, yj, np.arctan2(y, x), a1, a2, a11, a12, a22)


def to_array(j):
    """Flatten a Jet into the (10, ...) layout given by LABELS."""
    parts = [j.f, j.g[0], j.g[1], j.g[2]]
    parts += [j.h[a, b] for a, b in _PAIRS]
    return np.stack([np.broadcast_to(p, j.f.shape) for p in parts])


def from_array(arr):
    arr = np.asarray(arr, dtype=float)
    f = arr[0]
    g = arr[1:4].copy()
    h = np.empty((3, 3) + f.shape)
    for k, (a, b) in enumerate(_PAIRS):
        h[a, b] = arr[4 + k]
        h[b, a] = arr[4 + k]
    return Jet(f.copy(), g, h)


def compose_array(arr, tj, xj, yj):
    """Jet of F(t(.), x(.), y(.)) given F's derivative array (10, ...) at the inner values."""
    inner = (tj, xj, yj)
    f1 = (arr[1], arr[2], arr[3])
    f2 = {}
    for k, (a, b) in enumerate(_PAIRS):
        f2[(a, b)] = f2[(b, a)] = arr[4 + k]
    g = sum(f1[i] * inner[i].g for i in range(3))
    h = sum(f1[i] * inner[i].h for i in range(3))
    for i in range(3):
        for j in range(3):
            h = h + f2[(i, j)] * (inner[i].g[:, None] * inner[j].g[None, :])
    return Jet(np.asarray(arr[0], dtype=float).copy(), g, h)
