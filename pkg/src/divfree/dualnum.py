"""Forward-mode dual numbers for exact first derivatives.

A Dual carries a value and one derivative channel; arithmetic propagates the
chain rule.  Payloads may be floats or numpy arrays, so a single derivative
pass vectorizes over a batch of states.  The coefficient counts in this
package are tiny (at most C(8, p)), which keeps one-pass-per-coefficient
forward mode cheap and avoids tape machinery.
"""
from __future__ import annotations

import numpy as np


class Dual:
    __slots__ = ("val", "eps")
    # keep numpy from elementwise-broadcasting over us; defer to our r-ops
    __array_ufunc__ = None

    def __init__(self, val, eps=0.0):
        self.val = val
        self.eps = eps

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val,
                        self.eps * other.val + self.val * other.eps)
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(self.val * inv,
                        (self.eps - self.val * other.eps * inv) * inv)
        return Dual(self.val / other, self.eps / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        return Dual(other * inv, -other * self.eps * inv * inv)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(n * log(self))
        if n == 0:
            return Dual(np.ones_like(np.asarray(self.val, float)) if _is_array(self.val) else 1.0, 0.0)
        if n == 1:
            return self
        if isinstance(n, int) or float(n).is_integer():
            base = self.val ** (int(n) - 1)
            return Dual(base * self.val, n * base * self.eps)
        base = self.val ** (n - 1.0)  # requires positive value
        return Dual(base * self.val, n * base * self.eps)

    def __rpow__(self, other):
        return exp(self * np.log(other))

    # comparisons look only at the value channel
    def __lt__(self, other):
        return self.val < _value(other)

    def __le__(self, other):
        return self.val <= _value(other)

    def __gt__(self, other):
        return self.val > _value(other)

    def __ge__(self, other):
        return self.val >= _value(other)


def _is_array(x):
    return isinstance(x, np.ndarray)


def _value(x):
    return x.val if isinstance(x, Dual) else x


def value(x):
    """Value channel of a Dual, or x itself."""
    return x.val if isinstance(x, Dual) else x


def derivative(x, like=None):
    """Derivative channel of a Dual, zero for constants.

    With ``like`` given, the result is broadcast to that array's shape.
    """
    eps = x.eps if isinstance(x, Dual) else 0.0
    if like is not None:
        return np.broadcast_to(np.asarray(eps, dtype=float), np.shape(like)).copy()
    return eps


def sqrt(x):
    if isinstance(x, Dual):
        r = np.sqrt(x.val)
        return Dual(r, 0.5 * x.eps / r)
    return np.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        e = np.exp(x.val)
        return Dual(e, e * x.eps)
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(np.log(x.val), x.eps / x.val)
    return np.log(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(np.sin(x.val), np.cos(x.val) * x.eps)
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(np.cos(x.val), -np.sin(x.val) * x.eps)
    return np.cos(x)


def tan(x):
    if isinstance(x, Dual):
        c = np.cos(x.val)
        return Dual(np.tan(x.val), x.eps / (c * c))
    return np.tan(x)


def sinh(x):
    if isinstance(x, Dual):
        return Dual(np.sinh(x.val), np.cosh(x.val) * x.eps)
    return np.sinh(x)


def cosh(x):
    if isinstance(x, Dual):
        return Dual(np.cosh(x.val), np.sinh(x.val) * x.eps)
    return np.cosh(x)


def tanh(x):
    if isinstance(x, Dual):
        t = np.tanh(x.val)
        return Dual(t, (1.0 - t * t) * x.eps)
    return np.tanh(x)


def arctan(x):
    if isinstance(x, Dual):
        return Dual(np.arctan(x.val), x.eps / (1.0 + x.val * x.val))
    return np.arctan(x)


FUNCTIONS = {
    "sqrt": sqrt,
    "exp": exp,
    "log": log,
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "atan": arctan,
    "arctan": arctan,
}
