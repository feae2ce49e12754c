"""Truncated univariate Taylor series (jets) for exact high-order derivatives.

A ``Jet`` of degree ``L`` holds ``c_0 .. c_L`` with
``f(t0 + t) = sum c_m t^m + O(t^(L+1))``.  Only pure (single-direction)
jets are supported; mixed partials are never needed by the radial
operators.
"""
from __future__ import annotations

import cmath
import math
import numbers

import numpy as np

from .errors import BranchError, DivisionByZeroJet

DEFAULT_DEGREE = 6


class Jet:
    __slots__ = ("c",)
    __array_priority__ = 1000

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    @classmethod
    def constant(cls, value, degree=DEFAULT_DEGREE):
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, degree=DEFAULT_DEGREE):
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = value
        if degree >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def value(self):
        return complex(self.c[0])

    def derivative(self, n):
        """``n``-th derivative at the base point."""
        if n > self.degree:
            raise ValueError(f"order {n} exceeds jet degree {self.degree}")
        return complex(self.c[n]) * math.factorial(n)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.degree != self.degree:
                raise ValueError("jets of different degree")
            return other.c
        if isinstance(other, numbers.Number):
            c = np.zeros_like(self.c)
            c[0] = other
            return c
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.c + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.c - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(o - self.c)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Jet(self.c * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(np.convolve(self.c, o)[: len(self.c)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            if other == 0:
                raise DivisionByZeroJet("division by zero scalar")
            return Jet(self.c / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Jet(o).inv()

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return self.inv() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            raise TypeError("jets support integer powers only")
        return self.powN(int(n))

    def inv(self):
        a = self.c
        if a[0] == 0:
            raise DivisionByZeroJet("inverse of a jet with zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for m in range(1, len(a)):
            b[m] = -b[0] * np.dot(a[1:m + 1], b[m - 1::-1][:m])
        return Jet(b)

    def exp(self):
        a = self.c
        b = np.zeros_like(a)
        b[0] = cmath.exp(a[0])
        for m in range(1, len(a)):
            i = np.arange(1, m + 1)
            b[m] = np.dot(i * a[1:m + 1], b[m - i]) / m
        return Jet(b)

    def sqrt(self):
        """Principal branch; the cut is the closed negative real axis."""
        a = self.c
        a0 = complex(a[0])
        if a0.imag == 0 and a0.real <= 0:
            raise BranchError(f"sqrt at {a0} lies on the branch cut")
        b = np.zeros_like(a)
        b[0] = cmath.sqrt(a0)
        for m in range(1, len(a)):
            s = np.dot(b[1:m], b[m - 1:0:-1]) if m > 1 else 0.0
            b[m] = (a[m] - s) / (2 * b[0])
        return Jet(b)

    def powN(self, n):
        if n < 0:
            return self.inv().powN(-n)
        result = Jet.constant(1.0, self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"Jet({np.array2string(self.c, precision=6)})"


def as_jet(value, degree):
    return value if isinstance(value, Jet) else Jet.constant(value, degree)


def exp(a):
    return a.exp() if isinstance(a, Jet) else cmath.exp(a)


def jet_arith(op, a, b=None):
    """Dispatch by name: ``add``, ``mul``, ``inv``, ``exp``, ``sqrt``, ``powN``.

    For ``powN`` pass the integer exponent as ``b``.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "exp":
        return a.exp()
    if op == "sqrt":
        return a.sqrt()
    if op == "powN":
        return a.powN(int(b))
    raise ValueError(f"unknown jet operation {op!r}")


def lift(point, var, degree):
    """Jets for every coordinate of ``point``; only ``var`` carries the direction."""
    return [Jet.variable(v, degree) if k == var else Jet.constant(v, degree)
            for k, v in enumerate(point)]


def nth_derivative(f, point, var, n, degree=None):
    """``d^n f / d point[var]^n`` at ``point``.

    ``f`` takes a list of jets (one per coordinate) and returns a jet.
    """
    degree = max(n, DEFAULT_DEGREE) if degree is None else degree
    if n > degree:
        raise ValueError(f"order {n} exceeds jet degree {degree}")
    out = f(lift(point, var, degree))
    return as_jet(out, degree).derivative(n)
