"""Scalar domains shared by the series, Fourier and polynomial types.

Two modes are supported with identical semantics:

* exact -- ``int``, :class:`fractions.Fraction` and :class:`GaussianRational`
  (a pair of fractions ``re + i*im``); no rounding ever happens;
* float -- Python ``float``/``complex`` (and numpy scalars).

Anything else that implements ring arithmetic (polynomials, nested
series) is accepted as a *generic* scalar; the helpers below dispatch on
the methods such objects provide.
"""
from __future__ import annotations

import cmath
import numbers
from fractions import Fraction

import numpy as np


class GaussianRational:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # construction helpers -------------------------------------------------
    @staticmethod
    def make(re, im):
        """Collapse to a plain Fraction when the imaginary part vanishes."""
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else complex(self) + other
        return GaussianRational.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else complex(self) - other
        return GaussianRational.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else other - complex(self)
        return GaussianRational.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else complex(self) * other
        a, b = self.re, self.im
        c, d = p
        return GaussianRational.make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def _inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational.make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else complex(self) / other
        return self * GaussianRational(*p)._inverse()

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented if not _is_float(other) else other / complex(self)
        return GaussianRational(*p) * self._inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self._inverse()) ** (-n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if _is_float(other):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_exact(self)


I = GaussianRational(0, 1)


def _is_float(x):
    return isinstance(x, (float, complex, np.floating, np.complexfloating))


def is_exact(x):
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


def is_zero(x):
    f = getattr(x, "is_zero", None)
    if f is not None:
        return f()
    return x == 0


def recip(x):
    """Multiplicative inverse of a scalar; generic scalars must provide ``reciprocal``."""
    f = getattr(x, "reciprocal", None)
    if f is not None:
        return f()
    if isinstance(x, (int, Fraction)):
        return 1 / Fraction(x)
    return 1 / x


def div_int(x, k):
    """``x / k`` for an integer k, staying exact in exact mode."""
    if _is_float(x):
        return x / k
    return x * Fraction(1, k)


def conj(x):
    f = getattr(x, "conjugate", None)
    if f is not None:
        return f()
    return x


def scalar_log(x):
    """Logarithm of a constant term; exact only for the unit."""
    f = getattr(x, "log", None)
    if f is not None:
        return f()
    if x == 1:
        return Fraction(0) if is_exact(x) else 0.0
    if is_exact(x):
        raise ValueError("logarithm of an exact non-unit constant is not exact")
    return cmath.log(x)


def scalar_exp(x):
    f = getattr(x, "exp", None)
    if f is not None:
        return f()
    if x == 0:
        return Fraction(1) if is_exact(x) else 1.0
    if is_exact(x):
        raise ValueError("exponential of an exact nonzero constant is not exact")
    return cmath.exp(x)


def to_complex(x):
    return complex(x)


def magnitude(x):
    """Absolute size of a scalar (max coefficient for generic scalars)."""
    f = getattr(x, "max_abs_coeff", None)
    if f is not None:
        return f()
    return abs(complex(x)) if not isinstance(x, Fraction) else abs(x)


def parse_scalar(text):
    """Parse ``p/q``, ``a+bi`` style text, or a float literal."""
    s = text.strip().replace(" ", "")
    if s.endswith("i") or s.endswith("j"):
        body = s[:-1]
        # split at the last sign that is not an exponent sign or leading
        cut = None
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                cut = k
                break
        if cut is None:
            re_txt, im_txt = "0", body
        else:
            re_txt, im_txt = body[:cut], body[cut:]
        if im_txt in ("", "+"):
            im_txt = "1"
        elif im_txt == "-":
            im_txt = "-1"
        re_v, im_v = parse_scalar(re_txt), parse_scalar(im_txt)
        if is_exact(re_v) and is_exact(im_v):
            return GaussianRational.make(re_v, im_v)
        return complex(float(re_v), float(im_v))
    try:
        return Fraction(s)
    except ValueError:
        return float(s)


def format_exact(x):
    """Inverse of :func:`parse_scalar` for exact scalars."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return str(x.re)
        sign = "+" if x.im >= 0 else "-"
        im = abs(x.im)
        if x.re == 0:
            return f"{'-' if sign == '-' else ''}{im}i"
        return f"{x.re}{sign}{im}i"
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    c = complex(x)
    if c.imag == 0:
        return repr(c.real)
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"


def exact_exp_i(k, theta):
    """``exp(i*k*theta)``; exact for theta in {0, pi}."""
    if theta == 0:
        return Fraction(1)
    if isinstance(theta, numbers.Real) and float(theta) == float(np.pi):
        return Fraction((-1) ** (k % 2))
    return cmath.exp(1j * k * theta)
