"""Sparse multivariate polynomials with exact coefficients.

Used as a *generic scalar* inside :class:`~virgeo.seriescore.TruncatedSeries`
so that the residue formulas for the Kirillov operators can be run
symbolically: feeding ``f = z + sum c_k z^(k+1)`` with ``c_k`` polynomial
variables yields the coefficient rules as exact polynomials.

Variables are small non-negative integers.  By convention index ``k >= 1``
is the coefficient ``c_k`` and index ``0`` is the fibre coordinate ``w``.
A monomial is packed into a Python int, ``EXP_BITS`` bits per variable, so
multiplying monomials is integer addition.
"""
from __future__ import annotations

from fractions import Fraction

from .scalars import GaussianRational, is_exact

EXP_BITS = 8
_MASK = (1 << EXP_BITS) - 1
MAX_VARS = 64


def _monomial(exps):
    m = 0
    for i, e in exps.items():
        if not 0 <= i < MAX_VARS:
            raise ValueError(f"variable index {i} out of range")
        if e:
            m |= e << (EXP_BITS * i)
    return m


def _decode(m):
    out = []
    i = 0
    while m:
        e = m & _MASK
        if e:
            out.append((i, e))
        m >>= EXP_BITS
        i += 1
    return out


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else {m: c for m, c in terms.items() if c != 0}

    @classmethod
    def var(cls, i, power=1):
        return cls({_monomial({i: power}): 1})

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, Poly) else cls.const(x)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return self
            other = Poly.const(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v == 0:
                t.pop(m, None)
            else:
                t[m] = _norm(v)
        out = Poly()
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return Poly()
            out = Poly()
            out.terms = {m: _norm(c * other) for m, c in self.terms.items()}
            return out
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t = {}
        get = t.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                t[m] = get(m, 0) + ca * cb
        out = Poly()
        out.terms = {m: _norm(c) for m, c in t.items() if c != 0}
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                raise ZeroDivisionError("division by a non-constant polynomial")
            other = other.constant_term()
        if isinstance(other, int):
            other = Fraction(other)
        return self * (1 / other)

    def __pow__(self, n):
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def reciprocal(self):
        if not self.is_constant() or self.is_zero():
            raise ZeroDivisionError("polynomial is not an invertible constant")
        c = self.constant_term()
        return Poly.const(_norm(1 / Fraction(c) if isinstance(c, int) else 1 / c))

    def conjugate(self):
        out = Poly()
        out.terms = {m: (c.conjugate() if hasattr(c, "conjugate") else c) for m, c in self.terms.items()}
        return out

    # queries --------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(m == 0 for m in self.terms)

    def constant_term(self):
        return self.terms.get(0, 0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_abs_coeff(self):
        if not self.terms:
            return 0
        return max(abs(c) if not isinstance(c, GaussianRational) else max(abs(c.re), abs(c.im))
                   for c in self.terms.values())

    def variables(self):
        vs = set()
        for m in self.terms:
            vs.update(i for i, _ in _decode(m))
        return vs

    def items(self):
        """Yield ``(exponents, coeff)`` with exponents as ``{var: power}``."""
        for m, c in self.terms.items():
            yield dict(_decode(m)), c

    def is_exact(self):
        return all(is_exact(c) for c in self.terms.values())

    # calculus / evaluation ------------------------------------------------
    def diff(self, i):
        shift = EXP_BITS * i
        one = 1 << shift
        t = {}
        for m, c in self.terms.items():
            e = (m >> shift) & _MASK
            if e:
                t[m - one] = _norm(c * e)
        out = Poly()
        out.terms = t
        return out

    def evaluate(self, values):
        """Evaluate at ``values[i]`` for each variable ``i`` (mapping or sequence)."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for i, e in _decode(m):
                term = term * values[i] ** e
            total = total + term
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = "*".join(("w" if i == 0 else f"c{i}") + (f"^{e}" if e > 1 else "") for i, e in _decode(m))
            parts.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(parts)


def c(k):
    """Polynomial variable for the coefficient ``c_k``."""
    return Poly.var(k)


def w():
    """Polynomial variable for the fibre coordinate."""
    return Poly.var(0)
