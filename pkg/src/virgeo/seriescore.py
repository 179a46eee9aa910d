"""Truncated formal power/Laurent series and trigonometric polynomials.

A :class:`TruncatedSeries` stores the coefficients ``a_low .. a_order`` of
``sum a_k z^k``; everything of degree greater than ``order`` is unknown.
Every operation returns the order through which its result is guaranteed
correct given the orders of its operands, so precision is never lost
silently.

Scalars may be exact (``Fraction``/``GaussianRational``), floating point
(``complex``) or any generic ring element such as :class:`~virgeo.polynomial.Poly`
or another :class:`TruncatedSeries` (which is how bivariate expansions are
built).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (BranchPoint, CompositionDomain, DegenerateDivisor,
                     LogarithmicTerm, NotInvertible)
from .scalars import (GaussianRational, conj, div_int, format_exact, is_exact,
                      is_zero, parse_scalar, recip, scalar_exp, scalar_log)


def _zero_like(x):
    if isinstance(x, TruncatedSeries):
        return TruncatedSeries.zero(x.order, low=0)
    if hasattr(x, "terms"):
        return type(x)()
    if is_exact(x):
        return Fraction(0)
    return 0j


def _one_like(x):
    if isinstance(x, TruncatedSeries):
        return TruncatedSeries([Fraction(1)], low=0, order=x.order)
    if hasattr(x, "terms"):
        return type(x).const(1)
    if is_exact(x):
        return Fraction(1)
    return 1 + 0j


class TruncatedSeries:
    """``sum_{k=low}^{order} a_k z^k + O(z^(order+1))``.

    Instances are immutable.  ``coeffs[i]`` is the coefficient of
    ``z^(low+i)``.
    """

    __slots__ = ("low", "coeffs", "order")

    def __init__(self, coeffs: Sequence, low: int = 0, order: int | None = None):
        coeffs = tuple(coeffs)
        if order is None:
            order = low + len(coeffs) - 1
        if order < low - 1:
            raise ValueError("truncation order below the lowest degree")
        n = order - low + 1
        if len(coeffs) < n:
            pad = _zero_like(coeffs[0]) if coeffs else Fraction(0)
            coeffs = coeffs + (pad,) * (n - len(coeffs))
        elif len(coeffs) > n:
            coeffs = coeffs[:n]
        self.low = low
        self.coeffs = coeffs
        self.order = order

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, order, low=0):
        return cls([Fraction(0)] * (order - low + 1), low=low, order=order)

    @classmethod
    def monomial(cls, k, order, coeff=Fraction(1)):
        low = min(k, order)
        return cls([coeff] + [_zero_like(coeff)] * (order - k), low=k, order=order) if k <= order \
            else cls.zero(order, low=low)

    @classmethod
    def identity(cls, order):
        return cls.monomial(1, order)

    @classmethod
    def from_dict(cls, d, order, low=None):
        if low is None:
            low = min(d) if d else 0
        zero = _zero_like(next(iter(d.values()))) if d else Fraction(0)
        return cls([d.get(k, zero) for k in range(low, order + 1)], low=low, order=order)

    # basic access ---------------------------------------------------------
    def coeff(self, k):
        """Coefficient of ``z^k``; zero below ``low``; error above the truncation order."""
        if k > self.order:
            raise ValueError(f"coefficient {k} is beyond the truncation order {self.order}")
        if k < self.low:
            return _zero_like(self.coeffs[0]) if self.coeffs else Fraction(0)
        return self.coeffs[k - self.low]

    def __getitem__(self, k):
        return self.coeff(k)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def degrees(self):
        return range(self.low, self.order + 1)

    @property
    def mode(self):
        if all(is_exact(c) for c in self.coeffs):
            return "rational"
        if all(isinstance(c, (int, float, complex, Fraction, GaussianRational,
                              np.floating, np.complexfloating)) for c in self.coeffs):
            return "float"
        return "generic"

    def normalized(self):
        """Drop leading zero coefficients (raise ``low``)."""
        k = 0
        while k < len(self.coeffs) and is_zero(self.coeffs[k]):
            k += 1
        if k == len(self.coeffs):
            return TruncatedSeries([], low=self.order + 1, order=self.order)
        return TruncatedSeries(self.coeffs[k:], low=self.low + k, order=self.order)

    def truncate(self, order):
        order = min(order, self.order)
        return TruncatedSeries(self.coeffs, low=self.low, order=order)

    def with_order(self, order):
        """Re-declare the truncation order (padding with zeros if raised)."""
        return TruncatedSeries(self.coeffs, low=self.low, order=order)

    def shift(self, k):
        """Multiply by ``z^k``."""
        return TruncatedSeries(self.coeffs, low=self.low + k, order=self.order + k)

    def map(self, fn):
        return TruncatedSeries([fn(c) for c in self.coeffs], low=self.low, order=self.order)

    def to_float(self):
        return self.map(lambda c: complex(c) if not isinstance(c, TruncatedSeries) else c.to_float())

    def conjugate(self):
        return self.map(conj)

    def is_zero(self):
        return all(is_zero(c) for c in self.coeffs)

    def max_abs_coeff(self):
        from .scalars import magnitude
        return max((magnitude(c) for c in self.coeffs), default=0)

    def evaluate(self, z):
        """Evaluate the truncated Laurent polynomial at numeric ``z`` (array ok)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in reversed(self.coeffs):
            out = out * z + complex(c)
        return out * z ** self.low

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        return all(self.coeff(k) == other.coeff(k) for k in range(min(self.low, other.low), self.order + 1))

    def __hash__(self):
        return hash((self.low, self.order, self.coeffs))

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"TruncatedSeries(low={self.low}, order={self.order}, [{terms}{more}])"

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries([other], low=0, order=self.order)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            if is_zero(other) if not isinstance(other, (int, float, complex)) else other == 0:
                return self
            other = TruncatedSeries([other], low=0, order=self.order)
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        coeffs = []
        for k in range(low, order + 1):
            a = self.coeffs[k - self.low] if self.low <= k <= self.order else None
            b = other.coeffs[k - other.low] if other.low <= k <= other.order else None
            if a is None:
                coeffs.append(b if b is not None else Fraction(0))
            elif b is None:
                coeffs.append(a)
            else:
                coeffs.append(a + b)
        if order < low:
            return TruncatedSeries([], low=order + 1, order=order)
        return TruncatedSeries(coeffs, low=low, order=order)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.map(lambda c: c * other)
        a, b = self, other
        low = a.low + b.low
        order = min(a.low + b.order, b.low + a.order)
        n = order - low + 1
        if n <= 0:
            return TruncatedSeries([], low=order + 1, order=order)
        ac, bc = a.coeffs, b.coeffs
        out = []
        for k in range(n):
            s = None
            for i in range(max(0, k - len(bc) + 1), min(k, len(ac) - 1) + 1):
                t = ac[i] * bc[k - i]
                s = t if s is None else s + t
            out.append(s if s is not None else _zero_like(ac[0]))
        return TruncatedSeries(out, low=low, order=order)

    def __rmul__(self, other):
        if isinstance(other, TruncatedSeries):
            return other.__mul__(self)
        return self.map(lambda c: other * c)

    def reciprocal(self):
        """``1/self``; requires a nonzero coefficient at ``low``.

        ``self = z^L (b_0 + b_1 z + ...)`` known through relative order
        ``R = order - L`` gives ``1/self`` through degree ``R - L``.
        """
        if not self.coeffs or is_zero(self.coeffs[0]):
            raise DegenerateDivisor("series has a zero leading coefficient")
        try:
            inv0 = recip(self.coeffs[0])
        except ZeroDivisionError as exc:
            raise DegenerateDivisor(str(exc)) from exc
        b = self.coeffs
        rel = self.order - self.low
        g = [inv0]
        for k in range(1, rel + 1):
            s = None
            for i in range(1, k + 1):
                t = b[i] * g[k - i]
                s = t if s is None else s + t
            g.append(-(s * inv0))
        return TruncatedSeries(g, low=-self.low, order=rel - self.low)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, int):
                other = Fraction(other)
            if is_zero(other):
                raise DegenerateDivisor("division by zero scalar")
            return self * recip(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n):
        """Integer powers (any sign)."""
        if not isinstance(n, int):
            raise TypeError("use ts_elem(f, 'pow', r) for non-integer powers")
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            one = _one_like(self.coeffs[0]) if self.coeffs else Fraction(1)
            return TruncatedSeries([one], low=0, order=self.order - self.low)
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # calculus -------------------------------------------------------------
    def derivative(self):
        coeffs = [c * k for k, c in zip(self.degrees(), self.coeffs)]
        if self.low == 0:
            coeffs = coeffs[1:]
            return TruncatedSeries(coeffs, low=0, order=self.order - 1)
        return TruncatedSeries(coeffs, low=self.low - 1, order=self.order - 1)

    def antiderivative(self):
        """Integral with zero constant; fails if a ``z^-1`` term is present."""
        if self.low <= -1 <= self.order and not is_zero(self.coeff(-1)):
            raise LogarithmicTerm("series has a nonzero residue; antiderivative is logarithmic")
        coeffs = []
        for k, c in zip(self.degrees(), self.coeffs):
            coeffs.append(_zero_like(c) if k == -1 else div_int(c, k + 1))
        if self.low >= 0:
            return TruncatedSeries([_zero_like(coeffs[0]) if coeffs else Fraction(0)] * (self.low + 1) + coeffs,
                                   low=0, order=self.order + 1)
        return TruncatedSeries(coeffs, low=self.low + 1, order=self.order + 1)

    def residue(self):
        """Coefficient of ``z^-1``."""
        if self.order < -1:
            raise ValueError("residue lies beyond the truncation order")
        return self.coeff(-1)

    # composition ----------------------------------------------------------
    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        """``self(g(z))`` for ``g(0) = 0``.

        Negative powers of ``self`` require ``g`` to have a simple zero.
        """
        g = g.normalized()
        if g.low < 1:
            raise CompositionDomain("inner series must vanish at 0")
        f = self
        lg, og = g.low, g.order
        kmin = f.low
        if kmin < 0 and lg != 1:
            raise CompositionDomain("Laurent outer series needs an inner series with a simple zero")
        bounds = [lg * (f.order + 1) - 1]
        if f.order >= 1:
            bounds.append(og)
        if kmin < 0:
            bounds.append(og - lg + kmin * lg)
        order = min(bounds)
        zero = _zero_like(f.coeffs[0]) if f.coeffs else Fraction(0)
        acc = TruncatedSeries([zero], low=0, order=order)
        gt = g.truncate(order)
        # positive powers
        power = None
        for k in range(1, f.order + 1):
            power = gt if power is None else (power * gt).truncate(order)
            if power.normalized().low > order:
                break
            if k < kmin:
                continue
            ck = f.coeff(k)
            if not is_zero(ck):
                acc = acc + (power * ck).with_order(max(order, power.order)).truncate(order)
        if kmin <= 0 <= f.order:
            acc = acc + TruncatedSeries([f.coeff(0)], low=0, order=order)
        if kmin < 0:
            inv = g.reciprocal()
            power = None
            for k in range(-1, kmin - 1, -1):
                power = inv if power is None else power * inv
                ck = f.coeff(k)
                if not is_zero(ck):
                    acc = acc + power * ck
        return acc.truncate(order)

    def reverse(self) -> "TruncatedSeries":
        """Compositional inverse by Lagrange inversion.

        ``[z^n] g = (1/n) [w^(n-1)] (w/f(w))^n``.
        """
        f = self.normalized()
        if f.low != 1:
            if f.low < 1:
                raise CompositionDomain("series must vanish at 0 to be reversed")
            raise NotInvertible("f'(0) = 0; series is not invertible")
        N = f.order
        h = TruncatedSeries(f.coeffs, low=0, order=N - 1).reciprocal()  # w / f(w)
        coeffs = []
        power = None
        for n in range(1, N + 1):
            power = h if power is None else power * h
            coeffs.append(div_int(power.coeff(n - 1), n))
        return TruncatedSeries(coeffs, low=1, order=N)

    # elementary functions -------------------------------------------------
    def log(self):
        """``log f`` for ``f = a_0 + a_1 z + ...`` with invertible ``a_0``."""
        f = self.normalized() if self.low < 0 else self
        if f.low > 0 or not f.coeffs or is_zero(f.coeff(0)):
            raise BranchPoint("logarithm of a series with vanishing constant term")
        if f.low < 0:
            raise BranchPoint("logarithm of a series with a pole")
        const = scalar_log(f.coeff(0))
        dl = (f.derivative() / f).antiderivative()
        return dl + TruncatedSeries([const], low=0, order=dl.order)

    def exp(self):
        f = self
        if f.low < 0:
            raise BranchPoint("exponential of a series with a pole")
        c0 = f.coeff(0) if f.low == 0 else _zero_like(f.coeffs[0])
        e0 = scalar_exp(c0)
        N = f.order
        fk = [f.coeff(k) if k >= f.low else _zero_like(c0) for k in range(N + 1)]
        g = [e0]
        for n in range(1, N + 1):
            s = None
            for k in range(1, n + 1):
                t = fk[k] * g[n - k] * k
                s = t if s is None else s + t
            g.append(div_int(s, n))
        return TruncatedSeries(g, low=0, order=N)

    def pow(self, r):
        """``f^r``; integer r allowed for any series, otherwise ``f(0) = 1`` (or invertible)."""
        if isinstance(r, int):
            return self ** r
        return (self.log() * r).exp()

    # serialization --------------------------------------------------------
    def dumps(self) -> str:
        mode = self.mode
        if mode == "generic":
            raise TypeError("generic scalars cannot be serialized")
        lines = [f"series {self.low} {self.order} {mode}"]
        for c in self.coeffs:
            if mode == "rational":
                lines.append(format_exact(c))
            else:
                z = complex(c)
                lines.append(f"{z.real!r} {z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TruncatedSeries":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "series" or len(head) != 4:
            raise ValueError("bad series header")
        low, order, mode = int(head[1]), int(head[2]), head[3]
        coeffs = []
        for ln in lines[1:1 + order - low + 1]:
            if mode == "rational":
                coeffs.append(parse_scalar(ln))
            else:
                re, im = ln.split()
                coeffs.append(complex(float(re), float(im)))
        return cls(coeffs, low=low, order=order)


# functional front-end ---------------------------------------------------
def ts_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def ts_compose(f, g):
    return f.compose(g)


def ts_reverse(f):
    return f.reverse()


def ts_elem(f, op, r=None):
    if op == "log":
        return f.log()
    if op == "exp":
        return f.exp()
    if op == "pow":
        return f.pow(r)
    raise ValueError(f"unknown op {op!r}")


def ts_calculus(f, op, k=None):
    if op == "derivative":
        return f.derivative()
    if op == "antiderivative":
        return f.antiderivative()
    if op == "residue":
        return f.residue()
    if op == "coeff":
        return f.coeff(k)
    raise ValueError(f"unknown op {op!r}")


def bivariate(coeff_fn, order_z, order_w):
    """Series in z whose coefficients are series in w: ``sum coeff_fn(i, j) z^i w^j``."""
    rows = []
    for i in range(order_z + 1):
        rows.append(TruncatedSeries([coeff_fn(i, j) for j in range(order_w + 1)], low=0, order=order_w))
    return TruncatedSeries(rows, low=0, order=order_z)


# ---------------------------------------------------------------------------
class FourierFunction:
    """Trigonometric polynomial ``sum_{|k|<=K} a_k exp(i k t)`` on the circle.

    ``coeffs`` is a numpy array of length ``2K+1`` (index ``k+K``); object
    dtype in exact mode, ``complex128`` in float mode.
    """

    __slots__ = ("coeffs", "K")

    def __init__(self, coeffs, K=None):
        if isinstance(coeffs, dict):
            K = max((abs(k) for k in coeffs), default=0) if K is None else K
            exact = all(is_exact(v) for v in coeffs.values())
            arr = np.array([Fraction(0)] * (2 * K + 1), dtype=object) if exact else np.zeros(2 * K + 1, complex)
            for k, v in coeffs.items():
                arr[k + K] = v
            coeffs = arr
        else:
            coeffs = np.asarray(coeffs)
            if coeffs.dtype != object:
                coeffs = coeffs.astype(complex)
            if K is None:
                K = (len(coeffs) - 1) // 2
        if len(coeffs) != 2 * K + 1:
            raise ValueError("coefficient array must have length 2K+1")
        self.coeffs = coeffs
        self.K = K

    # constructors ---------------------------------------------------------
    @classmethod
    def from_cos_sin(cls, const, cos=(), sin=()):
        """``const + sum cos[n-1] cos(nt) + sin[n-1] sin(nt)``."""
        K = max(len(cos), len(sin))
        cos = list(cos) + [0] * (K - len(cos))
        sin = list(sin) + [0] * (K - len(sin))
        vals = [const, *cos, *sin]
        if all(is_exact(v) for v in vals):
            half = Fraction(1, 2)
            d = {0: const + Fraction(0)}
            for n in range(1, K + 1):
                a, b = cos[n - 1], sin[n - 1]
                d[n] = (a - GaussianRational(0, 1) * b) * half
                d[-n] = (a + GaussianRational(0, 1) * b) * half
            return cls(d, K)
        d = {0: complex(const)}
        for n in range(1, K + 1):
            d[n] = (cos[n - 1] - 1j * sin[n - 1]) / 2
            d[-n] = (cos[n - 1] + 1j * sin[n - 1]) / 2
        return cls(d, K)

    @classmethod
    def from_samples(cls, values, K=None, trim=None):
        """Refit uniform samples ``values[j] = f(2 pi j / M)`` by FFT."""
        values = np.asarray(values)
        M = len(values)
        c = np.fft.fft(values) / M
        Kmax = (M - 1) // 2
        K = Kmax if K is None else min(K, Kmax)
        arr = np.concatenate([c[M - K:], c[:K + 1]])
        out = cls(arr.astype(complex), K)
        return out.trimmed(trim) if trim is not None else out

    @classmethod
    def constant(cls, c):
        return cls({0: c}, 0)

    # basic ----------------------------------------------------------------
    @property
    def exact(self):
        return self.coeffs.dtype == object

    def coeff(self, k):
        if abs(k) > self.K:
            return Fraction(0) if self.exact else 0j
        return self.coeffs[k + self.K]

    def padded(self, K):
        if K <= self.K:
            return self
        pad = K - self.K
        z = np.array([Fraction(0)] * pad, dtype=object) if self.exact else np.zeros(pad, complex)
        return type(self)(np.concatenate([z, self.coeffs, z]), K)

    def trimmed(self, tol=1e-16):
        """Drop trailing harmonics whose magnitude is below ``tol * max|a_k|``."""
        if self.exact:
            K = self.K
            while K > 0 and self.coeff(K) == 0 and self.coeff(-K) == 0:
                K -= 1
            return type(self)(self.coeffs[self.K - K:self.K + K + 1], K)
        mags = np.abs(self.coeffs)
        scale = max(mags.max(), 1e-300)
        K = self.K
        while K > 0 and mags[self.K - K] <= tol * scale and mags[self.K + K] <= tol * scale:
            K -= 1
        return type(self)(self.coeffs[self.K - K:self.K + K + 1], K)

    def to_float(self):
        return type(self)(np.array([complex(c) for c in self.coeffs]), self.K) if self.exact else self

    def is_real(self, tol=0.0):
        for k in range(0, self.K + 1):
            a, b = self.coeff(k), self.coeff(-k)
            d = a - conj(b)
            if (abs(complex(d)) if not is_exact(d) else (d != 0)) > tol:
                return False
        return True

    def cos_sin(self):
        """Return ``(const, cos list, sin list)``."""
        const = self.coeff(0)
        cos, sin = [], []
        for n in range(1, self.K + 1):
            a, b = self.coeff(n), self.coeff(-n)
            cos.append(a + b)
            s = a - b
            sin.append(s * GaussianRational(0, 1) if self.exact else s * 1j)
        return const, cos, sin

    # arithmetic -----------------------------------------------------------
    def _binary(self, other, fn):
        K = max(self.K, other.K)
        a, b = self.padded(K).coeffs, other.padded(K).coeffs
        if a.dtype != b.dtype:
            a, b = a.astype(complex) if a.dtype == object else a, b.astype(complex) if b.dtype == object else b
            a = np.array([complex(x) for x in a]) if a.dtype == object else a
            b = np.array([complex(x) for x in b]) if b.dtype == object else b
        return type(self)(fn(a, b), K)

    def __add__(self, other):
        if not isinstance(other, FourierFunction):
            other = FourierFunction.constant(other)
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, FourierFunction):
            other = FourierFunction.constant(other)
        return self._binary(other, np.subtract)

    def __neg__(self):
        return type(self)(-self.coeffs, self.K)

    def __mul__(self, other):
        if isinstance(other, FourierFunction):
            a, b = self.coeffs, other.coeffs
            if a.dtype != b.dtype:
                a, b = self.to_float().coeffs, other.to_float().coeffs
            return type(self)(np.convolve(a, b), self.K + other.K)
        return type(self)(self.coeffs * other, self.K)

    def __rmul__(self, other):
        return self.__mul__(other)

    def derivative(self, order=1):
        ks = np.arange(-self.K, self.K + 1)
        if self.exact:
            fac = np.array([GaussianRational(0, int(k)) ** order if k else Fraction(0) for k in ks], dtype=object)
        else:
            fac = (1j * ks) ** order
        return type(self)(self.coeffs * fac, self.K)

    def mean(self):
        """``(1/2pi) * integral over [0, 2pi]``; exact in exact mode."""
        return self.coeff(0)

    def integral(self):
        """Integral over one period (float, or exact zero)."""
        m = self.mean()
        if self.exact and m == 0:
            return Fraction(0)
        return 2 * math.pi * complex(m)

    def inner_mean(self, other):
        """``(1/2pi) integral self * other dt`` computed from coefficients."""
        s = None
        for k in range(-min(self.K, other.K), min(self.K, other.K) + 1):
            t = self.coeff(k) * other.coeff(-k)
            s = t if s is None else s + t
        return s if s is not None else Fraction(0)

    # evaluation -----------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        c = self.to_float().coeffs
        ks = np.arange(-self.K, self.K + 1)
        flat = t.reshape(-1)
        out = np.empty(flat.shape, complex)
        step = max(1, 2_000_000 // max(1, len(ks)))
        for s in range(0, len(flat), step):
            out[s:s + step] = np.exp(1j * np.outer(flat[s:s + step], ks)) @ c
        return out.reshape(t.shape)

    def samples(self, M):
        """Values at ``t_j = 2 pi j / M`` (requires ``M > 2K``)."""
        if M <= 2 * self.K:
            return self(2 * np.pi * np.arange(M) / M)
        c = self.to_float().coeffs
        buf = np.zeros(M, complex)
        buf[:self.K + 1] = c[self.K:]
        if self.K:
            buf[M - self.K:] = c[:self.K]
        return np.fft.ifft(buf) * M

    def __repr__(self):
        return f"{type(self).__name__}(K={self.K}, exact={self.exact})"
