"""Witt and Virasoro algebras.

Vector fields on the circle are stored by their coefficient function
``u(t)`` in ``u(t) d/dt``.  The complex basis is ``e_k = i exp(ikt) d/dt``
and the real basis is

    h = d/dt,   s_n = sin(nt) d/dt,   c_n = cos(nt) d/dt.

The bracket of fields is ``[u, v] = (u v' - u' v) d/dt``; with this sign
``[e_j, e_k] = (j - k) e_{j+k}`` and ``[h, s_n] = n c_n``.

The Virasoro algebra adds a central element ``c`` with

    [e_j, e_k] = (j - k) e_{j+k} + delta(j + k) (j^3 - j)/12 c.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

import numpy as np

from .scalars import GaussianRational, I, format_exact, is_exact, parse_scalar
from .seriescore import FourierFunction

FourierField = FourierFunction


def _clean(d):
    return {k: v for k, v in d.items() if v != 0}


class WittVector:
    """Finitely supported combination ``sum_k modes[k] e_k``."""

    __slots__ = ("modes",)

    def __init__(self, modes: Mapping[int, object] | None = None):
        self.modes = _clean({int(k): v for k, v in (modes or {}).items()})

    @classmethod
    def basis(cls, k, coeff=1):
        return cls({k: coeff})

    @classmethod
    def from_real(cls, real: Mapping[tuple, object]):
        """Build from real-basis coordinates ``{('h', 0): a, ('s', n): b, ('c', n): c}``.

        ``('c', 0)`` is the same vector as ``('h', 0)``.
        """
        out = {}

        def add(k, x):
            out[k] = out.get(k, 0) + x

        for (kind, n), a in real.items():
            if kind == "h" or (kind == "c" and n == 0):
                add(0, -I * a)
            elif kind == "s":
                add(-n, a * Fraction(1, 2))
                add(n, -a * Fraction(1, 2))
            elif kind == "c":
                add(n, -I * a * Fraction(1, 2))
                add(-n, -I * a * Fraction(1, 2))
            else:
                raise ValueError(f"unknown real basis symbol {kind!r}")
        return cls(out)

    def to_real(self):
        """Real-basis coordinates; the inverse of :meth:`from_real`."""
        out = {}
        ns = sorted({abs(k) for k in self.modes})
        for n in ns:
            if n == 0:
                out[("h", 0)] = I * self.modes[0]
                continue
            a, b = self.modes.get(n, 0), self.modes.get(-n, 0)
            # e_n = i c_n - s_n, e_{-n} = i c_n + s_n
            out[("c", n)] = I * (a + b)
            out[("s", n)] = b - a
        return _clean(out)

    def to_field(self) -> FourierFunction:
        """Coefficient function ``u`` with ``u(t) d/dt`` equal to this vector."""
        if not self.modes:
            return FourierFunction({0: Fraction(0)}, 0)
        K = max(abs(k) for k in self.modes)
        d = {k: I * v for k, v in self.modes.items()}
        if not all(is_exact(v) for v in d.values()):
            d = {k: complex(v) for k, v in d.items()}
        return FourierFunction(d, K)

    @classmethod
    def from_field(cls, u: FourierFunction, tol=None):
        modes = {}
        for k in range(-u.K, u.K + 1):
            a = u.coeff(k)
            m = -I * a if u.exact else -1j * complex(a)
            if tol is not None and not u.exact and abs(m) <= tol:
                continue
            modes[k] = m
        return cls(modes)

    # linear structure -----------------------------------------------------
    def __add__(self, other):
        out = dict(self.modes)
        for k, v in other.modes.items():
            out[k] = out.get(k, 0) + v
        return WittVector(out)

    def __neg__(self):
        return WittVector({k: -v for k, v in self.modes.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        return WittVector({k: v * a for k, v in self.modes.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, VirasoroVector):
            return other == self
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.modes == other.modes

    def __hash__(self):
        return hash(frozenset(self.modes.items()))

    def is_zero(self):
        return not self.modes

    def max_abs(self):
        return max((abs(complex(v)) for v in self.modes.values()), default=0.0)

    def __repr__(self):
        body = " + ".join(f"({format_exact(v) if is_exact(v) else v})e_{k}" for k, v in sorted(self.modes.items()))
        return f"WittVector({body or '0'})"


class VirasoroVector:
    """Witt part plus a multiple of the central element ``c``."""

    __slots__ = ("witt", "central")

    def __init__(self, witt: WittVector | Mapping | None = None, central=0):
        if not isinstance(witt, WittVector):
            witt = WittVector(witt)
        self.witt = witt
        self.central = central

    @classmethod
    def lift(cls, x):
        if isinstance(x, VirasoroVector):
            return x
        if isinstance(x, WittVector):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {type(x).__name__} as a Virasoro vector")

    @classmethod
    def e(cls, k, coeff=1):
        return cls(WittVector.basis(k, coeff), 0)

    @classmethod
    def c(cls, coeff=1):
        return cls(WittVector(), coeff)

    def __add__(self, other):
        other = VirasoroVector.lift(other)
        return VirasoroVector(self.witt + other.witt, self.central + other.central)

    def __neg__(self):
        return VirasoroVector(-self.witt, -self.central)

    def __sub__(self, other):
        return self + (-VirasoroVector.lift(other))

    def __mul__(self, a):
        return VirasoroVector(self.witt * a, self.central * a)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, WittVector):
            other = VirasoroVector(other)
        if not isinstance(other, VirasoroVector):
            return NotImplemented
        return self.witt == other.witt and self.central == other.central

    def __hash__(self):
        return hash((self.witt, self.central))

    def is_zero(self):
        return self.witt.is_zero() and self.central == 0

    def max_abs(self):
        return max(self.witt.max_abs(), abs(complex(self.central)))

    def __repr__(self):
        return f"VirasoroVector({self.witt!r}, c={self.central})"

    # text form ------------------------------------------------------------
    def to_json(self) -> str:
        def fmt(v):
            return format_exact(v) if is_exact(v) else format_exact(complex(v))
        data = {"e": {str(k): fmt(v) for k, v in sorted(self.witt.modes.items())},
                "c": fmt(self.central)}
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str | dict):
        data = json.loads(text) if isinstance(text, str) else text
        modes = {int(k): parse_scalar(str(v)) for k, v in data.get("e", {}).items()}
        central = parse_scalar(str(data.get("c", "0")))
        return cls(WittVector(modes), central)


# named real-basis vectors ----------------------------------------------------
def e(k, coeff=1) -> WittVector:
    return WittVector.basis(k, coeff)


def h() -> WittVector:
    return WittVector.from_real({("h", 0): 1})


def s(n) -> WittVector:
    return WittVector.from_real({("s", n): 1})


def c(n) -> WittVector:
    return WittVector.from_real({("c", n): 1})


def field(x) -> FourierFunction:
    """Coerce a Witt/Virasoro vector or a Fourier function to a coefficient function."""
    if isinstance(x, FourierFunction):
        return x
    if isinstance(x, VirasoroVector):
        x = x.witt
    if isinstance(x, WittVector):
        return x.to_field()
    raise TypeError(f"cannot interpret {type(x).__name__} as a vector field")


# brackets ---------------------------------------------------------------------
def vect_bracket(u, v, method="coefficients", grid=None) -> FourierFunction:
    """Bracket of vector fields ``[u, v] = (u v' - u' v) d/dt``.

    ``method="coefficients"`` multiplies trigonometric polynomials exactly;
    ``method="pointwise"`` evaluates on a uniform grid and refits with the FFT.
    """
    u, v = field(u), field(v)
    if method == "coefficients":
        return u * v.derivative() - u.derivative() * v
    if method != "pointwise":
        raise ValueError(f"unknown method {method!r}")
    K = u.K + v.K
    M = grid or 2 * (2 * K + 1)
    uu, vv = u.samples(M), v.samples(M)
    du, dv = u.derivative().samples(M), v.derivative().samples(M)
    return FourierFunction.from_samples(uu * dv - du * vv, K=K)


def witt_bracket(x: WittVector, y: WittVector) -> WittVector:
    """Bilinear extension of ``[e_j, e_k] = (j - k) e_{j+k}``."""
    out = {}
    for j, a in x.modes.items():
        for k, b in y.modes.items():
            if j == k:
                continue
            out[j + k] = out.get(j + k, 0) + (j - k) * a * b
    return WittVector(out)


def central_term(j, k) -> Fraction:
    """Coefficient of ``c`` in ``[e_j, e_k]``."""
    return Fraction(j ** 3 - j, 12) if j + k == 0 else Fraction(0)


def virasoro_bracket(x, y) -> VirasoroVector:
    x, y = VirasoroVector.lift(x), VirasoroVector.lift(y)
    central = 0
    for j, a in x.witt.modes.items():
        b = y.witt.modes.get(-j)
        if b is not None:
            central = central + central_term(j, -j) * a * b
    return VirasoroVector(witt_bracket(x.witt, y.witt), central)


def jacobi_residual(x, y, z) -> VirasoroVector:
    br = virasoro_bracket
    return br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))


# cocycles ---------------------------------------------------------------------
def gelfand_fuchs(u, v, per_period=False):
    """``integral_0^{2 pi} v'(t) u''(t) dt`` from Fourier coefficients.

    With ``per_period=True`` the integral divided by ``2 pi`` is returned,
    which is exact (a rational or Gaussian rational) for exact inputs.
    """
    u, v = field(u), field(v)
    mean = v.derivative().inner_mean(u.derivative(2))
    if per_period:
        return mean
    if is_exact(mean) and mean == 0:
        return Fraction(0)
    return 2 * np.pi * complex(mean)


def gf_cocycle_identity(x, y, z):
    """``c([x,y],z) + c([y,z],x) + c([z,x],y)`` with the per-period cocycle."""
    gf = lambda a, b: gelfand_fuchs(a, b, per_period=True)  # noqa: E731
    br = vect_bracket
    x, y, z = field(x), field(y), field(z)
    return gf(br(x, y), z) + gf(br(y, z), x) + gf(br(z, x), y)


def central_normalization(jmax=6):
    """Measure how the circle cocycle relates to the algebraic central term.

    Finds the constant ``kappa`` and the coboundary value ``lam = lambda(e_0)``
    with ``(j^3 - j)/12 = kappa * gf_mean(e_j, e_-j) + lam * (2j)`` for all
    ``1 <= j <= jmax`` and reports the maximal residual (zero when exact).
    """
    g1 = gelfand_fuchs(e(1), e(-1), per_period=True)
    g2 = gelfand_fuchs(e(2), e(-2), per_period=True)
    # two equations in (kappa, lam): j = 1, 2
    # 0 = kappa*g1 + 2 lam ; 1/2 = kappa*g2 + 4 lam
    kappa = Fraction(1, 2) / (g2 - 2 * g1)
    lam = -(kappa * g1) * Fraction(1, 2)
    residual = 0
    for j in range(1, jmax + 1):
        r = central_term(j, -j) - (kappa * gelfand_fuchs(e(j), e(-j), per_period=True) + lam * 2 * j)
        residual = max(residual, abs(complex(r)))
    return {"kappa": kappa, "coboundary_e0": lam, "residual": residual}


def kks_form(a, b, u, v):
    """Orbit pairing ``a * integral [u, v] dt + b * gelfand_fuchs(u, v)``.

    Exact inputs give ``2 pi`` times an exact value; the per-period value
    is available from :func:`kks_form_mean`.
    """
    m = kks_form_mean(a, b, u, v)
    if is_exact(m) and m == 0:
        return Fraction(0)
    return 2 * np.pi * complex(m)


def kks_form_mean(a, b, u, v):
    return a * vect_bracket(u, v).mean() + b * gelfand_fuchs(u, v, per_period=True)


def real_bracket_table(nmax=6):
    """Brackets of the real basis computed from the field bracket.

    Returns ``{(X, Y): real coordinates of [X, Y]}`` for X, Y among
    ``h, s_n, c_n`` with ``1 <= n <= nmax``.
    """
    names = [("h", 0)] + [(k, n) for n in range(1, nmax + 1) for k in ("s", "c")]
    vecs = {nm: WittVector.from_real({nm: 1}) for nm in names}
    out = {}
    for x in names:
        for y in names:
            f = vect_bracket(vecs[x], vecs[y])
            out[(x, y)] = WittVector.from_field(f).to_real()
    return out


__all__ = [
    "FourierField", "WittVector", "VirasoroVector", "e", "h", "s", "c", "field",
    "vect_bracket", "witt_bracket", "virasoro_bracket", "central_term",
    "jacobi_residual", "gelfand_fuchs", "gf_cocycle_identity",
    "central_normalization", "kks_form", "kks_form_mean", "real_bracket_table",
    "GaussianRational",
]
