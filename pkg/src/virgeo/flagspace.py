"""Univalent functions as a model of the flag manifold.

A point is the coefficient vector ``c_1..c_N`` of ``f(z) = z + sum c_k z^(k+1)``.
The Witt algebra acts by the contour integral

    L_v f(z) = f(z)^2 (1/2 pi i) oint (w f'(w)/f(w))^2 v(w)/(f(w) - f(z)) dw/w

over ``|w| = 1``.  For ``v = w^p`` the residues at ``w = z`` and ``w = 0`` give

    delta f = z^(p+1) f'(z) - sum_{m=0}^{q} a_m f(z)^(1-m),   q = -p,
    a_m     = [w^q] (w f'/f)^2 f^m,

which is what :func:`residue_delta` evaluates, with numbers or with
:class:`~virgeo.polynomial.Poly` coefficients (producing the coordinate rules
of the operators ``L_p`` symbolically).  The basis vector ``e_p`` acts as
``L_p``, so ``L_0 = sum k c_k d/dc_k`` and ``[L_m, L_n] = (m - n) L_{m+n}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circleact import CircleDiffeo, diffeo_compose, flow_exp
from .errors import DegenerateTriple, DomainError, FlowUnstable
from .polynomial import Poly
from .scalars import exact_exp_i, format_exact, is_exact, parse_scalar
from .seriescore import FourierFunction, TruncatedSeries
from .virasoro import WittVector

MAX_INDEX = 8


# ---------------------------------------------------------------------------
# points
@dataclass(frozen=True)
class UnivalentPoint:
    """Coefficients ``c_1..c_N`` of ``f(z) = z + c_1 z^2 + ... + c_N z^(N+1)``."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(self.c))

    @property
    def N(self):
        return len(self.c)

    @classmethod
    def identity(cls, N):
        return cls((Fraction(0),) * N)

    def series(self, order=None):
        """``f`` as a TruncatedSeries; coefficients beyond ``N`` are zero."""
        order = self.N + 1 if order is None else order
        coeffs = [Fraction(0), Fraction(1)] + list(self.c)
        coeffs = coeffs[:order + 1] + [Fraction(0)] * max(0, order + 1 - len(coeffs))
        return TruncatedSeries(coeffs, low=0, order=order)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for ck in reversed(self.c):
            out = (out + complex(ck)) * z
        return (out + 1) * z

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k in range(self.N, 0, -1):
            out = out * z + (k + 1) * complex(self.c[k - 1])
        return out * z + 1

    def to_float(self):
        return UnivalentPoint(tuple(complex(x) for x in self.c))

    def as_array(self):
        return np.array([complex(x) for x in self.c])

    def distance(self, other):
        return float(np.max(np.abs(self.as_array() - other.as_array()))) if self.N else 0.0

    def dumps(self):
        lines = [f"spoint {self.N}"]
        for x in self.c:
            if is_exact(x):
                lines.append(format_exact(x))
            else:
                z = complex(x)
                lines.append(f"{z.real!r} {z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "spoint":
            raise ValueError("bad point header")
        N = int(head[1])
        out = []
        for ln in lines[1:N + 1]:
            parts = ln.split()
            if len(parts) == 2:
                out.append(complex(float(parts[0]), float(parts[1])))
            else:
                out.append(parse_scalar(parts[0]))
        return cls(tuple(out))


def koebe_point(theta, N) -> UnivalentPoint:
    """Coefficients of ``z/(1 - e^{i theta} z)^2``: ``c_k = (k+1) e^{i k theta}``.

    Exact for ``theta`` in ``{0, pi}``.
    """
    return UnivalentPoint(tuple((k + 1) * exact_exp_i(k, theta) for k in range(1, N + 1)))


def rotate_point(x: UnivalentPoint, alpha) -> UnivalentPoint:
    """``e^{i alpha} f(e^{-i alpha} z)``: ``c_k -> c_k e^{-i k alpha}``."""
    return UnivalentPoint(tuple(ck * exact_exp_i(-k, alpha) for k, ck in enumerate(x.c, 1)))


# ---------------------------------------------------------------------------
# residue oracle
def _unit_like(cs):
    if cs and isinstance(cs[0], Poly):
        return Poly.const(1), Poly()
    if cs and not is_exact(cs[0]):
        return 1 + 0j, 0j
    return Fraction(1), Fraction(0)


def residue_delta(cs: Sequence, p: int, N: int, with_w=False, w=None):
    """Variation of ``f`` (and of the fibre coordinate) under ``e_p``.

    ``cs`` holds ``c_1, c_2, ...`` (numbers or polynomials); it must contain
    at least ``N + max(0, -p)`` entries, missing ones are zero.  Returns
    ``[delta c_1, ..., delta c_N]`` and, with ``with_w``, also ``delta w``.
    """
    one, zero = _unit_like(cs)
    q = -p
    R = N + max(0, q)
    F0 = [one] + [cs[j - 1] if j - 1 < len(cs) else zero for j in range(1, R + 1)]
    F = TruncatedSeries(F0, low=0, order=R)  # f(z)/z
    fz = F.shift(1)
    df = fz.derivative()  # order R
    # z^(p+1) f'(z): coefficient of z^(k+1) is [z^(k-p)] f'
    delta = []
    for k in range(1, N + 1):
        j = k - p
        delta.append(df.coeff(j) if 0 <= j <= df.order else zero)
    a = []
    if q >= 0:
        A = df / F  # w f'/f
        A2 = (A * A).truncate(q)
        Fq = F.truncate(q)
        power = TruncatedSeries([one], low=0, order=q)
        for m in range(q + 1):
            # [w^q] A^2 f^m = [w^(q-m)] A^2 F^m
            a.append((A2 * power).coeff(q - m))
            power = (power * Fq).truncate(q)
        Finv = F.reciprocal()
        for m in range(q + 1):
            if a[m] == 0 if not isinstance(a[m], Poly) else a[m].is_zero():
                continue
            e = 1 - m  # f^(1-m) = z^(1-m) F^(1-m)
            Fe = F ** e if e >= 0 else Finv ** (-e)
            for k in range(1, N + 1):
                idx = k + 1 - e
                if 0 <= idx <= Fe.order:
                    delta[k - 1] = delta[k - 1] - a[m] * Fe.coeff(idx)
    if not with_w:
        return delta
    if w is None:
        w = Poly.var(0) if isinstance(one, Poly) else zero
    dw = zero
    wp = w
    for am in a:
        wp_next = wp * w
        dw = dw + am * wp
        wp = wp_next
    return delta, dw


def lv_action(v, x: UnivalentPoint):
    """Tangent vector ``(delta c_1, ..., delta c_N)`` of the field ``v`` at ``x``.

    ``v`` is a WittVector, a Witt basis index, or the coefficient function of
    a vector field.  Coefficients beyond ``N`` are treated as zero.
    """
    modes = _modes(v)
    N = x.N
    out = [Fraction(0)] * N if all(is_exact(t) for t in x.c) else [0j] * N
    for p, amp in modes.items():
        d = residue_delta(list(x.c), p, N)
        out = [o + amp * di for o, di in zip(out, d)]
    return out


def _modes(v):
    if isinstance(v, int):
        return {v: 1}
    if isinstance(v, WittVector):
        return v.modes
    if isinstance(v, FourierFunction):
        return WittVector.from_field(v).modes
    if hasattr(v, "witt"):
        return v.witt.modes
    raise TypeError(f"cannot interpret {type(v).__name__} as a vector field")


# ---------------------------------------------------------------------------
# symbolic operators
@dataclass(frozen=True)
class LpOperator:
    """Coordinate rules of ``L_p``: ``rules[k]`` is ``L_p c_k`` (and ``rules[0]`` is ``L_p w``)."""

    p: int
    N: int
    rules: dict = dc_field(hash=False)
    source: str = "residue"

    def rule(self, k):
        return self.rules[k]

    @property
    def c_rules(self):
        return [self.rules[k] for k in range(1, self.N + 1)]

    @property
    def w_rule(self):
        return self.rules.get(0)

    def apply(self, poly: Poly) -> Poly:
        """Apply ``L_p`` as a derivation to a polynomial in ``w, c_1, c_2, ...``."""
        return apply_rules(self.rules, poly)

    def at(self, x, w=None):
        """Evaluate the rules at a point (``c_j = 0`` for ``j > N`` of the point)."""
        values = _values(x, w)
        out = [self.rules[k].evaluate(values) for k in range(1, self.N + 1)]
        if 0 in self.rules and w is not None:
            return out, self.rules[0].evaluate(values)
        return out


class _Values:
    def __init__(self, cs, w):
        self.cs, self.w = cs, w

    def __getitem__(self, i):
        if i == 0:
            return self.w
        return self.cs[i - 1] if i - 1 < len(self.cs) else 0


def _values(x, w):
    cs = x.c if isinstance(x, UnivalentPoint) else tuple(x)
    return _Values(cs, w if w is not None else 0)


def apply_rules(rules, poly: Poly) -> Poly:
    out = Poly()
    for i in sorted(poly.variables()):
        if i not in rules:
            raise KeyError(f"operator rule for variable {i} is not available")
        out = out + rules[i] * poly.diff(i)
    return out


def _symbols(n):
    return [Poly.var(j) for j in range(1, n + 1)]


@lru_cache(maxsize=None)
def _residue_rules(p, K, with_w):
    cs = _symbols(K + max(0, -p))
    res = residue_delta(cs, p, K, with_w=with_w)
    if with_w:
        d, dw = res
    else:
        d, dw = res, None
    rules = {k: d[k - 1] for k in range(1, K + 1)}
    if with_w:
        rules[0] = dw
    return rules


def bracket_rules(X, Y, K, with_w):
    """Components ``[X, Y]^k = X(Y^k) - Y(X^k)`` for ``k <= K``."""
    keys = ([0] if with_w else []) + list(range(1, K + 1))
    return {k: apply_rules(X, Y[k]) - apply_rules(Y, X[k]) for k in keys}


@lru_cache(maxsize=None)
def _ad_rules(p, K, with_w):
    """``L_{-p}`` for ``p >= 3`` from ``(-1)^p/(p-2)! ad^{p-2}(L_{-1}) L_{-2}``.

    Here ``ad_X Y = [Y, X]``, the right-bracket convention under which the
    prefactor produces ``L_{-p}`` exactly (the left convention would give
    ``(-1)^p L_{-p}``).
    """
    steps = p - 2
    top = K + steps + 2
    X = _residue_rules(-1, top + steps, with_w)
    Y = _residue_rules(-2, top, with_w)
    for r in range(1, steps + 1):
        Y = bracket_rules(Y, X, top - r, with_w)
    coeff = Fraction((-1) ** p, math.factorial(steps))
    keys = ([0] if with_w else []) + list(range(1, K + 1))
    return {k: Y[k] * coeff for k in keys}


def _operator(p, N, source, with_w):
    if abs(p) > MAX_INDEX:
        raise DomainError(f"|p| = {abs(p)} exceeds the supported maximum {MAX_INDEX}")
    if source == "residue" or p >= -2:
        return LpOperator(p, N, _residue_rules(p, N, with_w), "residue")
    if source == "ad":
        return LpOperator(p, N, _ad_rules(-p, N, with_w), "ad")
    raise ValueError(f"unknown source {source!r}")


def oracle_agreement(p: int, N: int, with_w=False):
    """Largest coefficient of the difference between the residue and iterated-ad rules of ``L_p``."""
    if p > -3:
        raise DomainError("the iterated-ad construction covers p <= -3")
    a = _operator(p, N, "residue", with_w).rules
    b = _operator(p, N, "ad", with_w).rules
    return max((a[k] - b[k]).max_abs_coeff() for k in a)


def lp_operator(p: int, N: int, source="residue") -> LpOperator:
    """Symbolic coordinate rules ``L_p c_k`` for ``k = 1..N``.

    ``source="ad"`` builds ``p < -2`` from the iterated-bracket formula
    instead of the residue oracle.
    """
    return _operator(p, N, source, False)


def commutator_residual(m, n, N, source="residue", with_w=False):
    """Largest coefficient of ``([L_m, L_n] - (m-n) L_{m+n}) c_k`` for ``k <= N - |m| - |n|``.

    With ``with_w`` the fibre coordinate ``w`` is included as well.
    """
    Lm = _operator(m, N, source, with_w)
    Ln = _operator(n, N, source, with_w)
    Lmn = _operator(m + n, N, source, with_w)
    kmax = N - abs(m) - abs(n)
    keys = ([0] if with_w else []) + list(range(1, kmax + 1))
    worst = 0
    for k in keys:
        r = Lm.apply(Ln.rules[k]) - Ln.apply(Lm.rules[k]) - Lmn.rules[k] * (m - n)
        worst = max(worst, r.max_abs_coeff())
    return worst


def b_coefficients(N):
    """``B_k = [w^k] 1/(w f(w))`` as polynomials in ``c`` (``k = 1..N``)."""
    cs = _symbols(N + 2)
    F = TruncatedSeries([Poly.const(1)] + cs, low=0, order=N + 2)
    inv = F.reciprocal()  # 1/(f/w); 1/(w f) = w^-2 inv
    return {k: inv.coeff(k + 2) for k in range(1, N + 1)}


# ---------------------------------------------------------------------------
# flows
def flow_on_S(v, time, x: UnivalentPoint, tol=1e-12, max_doublings=14, n0=None):
    """Integrate ``dc/ds = lv_action(v, c)`` with RK4, doubling steps until converged."""
    x = x.to_float()
    if time == 0:
        return x
    modes = _modes(v)
    ops = {p: lp_operator(p, x.N) for p in modes}

    def rhs(c):
        vals = _Values(tuple(c), 0)
        out = np.zeros(len(c), complex)
        for p, amp in modes.items():
            rules = ops[p].rules
            out += complex(amp) * np.array([complex(rules[k].evaluate(vals)) for k in range(1, len(c) + 1)])
        return out

    c0 = x.as_array()

    def integrate(n):
        h = time / n
        c = c0.copy()
        for _ in range(n):
            k1 = rhs(c)
            k2 = rhs(c + 0.5 * h * k1)
            k3 = rhs(c + 0.5 * h * k2)
            k4 = rhs(c + h * k3)
            c = c + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(c)):
                raise FlowUnstable("flow left the finite range")
        return c

    n = n0 or max(4, int(math.ceil(8 * abs(time))))
    prev = integrate(n)
    history = []
    for _ in range(max_doublings):
        n *= 2
        cur = integrate(n)
        err = float(np.max(np.abs(cur - prev)))
        history.append(err)
        prev = cur
        if err <= tol * max(1.0, float(np.max(np.abs(cur)))):
            return UnivalentPoint(tuple(complex(z) for z in cur))
    raise FlowUnstable("RK4 step doubling did not converge", history=history)


def flow_generator(v, tau, grid=1024) -> WittVector:
    """Finite-difference generator ``(flow_exp(v, tau) - id)/tau`` as a Witt vector."""
    g = flow_exp(v, tau, grid=grid)
    f = FourierFunction(g.periodic.coeffs / tau, g.periodic.K)
    return WittVector.from_field(f, tol=1e-13)


# ---------------------------------------------------------------------------
# mean value formula
@dataclass(frozen=True)
class PolyFunctional:
    """``F(c) = Re P(c)`` for a polynomial ``P`` in ``c_1, c_2, ...`` (and ``w``)."""

    poly: Poly

    def __call__(self, c, w=None):
        return float(complex(self.poly.evaluate(_Values(tuple(c), w if w is not None else 0))).real)

    @classmethod
    def parse(cls, text):
        """Parse expressions like ``c2 - c1^2 + (1/2+i)*c3*w``; see :func:`parse_poly`."""
        return cls(parse_poly(text))


def parse_poly(text) -> Poly:
    """Tiny parser for sums of products of ``c<k>``, ``w`` and scalar factors."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    terms = []
    depth, start = 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "*^(eE":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    out = Poly()
    for t in terms:
        sign = 1
        if t.startswith("+"):
            t = t[1:]
        elif t.startswith("-"):
            sign, t = -1, t[1:]
        term = Poly.const(sign)
        for factor in t.split("*"):
            if not factor:
                continue
            base, _, exp = factor.partition("^")
            e = int(exp) if exp else 1
            if base.startswith("(") and base.endswith(")"):
                val = Poly.const(parse_scalar(base[1:-1]))
            elif base == "w":
                val = Poly.var(0)
            elif base.startswith("c") and base[1:].isdigit():
                val = Poly.var(int(base[1:]))
            else:
                val = Poly.const(parse_scalar(base))
            term = term * val ** e
        out = out + term
    return out


def random_functional(rng, nvars=4, degree=3, terms=4) -> PolyFunctional:
    """Random ``Re P(c)`` with ``deg P <= degree`` and Gaussian-rational coefficients."""
    P = Poly()
    for _ in range(terms):
        d = int(rng.integers(1, degree + 1))
        mono = Poly.const(GaussianRationalFrom(rng))
        for _ in range(d):
            mono = mono * Poly.var(int(rng.integers(1, nvars + 1)))
        P = P + mono
    P = P + Poly.const(Fraction(int(rng.integers(-5, 6)), 4))
    return PolyFunctional(P)


def GaussianRationalFrom(rng):  # noqa: N802 - small factory
    from .scalars import GaussianRational
    return GaussianRational.make(Fraction(int(rng.integers(-8, 9)), 4), Fraction(int(rng.integers(-8, 9)), 4))


def koebe_disk_point(a, N) -> UnivalentPoint:
    """``f_a(z) = z/(1 - a z)^2``: ``c_k = (k+1) a^k``."""
    return UnivalentPoint(tuple((k + 1) * a ** k for k in range(1, N + 1)))


def poisson_average(F: PolyFunctional, r, M=512, N=None):
    """Center value ``F(f_0)`` and the mean of ``F(f_a)`` over ``a = r e^{i tau}``."""
    if not 0 < r < 1:
        raise DomainError("radius must lie in (0, 1)")
    if N is None:
        N = max(max(F.poly.variables(), default=1), 1)
    center = F(UnivalentPoint.identity(N).c)
    taus = 2 * np.pi * np.arange(M) / M
    vals = [F(koebe_disk_point(r * np.exp(1j * t), N).c) for t in taus]
    return center, float(np.mean(vals))


# ---------------------------------------------------------------------------
# mirrors
TWO_PI = 2 * np.pi


def _angle(x):
    return float(np.mod(x, TWO_PI))


def _angular_distance(a, b):
    d = abs(_angle(a) - _angle(b))
    return min(d, TWO_PI - d)


def maslov_index(a, b, c, tol=1e-12) -> int:
    """``+1`` if ``a, b, c`` are in counterclockwise cyclic order, else ``-1``."""
    if min(_angular_distance(a, b), _angular_distance(b, c), _angular_distance(a, c)) <= tol:
        raise DegenerateTriple("absolute points must be pairwise distinct")
    return 1 if _angle(b - a) < _angle(c - a) else -1


@dataclass(frozen=True)
class OrientedMirror:
    """An orientation-reversing involution ``s`` of the circle with a fixed point ``a``."""

    s: CircleDiffeo
    a: float

    def __post_init__(self, tol=1e-8):
        if self.s.orientation != -1:
            raise DomainError("a mirror involution must reverse orientation")
        if subsymmetry_involution_check(self.s) > tol:
            raise DomainError("mirror map is not an involution")
        fa = float(self.s(np.array([self.a]))[0])
        if _angular_distance(fa, self.a) > tol:
            raise DomainError("absolute point is not fixed by the mirror map")

    @classmethod
    def standard(cls, theta=0.0, which=0, grid=256):
        """``t -> 2 theta - t`` with absolute point ``theta`` (or ``theta + pi``)."""
        return cls(CircleDiffeo.reflection(theta, grid), _angle(theta + np.pi * which))

    def conjugate_by_rotation(self, alpha):
        rot = CircleDiffeo.rotation(alpha, self.s.grid)
        inv = CircleDiffeo.rotation(-alpha, self.s.grid)
        return OrientedMirror(diffeo_compose(rot, diffeo_compose(self.s, inv)), _angle(self.a + alpha))

    @property
    def axis(self):
        """``theta`` with ``s(t) = 2 theta - t`` (for members of the rotation family)."""
        return _angle(complex(self.s.periodic.coeff(0)).real / 2)


def mirror_parallel(m1: OrientedMirror, m2: OrientedMirror, tol=1e-9) -> bool:
    return _angular_distance(m1.a, m2.a) <= tol


def subsymmetry_involution_check(s: CircleDiffeo) -> float:
    """Sup-norm of ``s o s - id`` on the grid of ``s``."""
    return float(np.max(np.abs(s(s.g) - s.t)))


__all__ = [
    "UnivalentPoint", "koebe_point", "rotate_point", "residue_delta", "lv_action",
    "LpOperator", "lp_operator", "oracle_agreement", "commutator_residual", "bracket_rules",
    "apply_rules", "b_coefficients", "flow_on_S", "flow_generator",
    "PolyFunctional", "parse_poly", "random_functional", "koebe_disk_point",
    "poisson_average", "maslov_index", "OrientedMirror", "mirror_parallel",
    "subsymmetry_involution_check",
]
