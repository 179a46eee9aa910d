"""Circle diffeomorphisms and their actions.

A diffeomorphism is stored through its lift ``g(t) = sigma*t + P(t)`` with
``sigma = +1`` (orientation preserving) or ``-1`` (reversing) and ``P`` a
real trigonometric polynomial.  Samples of ``g`` and its first three
derivatives on a uniform grid are computed once at construction.

Compositions and inverses are evaluated pointwise on the grid and refit to
Fourier coefficients, so everything downstream is spectrally accurate for
smooth maps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, FlowUnstable, InversionDiverged, NotADiffeo,
                     NotAProbabilityDensity)
from .seriescore import FourierFunction, TruncatedSeries
from .virasoro import field, kks_form, kks_form_mean  # noqa: F401  (re-exported)

DEFAULT_GRID = 4096
DERIVATIVE_MARGIN = 1e-9
TRIM = 1e-14


def _grid(M):
    return 2 * np.pi * np.arange(M) / M


def _refit(values, trim=TRIM):
    """Real periodic samples -> trimmed FourierFunction.

    The mean is split off before trimming so that a large rotation constant
    does not raise the truncation threshold of the oscillating part; the
    threshold is relative to ``max(1, max|a_k|)`` so pure noise is dropped.
    """
    values = np.asarray(values, dtype=complex)
    mean = values.mean()
    f = FourierFunction.from_samples(values - mean)
    mags = np.abs(f.coeffs)
    floor = trim * max(float(mags.max()), 1.0)
    K = f.K
    while K > 0 and mags[f.K - K] <= floor and mags[f.K + K] <= floor:
        K -= 1
    coeffs = f.coeffs[f.K - K:f.K + K + 1].copy()
    coeffs[K] = mean
    return FourierFunction(coeffs, K)


def _split(P: FourierFunction):
    """``(constant, oscillating part)`` of a float trigonometric polynomial."""
    c0 = complex(P.coeff(0))
    osc = P.coeffs.copy()
    osc[P.K] = 0
    return c0, FourierFunction(osc, P.K)


def _real_field(v):
    """Coefficient function of a real vector field, as a float FourierFunction."""
    f = field(v).to_float()
    if not f.is_real(tol=1e-12 * max(1.0, float(np.abs(f.coeffs).max()))):
        raise DomainError("vector field is not real")
    return f


class CircleDiffeo:
    """Lift ``g(t) = orientation * t + periodic(t)`` of a circle map."""

    __slots__ = ("periodic", "orientation", "grid", "t", "g", "dg", "d2g", "d3g")

    def __init__(self, periodic: FourierFunction | None = None, orientation: int = 1,
                 grid: int = DEFAULT_GRID, check: bool = True):
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if periodic is None:
            periodic = FourierFunction.constant(0.0)
        periodic = periodic.to_float()
        if 2 * periodic.K + 1 > grid:
            periodic = FourierFunction(periodic.coeffs[periodic.K - (grid - 1) // 2:
                                                       periodic.K + (grid - 1) // 2 + 1], (grid - 1) // 2)
        self.periodic = periodic
        self.orientation = orientation
        self.grid = grid
        self.t = _grid(grid)
        self.g = orientation * self.t + periodic.samples(grid).real
        self.dg = orientation + periodic.derivative().samples(grid).real
        self.d2g = periodic.derivative(2).samples(grid).real
        self.d3g = periodic.derivative(3).samples(grid).real
        if check:
            margin = np.min(orientation * self.dg)
            if margin <= DERIVATIVE_MARGIN:
                raise NotADiffeo(f"derivative margin {margin:.3g} violated")

    # constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, grid=DEFAULT_GRID):
        return cls(None, 1, grid)

    @classmethod
    def rotation(cls, alpha, grid=DEFAULT_GRID):
        return cls(FourierFunction.constant(complex(alpha)), 1, grid)

    @classmethod
    def from_trig(cls, const=0.0, cos=(), sin=(), orientation=1, grid=DEFAULT_GRID):
        """``orientation*t + const + sum cos[n-1] cos(nt) + sin[n-1] sin(nt)``."""
        return cls(FourierFunction.from_cos_sin(float(const), [float(x) for x in cos],
                                                [float(x) for x in sin]), orientation, grid)

    @classmethod
    def reflection(cls, theta=0.0, grid=DEFAULT_GRID):
        """The involution ``t -> 2 theta - t`` (``theta = 0`` gives ``t -> -t``)."""
        return cls(FourierFunction.constant(complex(2 * theta)), -1, grid)

    @classmethod
    def from_samples(cls, values, orientation=1, grid=None):
        """Build from samples of ``g`` on the uniform grid of the same length."""
        values = np.asarray(values, dtype=float)
        M = len(values)
        P = values - orientation * _grid(M)
        return cls(_refit(P), orientation, grid or M)

    @classmethod
    def parse(cls, spec: str, grid=DEFAULT_GRID):
        """Inline specs: ``id``, ``rot:a``, ``sin:k:a``, ``cos:k:a``, ``mirror:theta``.

        Specs joined by ``*`` are composed left to right (``a*b`` is ``a o b``).
        """
        parts = spec.split("*")
        if len(parts) > 1:
            out = cls.parse(parts[0], grid)
            for p in parts[1:]:
                out = diffeo_compose(out, cls.parse(p, grid))
            return out
        bits = spec.strip().split(":")
        kind = bits[0]
        try:
            if kind == "id":
                return cls.identity(grid)
            if kind == "rot":
                return cls.rotation(float(bits[1]), grid)
            if kind in ("sin", "cos"):
                k, a = int(bits[1]), float(bits[2])
                coeffs = [0.0] * k
                coeffs[k - 1] = a
                return cls.from_trig(0.0, coeffs if kind == "cos" else (),
                                     coeffs if kind == "sin" else (), 1, grid)
            if kind == "mirror":
                return cls.reflection(float(bits[1]) if len(bits) > 1 else 0.0, grid)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"malformed diffeo spec {spec!r}") from exc
        raise ValueError(f"unknown diffeo spec {spec!r}")

    # evaluation -----------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.orientation * t + self.periodic(t).real

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.orientation + self.periodic.derivative()(t).real

    def with_grid(self, grid):
        return CircleDiffeo(self.periodic, self.orientation, grid)

    def __matmul__(self, other):
        return diffeo_compose(self, other)

    def sup_distance(self, other):
        """Sup-norm distance of the lifts on the grid."""
        return float(np.max(np.abs(self.g - other(self.t))))

    def __repr__(self):
        return f"CircleDiffeo(orientation={self.orientation:+d}, K={self.periodic.K}, grid={self.grid})"

    # serialization --------------------------------------------------------
    def dumps(self):
        P = self.periodic
        lines = [f"diffeo {'+' if self.orientation > 0 else '-'} {P.K}"]
        for k in range(-P.K, P.K + 1):
            z = complex(P.coeff(k))
            lines.append(f"{z.real!r} {z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text, grid=DEFAULT_GRID):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "diffeo":
            raise ValueError("bad diffeo header")
        orientation = 1 if head[1] == "+" else -1
        K = int(head[2])
        vals = [complex(*map(float, ln.split())) for ln in lines[1:2 * K + 2]]
        return cls(FourierFunction(np.array(vals), K), orientation, grid)


# group operations ---------------------------------------------------------
def diffeo_compose(g1: CircleDiffeo, g2: CircleDiffeo) -> CircleDiffeo:
    """``g1 o g2`` on the grid of ``g2``.

    The periodic part is ``sigma1 * P2(t) + P1(g2(t))``; the rotation
    constants are added after the fit to keep rounding noise small.
    """
    c1, osc1 = _split(g1.periodic)
    c2, osc2 = _split(g2.periodic)
    vals = g1.orientation * osc2.samples(g2.grid).real + osc1(g2.g).real
    P = _refit(vals)
    coeffs = P.coeffs.copy()
    coeffs[P.K] += g1.orientation * c2 + c1
    sigma = g1.orientation * g2.orientation
    return CircleDiffeo(FourierFunction(coeffs, P.K), sigma, g2.grid)


def _invert_samples(g: CircleDiffeo, targets, tol=1e-12, max_steps=50):
    sigma = g.orientation
    x = sigma * (targets - g.periodic.mean().real)
    for _ in range(max_steps):
        r = g(x) - targets
        step = r / g.derivative(x)
        x = x - step
        if np.max(np.abs(step)) <= tol:
            return x
    raise InversionDiverged(f"Newton inversion did not converge (last step {np.max(np.abs(step)):.3g})",
                            history=[float(np.max(np.abs(step)))])


def diffeo_invert(g: CircleDiffeo, tol=1e-12, max_steps=50) -> CircleDiffeo:
    """Inverse by per-gridpoint Newton iteration, then refit."""
    x = _invert_samples(g, g.t, tol, max_steps)
    P = x - g.orientation * g.t
    return CircleDiffeo(_refit(P), g.orientation, g.grid)


def flow_exp(v, time: float, grid=DEFAULT_GRID, tol=1e-13, stability=50.0,
             max_doublings=12) -> CircleDiffeo:
    """Time-``time`` flow of the real vector field ``v(t) d/dt``.

    Fixed-step RK4 per gridpoint; the step count is doubled until two
    successive solutions agree to ``tol`` (a Richardson-style check).
    """
    u = _real_field(v)
    du = u.derivative()
    t0 = _grid(grid)
    if time == 0:
        return CircleDiffeo.identity(grid)
    lip = float(np.max(np.abs(du.samples(max(64, 4 * du.K + 4)))))
    if abs(time) * lip > stability:
        raise FlowUnstable(f"|time|*Lip(v) = {abs(time) * lip:.3g} exceeds stability bound {stability}")

    def rhs(x):
        return u(x).real

    def integrate(n):
        hstep = time / n
        x = t0.copy()
        for _ in range(n):
            k1 = rhs(x)
            k2 = rhs(x + 0.5 * hstep * k1)
            k3 = rhs(x + 0.5 * hstep * k2)
            k4 = rhs(x + hstep * k3)
            x = x + hstep / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return x

    n = max(8, int(math.ceil(4 * abs(time) * max(lip, 1.0))))
    prev = integrate(n)
    history = []
    for _ in range(max_doublings):
        n *= 2
        cur = integrate(n)
        err = float(np.max(np.abs(cur - prev)))
        history.append(err)
        prev = cur
        if err <= tol * max(1.0, abs(time)):
            break
    else:
        raise FlowUnstable("RK4 step doubling did not converge", history=history)
    try:
        return CircleDiffeo(_refit(prev - t0), 1, grid)
    except NotADiffeo as exc:
        raise FlowUnstable("flow lost monotonicity", history=history) from exc


# cocycles and derivatives ---------------------------------------------------
def bott_cocycle(g1: CircleDiffeo, g2: CircleDiffeo) -> float:
    """``integral log((g1 o g2)') d log(g2')`` by the trapezoidal rule.

    Since ``log g2'`` is periodic this equals
    ``integral log(g1'(g2(t))) * g2''(t)/g2'(t) dt``.
    """
    if g1.orientation != 1 or g2.orientation != 1:
        raise NotADiffeo("the cocycle is defined on orientation-preserving maps")
    d1 = g1.derivative(g2.g)
    if np.min(d1) <= 0 or np.min(g2.dg) <= 0:
        raise NotADiffeo("nonpositive derivative")
    integrand = np.log(d1) * g2.d2g / g2.dg
    return float(2 * np.pi * np.mean(integrand))


def bott_identity_residual(g1, g2, g3):
    """``c(g1,g2) + c(g1g2,g3) - c(g1,g2g3) - c(g2,g3)``."""
    g12 = diffeo_compose(g1, g2)
    g23 = diffeo_compose(g2, g3)
    return (bott_cocycle(g1, g2) + bott_cocycle(g12, g3)
            - bott_cocycle(g1, g23) - bott_cocycle(g2, g3))


def schwarzian(g):
    """``S(g) = g'''/g' - (3/2) (g''/g')^2``.

    A :class:`CircleDiffeo` gives a FourierFunction; a TruncatedSeries gives a
    TruncatedSeries (exact in rational mode).
    """
    if isinstance(g, TruncatedSeries):
        d1 = g.derivative()
        d2 = d1.derivative()
        d3 = d2.derivative()
        if not d1.coeffs or d1.normalized().low != 0:
            raise NotADiffeo("series derivative vanishes at the origin")
        r = d2 / d1
        from fractions import Fraction
        return d3 / d1 - r * r * Fraction(3, 2)
    if isinstance(g, CircleDiffeo):
        if np.min(np.abs(g.dg)) <= DERIVATIVE_MARGIN:
            raise NotADiffeo("vanishing derivative")
        r = g.d2g / g.dg
        return _refit(g.d3g / g.dg - 1.5 * r * r)
    raise TypeError("schwarzian expects a CircleDiffeo or a TruncatedSeries")


def _schwarzian_samples(g: CircleDiffeo):
    r = g.d2g / g.dg
    return g.d3g / g.dg - 1.5 * r * r


def mobius_series(a, b, c, d, N):
    """Taylor series of ``(a z + b)/(c z + d)`` at 0 through order ``N``."""
    z = TruncatedSeries.identity(N)
    return (z * a + b) / (z * c + d)


# coadjoint and density actions --------------------------------------------
@dataclass(frozen=True)
class CoadjointVector:
    """The pair ``(p(t) dt^2, b)``."""

    p: FourierFunction
    b: float

    def distance(self, other, grid=DEFAULT_GRID):
        dp = np.max(np.abs(self.p.samples(grid) - other.p.samples(grid)))
        return float(max(dp, abs(self.b - other.b)))


def _schwarzian_at(g: CircleDiffeo, x):
    P = g.periodic
    d1 = g.orientation + P.derivative()(x).real
    d2 = P.derivative(2)(x).real
    d3 = P.derivative(3)(x).real
    r = d2 / d1
    return d1, d3 / d1 - 1.5 * r * r


def coadjoint_act(g: CircleDiffeo, x: CoadjointVector, convention="left") -> CoadjointVector:
    """Coadjoint action on quadratic differentials with central charge ``b``.

    ``convention="left"`` (default) returns ``((p o h)(h')^2 - b S(h), b)``
    with ``h = g^{-1}``, which satisfies ``K(g1 g2) = K(g1) K(g2)``.
    ``convention="pullback"`` returns ``((p o g)(g')^2 - b S(g), b)``, which
    satisfies ``K(g1 g2) = K(g2) K(g1)``.

    For the left action the identities ``h' = 1/(g' o h)`` and
    ``S(h) = -(S(g) o h) (h')^2`` are used, so no derivative of the
    numerically inverted map is ever taken.
    """
    if g.orientation != 1:
        raise NotADiffeo("coadjoint action needs an orientation-preserving map")
    if convention == "left":
        xs = _invert_samples(g, g.t)
        d1, S = _schwarzian_at(g, xs)
        vals = (x.p(xs).real + x.b * S) / d1 ** 2
    elif convention == "pullback":
        vals = x.p(g.g).real * g.dg ** 2 - x.b * _schwarzian_samples(g)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return CoadjointVector(_refit(vals), x.b)


def density_act(g: CircleDiffeo, u: FourierFunction, mass_tol=1e-8) -> FourierFunction:
    """Push forward a probability density: ``u(g^{-1}(t)) (g^{-1})'(t)``."""
    u = u.to_float()
    M = g.grid
    us = u.samples(M).real
    if np.min(us) <= 0:
        raise NotAProbabilityDensity("density must be positive")
    mass = 2 * np.pi * float(u.mean().real)
    if abs(mass - 1) > mass_tol:
        raise NotAProbabilityDensity(f"total mass {mass!r} differs from 1")
    xs = _invert_samples(g, g.t)
    vals = u(xs).real / np.abs(g.derivative(xs))
    return _refit(vals)


def total_mass(u: FourierFunction) -> float:
    return 2 * np.pi * float(complex(u.mean()).real)


def uniform_density():
    return FourierFunction.constant(1 / (2 * np.pi))


def random_diffeo(rng, K=3, amplitude=0.2, grid=DEFAULT_GRID, rotation=True):
    """Random orientation-preserving diffeo with Fourier amplitude ``<= amplitude``.

    The harmonics are scaled so that ``sum k (|a_k| + |b_k|) <= 1/2``, which keeps
    the derivative above 1/2.
    """
    a = rng.uniform(-1, 1, K)
    b = rng.uniform(-1, 1, K)
    ks = np.arange(1, K + 1)
    weight = float(np.sum(ks * (np.abs(a) + np.abs(b))))
    scale = min(amplitude, 0.5 / weight) if weight > 0 else amplitude
    const = rng.uniform(-np.pi, np.pi) if rotation else 0.0
    return CircleDiffeo.from_trig(const, a * scale, b * scale, 1, grid)


__all__ = [
    "CircleDiffeo", "CoadjointVector", "diffeo_compose", "diffeo_invert",
    "flow_exp", "bott_cocycle", "bott_identity_residual", "schwarzian",
    "mobius_series", "coadjoint_act", "density_act", "kks_form", "total_mass",
    "uniform_density", "random_diffeo",
]
