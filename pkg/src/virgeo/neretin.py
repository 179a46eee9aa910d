"""The Neretin semigroup of annuli with parametrized boundaries.

An element is a pair ``(p+, p-)``: ``p+`` maps the closed unit disk and
``p-`` the closed exterior disk into the sphere with disjoint interiors.
Pairs differing by a Moebius map are identified.  We fix the gauge by
requiring ``p-(z) = z + O(1/z)`` at infinity, which leaves no freedom.

Both maps are stored through their Laurent coefficients on the unit
circle.  For genuine elements ``p+`` is a Taylor series, but the formal
products used to embed circle diffeomorphisms produce "boundary data"
whose ``p+`` also has negative powers; those are flagged ``datum=True``.

The product ``g1 g2`` glues the inner boundary of ``g1`` to the outer
boundary of ``g2``.  Numerically this is the welding problem

    F(p1+(z)) = G(p2-(z))  on |z| = 1,

with ``F(x) = x + sum_{n>=1} a_n x^{-n}`` conformal outside ``p1+(S^1)`` and
``G(x) = sum_{n>=0} b_n x^n`` conformal inside ``p2-(S^1)``.  The product is
``(G o p2+, F o p1-)``.  The associated germ ``(p-)^{-1} o p+`` composes as
``g1 o g2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circleact import CircleDiffeo, diffeo_compose, diffeo_invert
from .errors import (BranchAmbiguity, DomainError, GaugeSingular, NotContracting,
                     NotImmersive, NotJordan, SplitLimit, WeldingDiverged)
from .seriescore import FourierFunction, TruncatedSeries

DEFAULT_K = 32
DEFAULT_COLLOCATION = 256
QUADRATURE = 4096
CHECK_SAMPLES = 1024
WELD_TOL = 1e-10


def _circle(M, shift=0.0):
    return np.exp(1j * (2 * np.pi * np.arange(M) / M + shift))


def _laurent_eval(coeffs, low, z, deriv=0):
    """``sum_k c_k z^(low+k)`` (or its ``deriv``-th derivative) at the array ``z``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        k = low + i
        f = 1.0
        for j in range(deriv):
            f *= k - j
        if f == 0:
            continue
        out = out + c * f * z ** (k - deriv)
    return out


def _winding(points, curve):
    """Winding numbers of ``curve`` (closed polygon) about each of ``points``."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    d = curve[None, :] - points[:, None]
    steps = np.angle(np.roll(d, -1, axis=1) / d)
    return np.sum(steps, axis=1) / (2 * np.pi)


def _check_jordan(values, deriv, what):
    scale = float(np.max(np.abs(values)))
    if np.min(np.abs(deriv)) <= 1e-9 * max(scale, 1.0):
        raise NotImmersive(f"{what}: derivative vanishes on the circle")
    turning = np.sum(np.angle(np.roll(deriv, -1) / deriv)) / (2 * np.pi)
    wind0 = _winding(0j, values)[0]
    if abs(wind0 - 1) > 1e-6 or abs(turning - 1) > 1e-6:
        raise NotJordan(f"{what}: winding {wind0:.3f} about 0, tangent turning {turning:.3f}")


def _fit_laurent(values, K):
    """Laurent coefficients ``c_{-K} .. c_K`` of periodic samples on the circle."""
    M = len(values)
    a = np.fft.fft(values) / M
    idx = np.arange(-K, K + 1) % M
    return a[idx]


class NeretinElement:
    """Gauge-fixed pair ``(p+, p-)``.

    ``plus`` holds the Laurent coefficients of ``p+`` for powers
    ``plus_low .. plus_low + len - 1``; ``minus`` holds those of ``p-`` for
    powers ``1, 0, -1, -2, ...`` (so ``minus[0]`` is the leading coefficient).
    Inputs with another leading coefficient or a constant term are brought
    to the gauge by the affine map that fixes it.
    """

    __slots__ = ("plus", "plus_low", "minus", "datum", "gauge")

    def __init__(self, plus, minus, datum=False, check=True):
        plus_low, plus = _as_laurent(plus)
        mcoef = _as_minus(minus)
        lead = mcoef[0]
        if abs(lead) < 1e-12:
            raise GaugeSingular("p- has no pole at infinity")
        shift = mcoef[1] if len(mcoef) > 1 else 0
        mcoef = mcoef / lead
        if len(mcoef) > 1:
            mcoef[1] = 0
        plus = plus / lead
        if shift != 0:
            hi = max(plus_low + len(plus) - 1, 0)
            lo = min(plus_low, 0)
            dense = np.zeros(hi - lo + 1, dtype=complex)
            dense[plus_low - lo:plus_low - lo + len(plus)] = plus
            dense[-lo] -= shift / lead
            plus, plus_low = dense, lo
        self.plus = plus
        self.plus_low = plus_low
        self.minus = mcoef
        self.datum = bool(datum)
        self.gauge = "p- = z + O(1/z)"
        if check:
            self.validate()

    # construction ---------------------------------------------------------
    @classmethod
    def from_dicts(cls, plus: dict, minus: dict, datum=False, check=True):
        """Coefficients given as ``{power: value}`` for both maps."""
        return cls(plus, minus, datum, check)

    # evaluation -------------------------------------------------------------
    def p_plus(self, z, deriv=0):
        return _laurent_eval(self.plus, self.plus_low, z, deriv)

    def p_minus(self, z, deriv=0):
        return _laurent_eval(self.minus[::-1], 2 - len(self.minus), z, deriv)

    @property
    def pPlus(self) -> TruncatedSeries:
        """``p+`` as a series in ``z``."""
        lo, c = _trim(self.plus, self.plus_low)
        return TruncatedSeries([complex(x) for x in c], low=lo, order=self.plus_low + len(self.plus) - 1)

    @property
    def pMinus(self) -> TruncatedSeries:
        """``p-`` as a series in ``u = 1/z``, starting ``u^-1 + 0 + ...``."""
        return TruncatedSeries([complex(x) for x in self.minus], low=-1, order=len(self.minus) - 2)

    def coefficient_vector(self, K=DEFAULT_K):
        """Dense coefficients (``p+`` powers ``-K..K``, then ``p-`` powers ``1..-K``)."""
        out = np.zeros(2 * K + 1 + K + 2, dtype=complex)
        for i, c in enumerate(self.plus):
            k = self.plus_low + i
            if -K <= k <= K:
                out[k + K] = c
        m = self.minus[:K + 2]
        out[2 * K + 1:2 * K + 1 + len(m)] = m
        return out

    def distance(self, other, K=DEFAULT_K) -> float:
        return float(np.max(np.abs(self.coefficient_vector(K) - other.coefficient_vector(K))))

    def validate(self, samples=CHECK_SAMPLES):
        z = _circle(samples)
        outer = self.p_minus(z)
        _check_jordan(outer, self.p_minus(z, 1) * 1j * z, "p- boundary")
        inner = self.p_plus(z)
        _check_jordan(inner, self.p_plus(z, 1) * 1j * z, "p+ boundary")
        if self.datum:
            return
        gap = np.min(np.abs(inner[:, None] - outer[None, :]))
        if gap <= 1e-9:
            raise DomainError("boundary curves intersect")
        w_in = _winding(inner[:: max(1, samples // 256)], outer)
        w_out = _winding(outer[:: max(1, samples // 256)], inner)
        if np.any(np.abs(w_in - 1) > 1e-6) or np.any(np.abs(w_out) > 1e-6):
            raise DomainError("p+(S^1) must lie inside p-(S^1)")

    def modulus(self, K=DEFAULT_K, M=DEFAULT_COLLOCATION) -> float:
        """Conformal modulus ``t`` of the annulus between the two boundary curves."""
        if self.datum:
            raise DomainError("boundary data have no annulus")
        z = _circle(M)
        return annulus_map(self.p_plus(z), self.p_minus(z), K).t

    # serialization ----------------------------------------------------------
    def dumps(self) -> str:
        lines = [f"pplus {self.plus_low} {len(self.plus)} {'datum' if self.datum else 'element'}"]
        lines += [f"{float(c.real)!r} {float(c.imag)!r}" for c in self.plus]
        lines.append(f"pminus {len(self.minus)}")
        lines += [f"{float(c.real)!r} {float(c.imag)!r}" for c in self.minus]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text, check=True):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "pplus":
            raise ValueError("expected a 'pplus' block")
        low, n = int(head[1]), int(head[2])
        datum = len(head) > 3 and head[3] == "datum"
        plus = np.array([complex(*map(float, ln.split())) for ln in lines[1:1 + n]])
        mh = lines[1 + n].split()
        if mh[0] != "pminus":
            raise ValueError("expected a 'pminus' block")
        m = int(mh[1])
        minus = np.array([complex(*map(float, ln.split())) for ln in lines[2 + n:2 + n + m]])
        return cls((low, plus), minus, datum, check)

    def __repr__(self):
        kind = "datum" if self.datum else "element"
        return f"NeretinElement({kind}, plus powers {self.plus_low}..{self.plus_low + len(self.plus) - 1}, minus terms {len(self.minus)})"


def _as_laurent(plus):
    if isinstance(plus, TruncatedSeries):
        lo = plus.low
        return lo, np.array([complex(plus.coeff(k)) for k in range(lo, plus.order + 1)])
    if isinstance(plus, dict):
        lo, hi = min(plus), max(plus)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in plus.items():
            arr[k - lo] = complex(v)
        return lo, arr
    lo, arr = plus
    return int(lo), np.array(arr, dtype=complex)


def _as_minus(minus):
    """Coefficients of ``z^1, z^0, z^-1, ...``."""
    if isinstance(minus, TruncatedSeries):  # series in u = 1/z
        if minus.low < -1:
            raise DomainError("p- must have a simple pole at infinity")
        return np.array([complex(minus.coeff(k)) for k in range(-1, minus.order + 1)])
    if isinstance(minus, dict):
        if max(minus) > 1:
            raise DomainError("p- must have a simple pole at infinity")
        n = 2 - min(min(minus), 0)
        arr = np.zeros(n, dtype=complex)
        for k, v in minus.items():
            arr[1 - k] = complex(v)
        return arr
    return np.array(minus, dtype=complex)


def _trim(coeffs, low, tol=0.0):
    nz = np.nonzero(np.abs(coeffs) > tol)[0]
    if len(nz) == 0:
        return low, coeffs[:1]
    return low + nz[0], coeffs[nz[0]:]


# ---------------------------------------------------------------------------
def scaling(t: float) -> NeretinElement:
    """``A(t)``: ``p+(z) = exp(-t) z``, ``p-(z) = z``."""
    if not t > 0:
        raise NotContracting(f"A(t) needs t > 0, got {t}")
    return NeretinElement({1: math.exp(-t)}, {1: 1.0})


def neutral() -> NeretinElement:
    """The unit ``(z, z)``, a degenerate boundary datum."""
    return NeretinElement({1: 1.0}, {1: 1.0}, datum=True)


def embed_diffeo(g, K=DEFAULT_K, samples=CHECK_SAMPLES) -> NeretinElement:
    """Boundary datum ``(g, z)`` of an analytic map ``g: S^1 -> C \\ {0}``.

    ``g`` is a :class:`CircleDiffeo` (read as ``e^{it} -> e^{i g(t)}``), a
    Laurent :class:`TruncatedSeries` in ``z``, or a ``{power: coeff}`` dict.
    """
    if isinstance(g, CircleDiffeo):
        if g.orientation != 1:
            raise NotJordan("orientation-reversing maps are not in the local group")
        P = g.periodic
        # long expansions must decay; short trigonometric polynomials are entire
        mags = np.abs(P.coeffs)
        cut = (3 * P.K) // 4
        tail = max(mags[:P.K - cut + 1].max(), mags[P.K + cut:].max()) if P.K >= 16 else 0.0
        if tail > 1e-8 * max(1.0, float(mags.max())):
            raise DomainError("diffeomorphism is not resolved by its Fourier coefficients")
        M = max(4 * K, 256)
        z = _circle(M)
        vals = z * np.exp(1j * P.samples(M).real)
        plus = (-K, _fit_laurent(vals, K))
    else:
        plus = g
    out = NeretinElement(plus, {1: 1.0}, datum=True, check=False)
    z = _circle(samples)
    _check_jordan(out.p_plus(z), out.p_plus(z, 1) * 1j * z, "g")
    return out


# ---------------------------------------------------------------------------
# welding
@dataclass
class Weld:
    """Solution of a seam equation ``F(p1+) = G(p2-)``."""

    a: np.ndarray  # F(x) = x + sum_{n>=1} a[n-1] x^{-n}
    b: np.ndarray  # G(x) = sum_{n>=0} b[n] x^n
    residual: float
    history: list = field(default_factory=list)

    def F(self, x, deriv=0):
        K = len(self.a)
        coeffs = np.concatenate([self.a[::-1], [0.0, 1.0]])
        return _laurent_eval(coeffs, -K, x, deriv)

    def G(self, x, deriv=0):
        return _laurent_eval(self.b, 0, x, deriv)


def weld(g1: NeretinElement, g2: NeretinElement, K=DEFAULT_K, M=DEFAULT_COLLOCATION,
         tol=WELD_TOL, max_iter=3) -> Weld:
    """Solve the seam equation by Newton steps on the Laurent coefficients.

    The seam residual is affine in the unknown coefficients, so the Jacobian
    is exact and the first step already solves the collocated problem; the
    following steps refine rounding.  The residual is re-checked on the
    midpoints of the collocation grid.
    """
    z = _circle(M)
    x1 = g1.p_plus(z)
    y2 = g2.p_minus(z)
    n = np.arange(1, K + 1)
    cols = np.hstack([x1[:, None] ** (-n[None, :]), -(y2[:, None] ** np.arange(K + 1)[None, :])])
    scale = np.linalg.norm(cols, axis=0)
    J = cols / scale
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] < 1e-13 * sv[0]:
        raise GaugeSingular("seam equation is degenerate")
    u = np.zeros(J.shape[1], dtype=complex)
    history = []
    ref = max(1.0, float(np.max(np.abs(x1))))
    for _ in range(max_iter):
        r = J @ u + x1
        history.append(float(np.max(np.abs(r))) / ref)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        u = u + step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(u))):
            break
    coef = u / scale
    w = Weld(coef[:K], coef[K:], 0.0, history)
    zm = _circle(M, np.pi / M)
    mid = w.F(g1.p_plus(zm)) - w.G(g2.p_minus(zm))
    w.residual = float(np.max(np.abs(mid))) / ref
    history.append(w.residual)
    if not w.residual <= tol:
        raise WeldingDiverged(f"seam residual {w.residual:.3g} exceeds {tol:.1g}", history=history)
    return w


def _product_from_weld(g1, g2, w: Weld, K, M):
    z = _circle(M)
    minus = _fit_laurent(w.F(g1.p_minus(z)), K + 1)  # powers -K-1 .. K+1
    mcoef = minus[::-1][K:2 * K + 2]  # powers 1, 0, ..., -K
    plus = _fit_laurent(w.G(g2.p_plus(z)), K)
    formal = np.max(np.abs(plus[:K])) > 1e-12 * max(1.0, float(np.max(np.abs(plus))))
    if formal:
        low = -K
    else:
        plus, low = plus[K:], 0
    out = NeretinElement((low, plus), mcoef, datum=True, check=False)
    if not formal:
        zc = _circle(256)
        gap = np.min(np.abs(out.p_plus(zc)[:, None] - out.p_minus(zc)[None, :]))
        out.datum = bool(gap <= 1e-9)
    return out


def multiply(g1: NeretinElement, g2: NeretinElement, K=DEFAULT_K, M=DEFAULT_COLLOCATION,
             tol=WELD_TOL, return_weld=False):
    """Glue the inner boundary of ``g1`` to the outer boundary of ``g2``.

    A boundary datum on the right only reparametrizes the inner boundary of
    ``g1`` and the result keeps ``p+`` as boundary values; :func:`canonical`
    turns such a pair back into holomorphic maps.
    """
    w = weld(g1, g2, K, M, tol)
    out = _product_from_weld(g1, g2, w, K, M)
    return (out, w) if return_weld else out


def canonical(g: NeretinElement, K=DEFAULT_K) -> NeretinElement:
    """Holomorphic representative of ``g``, obtained by welding in the unit disk."""
    if not g.datum or np.all(g.plus[:max(0, -g.plus_low)] == 0):
        return g
    return multiply(g, neutral(), K)


# ---------------------------------------------------------------------------
# cocycle
def _log_branch(values):
    """Continuous logarithm of nonvanishing periodic samples."""
    steps = np.angle(np.roll(values, -1) / values)
    if np.max(np.abs(steps)) > np.pi / 2:
        raise BranchAmbiguity("argument jumps between samples; refine the quadrature")
    wind = np.sum(steps) / (2 * np.pi)
    if abs(wind) > 0.25:
        raise BranchAmbiguity(f"logarithm is not single valued (winding {wind:.3f})")
    arg = np.angle(values[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return np.log(np.abs(values)) + 1j * arg


def cocycle_terms(g1, g2, w: Weld, M=QUADRATURE):
    """The four seam integrals ``(T1, T2, T3, T4)`` of the cocycle.

    With ``q = p+``, ``m = p-`` and the welding maps ``F``, ``G``:

        T1 = -oint log q1'      dlog m2'
        T2 =  oint log F'(q1)   dlog G'(m2)
        T3 =  oint log G'(q2)   dlog q2'
        T4 =  oint log m1'      dlog F'(m1)

    all over ``|z| = 1``.
    """
    z = _circle(M)
    dz = 1j * z * (2 * np.pi / M)
    q1, dq1 = g1.p_plus(z), g1.p_plus(z, 1)
    q2d, q2dd = g2.p_plus(z, 1), g2.p_plus(z, 2)
    m1, dm1, ddm1 = g1.p_minus(z), g1.p_minus(z, 1), g1.p_minus(z, 2)
    m2, dm2, ddm2 = g2.p_minus(z), g2.p_minus(z, 1), g2.p_minus(z, 2)
    q2 = g2.p_plus(z)
    T1 = -np.sum(_log_branch(dq1) * ddm2 / dm2 * dz)
    T2 = np.sum(_log_branch(w.F(q1, 1)) * w.G(m2, 2) / w.G(m2, 1) * dm2 * dz)
    T3 = np.sum(_log_branch(w.G(q2, 1)) * q2dd / q2d * dz)
    T4 = np.sum(_log_branch(dm1) * w.F(m1, 2) / w.F(m1, 1) * dm1 * dz)
    return complex(T1), complex(T2), complex(T3), complex(T4)


def neretin_cocycle(g1: NeretinElement, g2: NeretinElement, M=QUADRATURE, K=DEFAULT_K) -> complex:
    """Central-extension cocycle ``c(g1, g2)`` by trapezoidal quadrature."""
    w = weld(g1, g2, K)
    return sum(cocycle_terms(g1, g2, w, M))


def cocycle_identity_residual(g1, g2, g3, M=QUADRATURE, K=DEFAULT_K) -> float:
    """``|c(g1,g2) + c(g1g2,g3) - c(g1,g2g3) - c(g2,g3)|``."""
    g12 = multiply(g1, g2, K)
    g23 = multiply(g2, g3, K)
    c = lambda a, b: neretin_cocycle(a, b, M, K)  # noqa: E731
    return abs(c(g1, g2) + c(g12, g3) - c(g1, g23) - c(g2, g3))


def perturbed_scaling(t, eps, rng, degree=4) -> NeretinElement:
    """``A(t)`` with polynomial perturbations of size ``eps`` in both maps."""
    def unit(n):
        v = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        return v / np.maximum(1.0, np.abs(v))
    a = unit(degree + 1)
    b = unit(degree - 1)
    plus = {0: math.exp(-t) * eps * a[0], 1: math.exp(-t) * (1 + eps * a[1])}
    for n in range(2, degree + 1):
        plus[n] = math.exp(-t) * eps * a[n] / n
    minus = {1: 1.0}
    for n in range(1, degree):
        minus[-n] = eps * b[n - 1] / n
    return NeretinElement(plus, minus)


def first_order_product(s, alpha1, beta1, t, alpha2, beta2):
    """Linearized product of perturbed scalings.

    ``g_i = (e^{-t_i}(z + alpha_i(z)), z + beta_i(z))`` with Taylor
    ``alpha`` and ``beta`` in negative powers (dicts of coefficients).
    Returns ``(alpha3, beta3)`` to first order, from the linearized seam.
    """
    alpha3 = dict(alpha2)
    for n, v in alpha1.items():
        alpha3[n] = alpha3.get(n, 0) + v * math.exp(-t * (n - 1))
    beta3 = dict(beta1)
    for n, v in beta2.items():  # n < 0
        beta3[n] = beta3.get(n, 0) + v * math.exp(-(1 - n) * s)
    return alpha3, beta3


# ---------------------------------------------------------------------------
# annulus maps and the formal-product normal form
@dataclass
class AnnulusMap:
    """``Q(z) = z exp(h(z))`` mapping a doubly connected domain onto ``e^{-t} < |w| < 1``."""

    h: np.ndarray  # Laurent coefficients of h for powers -K..K
    t: float
    residual: float

    def __call__(self, z):
        K = (len(self.h) - 1) // 2
        return z * np.exp(_laurent_eval(self.h, -K, z))

    def log_abs(self, z):
        K = (len(self.h) - 1) // 2
        return np.log(np.abs(z)) + _laurent_eval(self.h, -K, z).real


def annulus_map(inner, outer, K=DEFAULT_K, tol=1e-9) -> AnnulusMap:
    """Conformal map of the domain between two closed curves (given by samples).

    ``log|Q|`` is matched to ``0`` on ``outer`` and ``-t`` on ``inner`` by
    real least squares in the Laurent coefficients of ``h`` and ``t``.
    """
    inner = np.asarray(inner, dtype=complex)
    outer = np.asarray(outer, dtype=complex)
    pts = np.concatenate([outer, inner])
    powers = np.array([k for k in range(-K, K + 1) if k != 0])
    Z = pts[:, None] ** powers[None, :]
    cols = [Z.real, -Z.imag, np.ones((len(pts), 1))]
    tcol = np.concatenate([np.zeros(len(outer)), np.ones(len(inner))])[:, None]
    A = np.hstack(cols + [tcol])
    rhs = -np.log(np.abs(pts))
    scale = np.linalg.norm(A, axis=0)
    sol = np.linalg.lstsq(A / scale, rhs, rcond=None)[0] / scale
    res = float(np.max(np.abs(A @ sol - rhs)))
    nk = len(powers)
    h = np.zeros(2 * K + 1, dtype=complex)
    h[powers + K] = sol[:nk] + 1j * sol[nk:2 * nk]
    h[K] = sol[2 * nk]
    t = float(sol[-1])  # log|Q| = -t on the inner curve
    if res > tol:
        raise WeldingDiverged(f"annulus map residual {res:.3g}", history=[res])
    return AnnulusMap(h, t, res)


@dataclass
class FormalProduct:
    """``p . A(t) . q`` with circle diffeomorphisms ``p``, ``q``."""

    p: CircleDiffeo
    t: float
    q: CircleDiffeo

    def __post_init__(self):
        if not self.t > 0:
            raise NotContracting(f"formal product needs t > 0, got {self.t}")
        if self.p.orientation != 1 or self.q.orientation != 1:
            raise DomainError("formal products use orientation-preserving maps")

    @property
    def normalized(self) -> bool:
        return abs(float(self.p(0.0))) < 1e-9

    def to_element(self, K=DEFAULT_K) -> NeretinElement:
        """The pair of ``[p] A(t) [q]``."""
        left = multiply(embed_diffeo(self.p, K), scaling(self.t), K)
        return canonical(multiply(left, embed_diffeo(self.q, K), K), K)


def _extension_margin(p: CircleDiffeo, tau):
    """``sum |k phi_k| e^{|k| tau}`` for the analytic extension ``z exp(i phi(z))``."""
    P = p.periodic
    k = np.arange(-P.K, P.K + 1)
    return float(np.sum(np.abs(k * P.coeffs) * np.exp(np.abs(k) * tau)))


def safe_depth(p: CircleDiffeo, cap=0.5) -> float:
    """Largest ``tau <= cap`` over which the extension of ``p`` stays comfortably immersive."""
    mu0 = _extension_margin(p, 0.0)
    if mu0 >= 1:
        raise NotImmersive("extension of p is not immersive on the circle")
    bound = mu0 + 0.5 * (1 - mu0)
    lo, hi = 0.0, cap
    if _extension_margin(p, hi) <= bound:
        return hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _extension_margin(p, mid) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


def _extend(p: CircleDiffeo):
    P = p.periodic
    K = P.K
    return lambda z: z * np.exp(1j * _laurent_eval(P.coeffs, -K, z))


def _denoise(g: CircleDiffeo, floor) -> CircleDiffeo:
    """Drop the trailing Fourier modes of ``g`` that lie below ``floor``."""
    P = g.periodic
    mags = np.abs(P.coeffs)
    K = P.K
    while K > 0 and mags[P.K - K] <= floor and mags[P.K + K] <= floor:
        K -= 1
    return CircleDiffeo(FourierFunction(P.coeffs[P.K - K:P.K + K + 1].copy(), K), 1, g.grid)


def _normal_step(s, p: CircleDiffeo, tau, K, M):
    """``A(s) p A(tau) = p' A(t') q'`` for small ``tau``."""
    P = _extend(p)
    g = lambda z: math.exp(-s) * P(math.exp(-tau) * z)  # noqa: E731
    zc = _circle(M)
    Kq = K
    while True:  # enlarge the Laurent basis before giving up on this depth
        try:
            Q = annulus_map(g(zc), zc, Kq)
            break
        except WeldingDiverged:
            if 2 * Kq > M // 4:
                raise
            Kq *= 2
    K = Kq
    # fix the rotation so that Q(1) = 1
    Q.h[K] -= 1j * np.angle(Q(np.array([1.0 + 0j]))[0])
    grid = p.grid
    theta = 2 * np.pi * np.arange(grid) / grid
    zg = np.exp(1j * theta)
    psi = theta + np.unwrap(np.angle(Q(zg) / zg))
    # modes at the level of the annulus residual are noise, and the next
    # step's inward extension would amplify them
    floor = 10 * max(Q.residual, 1e-14)
    Qc = _denoise(CircleDiffeo.from_samples(psi, grid=grid), floor)
    p_new = _denoise(diffeo_invert(Qc), floor)
    chi = theta + np.unwrap(np.angle(Q(g(zg)) / zg))
    q_new = _denoise(CircleDiffeo.from_samples(chi, grid=grid), floor)
    return p_new, Q.t, q_new


def normal_form(x: FormalProduct, s: float, K=DEFAULT_K, M=DEFAULT_COLLOCATION,
                max_splits=64) -> FormalProduct:
    """Rewrite ``A(s) . x`` as ``p' . A(t') . q'``.

    When ``p`` does not extend far enough inward, ``A(t)`` is split into
    ``n`` equal pieces which are absorbed one at a time.  A piece whose
    annulus map cannot be resolved with ``K`` coefficients is halved;
    every attempt counts toward ``max_splits``.
    """
    if not s > 0:
        raise NotContracting(f"A(s) needs s > 0, got {s}")
    p_acc, cur_s, cur_p = None, s, x.p
    remaining = x.t
    splits = 0
    while remaining > 1e-15:
        depth = safe_depth(cur_p)
        n = max(1, math.ceil(remaining / depth - 1e-12))
        tau = remaining / n
        while True:
            splits += 1
            if splits > max_splits:
                raise SplitLimit(f"more than {max_splits} splitting steps needed")
            try:
                p_new, t_new, q_new = _normal_step(cur_s, cur_p, tau, K, M)
                break
            except WeldingDiverged:
                tau *= 0.5
        p_acc = p_new if p_acc is None else diffeo_compose(p_acc, p_new)
        remaining -= tau
        cur_s, cur_p = t_new, q_new
    return FormalProduct(p_acc, cur_s, diffeo_compose(cur_p, x.q))


__all__ = [
    "NeretinElement", "scaling", "neutral", "embed_diffeo", "canonical", "Weld", "weld", "multiply",
    "cocycle_terms", "neretin_cocycle", "cocycle_identity_residual", "perturbed_scaling",
    "first_order_product", "AnnulusMap", "annulus_map", "FormalProduct", "safe_depth",
    "normal_form",
]
