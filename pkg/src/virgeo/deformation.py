"""The universal deformation of the disk: pairs ``(f, w)`` with ``1/w`` outside ``f(D)``.

The Witt algebra acts on the pair through the same residue computation as
on the base; the fibre coordinate moves by

    delta w = sum_{m=0}^{q} a_m w^(m+1),    a_m = [z^q] (z f'/f)^2 f^m,  q = -p,

so ``L_0`` contributes ``w d/dw`` and ``L_{-1}`` contributes ``(2 c_1 w + w^2) d/dw``.

Subsymmetries are the rotation conjugates ``s_theta`` of ``t -> -t``.  On
pairs, ``s_0`` is ``(f(z), w) -> (conj f(conj z), conj w)`` and
``s_theta = R_theta s_0 R_theta^{-1}`` with the rotation
``R_alpha (c_k, w) = (c_k e^{-i k alpha}, w e^{-i alpha})``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circleact import CircleDiffeo
from .errors import InvalidDeformationPoint, LimitDiverged, UnsupportedSubsymmetry
from .flagspace import (OrientedMirror, PolyFunctional, UnivalentPoint, _modes,
                        _operator, commutator_residual, koebe_disk_point,
                        koebe_point, residue_delta)
from .polynomial import Poly
from .scalars import conj, exact_exp_i, format_exact, is_exact, parse_scalar
from .virasoro import kks_form_mean, s as s_field


@dataclass(frozen=True)
class DeformationPoint:
    base: UnivalentPoint
    w: object

    def __post_init__(self):
        if self.w == 0:
            raise InvalidDeformationPoint("the fibre coordinate must be nonzero")

    @property
    def c(self):
        return self.base.c

    @property
    def N(self):
        return self.base.N

    def as_array(self):
        return np.concatenate([self.base.as_array(), [complex(self.w)]])

    def distance(self, other):
        return float(np.max(np.abs(self.as_array() - other.as_array())))

    def dumps(self):
        lines = [f"apoint {self.N}"] + self.base.dumps().splitlines()[1:]
        if is_exact(self.w):
            lines.append(f"w {format_exact(self.w)}")
        else:
            z = complex(self.w)
            lines.append(f"w {z.real!r} {z.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "apoint":
            raise ValueError("bad deformation point header")
        N = int(head[1])
        base = UnivalentPoint.loads("\n".join([f"spoint {N}"] + lines[1:N + 1]))
        wparts = lines[N + 1].split()[1:]
        w = complex(float(wparts[0]), float(wparts[1])) if len(wparts) == 2 else parse_scalar(wparts[0])
        return cls(base, w)


def winding_about(x: DeformationPoint, delta=0.05, M=4096) -> int:
    """Winding number of ``f(z) - 1/w`` around 0 on ``|z| = 1 - delta``."""
    z = (1 - delta) * np.exp(2j * np.pi * np.arange(M + 1) / M)
    vals = x.base.evaluate(z) - 1 / complex(x.w)
    ang = np.unwrap(np.angle(vals))
    return int(round((ang[-1] - ang[0]) / (2 * np.pi)))


def validate_point(x: DeformationPoint, delta=0.05, M=4096) -> DeformationPoint:
    """Raise InvalidDeformationPoint unless ``1/w`` lies outside ``f(|z| < 1 - delta)``."""
    n = winding_about(x, delta, M)
    if n != 0:
        raise InvalidDeformationPoint(f"1/w is enclosed by the image curve (winding {n})")
    return x


# ---------------------------------------------------------------------------
# action and operators
def lv_action_def(v, x: DeformationPoint):
    """Tangent ``([delta c_k], delta w)`` of the field ``v`` at ``(f, w)``."""
    modes = _modes(v)
    N = x.N
    exact = all(is_exact(t) for t in x.c) and is_exact(x.w)
    dc = [Fraction(0) if exact else 0j] * N
    dw = Fraction(0) if exact else 0j
    for p, amp in modes.items():
        d, dwp = residue_delta(list(x.c), p, N, with_w=True, w=x.w)
        dc = [o + amp * di for o, di in zip(dc, d)]
        dw = dw + amp * dwp
    return dc, dw


def lp_operator_def(p: int, N: int, source="residue"):
    """Rules of the lifted ``L_p``; ``rules[0]`` is the ``d/dw`` component."""
    return _operator(p, N, source, True)


def commutator_residual_def(m, n, N, source="residue"):
    """Commutator residual on ``c_1..c_{N-|m|-|n|}`` and on ``w``."""
    return commutator_residual(m, n, N, source, with_w=True)


def project(x: DeformationPoint) -> UnivalentPoint:
    return x.base


def projection_equivariance_residual(p, N, source="residue"):
    """Largest coefficient of ``cRules(lifted L_p) - rules(L_p)``; zero when equivariant."""
    lifted = _operator(p, N, source, True)
    base = _operator(p, N, source, False)
    worst = 0
    for k in range(1, N + 1):
        worst = max(worst, (lifted.rules[k] - base.rules[k]).max_abs_coeff())
    return worst


# ---------------------------------------------------------------------------
# subsymmetries
def _phase(k, angle):
    """``e^{i k angle}``, exact when ``angle`` is a multiple of pi."""
    a = float(np.mod(angle, 2 * np.pi))
    if a == 0.0 or abs(a) < 1e-300:
        return Fraction(1)
    if a == float(np.pi):
        return Fraction((-1) ** (k % 2))
    return exact_exp_i(k, angle)


def rotate(x: DeformationPoint, alpha) -> DeformationPoint:
    c = tuple(ck * _phase(-k, alpha) for k, ck in enumerate(x.c, 1))
    return DeformationPoint(UnivalentPoint(c), x.w * _phase(-1, alpha))


@dataclass(frozen=True)
class Subsymmetry:
    """``s_theta(t) = 2 theta - t`` and its extension to pairs ``(f, w)``."""

    theta: float

    def circle_map(self, grid=256):
        return CircleDiffeo.reflection(self.theta, grid)

    def __call__(self, x: DeformationPoint) -> DeformationPoint:
        return subsymmetry_extend(self, x)

    def on_circle(self, t):
        return 2 * self.theta - np.asarray(t)


def as_subsymmetry(s, tol=1e-10) -> Subsymmetry:
    """Identify a circle involution with a member of the rotation-conjugate family."""
    if isinstance(s, Subsymmetry):
        return s
    if isinstance(s, OrientedMirror):
        s = s.s
    if isinstance(s, (int, float)):
        return Subsymmetry(float(s))
    if not isinstance(s, CircleDiffeo) or s.orientation != -1:
        raise UnsupportedSubsymmetry("expected an orientation-reversing circle map")
    P = s.periodic
    osc = np.abs(P.coeffs).copy()
    osc[P.K] = 0
    if osc.max(initial=0.0) > tol:
        raise UnsupportedSubsymmetry("only reflections t -> 2 theta - t are supported")
    return Subsymmetry(float(np.mod(complex(P.coeff(0)).real / 2, np.pi)))


def subsymmetry_extend(s, x: DeformationPoint) -> DeformationPoint:
    """``s_theta`` on pairs: ``c_k -> conj(c_k) e^{-2ik theta}``, ``w -> conj(w) e^{-2i theta}``."""
    theta = as_subsymmetry(s).theta
    c = tuple(conj(ck) * _phase(-k, 2 * theta) for k, ck in enumerate(x.c, 1))
    return DeformationPoint(UnivalentPoint(c), conj(x.w) * _phase(-1, 2 * theta))


def mirror_of(x: DeformationPoint, tol=1e-9) -> Subsymmetry:
    """The subsymmetry ``s_x`` whose mirror contains ``x``."""
    w = complex(x.w)
    theta = float(np.mod(-np.angle(w), np.pi))
    for k, ck in enumerate(x.c, 1):
        z = complex(ck) * np.exp(1j * k * theta)
        if abs(z.imag) > tol * max(1.0, abs(z)):
            raise UnsupportedSubsymmetry("point lies on no mirror of the rotation family")
    return Subsymmetry(theta)


def mirror_point(theta, radii, w_modulus, N=None) -> DeformationPoint:
    """A point on the mirror of ``s_theta``: Koebe-disk base ``a = r e^{-i theta}``, real-rotated ``w``.

    ``radii`` is the real parameter ``r`` of the base, ``w_modulus`` the signed
    real coordinate of ``w e^{i theta}``.
    """
    N = N or 6
    base = koebe_disk_point(radii * np.exp(-1j * theta), N)
    return DeformationPoint(base, w_modulus * np.exp(-1j * theta))


def subsymmetric_axiom_check(points, subsymmetries, probes=None):
    """Max deviation in ``s_x(x) = x``, ``s^2 = id`` and ``s_x s_y s_x = s_{s_x y}``.

    ``points`` must lie on mirrors (their ``s_x`` is found by :func:`mirror_of`);
    ``subsymmetries`` are additional members of the family whose involutivity
    and circle relations are checked; ``probes`` are points on which the map
    identities are evaluated (defaults to ``points``).
    """
    probes = list(points) if probes is None else list(probes)
    worst = 0.0
    sx = [mirror_of(x) for x in points]
    for x, s in zip(points, sx):
        worst = max(worst, s(x).distance(x))
    family = [as_subsymmetry(s) for s in subsymmetries] + sx
    for s in family:
        for z in probes:
            worst = max(worst, s(s(z)).distance(z))
    for x, s_x in zip(points, sx):
        for y in points:
            s_sxy = mirror_of(s_x(y))
            s_y = mirror_of(y)
            for z in probes:
                lhs = s_x(s_y(s_x(z)))
                worst = max(worst, lhs.distance(s_sxy(z)))
    grid = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    for a in family:
        for b in family:
            lhs = a.on_circle(b.on_circle(a.on_circle(grid)))
            rhs = Subsymmetry(2 * a.theta - b.theta).on_circle(grid)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def antiholomorphy_residual(theta, x: DeformationPoint, p: int):
    """``delta_p(s x) - e^{2ip theta} s_lin(delta_p x)``; zero when ``s`` is antiholomorphic."""
    s = Subsymmetry(theta)
    dc1, dw1 = lv_action_def(p, s(x))
    dc0, dw0 = lv_action_def(p, x)
    ph = np.exp(2j * p * theta)
    worst = 0.0
    for k, (a, b) in enumerate(zip(dc1, dc0), 1):
        worst = max(worst, abs(complex(a) - ph * np.conj(complex(b)) * np.exp(-2j * k * theta)))
    worst = max(worst, abs(complex(dw1) - ph * np.conj(complex(dw0)) * np.exp(-2j * theta)))
    return worst


def mirror_isotropy_residual(a, b, nmax=6):
    """Largest ``|kks(a, b, s_n, s_m)|`` over the tangent fields of the ``s_0`` mirror."""
    worst = 0
    for n in range(1, nmax + 1):
        for m in range(1, nmax + 1):
            worst = max(worst, abs(complex(kks_form_mean(a, b, s_field(n), s_field(m)))))
    return worst


def mirror_tangent_reality(x: DeformationPoint, nmax=4):
    """At a real point, odd fields ``s_n`` move it along real directions.

    Returns the largest imaginary part of ``delta`` over ``s_1..s_nmax``.
    """
    worst = 0.0
    for n in range(1, nmax + 1):
        dc, dw = lv_action_def(s_field(n), x)
        worst = max([worst, abs(complex(dw).imag)] + [abs(complex(d).imag) for d in dc])
    return worst


# ---------------------------------------------------------------------------
# boundary limit
def cut_end(a) -> complex:
    """Fibre value ``b`` at the finite end of the slit of ``koebe_point(-a)``."""
    return -4 * np.exp(-1j * a)


def boundary_limit(F: PolyFunctional, mirror, N=None, h0=0.5, levels=12, tol=1e-8):
    """Limit of ``F(f_rho, w)`` as the base tends to the Koebe map of the mirror
    and ``w`` tends radially to the slit end, by Richardson extrapolation.
    """
    a = mirror.a if isinstance(mirror, OrientedMirror) else float(mirror)
    if N is None:
        N = max([v for v in F.poly.variables() if v > 0], default=1)
    b = cut_end(a)
    hs = [h0 * 2.0 ** (-n) for n in range(levels)]
    vals = []
    for h in hs:
        base = koebe_disk_point((1 - h) * np.exp(-1j * a), N)
        w = b / (1 + h)
        vals.append(F(base.c, w))
    # Richardson table for an expansion in powers of h (ratio 2)
    table = [vals]
    for j in range(1, levels):
        prev = table[-1]
        fac = 2.0 ** j
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
    diag = [row[-1] for row in table]
    diffs = [abs(diag[i + 1] - diag[i]) for i in range(len(diag) - 1)]
    best = int(np.argmin(diffs))
    if diffs[best] > tol * max(1.0, abs(diag[best + 1])):
        raise LimitDiverged("Richardson extrapolation did not settle", history=diffs)
    return float(diag[best + 1])


__all__ = [
    "DeformationPoint", "winding_about", "validate_point", "lv_action_def",
    "lp_operator_def", "commutator_residual_def", "project",
    "projection_equivariance_residual", "rotate", "Subsymmetry", "as_subsymmetry",
    "subsymmetry_extend", "mirror_of", "mirror_point", "subsymmetric_axiom_check",
    "antiholomorphy_residual", "mirror_isotropy_residual", "mirror_tangent_reality",
    "cut_end", "boundary_limit", "koebe_point", "Poly",
]
