from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virgeo.circleact import CircleDiffeo, diffeo_compose
from virgeo.errors import DegenerateTriple, DomainError
from virgeo.flagspace import (OrientedMirror, PolyFunctional, UnivalentPoint, b_coefficients,
                              commutator_residual, flow_generator, flow_on_S, koebe_point,
                              lp_operator, lv_action, maslov_index, mirror_parallel,
                              oracle_agreement, poisson_average, random_functional, rotate_point,
                              subsymmetry_involution_check)
from virgeo.polynomial import Poly
from virgeo.seriescore import TruncatedSeries
from virgeo.virasoro import WittVector, c, e, s

F = Fraction


def symbols(n):
    return [Poly.var(k) for k in range(1, n + 1)]


def random_point(rng, N, den=5):
    return UnivalentPoint(tuple(F(int(rng.integers(-4, 5)), den) for _ in range(N)))


def positive_mode_oracle(p, x):
    """delta f = z^(p+1) f'(z) for p >= 0, read off as delta c_k = [z^(k+1)]."""
    N = x.N
    f = x.series(N + p + 2)
    d = f.derivative() * TruncatedSeries.monomial(p + 1, N + p + 2)
    out = [d.coeff(k + 1) for k in range(1, N + 1)]
    if p == 0:  # z f' - f
        out = [d.coeff(k + 1) - f.coeff(k + 1) for k in range(1, N + 1)]
    return out


# -- univalent points ------------------------------------------------------------
def test_koebe_coefficients():
    assert koebe_point(0.0, 6).c == tuple(F(k + 1) for k in range(1, 7))
    kp = koebe_point(np.pi, 6)
    assert all(abs(complex(ck) - (k + 1) * (-1) ** k) < 1e-12 for k, ck in enumerate(kp.c, 1))
    for theta in (0.3, 1.7):
        mags = np.abs(koebe_point(theta, 8).as_array())
        assert np.allclose(mags, np.arange(2, 10))


def test_koebe_matches_closed_form():
    z = np.array([0.3, -0.2 + 0.4j, 0.5j])
    theta = 0.8
    kp = koebe_point(theta, 80)
    assert np.allclose(kp.evaluate(z), z / (1 - np.exp(1j * theta) * z) ** 2, atol=1e-12)


def test_rotation_conjugates_coefficients():
    # e^{ia} f(e^{-ia} z) has c_k e^{-ika}
    x = UnivalentPoint((F(1, 2), F(1, 3)))
    y = rotate_point(x, 0.4)
    assert np.allclose(y.as_array(), [0.5 * np.exp(-0.4j), np.exp(-0.8j) / 3])
    z = np.array([0.2, 0.1 - 0.3j])
    assert np.allclose(y.evaluate(z), np.exp(0.4j) * x.evaluate(np.exp(-0.4j) * z))


def test_point_text_roundtrip():
    x = UnivalentPoint((F(1, 2), F(-3, 7), F(0)))
    text = x.dumps()
    assert text.splitlines()[0] == "spoint 3"
    assert UnivalentPoint.loads(text) == x
    y = x.to_float()
    assert UnivalentPoint.loads(y.dumps()).distance(y) == 0


# -- action and operators --------------------------------------------------------
def test_e0_scales_coefficients(rng):
    x = random_point(rng, 6)
    assert lv_action(e(0), x) == [k * ck for k, ck in enumerate(x.c, 1)]


@pytest.mark.parametrize("p", [1, 2, 3, 5])
def test_positive_mode_at_identity(p):
    dc = lv_action(e(p), UnivalentPoint.identity(6))
    assert dc == [F(1) if k == p else 0 for k in range(1, 7)]


@pytest.mark.parametrize("p", [0, 1, 2, 4])
def test_positive_modes_against_vector_field_oracle(rng, p):
    x = random_point(rng, 8)
    assert lv_action(e(p), x) == positive_mode_oracle(p, x)


def test_lminus1_closed_form(rng):
    # L_{-1} c_k = (k+2) c_{k+1} - 2 c_1 c_k
    x = random_point(rng, 7)
    cs = list(x.c) + [F(0)]
    expected = [(k + 2) * cs[k] - 2 * cs[0] * cs[k - 1] for k in range(1, 8)]
    assert lv_action(e(-1), x) == expected


def test_action_matches_operator_rules(rng):
    for _ in range(20):
        x = random_point(rng, 6)
        for p in range(-4, 5):
            assert lv_action(e(p), x) == lp_operator(p, 6).at(x)


def test_koebe_lminus1_rule():
    x = koebe_point(0.0, 8)
    assert lv_action(e(-1), x) == lp_operator(-1, 8).at(x)


def test_operator_rules_positive_and_zero():
    N = 6
    cs = symbols(N + 3)
    for p in (1, 2):
        op = lp_operator(p, N)
        for k in range(1, N + 1):
            expected = Poly.const(1 if k == p else 0)
            if k - p >= 1:
                expected = expected + cs[k - p - 1] * (k - p + 1)
            assert op.rules[k] == expected, (p, k)
    op0 = lp_operator(0, N)
    assert all(op0.rules[k] == cs[k - 1] * k for k in range(1, N + 1))


def test_printed_lminus2_rule():
    # (k+3) c_{k+2} - (4 c_2 - c_1^2) c_k - B_k with B_k = [w^k] 1/(w f(w))
    N = 6
    cs = symbols(N + 2)
    B = b_coefficients(N)
    op = lp_operator(-2, N)
    for k in range(1, N + 1):
        expected = cs[k + 1] * (k + 3) - (cs[1] * 4 - cs[0] * cs[0]) * cs[k - 1] - B[k]
        assert op.rules[k] == expected, k


@pytest.mark.parametrize("p", [-3, -4, -5])
def test_residue_and_iterated_ad_agree(p):
    assert oracle_agreement(p, 12) == 0


def test_oracle_agreement_domain():
    with pytest.raises(DomainError):
        oracle_agreement(-2, 6)


@pytest.mark.parametrize("m,n", [(1, -1), (3, 3), (2, -2), (-1, -2), (4, -3)])
def test_commutators_vanish(m, n):
    assert commutator_residual(m, n, 12) == 0
    assert commutator_residual(m, n, 10, source="ad") == 0


# -- flows -----------------------------------------------------------------------
def test_flow_zero_time():
    x = koebe_point(0.0, 5)
    assert flow_on_S(s(1), 0.0, x).distance(x.to_float()) == 0


def test_flow_of_e0_is_diagonal():
    tau = 0.3
    x = koebe_point(0.0, 5)
    y = flow_on_S(e(0), tau, x)
    expected = [(k + 1) * np.exp(k * tau) for k in range(1, 6)]
    assert np.allclose(y.as_array(), expected, rtol=1e-10)


def test_flow_semigroup():
    x = UnivalentPoint((F(1, 4), F(-1, 8), F(0), F(1, 16)))
    a = flow_on_S(c(1), 0.1, flow_on_S(c(1), 0.15, x))
    b = flow_on_S(c(1), 0.25, x)
    assert a.distance(b) <= 1e-8


def test_flow_matches_circle_flow_to_first_order():
    # the generator of flow_exp(v, tau) drives the same motion as v, up to O(tau)
    x = UnivalentPoint((F(1, 5), F(-1, 10), F(1, 20)))
    errs = []
    for tau in (1e-2, 5e-3):
        w = flow_generator(s(1), tau)
        a = np.array([complex(z) for z in lv_action(w, x.to_float())])
        b = np.array([complex(z) for z in lv_action(s(1), x)])
        errs.append(np.max(np.abs(a - b)))
    assert errs[1] < 0.6 * errs[0]
    assert errs[1] < 1e-2


# -- mean value formula ------------------------------------------------------------
@pytest.mark.parametrize("text,center", [("c1", 0.0), ("1", 1.0), ("c2 - c1^2", 0.0), ("3*c1*c2 + c3 - 2", -2.0)])
def test_poisson_examples(text, center):
    c0, avg = poisson_average(PolyFunctional.parse(text), 0.6)
    assert c0 == center
    assert abs(avg - c0) <= 1e-10


def test_poisson_random_functionals(rng):
    for _ in range(10):
        Fn = random_functional(rng)
        for r in (0.3, 0.6):
            c0, avg = poisson_average(Fn, r, 512)
            assert abs(c0 - avg) <= 1e-8


def test_poisson_needs_radius_below_one():
    with pytest.raises(DomainError):
        poisson_average(PolyFunctional.parse("c1"), 1.0)


def test_non_holomorphic_functional_is_not_harmonic():
    # |c1|^2 = c1 * conj(c1) is not the real part of a polynomial; its mean moves
    f = lambda a: abs(2 * a) ** 2  # noqa: E731
    taus = 2 * np.pi * np.arange(512) / 512
    assert np.mean([f(0.6 * np.exp(1j * t)) for t in taus]) > 1.0


# -- mirrors and the Maslov index ----------------------------------------------------
@pytest.mark.parametrize("a,b,cc,expected", [
    (0, 2 * np.pi / 3, 4 * np.pi / 3, 1),
    (0, 4 * np.pi / 3, 2 * np.pi / 3, -1),
    (0, 2.094, 4.189, 1),
])
def test_maslov_examples(a, b, cc, expected):
    assert maslov_index(a, b, cc) == expected


def test_maslov_degenerate():
    with pytest.raises(DegenerateTriple):
        maslov_index(0.1, 0.2, 0.2)


angles = st.floats(0, 2 * np.pi, allow_nan=False)


@given(angles, angles, angles)
def test_maslov_orbit(a, b, cc):
    d = lambda x, y: min(abs(x - y) % (2 * np.pi), 2 * np.pi - abs(x - y) % (2 * np.pi))  # noqa: E731
    if min(d(a, b), d(b, cc), d(a, cc)) < 1e-6:
        return
    m = maslov_index(a, b, cc)
    assert m in (1, -1)
    assert maslov_index(b, cc, a) == m == maslov_index(cc, a, b)
    assert maslov_index(b, a, cc) == maslov_index(a, cc, b) == maslov_index(cc, b, a) == -m


def test_mirror_parallelism():
    m0 = OrientedMirror.standard(0.0, 0)
    assert mirror_parallel(m0, m0)
    assert not mirror_parallel(m0, OrientedMirror.standard(0.0, 1))
    theta = 0.7
    rotated = m0.conjugate_by_rotation(theta)
    assert mirror_parallel(rotated, OrientedMirror.standard(theta, 0))


def test_involution_checks():
    assert subsymmetry_involution_check(CircleDiffeo.reflection(0.0)) == 0
    r = CircleDiffeo.rotation(0.9)
    rinv = CircleDiffeo.rotation(-0.9)
    conj = diffeo_compose(r, diffeo_compose(CircleDiffeo.reflection(0.0), rinv))
    assert subsymmetry_involution_check(conj) <= 1e-10
    assert subsymmetry_involution_check(CircleDiffeo.parse("sin:1:0.3")) > 0.1


def test_mirror_must_reverse_orientation():
    with pytest.raises(DomainError):
        OrientedMirror(CircleDiffeo.rotation(0.1), 0.0)
