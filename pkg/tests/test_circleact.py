from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virgeo.circleact import (CircleDiffeo, CoadjointVector, bott_cocycle,
                              bott_identity_residual, coadjoint_act, density_act, diffeo_compose,
                              diffeo_invert, flow_exp, mobius_series, random_diffeo, schwarzian,
                              total_mass, uniform_density)
from virgeo.errors import NotADiffeo, NotAProbabilityDensity
from virgeo.seriescore import FourierFunction
from virgeo.virasoro import h, s

GRID = 4096
T = 2 * np.pi * np.arange(GRID) / GRID


def sup(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def sin_map(a, k=1):
    sin = [0.0] * (k - 1) + [a]
    return CircleDiffeo.from_trig(0.0, (), sin, grid=GRID)


seeds = st.integers(0, 2 ** 32 - 1)


# -- group structure -----------------------------------------------------------
def test_rotations_compose():
    g = diffeo_compose(CircleDiffeo.rotation(0.4), CircleDiffeo.rotation(1.1))
    assert g.sup_distance(CircleDiffeo.rotation(1.5)) < 1e-14


def test_invert_identity():
    assert diffeo_invert(CircleDiffeo.identity()).sup_distance(CircleDiffeo.identity()) < 1e-14


def test_invert_sine_map():
    g = sin_map(0.3)
    ginv = diffeo_invert(g)
    assert sup(g(ginv(T)), T) <= 1e-10
    assert sup(ginv(g(T)), T) <= 1e-10


@given(seeds, seeds)
def test_group_axioms(a, b):
    g1 = random_diffeo(np.random.default_rng(a), grid=1024)
    g2 = random_diffeo(np.random.default_rng(b), grid=1024)
    t = g1.t
    assert sup(diffeo_compose(g1, g2)(t), g1(g2(t))) <= 1e-9
    assert sup(diffeo_compose(g1, diffeo_invert(g1))(t), t) <= 1e-9


def test_derivative_margin_is_checked():
    with pytest.raises(NotADiffeo):
        sin_map(1.5)


@pytest.mark.parametrize("spec", ["id", "rot:0.5", "sin:1:0.3", "cos:2:0.1*rot:1", "mirror:0.3"])
def test_parse_and_text_roundtrip(spec):
    g = CircleDiffeo.parse(spec, 512)
    back = CircleDiffeo.loads(g.dumps(), 512)
    assert back.orientation == g.orientation
    assert back.sup_distance(g) < 1e-15


def test_parse_sine_spec():
    g = CircleDiffeo.parse("sin:1:0.3", GRID)
    assert sup(g(T), T + 0.3 * np.sin(T)) < 1e-14


# -- flows ---------------------------------------------------------------------
def test_constant_field_flows_to_rotation():
    assert flow_exp(h(), 0.7).sup_distance(CircleDiffeo.rotation(0.7)) < 1e-12


def test_zero_time_flow():
    assert flow_exp(s(1), 0.0).sup_distance(CircleDiffeo.identity()) == 0


def test_sine_flow_against_closed_form():
    # dx/dt = sin x has tan(x/2) = e^tau tan(t/2)
    tau = 0.4
    g = flow_exp(s(1), tau, grid=1024)
    t = g.t
    exact = 2 * np.arctan2(np.sin(t / 2) * np.exp(tau), np.cos(t / 2))
    exact = np.where(exact < t - np.pi, exact + 2 * np.pi, exact)
    assert sup(g.g, exact) < 1e-10


def test_flow_property():
    a = flow_exp(s(1), 0.05, grid=1024)
    b = flow_exp(s(1), 0.1, grid=1024)
    assert diffeo_compose(a, a).sup_distance(b) <= 1e-8


# -- Bott cocycle ----------------------------------------------------------------
def bott_oracle(a, b, M=8192):
    """g1 = t + a sin t, g2 = t + b sin 2t with closed-form derivatives."""
    t = 2 * np.pi * np.arange(M) / M
    g2 = t + b * np.sin(2 * t)
    d2 = 1 + 2 * b * np.cos(2 * t)
    dd2 = -4 * b * np.sin(2 * t)
    d1_at = 1 + a * np.cos(g2)
    return 2 * np.pi * np.mean(np.log(d1_at) * dd2 / d2)


@pytest.mark.parametrize("a,b", [(0.2, 0.1), (-0.3, 0.05), (0.1, -0.2)])
def test_bott_against_closed_form(a, b):
    got = bott_cocycle(sin_map(a), sin_map(b, 2))
    assert abs(got - bott_oracle(a, b)) < 1e-12


def test_bott_trivial_cases():
    g = random_diffeo(np.random.default_rng(3))
    ident = CircleDiffeo.identity()
    assert abs(bott_cocycle(ident, g)) < 1e-14
    assert abs(bott_cocycle(g, ident)) < 1e-14
    assert bott_cocycle(CircleDiffeo.rotation(0.3), CircleDiffeo.rotation(1.2)) == 0


def test_bott_cocycle_identity(rng):
    worst = max(abs(bott_identity_residual(*[random_diffeo(rng, 3, 0.2) for _ in range(3)]))
                for _ in range(10))
    assert worst <= 1e-7


def test_product_reading_is_not_a_cocycle(rng):
    # the reading integral log(g1' o g2) * log(g2') dt fails the identity
    def naive(g1, g2):
        return 2 * np.pi * np.mean(np.log(g1.derivative(g2.g)) * np.log(g2.dg))

    g1, g2, g3 = (random_diffeo(rng, 3, 0.2) for _ in range(3))
    g12, g23 = diffeo_compose(g1, g2), diffeo_compose(g2, g3)
    r = naive(g1, g2) + naive(g12, g3) - naive(g1, g23) - naive(g2, g3)
    assert abs(r) > 1e-4


# -- Schwarzian ------------------------------------------------------------------
def test_schwarzian_identity_and_closed_form():
    assert schwarzian(CircleDiffeo.identity()).trimmed().K == 0
    a = 0.3
    d1, d2, d3 = 1 + a * np.cos(T), -a * np.sin(T), -a * np.cos(T)
    expected = d3 / d1 - 1.5 * (d2 / d1) ** 2
    assert sup(schwarzian(sin_map(a))(T).real, expected) < 1e-10


@pytest.mark.parametrize("abcd", [(1, 0, 0, 1), (2, 1, 1, 1), (Fraction(1, 2), 3, Fraction(-1, 3), 1)])
def test_schwarzian_of_mobius_is_zero(abcd):
    S = schwarzian(mobius_series(*[Fraction(x) for x in abcd], 14))
    assert S.is_zero()


def test_schwarzian_chain_rule(rng):
    g1, g2 = random_diffeo(rng, 2, 0.15), random_diffeo(rng, 2, 0.15)
    lhs = schwarzian(diffeo_compose(g1, g2))(T).real
    rhs = schwarzian(g1)(g2.g).real * g2.dg ** 2 + schwarzian(g2)(T).real
    assert sup(lhs, rhs) <= 1e-9


# -- coadjoint action ----------------------------------------------------------
def test_coadjoint_trivial_cases():
    p = FourierFunction.from_cos_sin(0.5, [0.2], [-0.1])
    x = CoadjointVector(p, 1.3)
    y = coadjoint_act(CircleDiffeo.identity(), x)
    assert y.distance(x) < 1e-12 and y.b == x.b
    const = CoadjointVector(FourierFunction.constant(0.7), 2.0)
    assert coadjoint_act(CircleDiffeo.rotation(0.9), const).distance(const) < 1e-12


@pytest.mark.parametrize("convention", ["left", "pullback"])
def test_coadjoint_group_law(rng, convention):
    p = FourierFunction.from_cos_sin(0.3, [0.2, -0.1], [0.05])
    x = CoadjointVector(p, 1.5)
    g1, g2 = random_diffeo(rng, 3, 0.1), random_diffeo(rng, 3, 0.1)
    lhs = coadjoint_act(diffeo_compose(g1, g2), x, convention)
    if convention == "left":
        rhs = coadjoint_act(g1, coadjoint_act(g2, x))
    else:
        rhs = coadjoint_act(g2, coadjoint_act(g1, x, convention), convention)
    assert lhs.distance(rhs) <= 1e-7
    assert lhs.b == x.b


def test_pullback_formula():
    g = sin_map(0.2)
    p = FourierFunction.from_cos_sin(1.0, [0.5])
    y = coadjoint_act(g, CoadjointVector(p, 2.0), "pullback")
    pg = 1.0 + 0.5 * np.cos(g.g)
    S = schwarzian(g)(T).real
    assert sup(y.p(T).real, pg * g.dg ** 2 - 2.0 * S) < 1e-10


# -- densities -------------------------------------------------------------------
def test_density_identity_and_rotation():
    u = FourierFunction.from_cos_sin(1 / (2 * np.pi), [1 / (4 * np.pi)])
    assert sup(density_act(CircleDiffeo.identity(), u)(T), u(T)) < 1e-12
    v = density_act(CircleDiffeo.rotation(0.6), u)
    assert sup(v(T).real, (1 + 0.5 * np.cos(T - 0.6)) / (2 * np.pi)) < 1e-12


def test_density_mass(rng):
    u = FourierFunction.from_cos_sin(1 / (2 * np.pi), [0.05], [0.03])
    for _ in range(5):
        v = density_act(random_diffeo(rng), u)
        assert abs(total_mass(v) - 1) <= 1e-10
        assert np.min(v(T).real) > 0


def test_density_rejects_bad_input():
    with pytest.raises(NotAProbabilityDensity):
        density_act(CircleDiffeo.identity(), FourierFunction.constant(1.0))
    with pytest.raises(NotAProbabilityDensity):
        density_act(CircleDiffeo.identity(), FourierFunction.from_cos_sin(1 / (2 * np.pi), [0.5]))
    assert abs(total_mass(uniform_density()) - 1) < 1e-15
