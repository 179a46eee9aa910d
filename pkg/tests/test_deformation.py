from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virgeo.circleact import CircleDiffeo
from virgeo.deformation import (DeformationPoint, Subsymmetry, antiholomorphy_residual,
                                as_subsymmetry, boundary_limit, commutator_residual_def, cut_end,
                                lp_operator_def, lv_action_def, mirror_isotropy_residual,
                                mirror_of, mirror_point, mirror_tangent_reality, project,
                                projection_equivariance_residual, subsymmetric_axiom_check,
                                subsymmetry_extend, validate_point)
from virgeo.errors import InvalidDeformationPoint, LimitDiverged, UnsupportedSubsymmetry
from virgeo.flagspace import PolyFunctional, UnivalentPoint, koebe_point, lp_operator
from virgeo.polynomial import Poly
from virgeo.scalars import GaussianRational
from virgeo.virasoro import e

F = Fraction


def random_apoint(rng, N=5):
    cs = tuple(F(int(rng.integers(-4, 5)), 7) for _ in range(N))
    return DeformationPoint(UnivalentPoint(cs), F(int(rng.integers(1, 6)), 3))


def c_(k):
    return Poly.var(k)


W = Poly.var(0)


# -- action ----------------------------------------------------------------------
def test_e0_scales_fibre(rng):
    x = random_apoint(rng)
    dc, dw = lv_action_def(e(0), x)
    assert dw == x.w
    assert dc == [k * ck for k, ck in enumerate(x.c, 1)]


@pytest.mark.parametrize("p", [1, 2, 4])
def test_positive_modes_at_identity(p):
    dc, dw = lv_action_def(e(p), DeformationPoint(UnivalentPoint.identity(5), F(2)))
    assert dc == [F(1) if k == p else 0 for k in range(1, 6)]
    assert dw == 0


def test_action_matches_operator_rules(rng):
    for _ in range(10):
        x = random_apoint(rng)
        for p in (-3, -2, -1, 0, 2):
            dc, dw = lv_action_def(e(p), x)
            rc, rw = lp_operator_def(p, 5).at(x.base, x.w)
            assert (dc, dw) == (rc, rw)


def test_fibre_rules_in_closed_form():
    assert lp_operator_def(0, 4).rules[0] == W
    # a single w^2 term
    assert lp_operator_def(-1, 4).rules[0] == W * W + c_(1) * W * 2
    assert lp_operator_def(-2, 4).rules[0] == W * W * W + c_(1) * W * W * 3 + (c_(2) * 4 - c_(1) * c_(1)) * W


def test_lifted_rules_project_to_base_rules():
    for p in range(-4, 5):
        lifted, base = lp_operator_def(p, 6), lp_operator(p, 6)
        assert all(lifted.rules[k] == base.rules[k] for k in range(1, 7))
        assert projection_equivariance_residual(p, 6) == 0


@pytest.mark.parametrize("m,n", [(1, -1), (2, -2), (3, 3), (-1, -3), (4, -2)])
def test_lifted_commutators_vanish(m, n):
    assert commutator_residual_def(m, n, 12) == 0


def test_projection():
    x = DeformationPoint(UnivalentPoint((F(1, 2), F(1, 3))), F(5))
    assert project(x) == x.base
    s = Subsymmetry(0.0)
    y = DeformationPoint(UnivalentPoint((GaussianRational(1, 2), F(1, 3))), GaussianRational(1, -1))
    assert project(s(y)).c == tuple(ck.conjugate() if hasattr(ck, "conjugate") else ck for ck in y.c)


# -- validity ----------------------------------------------------------------------
def test_zero_fibre_rejected():
    with pytest.raises(InvalidDeformationPoint):
        DeformationPoint(UnivalentPoint.identity(2), 0)


def test_winding_validity_on_koebe():
    k = koebe_point(0.0, 300).to_float()
    validate_point(DeformationPoint(k, -1.0), delta=0.1)  # 1/w = -1 on the omitted ray
    with pytest.raises(InvalidDeformationPoint):
        validate_point(DeformationPoint(k, 10.0), delta=0.1)  # 1/w = 0.1 inside the image


def test_text_roundtrip():
    x = DeformationPoint(UnivalentPoint((F(1, 2), F(-2, 3))), GaussianRational(F(1), F(-1, 2)))
    assert DeformationPoint.loads(x.dumps()) == x
    y = mirror_point(0.3, 0.2, 1.5, 4)
    assert DeformationPoint.loads(y.dumps()).distance(y) == 0


# -- subsymmetries ---------------------------------------------------------------
def test_real_points_are_fixed_by_standard_reflection():
    x = DeformationPoint(UnivalentPoint((F(1, 2), F(-1, 5))), F(3))
    assert Subsymmetry(0.0)(x) == x


@given(st.lists(st.fractions(-2, 2, max_denominator=9), min_size=6, max_size=6))
def test_standard_reflection_is_involutive(vals):
    cs = tuple(GaussianRational.make(a, b) for a, b in zip(vals[:2], vals[2:4]))
    w = GaussianRational.make(vals[4], vals[5]) if (vals[4], vals[5]) != (0, 0) else F(1)
    x = DeformationPoint(UnivalentPoint(cs), w)
    s = Subsymmetry(0.0)
    assert s(s(x)) == x


def test_rotated_real_locus_is_fixed():
    theta = 0.8
    x = mirror_point(theta, 0.4, 1.2, 5)
    assert Subsymmetry(theta)(x).distance(x) < 1e-14
    assert abs(mirror_of(x).theta - theta) < 1e-12


def test_conjugated_reflection_on_circle():
    s0, st_ = Subsymmetry(0.0), Subsymmetry(0.7)
    t = np.linspace(0, 2 * np.pi, 50)
    assert np.max(np.abs(s0.on_circle(st_.on_circle(s0.on_circle(t))) - Subsymmetry(-0.7).on_circle(t))) <= 1e-10


def test_axioms_on_mixed_family(rng):
    thetas = rng.uniform(0, np.pi, 5)
    points = [mirror_point(thetas[i % 5], rng.uniform(-0.6, 0.6), rng.uniform(0.5, 2.0), 6)
              for i in range(10)]
    assert subsymmetric_axiom_check(points, [Subsymmetry(t) for t in thetas]) <= 1e-9


def test_subsymmetry_family_membership():
    assert as_subsymmetry(CircleDiffeo.reflection(0.4)).theta == pytest.approx(0.4)
    with pytest.raises(UnsupportedSubsymmetry):
        as_subsymmetry(CircleDiffeo.parse("sin:1:0.2"))
    with pytest.raises(UnsupportedSubsymmetry):
        mirror_of(DeformationPoint(UnivalentPoint((0.3j + 0.3, 0.1)), 1.0))
    x = DeformationPoint(UnivalentPoint((F(1, 2),)), F(1))
    with pytest.raises(UnsupportedSubsymmetry):
        subsymmetry_extend(CircleDiffeo.rotation(0.3), x)


@pytest.mark.parametrize("p", [-2, -1, 0, 1, 3])
def test_subsymmetry_is_antiholomorphic(p):
    x = DeformationPoint(UnivalentPoint((0.2 + 0.1j, -0.05j, 0.03)), 0.7 - 0.4j)
    assert antiholomorphy_residual(0.6, x, p) <= 1e-12


def test_mirror_is_isotropic_and_real():
    assert mirror_isotropy_residual(1, F(1, 2)) == 0
    assert mirror_tangent_reality(DeformationPoint(UnivalentPoint((F(1, 3), F(1, 5))), F(2))) == 0


# -- boundary limit ----------------------------------------------------------------
@pytest.mark.parametrize("text,a,expected", [
    ("c1", 0.0, 2.0),
    ("1", 0.0, 1.0),
    ("w", 0.0, -4.0),
    ("c2 - c1^2", 0.3, -1.0 * np.cos(0.6)),
])
def test_boundary_limit(text, a, expected):
    assert boundary_limit(PolyFunctional.parse(text), a) == pytest.approx(expected, abs=1e-7)


def test_cut_end():
    assert cut_end(0.0) == -4
    # 1/b is the finite end of the ray omitted by z/(1 - e^{-ia} z)^2, namely -e^{ia}/4
    a = 0.5
    assert abs(1 / cut_end(a) + np.exp(1j * a) / 4) < 1e-15


def test_boundary_limit_diverges_on_pole():
    with pytest.raises(LimitDiverged):
        boundary_limit(PolyFunctional(Poly.var(1) ** 40), 0.0, N=1, levels=6, tol=1e-14)
