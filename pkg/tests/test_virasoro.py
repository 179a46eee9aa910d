from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virgeo.scalars import GaussianRational
from virgeo.virasoro import (VirasoroVector, WittVector, c, central_normalization, e,
                             gelfand_fuchs, gf_cocycle_identity, h, jacobi_residual,
                             kks_form, real_bracket_table, s, vect_bracket,
                             virasoro_bracket, witt_bracket)

F = Fraction
V = VirasoroVector.e
I = GaussianRational(0, 1)


def sampled_bracket(u, v, M=64):
    """Independent oracle: u v' - u' v on a grid, from the real trig form."""
    t = 2 * np.pi * np.arange(M) / M
    fu, fv = u.to_field(), v.to_field()
    du, dv = fu.derivative(), fv.derivative()
    return t, fu(t) * dv(t) - du(t) * fv(t)


def real_oracle(x, y):
    """Real-basis relations for n != m (constant fields excluded)."""
    (kx, n), (ky, m) = x, y
    half = F(1, 2)
    sgn = (n > m) - (n < m)
    if kx == ky == "s":
        return {("s", n + m): half * (m - n), ("s", abs(n - m)): half * sgn * (n + m)}
    if kx == ky == "c":
        return {("s", n + m): half * (n - m), ("s", abs(n - m)): half * sgn * (n + m)}
    if (kx, ky) == ("s", "c"):
        return {("c", m + n): half * (m - n), ("c", abs(n - m)): -half * (m + n)}
    raise ValueError


def clean(d):
    return {k: v for k, v in d.items() if v != 0}


# -- field bracket ---------------------------------------------------------------
def test_named_brackets():
    assert WittVector.from_field(vect_bracket(h(), s(1))) == c(1)
    assert WittVector.from_field(vect_bracket(s(1), s(1))).is_zero()
    assert WittVector.from_field(vect_bracket(s(1), c(1))) == -h()


@pytest.mark.parametrize("j,k", [(1, -1), (2, 3), (-4, 1), (0, 5), (3, 3)])
def test_field_bracket_matches_pointwise(j, k):
    u, v = e(j), e(k)
    t, direct = sampled_bracket(u, v)
    got = vect_bracket(u, v)
    assert np.allclose(got(t), direct, atol=1e-12)
    assert np.allclose(vect_bracket(u, v, method="pointwise")(t), direct, atol=1e-12)


def test_basis_dictionary_coherence():
    for j in range(-8, 9):
        for k in range(-8, 9):
            lhs = WittVector.from_field(vect_bracket(e(j), e(k)))
            assert lhs == witt_bracket(e(j), e(k))


def test_real_basis_relations_off_diagonal():
    table = real_bracket_table(6)
    for n in range(1, 7):
        for m in range(1, 7):
            if n == m:
                continue
            for kx, ky in [("s", "s"), ("c", "c"), ("s", "c")]:
                got = clean(table[((kx, n), (ky, m))])
                assert got == clean(real_oracle((kx, n), (ky, m))), (kx, n, ky, m)


def test_real_basis_constant_field():
    table = real_bracket_table(4)
    for n in range(1, 5):
        assert table[(("h", 0), ("s", n))] == {("c", n): n}
        # d/dt cos(nt) = -n sin(nt)
        assert table[(("h", 0), ("c", n))] == {("s", n): -n}


def test_real_basis_diagonal_from_definition():
    # [s_n, c_n] = -n h directly from the field bracket
    table = real_bracket_table(4)
    for n in range(1, 5):
        assert table[(("s", n), ("c", n))] == {("h", 0): -n}


def test_real_complex_conversion_is_involutive():
    x = WittVector({-2: F(1, 3), 0: I, 5: F(-2)})
    assert WittVector.from_real(x.to_real()) == x


# -- Witt and Virasoro brackets --------------------------------------------------
@pytest.mark.parametrize("j,k,expected", [
    (1, -1, {0: 2}),
    (2, 3, {5: -1}),
    (4, 4, {}),
])
def test_witt_bracket(j, k, expected):
    assert witt_bracket(e(j), e(k)) == WittVector(expected)


@pytest.mark.parametrize("j,witt,central", [
    (2, {0: 4}, F(1, 2)),
    (1, {0: 2}, F(0)),
    (3, {0: 6}, F(2)),
])
def test_virasoro_central_term(j, witt, central):
    b = virasoro_bracket(V(j), V(-j))
    assert b.witt == WittVector(witt)
    assert b.central == central


def test_central_element_is_central():
    assert virasoro_bracket(VirasoroVector.c(), V(5)).is_zero()


@pytest.mark.parametrize("x,y,z", [(1, 2, 3), (5, -3, -2), (-8, 8, 0), (4, -1, -3)])
def test_jacobi_examples(x, y, z):
    assert jacobi_residual(V(x), V(y), V(z)).is_zero()


modes = st.dictionaries(st.integers(-8, 8), st.fractions(-4, 4, max_denominator=6), max_size=4)


@given(modes, modes, modes)
def test_jacobi_random_combinations(a, b, cc):
    x, y, z = (VirasoroVector(WittVector(m)) for m in (a, b, cc))
    assert jacobi_residual(x, y, z).is_zero()


@given(modes, modes)
def test_antisymmetry(a, b):
    x, y = VirasoroVector(WittVector(a)), VirasoroVector(WittVector(b))
    assert (virasoro_bracket(x, y) + virasoro_bracket(y, x)).is_zero()


def test_json_roundtrip():
    x = VirasoroVector(WittVector({1: F(1), -1: GaussianRational(F(1, 2), F(-1))}), F(3, 4))
    assert VirasoroVector.from_json(x.to_json()) == x


# -- Gelfand-Fuchs cocycle -------------------------------------------------------
def gf_oracle(j, k, M=256):
    """Trapezoid quadrature of v' u'' for u = e_j, v = e_k (exact for trig polynomials)."""
    t = 2 * np.pi * np.arange(M) / M
    u2 = 1j * (1j * j) ** 2 * np.exp(1j * j * t)
    v1 = 1j * (1j * k) * np.exp(1j * k * t)
    return np.mean(v1 * u2) * 2 * np.pi


@pytest.mark.parametrize("j,k", [(1, -1), (2, -2), (3, 1), (-4, 2), (6, -6)])
def test_gelfand_fuchs_against_quadrature(j, k):
    assert abs(complex(gelfand_fuchs(e(j), e(k))) - gf_oracle(j, k)) < 1e-9


def test_gelfand_fuchs_profile():
    base = gelfand_fuchs(e(1), e(-1), per_period=True)
    assert base == -I
    for j in range(-6, 7):
        for k in range(-6, 7):
            if j + k:
                assert gelfand_fuchs(e(j), e(k), per_period=True) == 0
    for j in range(2, 7):
        assert gelfand_fuchs(e(j), e(-j), per_period=True) / base == j ** 3


@given(modes)
def test_gelfand_fuchs_alternating(a):
    u = WittVector(a)
    assert gelfand_fuchs(u, u, per_period=True) == 0


@given(modes, modes, modes)
def test_gelfand_fuchs_cocycle_identity(a, b, cc):
    assert gf_cocycle_identity(WittVector(a), WittVector(b), WittVector(cc)) == 0


def test_central_normalization_is_exact():
    out = central_normalization(8)
    assert out["residual"] == 0
    assert out["kappa"] == I / 12
    assert out["coboundary_e0"] == F(-1, 24)


# -- orbit pairing -------------------------------------------------------------
def test_kks_form():
    assert kks_form(2, 3, e(2), e(2)) == 0
    for j, k in [(1, 2), (3, -1), (0, 4)]:
        assert kks_form(F(1), F(1), e(j), e(k)) == 0
    assert kks_form(1, 0, h(), s(1)) == 0
    assert abs(kks_form(0, 1, e(2), e(-2)) - gf_oracle(2, -2)) < 1e-9
