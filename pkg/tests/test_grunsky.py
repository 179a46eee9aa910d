from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virgeo.errors import NotSymmetric
from virgeo.flagspace import UnivalentPoint, flow_on_S, koebe_point, rotate_point
from virgeo.grunsky import (GrunskyMatrix, grunsky_coefficients, grunsky_matrix, hermitian_pairing,
                            hnorm, krichever_point, milin_column_defect, milin_defect,
                            pairings, rotation_diagonal, siegel_check, symplectic_pairing)
from virgeo.seriescore import TruncatedSeries
from virgeo.virasoro import c

F = Fraction
HALF = UnivalentPoint((F(1, 2),) + (F(0),) * 15)


def fft_grunsky(coeffs, N, r=0.5, M=64):
    """Mixed coefficients of log((f(z)-f(w))/(z-w)) from a 2D FFT on |z| = |w| = r."""
    t = 2 * np.pi * np.arange(M) / M
    z = r * np.exp(1j * t)
    Z, W = np.meshgrid(z, z, indexing="ij")

    def f(u):
        return u + sum(ck * u ** (k + 1) for k, ck in enumerate(coeffs, 1))

    same = np.isclose(Z, W)
    Wp = np.where(same, W + 1e-300, W)
    Q = np.where(same, 1 + sum((k + 1) * ck * Z ** k for k, ck in enumerate(coeffs, 1)),
                 (f(Z) - f(Wp)) / np.where(same, 1, Z - Wp))
    A = np.fft.fft2(np.log(Q)) / M ** 2
    m = np.arange(1, N + 1)
    return A[1:N + 1, 1:N + 1] / r ** (m[:, None] + m[None, :])


@st.composite
def small_points(draw, N=6):
    cs = draw(st.lists(st.fractions(-F(1, 4), F(1, 4), max_denominator=8), min_size=N, max_size=N))
    return UnivalentPoint(tuple(cs))


# -- Grunsky matrix ----------------------------------------------------------------
def test_identity_has_zero_matrix():
    G = grunsky_matrix(UnivalentPoint.identity(8), 4)
    assert all(v == 0 for v in G.b.flat)
    assert not np.any(G.beta)


def test_koebe_matrix_is_minus_identity():
    G = grunsky_matrix(koebe_point(0.0, 32), 16)
    assert all(G.b[m, n] == (F(-1, m + 1) if m == n else 0) for m in range(16) for n in range(16))
    assert np.max(np.abs(G.beta + np.eye(16))) <= 1e-10


@pytest.mark.parametrize("coeffs", [(0.5,), (0.3, -0.1j, 0.05), (0.2 + 0.1j, 0.1)])
def test_against_fft_oracle(coeffs):
    N = 5
    x = UnivalentPoint(tuple(complex(v) for v in coeffs) + (0j,) * (2 * N))
    b = np.array([[complex(v) for v in row] for row in grunsky_coefficients(x, N)])
    assert np.max(np.abs(b - fft_grunsky(coeffs, N))) < 1e-10


@given(small_points())
def test_symmetric_exactly(x):
    G = grunsky_matrix(x, 3)
    assert (G.b == G.b.T).all()


def test_default_size_and_csv_roundtrip():
    G = grunsky_matrix(koebe_point(0.4, 8))
    assert G.N == 4
    back = GrunskyMatrix.from_csv(G.to_csv())
    assert np.array_equal(back.beta, G.beta)


def test_rotation_equivariance():
    # f_theta(z) = e^{-i theta} f(e^{i theta} z) gives D beta D with D = diag(e^{i m theta})
    theta = 0.9
    x = UnivalentPoint((F(1, 3), F(-1, 5), F(1, 7), F(0), F(1, 11), F(0), F(0), F(0)))
    D = rotation_diagonal(theta, 4)
    lhs = grunsky_matrix(rotate_point(x, -theta), 4).beta
    assert np.max(np.abs(lhs - D @ grunsky_matrix(x, 4).beta @ D)) <= 1e-12


# -- Milin defect and the matrix ball ------------------------------------------------
@pytest.mark.parametrize("x,expected", [
    (koebe_point(0.0, 32), 0.0),
    (koebe_point(np.pi / 3, 32), 0.0),
    (UnivalentPoint.identity(8), 1.0),
])
def test_milin_defect(x, expected):
    assert abs(milin_defect(x, x.N // 2) - expected) <= 1e-10


def test_column_defect_converges_under_flow():
    x = flow_on_S(c(1), 0.05, koebe_point(0.0, 18))
    d = [milin_column_defect(x, 3, N) for N in (3, 4, 6, 8)]
    assert all(a > b for a, b in zip(d, d[1:]))
    assert d[-1] < 1e-9


def test_siegel_classification():
    res = siegel_check(np.zeros((3, 3)))
    assert res.region == "interior" and res.min_eigenvalue == 1.0
    assert siegel_check(grunsky_matrix(koebe_point(0.0, 16), 8)).region == "boundary"
    assert siegel_check(grunsky_matrix(HALF, 8)).region == "interior"
    assert siegel_check(2 * np.eye(2)).region == "outside"


def test_siegel_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        siegel_check(np.array([[0, 0.5], [0.1, 0]]))


def test_grunsky_inequality_along_flows():
    for field, tau in [(c(1), 0.1), (c(1), -0.2)]:
        x = flow_on_S(field, tau, UnivalentPoint.identity(12))
        assert siegel_check(grunsky_matrix(x, 6)).region in ("interior", "boundary")


# -- pairings and the Krichever graph ------------------------------------------------
@pytest.mark.parametrize("n", [1, 2, 5])
def test_pairings_on_monomials(n):
    zn, zmn = {n: 1}, {-n: 1}
    assert symplectic_pairing(zn, zmn) == -n
    assert hermitian_pairing(zn, zn) == n
    assert hermitian_pairing(zmn, zmn) == -n


def test_symplectic_pairing_is_alternating():
    f = TruncatedSeries([F(1), F(2), F(-1, 3), F(4)], low=-2, order=1)
    assert pairings(f, f)[0] == 0


def test_krichever_graphs():
    ident = krichever_point(UnivalentPoint.identity(8), 4)
    assert np.array_equal(ident.columns[4:], np.zeros((4, 4)))
    kp = krichever_point(koebe_point(0.0, 16), 8)
    assert np.max(np.abs(kp.columns[8:] + np.eye(8))) < 1e-12
    x = UnivalentPoint((F(1, 3), F(-1, 7), F(1, 9)) + (F(0),) * 9)
    assert krichever_point(x, 6).isotropy_defect() <= 1e-10


def test_hnorm():
    assert hnorm({1: 1, -2: 2, 0: 5}) == 1 + 2
