"""Grunsky matrices, Milin's unitarity defect and the Krichever graph.

For ``f(z) = z + c_1 z^2 + ...`` write

    log((f(z) - f(w))/(z - w)) = sum_{m,n >= 0} b_mn z^m w^n

and ``beta_mn = sqrt(mn) b_mn`` for ``m, n >= 1``.  ``beta`` is symmetric,
contractive for univalent ``f``, and unitary exactly on the skeleton
(e.g. ``beta = -I`` for the Koebe function).
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotSymmetric
from .flagspace import UnivalentPoint
from .scalars import conj, is_exact
from .seriescore import TruncatedSeries


@dataclass(frozen=True)
class GrunskyMatrix:
    beta: np.ndarray
    b: np.ndarray | None = None  # exact mixed coefficients in rational mode

    @property
    def N(self):
        return self.beta.shape[0]

    def to_csv(self) -> str:
        out = io.StringIO()
        for row in self.beta:
            out.write(",".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = []
        for ln in text.strip().splitlines():
            vals = [float(v) for v in ln.split(",")]
            rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
        return cls(np.array(rows, dtype=complex))


def difference_quotient(x: UnivalentPoint, N: int) -> TruncatedSeries:
    """``(f(z) - f(w))/(z - w)`` as a series in ``z`` with series-in-``w`` coefficients.

    Coefficients ``c_k`` with ``k > x.N`` are taken as zero, which is exact
    for polynomial ``f``.
    """
    exact = all(is_exact(t) for t in x.c)
    zero = Fraction(0) if exact else 0j
    a = [zero, Fraction(1) if exact else 1 + 0j] + list(x.c)
    a = a + [zero] * max(0, 2 * N + 2 - len(a))
    rows = []
    for i in range(N + 1):
        rows.append(TruncatedSeries([a[i + j + 1] for j in range(N + 1)], low=0, order=N))
    return TruncatedSeries(rows, low=0, order=N)


def log_difference_quotient(x: UnivalentPoint, N: int) -> TruncatedSeries:
    return difference_quotient(x, N).log()


def grunsky_coefficients(x: UnivalentPoint, N: int | None = None) -> np.ndarray:
    """Mixed coefficients ``b_mn`` (``1 <= m, n <= N``) as an object array."""
    N = N or max(1, x.N // 2)
    L = log_difference_quotient(x, N)
    b = np.empty((N, N), dtype=object)
    for m in range(1, N + 1):
        row = L.coeff(m)
        for n in range(1, N + 1):
            b[m - 1, n - 1] = row.coeff(n)
    return b


def grunsky_matrix(x: UnivalentPoint, N: int | None = None) -> GrunskyMatrix:
    """``beta_mn = sqrt(mn) b_mn``; pass ``N`` to fix the size (default ``x.N // 2``)."""
    b = grunsky_coefficients(x, N)
    N = b.shape[0]
    w = np.sqrt(np.arange(1, N + 1, dtype=float))
    beta = np.array([[complex(v) for v in row] for row in b]) * np.outer(w, w)
    exact = all(is_exact(v) for v in b.flat)
    return GrunskyMatrix(beta, b if exact else None)


def rotation_diagonal(theta, N):
    return np.diag(np.exp(1j * theta * np.arange(1, N + 1)))


def milin_defect(x, N: int | None = None) -> float:
    """Spectral norm of ``I - beta^* beta``."""
    G = x if isinstance(x, GrunskyMatrix) else grunsky_matrix(x, N)
    B = G.beta
    D = np.eye(G.N) - B.conj().T @ B
    return float(np.linalg.norm(D, 2))


def milin_column_defect(x, columns: int, N: int) -> float:
    """``||I - B^* B||`` for the first ``columns`` columns ``B`` of the ``N``-row Grunsky matrix.

    For a fixed set of columns this converges as ``N`` grows, unlike the
    defect of the square truncation (a corner of a unitary matrix need
    not be unitary).
    """
    if not 1 <= columns <= N:
        raise ValueError("need 1 <= columns <= N")
    G = x if isinstance(x, GrunskyMatrix) else grunsky_matrix(x, N)
    B = G.beta[:, :columns]
    return float(np.linalg.norm(np.eye(columns) - B.conj().T @ B, 2))


@dataclass(frozen=True)
class SiegelResult:
    region: str
    min_eigenvalue: float


def siegel_check(Z, eps=1e-8, sym_tol=1e-10) -> SiegelResult:
    """Classify ``Z`` by the smallest eigenvalue of ``I - Z conj(Z)``."""
    Z = Z.beta if isinstance(Z, GrunskyMatrix) else np.asarray(Z, dtype=complex)
    asym = float(np.max(np.abs(Z - Z.T))) if Z.size else 0.0
    if asym > sym_tol * max(1.0, float(np.max(np.abs(Z))) if Z.size else 1.0):
        raise NotSymmetric(f"matrix is not symmetric (deviation {asym:.3g})")
    H = np.eye(Z.shape[0]) - Z @ Z.conj()
    H = 0.5 * (H + H.conj().T)
    lam = float(np.linalg.eigvalsh(H)[0])
    if lam > eps:
        region = "interior"
    elif lam >= -eps:
        region = "boundary"
    else:
        region = "outside"
    return SiegelResult(region, lam)


# ---------------------------------------------------------------------------
# pairings
def _coeff_map(f):
    if isinstance(f, TruncatedSeries):
        return {k: f.coeff(k) for k in f.degrees()}
    return dict(f)


def symplectic_pairing(f, g):
    """Residue pairing ``Res(f dg) = sum_n n f_{-n} g_n``."""
    fm, gm = _coeff_map(f), _coeff_map(g)
    total = 0
    for a, fa in fm.items():
        gb = gm.get(-a)
        if gb is not None and a != 0:
            total = total + fa * gb * (-a)
    return total


def hermitian_pairing(f, g):
    """``sum_n n f_n conj(g_n)``: positive on ``z^n`` with ``n > 0``, negative for ``n < 0``."""
    fm, gm = _coeff_map(f), _coeff_map(g)
    total = 0
    for a, fa in fm.items():
        gb = gm.get(a)
        if gb is not None and a != 0:
            total = total + fa * conj(gb) * a
    return total


def pairings(f, g):
    return symplectic_pairing(f, g), hermitian_pairing(f, g)


# ---------------------------------------------------------------------------
# Krichever graph
@dataclass(frozen=True)
class KricheverSubspace:
    """Columns ``[e_n ; beta e_n]`` over the basis ``z^{-n}/sqrt(n)`` (top) and ``z^n/sqrt(n)`` (bottom)."""

    columns: np.ndarray

    @property
    def N(self):
        return self.columns.shape[1]

    def column_series(self, j):
        """Laurent coefficients ``{k: u_k}`` of the ``j``-th column (1-based)."""
        N = self.N
        col = self.columns[:, j - 1]
        out = {}
        for n in range(1, N + 1):
            out[-n] = col[n - 1] / np.sqrt(n)
            out[n] = col[N + n - 1] / np.sqrt(n)
        return out

    def isotropy_defect(self):
        N = self.N
        worst = 0.0
        for j in range(1, N + 1):
            uj = self.column_series(j)
            for k in range(1, N + 1):
                worst = max(worst, abs(complex(symplectic_pairing(uj, self.column_series(k)))))
        return worst


def krichever_point(x, N: int | None = None) -> KricheverSubspace:
    G = x if isinstance(x, GrunskyMatrix) else grunsky_matrix(x, N)
    cols = np.vstack([np.eye(G.N, dtype=complex), G.beta])
    return KricheverSubspace(cols)


def hnorm(u) -> float:
    """``sum |u_n|^2/|n|`` over ``n != 0``."""
    m = _coeff_map(u)
    return float(sum(abs(complex(v)) ** 2 / abs(k) for k, v in m.items() if k != 0))


__all__ = [
    "GrunskyMatrix", "difference_quotient", "log_difference_quotient",
    "grunsky_coefficients", "grunsky_matrix", "rotation_diagonal", "milin_defect",
    "milin_column_defect",
    "SiegelResult", "siegel_check", "symplectic_pairing", "hermitian_pairing",
    "pairings", "KricheverSubspace", "krichever_point", "hnorm",
]
