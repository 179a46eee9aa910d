"""The Virasoro algebra with exact rational arithmetic.

Run with ``python demos/01_virasoro_algebra.py``.
"""
from fractions import Fraction

from virgeo import virasoro as vi

# %% Brackets of basis vectors
# e_k = i e^{ikt} d/dt.  The Witt part of [e_j, e_k] is (j - k) e_{j+k}; the
# central part only appears when j + k = 0.
E = vi.VirasoroVector.e
for j in range(1, 5):
    b = vi.virasoro_bracket(E(j), E(-j))
    print(f"[e{j}, e-{j}] = {b.witt}  +  {b.central} c")

# %% The central term grows like (j^3 - j)/12
print([str(vi.central_term(j, -j)) for j in range(1, 7)])
print([str(Fraction(j ** 3 - j, 12)) for j in range(1, 7)])

# %% The Jacobi identity holds exactly, including the central term
worst = max(vi.jacobi_residual(E(i), E(j), E(k)).max_abs()
            for i in range(-4, 5) for j in range(-4, 5) for k in range(-4, 5))
print("largest Jacobi residual over |k| <= 4:", worst)

# %% The Gelfand-Fuchs cocycle on trigonometric fields
# Averaged over one period the cocycle pairs e_j with e_{-j} only, with a
# cubic profile in j.
base = vi.gelfand_fuchs(vi.e(1), vi.e(-1), per_period=True)
print("c(e1, e-1) =", base)
print("ratios:", [str(vi.gelfand_fuchs(vi.e(j), vi.e(-j), per_period=True) / base) for j in range(1, 6)])
print("c(e2, e1) =", vi.gelfand_fuchs(vi.e(2), vi.e(1), per_period=True))

# %% Real fields
# The real basis h, s_n, c_n spans the fields that are real on the circle.
def name(X):
    return "h" if X[0] == "h" else f"{X[0]}{X[1]}"


table = vi.real_bracket_table(2)
for (X, Y), coords in table.items():
    if X[0] == "h" != Y[0] or (X, Y) == (("s", 1), ("c", 1)):
        rhs = " + ".join(f"({v}) {name(k)}" for k, v in coords.items()) or "0"
        print(f"[{name(X)}, {name(Y)}] = {rhs}")
