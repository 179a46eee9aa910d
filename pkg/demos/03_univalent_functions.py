"""Univalent functions as a flag space: the Kirillov action, flows and Grunsky matrices.

Run with ``python demos/03_univalent_functions.py``.
"""
import numpy as np

from virgeo import flagspace as fs
from virgeo import grunsky as gr
from virgeo import virasoro as vi

# %% A point is the coefficient vector (c_1, ..., c_N) of f(z) = z + c_1 z^2 + ...
k = fs.koebe_point(0, 6)
print("Koebe coefficients:", [str(c) for c in k.c])

# %% The operators L_p act by polynomial rules in the coefficients
L = fs.lp_operator(-1, 4)
for j, rule in sorted(L.rules.items()):
    print(f"L-1 c{j} = {rule}")

# %% The rules for p < -2 can be built two ways; they agree exactly
print("residue vs iterated ad, p = -3..-5:", [fs.oracle_agreement(p, 8) for p in (-3, -4, -5)])

# %% ... and satisfy the Witt commutation relations on truncations
print("max commutator residual, |m|,|n| <= 2:",
      max(fs.commutator_residual(m, n, 8) for m in range(-2, 3) for n in range(-2, 3)))

# %% Flowing along a real field moves the point through the class of univalent maps
x = fs.flow_on_S(vi.c(1), 0.1, fs.UnivalentPoint.identity(6))
print("after the c1 flow:", np.round(np.array(x.c, dtype=complex), 6))

# %% Grunsky matrices: zero at the identity, -I at the Koebe function
print("beta(identity) == 0:", not np.any(gr.grunsky_matrix(fs.UnivalentPoint.identity(8), 4).beta))
print("beta(Koebe) + I:", np.max(np.abs(gr.grunsky_matrix(fs.koebe_point(0.0, 16), 8).beta + np.eye(8))))
half = fs.UnivalentPoint((0.5,) + (0.0,) * 15)
print("z + z^2/2 is", gr.siegel_check(gr.grunsky_matrix(half, 8)).region, "of the matrix ball")

# %% Milin: the Koebe map sits on the skeleton, where beta is unitary
for theta in (0.0, np.pi / 3):
    print(f"Milin defect, rotated Koebe theta={theta:.3f}:", gr.milin_defect(fs.koebe_point(theta, 16), 8))
