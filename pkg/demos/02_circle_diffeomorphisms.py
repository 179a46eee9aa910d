"""Circle diffeomorphisms, the Bott cocycle and the coadjoint action.

Run with ``python demos/02_circle_diffeomorphisms.py``.
"""
from fractions import Fraction

import numpy as np

from virgeo import circleact as ca

rng = np.random.default_rng(1)

# %% Diffeomorphisms are stored as t + (periodic part) on a Fourier grid
g1 = ca.CircleDiffeo.from_trig(0.0, [0.1], [0.05])
g2 = ca.CircleDiffeo.parse("rot:0.4*sin:2:0.05")
g12 = ca.diffeo_compose(g1, g2)
t = np.linspace(0, 2 * np.pi, 5)
print("g1(g2(t)) - (g1 o g2)(t):", np.max(np.abs(g1(g2(t)) - g12(t))))
print("g1^-1 o g1 is the identity to",
      ca.diffeo_compose(ca.diffeo_invert(g1), g1).sup_distance(ca.CircleDiffeo.identity()))

# %% The Bott cocycle satisfies the group 2-cocycle identity
triples = [[ca.random_diffeo(rng, 3, 0.2) for _ in range(3)] for _ in range(10)]
print("Bott identity residuals:", max(abs(ca.bott_identity_residual(*tr)) for tr in triples))

# %% The Schwarzian kills Moebius maps, here as exact power series
S = ca.schwarzian(ca.mobius_series(Fraction(2), Fraction(1), Fraction(1), Fraction(1), 8))
print("S(mobius) coefficients:", [str(S.coeff(k)) for k in range(S.low, S.order + 1)])

# %% Coadjoint action on (p dt^2, b): a representation of the group
p = ca.FourierFunction.from_cos_sin(0.3, [0.2], [0.1])
x = ca.CoadjointVector(p, 1.0)
lhs = ca.coadjoint_act(g12, x)
rhs = ca.coadjoint_act(g1, ca.coadjoint_act(g2, x))
print("K(g1 g2) x - K(g1) K(g2) x:", lhs.distance(rhs))

# %% Densities are pushed forward with their total mass preserved
u = ca.FourierFunction.from_cos_sin(1 / (2 * np.pi), [0.05], [])
print("mass before/after:", ca.total_mass(u), ca.total_mass(ca.density_act(g1, u)))
