"""Gluing annuli: products in the Neretin semigroup by conformal welding.

Run with ``python demos/05_neretin_semigroup.py``.  Pass a directory as the
first argument to also save an SVG of a product's boundary curves.
"""
import sys

import numpy as np

from virgeo import neretin as ne
from virgeo.circleact import CircleDiffeo

rng = np.random.default_rng(5)

# %% Scalings A(t) compose by adding moduli
g = ne.multiply(ne.scaling(0.3), ne.scaling(0.5))
print("A(0.3) A(0.5) vs A(0.8):", g.distance(ne.scaling(0.8)), " modulus", g.modulus())

# %% Near-identity elements: associativity and moduli
g1, g2, g3 = (ne.perturbed_scaling(float(rng.uniform(0.2, 1.0)), 0.05, rng) for _ in range(3))
lhs = ne.multiply(ne.multiply(g1, g2), g3)
rhs = ne.multiply(g1, ne.multiply(g2, g3))
print("associativity defect:", lhs.distance(rhs))
print("moduli:", [round(x.modulus(), 6) for x in (g1, g2, ne.multiply(g1, g2))])

# %% The central extension cocycle and its 2-cocycle identity
print("c(g1, g2) =", ne.neretin_cocycle(g1, g2))
print("cocycle identity residual:", ne.cocycle_identity_residual(g1, g2, g3))

# %% Formal products p A(t) q and their normal form
p = CircleDiffeo.from_trig(0.0, [0.03], [0.02])
x = ne.FormalProduct(p, 0.4, CircleDiffeo.identity())
y = ne.normal_form(x, 0.3)
print("t' =", y.t, " (s + t =", 0.7, ")")
print("agrees with multiply to", ne.canonical(ne.multiply(ne.scaling(0.3), x.to_element())).distance(y.to_element()))

# %% Optional picture of the two boundary curves of g1 g2
if len(sys.argv) > 1:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    z = np.exp(2j * np.pi * np.arange(513) / 512)
    h = ne.multiply(g1, g2)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.plot(h.p_plus(z).real, h.p_plus(z).imag, label="inner")
    ax.plot(h.p_minus(z).real, h.p_minus(z).imag, label="outer")
    ax.set_aspect("equal")
    ax.legend()
    fig.savefig(f"{sys.argv[1]}/neretin_product.svg")
    print("wrote", f"{sys.argv[1]}/neretin_product.svg")
