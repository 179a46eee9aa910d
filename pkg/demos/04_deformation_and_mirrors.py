"""The universal deformation (f, w), its subsymmetries and Maslov indices.

Run with ``python demos/04_deformation_and_mirrors.py``.
"""
import numpy as np

from virgeo import deformation as de
from virgeo import flagspace as fs

rng = np.random.default_rng(3)

# %% Points of the deformation space pair a univalent map with a point w
x = de.mirror_point(0.4, 0.3, 1.5, 6)
print("base coefficients:", np.round(np.array(x.c, dtype=complex)[:3], 5), " w =", np.round(complex(x.w), 5))

# %% Each point on a mirror has its own involution s_x
s = de.mirror_of(x)
print("s_x(x) = x up to", np.max(np.abs(np.array(s(x).c, dtype=complex) - np.array(x.c, dtype=complex))))

# %% The subsymmetric-space axioms on a small family
thetas = [float(t) for t in rng.uniform(0, np.pi, 3)]
points = [de.mirror_point(thetas[i % 3], float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.5, 2)), 6)
          for i in range(6)]
print("axiom residual:", de.subsymmetric_axiom_check(points, [de.Subsymmetry(t) for t in thetas]))

# %% Projection to the base commutes with the operators, exactly
print("projection equivariance:", [de.projection_equivariance_residual(p, 6) for p in (-2, -1, 0, 1, 2)])

# %% Three absolute points carry a Maslov index
a, b, c = 0.0, 2 * np.pi / 3, 4 * np.pi / 3
print("maslov(a, b, c) =", fs.maslov_index(a, b, c), " maslov(b, a, c) =", fs.maslov_index(b, a, c))

# %% Boundary limits along a mirror are extrapolated
F = fs.PolyFunctional.parse("c1")
print("limit of Re c1 towards the Koebe map:", de.boundary_limit(F, 0.0, 8))
