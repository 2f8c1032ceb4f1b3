"""A first look: two densities, one tangent direction.

On a two-vertex graph every tangent vector is a multiple of (1, -1) mu, so
both metrics reduce to a single number we can check by hand.
"""

import numpy as np

from densitymanifold import (
    Density,
    TangentVector,
    build_graph_space,
    fisher_rao_model,
    mu_laplacian,
    otto_model,
    solve_mu_laplacian,
)

# %% The space: two unit-volume vertices joined by one edge of weight 1.
space = build_graph_space([1.0, 1.0], [(0, 1, 1.0)])
mu = Density.uniform(space)
print("masses:", mu.mass)

# %% The mu-Laplacian pushes mass along the edge with weight (mu_0 + mu_1)/2.
f = np.array([0.0, 1.0])
print("Lap f       =", mu_laplacian(space, mu, f))
print("Lap^-1(1,-1) =", solve_mu_laplacian(space, mu, [1.0, -1.0]))

# %% The tangent vector nu = a mu with a = (1, -1).
nu = TangentVector.from_function(mu, [1.0, -1.0])
print("Fisher-Rao |nu|^2 =", fisher_rao_model().inner(mu, nu, nu))
print("Otto       |nu|^2 =", otto_model().inner(mu, nu, nu))

# %% Move the base point towards vertex 0 with a fixed mass displacement.
# Fisher-Rao blows up near the boundary; the Otto edge weight
# (mu_0 + mu_1)/2 is always 1/2 here, so the Otto norm does not move.
for t in (0.0, 0.2, 0.4):
    m = Density(space, mu.rho + t * np.array([1.0, -1.0]))
    v = TangentVector(space, np.array([0.5, -0.5]))
    print(f"mu_0 = {m.mass[0]:.1f}:  FR {fisher_rao_model().inner(m, v, v):.4f}   Otto {otto_model().inner(m, v, v):.4f}")
