"""Torsion of the alpha-connections for Fisher-Rao and Otto.

Every alpha-connection of Fisher-Rao is torsion free.  For the Otto metric
only alpha = -1 (the flat mixture connection) is; the torsion of the other
members is a fixed multiple (alpha + 1)/2 of the alpha = 1 torsion.
"""

import numpy as np

from densitymanifold import (
    ConnectionSpec,
    SplitMix64,
    build_graph_space,
    fisher_rao_model,
    metric_norm,
    otto_model,
    random_density,
    random_tangent,
    torsion,
)

space = build_graph_space([1.0] * 4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
rng = SplitMix64(7)
mu = random_density(space, rng)
A, B = random_tangent(mu, rng), random_tangent(mu, rng)
print("base density:", np.round(mu.rho, 4))

# %% Torsion norms in each metric's own norm.
print(f"{'alpha':>6} {'Fisher-Rao':>12} {'Otto':>12}")
for alpha in (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0):
    norms = [metric_norm(m, mu, torsion(ConnectionSpec.alpha_family(m, alpha), mu, A, B))
             for m in (fisher_rao_model(), otto_model())]
    print(f"{alpha:6.1f} {norms[0]:12.3e} {norms[1]:12.3e}")

# %% The Otto torsion is linear in alpha.
t1 = torsion(ConnectionSpec.alpha_family(otto_model(), 1.0), mu, A, B).density
t3 = torsion(ConnectionSpec.alpha_family(otto_model(), 3.0), mu, A, B).density
print("torsion(3) / torsion(1) =", t3 / t1)
