"""Geodesics of the alpha = 0 connection and of Levi-Civita.

For Fisher-Rao the alpha = 0 connection is the Levi-Civita connection, so
both trajectories coincide.  For Otto they differ, and the gap grows with
time from the same initial point and velocity.
"""

import numpy as np

from densitymanifold import (
    ConnectionSpec,
    SplitMix64,
    build_graph_space,
    compare_geodesics,
    fisher_rao_model,
    integrate_geodesic,
    otto_model,
    random_density,
    random_tangent,
)

space = build_graph_space([1.0] * 4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
rng = SplitMix64(2024)
mu0 = random_density(space, rng)
v0 = random_tangent(mu0, rng, scale=0.5)

# %% Endpoints of the Otto Levi-Civita geodesic and of the mixture line.
lc = integrate_geodesic(ConnectionSpec.levi_civita(otto_model()), mu0, v0, 0.5, 200)
mix = integrate_geodesic(ConnectionSpec.mixture(otto_model()), mu0, v0, 0.5, 200)
print("start      :", np.round(mu0.rho, 5))
print("Levi-Civita:", np.round(lc[-1].mu.rho, 5))
print("mixture    :", np.round(mix[-1].mu.rho, 5))

# %% L1 gap between alpha = 0 and Levi-Civita.
for name, model in (("Fisher-Rao", fisher_rao_model()), ("Otto", otto_model())):
    cmp = compare_geodesics(ConnectionSpec.alpha_family(model, 0.0), ConnectionSpec.levi_civita(model),
                            mu0, v0, 0.5, 200)
    samples = ", ".join(f"t={t:.2f}: {d:.2e}" for t, d in zip(cmp.times[::50], cmp.distances[::50]))
    print(f"{name:>10}: max gap {cmp.max_distance:.3e}   ({samples})")
