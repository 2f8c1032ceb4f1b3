"""Discrete density manifolds with regular metrics and alpha-connections.

Densities live on a finite measure space (a weighted graph or a periodic 1-D
grid).  Tangent vectors are mass-free signed measures, metrics are given by
an operator family ``Phi_mu`` relative to Fisher-Rao, and connections are
described by their Christoffel term in the mixture chart.
"""

from .connections import (
    ConnectionSpec,
    alpha_gamma,
    amari_otto_closed,
    amari_tensor,
    christoffel,
    conjugacy_residual,
    curvature_fd,
    d_otto_closed,
    d_tensor,
    duality_residual,
    k_otto_closed,
    k_tensor,
    levi_civita_gamma,
    levi_civita_otto_closed,
    sup_relative_error,
    tensor_norms,
    torsion,
    torsion_otto_closed,
)
from .density import (
    Density,
    MeanZeroField,
    TangentVector,
    fisher_rao_inner,
    mixture_geodesic,
    project_mean_zero,
    radon_nikodym,
)
from .discretization import (
    NotMeanZeroError,
    SolverError,
    Space,
    build_cycle_space,
    build_graph_space,
    divergence,
    gradient,
    laplacian_derivative,
    mu_laplacian,
    pointwise_inner,
    solve_mu_laplacian,
)
from .geodesics import (
    GeodesicComparison,
    GeodesicExitError,
    GeodesicState,
    compare_geodesics,
    integrate_geodesic,
    l1_distance,
)
from .harness import ConfigError, ExperimentConfig, Report, load_config, parse_config, run_experiment
from .metrics import (
    FisherRaoMetric,
    OttoMetric,
    RegularMetricModel,
    check_selfadjoint_positive,
    fisher_rao_model,
    gateaux_phi_fd,
    gram_matrix,
    metric_inner,
    metric_norm,
    otto_gateaux_closed,
    otto_model,
)
from .rng import SplitMix64, random_density, random_tangent

__version__ = "0.1.0"
