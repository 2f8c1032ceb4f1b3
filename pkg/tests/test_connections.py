import numpy as np
import pytest

from densitymanifold import (
    ConnectionSpec,
    Density,
    TangentVector,
    alpha_gamma,
    amari_otto_closed,
    amari_tensor,
    build_cycle_space,
    build_graph_space,
    christoffel,
    conjugacy_residual,
    curvature_fd,
    d_otto_closed,
    d_tensor,
    duality_residual,
    fisher_rao_model,
    k_otto_closed,
    k_tensor,
    levi_civita_gamma,
    levi_civita_otto_closed,
    metric_norm,
    otto_model,
    project_mean_zero,
    sup_relative_error,
    torsion,
    torsion_otto_closed,
)
from densitymanifold.metrics import perturbed
from densitymanifold.rng import SplitMix64, random_density, random_tangent

from conftest import TWO_PI, smooth_grid_instance

FR = fisher_rao_model()
OTTO = otto_model()


def fourier_instance(n, style="compositional"):
    s = build_cycle_space(n, TWO_PI, style)
    x = s.coordinates
    mu = Density.uniform(s)

    def tv(f):
        return TangentVector.from_function(mu, project_mean_zero(f, mu).values)

    return s, x, mu, tv


def smooth_tangents(n):
    s, x, mu = smooth_grid_instance(n)

    def tv(f):
        return TangentVector.from_function(mu, project_mean_zero(f, mu).values)

    A = tv(np.sin(x) + 0.3 * np.cos(3 * x))
    B = tv(np.cos(2 * x) + 0.5 * np.sin(x))
    C = tv(np.cos(x) - 0.2 * np.sin(2 * x))
    return mu, A, B, C


# K tensor ------------------------------------------------------------------


def test_fisher_rao_k_on_k2_vanishes(k2):
    mu = Density.uniform(k2)
    A = TangentVector.from_function(mu, [1.0, -1.0])
    np.testing.assert_allclose(k_tensor(FR, mu, A, A).density, 0.0, atol=1e-15)


def test_fisher_rao_k_closed_form(c4_instance):
    # K^FR(A, B) = (a b - int a b dmu) mu
    mu, (A, B, _) = c4_instance
    a, b = A.density / mu.rho, B.density / mu.rho
    ab = a * b
    np.testing.assert_allclose(k_tensor(FR, mu, A, B).density, (ab - ab @ mu.mass) * mu.rho, atol=1e-14)
    np.testing.assert_allclose(k_tensor(FR, mu, A, B).density, k_tensor(FR, mu, B, A).density, atol=1e-15)


def test_k_representation(c4_instance):
    # G(K(A, B), C) = -d/dt G_{mu + t A}(B, C)
    mu, (A, B, C) = c4_instance
    for model in (FR, OTTO):
        t = 1e-5
        dG = (model.inner(perturbed(mu, A, t), B, C) - model.inner(perturbed(mu, A, -t), B, C)) / (2 * t)
        assert abs(model.inner(mu, k_tensor(model, mu, A, B), C) + dG) <= 1e-8


def test_closed_forms_are_only_analogues_on_graphs(c4_instance):
    # Graph calculus has no product rule, so the closed Otto formulas and the
    # definitional route disagree at O(1); comparisons are made on grids.
    mu, (A, B, C) = c4_instance
    assert sup_relative_error(mu, k_tensor(OTTO, mu, A, B), k_otto_closed(mu, A, B)) > 1e-2
    assert abs(amari_tensor(OTTO, mu, A, B, C) - amari_otto_closed(mu, A, B, C)) > 1e-3


def test_k_otto_closed_mass_free_on_cycle_graph():
    n = 64
    s = build_graph_space(np.ones(n), [(i, (i + 1) % n, 1.0) for i in range(n)])
    rng = SplitMix64(31)
    mu = random_density(s, rng)
    A, B = random_tangent(mu, rng), random_tangent(mu, rng)
    assert abs(k_otto_closed(mu, A, B).total_mass) <= 1e-10
    assert np.max(np.abs(k_otto_closed(mu, A, TangentVector.zero(s)).density)) == 0.0


def test_k_otto_grid_n128():
    mu, A, B, _ = smooth_tangents(128)
    assert sup_relative_error(mu, k_tensor(OTTO, mu, A, B), k_otto_closed(mu, A, B)) <= 1e-3


def test_k_otto_fourier_oracle():
    s, x, mu, tv = fourier_instance(256)
    K = k_tensor(OTTO, mu, tv(np.sin(x)), tv(np.cos(2 * x)))
    exact = TangentVector(s, (np.sin(x) * np.cos(2 * x) + 0.5 * np.sin(2 * x) * np.cos(x)) * mu.rho)
    assert sup_relative_error(mu, K, exact) <= 1e-3


# Amari tensor --------------------------------------------------------------


def test_amari_chentsov_c4(c4):
    mu = Density.uniform(c4)
    A = TangentVector.from_function(mu, [1, -1, 1, -1])
    B = TangentVector.from_function(mu, [1, 1, -1, -1])
    C = TangentVector.from_function(mu, [1, -1, -1, 1])
    assert amari_tensor(FR, mu, A, B, C) == pytest.approx(1.0, abs=1e-12)


def test_fisher_rao_amari_totally_symmetric(c4_instance):
    mu, (A, B, C) = c4_instance
    ref = amari_tensor(FR, mu, A, B, C)
    for p in [(A, C, B), (B, A, C), (B, C, A), (C, A, B), (C, B, A)]:
        assert amari_tensor(FR, mu, *p) == pytest.approx(ref, abs=1e-13)


def test_amari_otto_fourier_oracle():
    s, x, mu, tv = fourier_instance(256)
    A, B, C = tv(np.sin(x)), tv(np.cos(2 * x)), tv(np.sin(x))
    assert abs(amari_tensor(OTTO, mu, A, B, C) + 0.125) <= 1e-3 * 0.125
    assert abs(amari_otto_closed(mu, A, B, C) + 0.125) <= 1e-3 * 0.125


def test_amari_otto_definitional_vs_closed_n256():
    mu, A, B, C = smooth_tangents(256)
    ref = amari_otto_closed(mu, A, B, C)
    assert abs(amari_tensor(OTTO, mu, A, B, C) - ref) <= 1e-3 * abs(ref)


# Christoffel terms and torsion --------------------------------------------


def test_alpha_gamma_scaling(c4_instance):
    mu, (A, B, _) = c4_instance
    g1 = alpha_gamma(ConnectionSpec.alpha_family(OTTO, 1.0), mu, A, B).density
    g3 = alpha_gamma(ConnectionSpec.alpha_family(OTTO, 3.0), mu, A, B).density
    assert np.max(np.abs(alpha_gamma(ConnectionSpec.alpha_family(OTTO, -1.0), mu, A, B).density)) == 0.0
    np.testing.assert_allclose(g3, 2 * g1, rtol=1e-15)
    np.testing.assert_allclose(g1, -k_tensor(OTTO, mu, A, B).density, rtol=1e-15)


def test_torsion_alternating(c4_instance):
    mu, (A, _, _) = c4_instance
    for model in (FR, OTTO):
        tor = torsion(ConnectionSpec.alpha_family(model, 1.0), mu, A, A)
        assert np.max(np.abs(tor.density)) == 0.0


@pytest.mark.parametrize("alpha", [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
def test_fisher_rao_torsion_free(c4, alpha):
    rng = SplitMix64(32)
    for _ in range(5):
        mu = random_density(c4, rng)
        A, B = random_tangent(mu, rng), random_tangent(mu, rng)
        assert metric_norm(FR, mu, torsion(ConnectionSpec.alpha_family(FR, alpha), mu, A, B)) <= 1e-10


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_otto_torsion_nonzero(c4, alpha):
    rng = SplitMix64(33)
    for _ in range(5):
        mu = random_density(c4, rng)
        A, B = random_tangent(mu, rng), random_tangent(mu, rng)
        assert metric_norm(OTTO, mu, torsion(ConnectionSpec.alpha_family(OTTO, alpha), mu, A, B)) >= 1e-3


def test_torsion_closed_antisymmetric_and_fourier():
    s, x, mu, tv = fourier_instance(256)
    A, B = tv(np.sin(x)), tv(np.cos(2 * x))
    assert np.max(np.abs(torsion_otto_closed(mu, A, A, 1.0).density)) == 0.0
    np.testing.assert_allclose(
        torsion_otto_closed(mu, A, B, 1.0).density, -torsion_otto_closed(mu, B, A, 1.0).density, atol=1e-15
    )
    exact = TangentVector(s, 1.5 * np.sin(2 * x) * np.cos(x) * mu.rho)
    assert sup_relative_error(mu, torsion_otto_closed(mu, A, B, 1.0), exact) <= 1e-3
    assert sup_relative_error(mu, torsion(ConnectionSpec.alpha_family(OTTO, 1.0), mu, A, B), exact) <= 1e-3


def test_torsion_closed_second_order():
    errs = []
    for n in (64, 128):
        s, x, mu, tv = fourier_instance(n)
        exact = TangentVector(s, 1.5 * np.sin(2 * x) * np.cos(x) * mu.rho)
        errs.append(sup_relative_error(mu, torsion_otto_closed(mu, tv(np.sin(x)), tv(np.cos(2 * x)), 1.0), exact))
    assert 3.2 <= errs[0] / errs[1] <= 4.8


# D tensor and Levi-Civita --------------------------------------------------


def test_d_tensor_fisher_rao_equals_k(c4_instance):
    mu, (A, B, _) = c4_instance
    np.testing.assert_allclose(d_tensor(FR, mu, A, B).density, k_tensor(FR, mu, A, B).density, atol=1e-13)


def test_d_tensor_represents_amari(c4_instance):
    mu, (A, B, C) = c4_instance
    D = d_tensor(OTTO, mu, A, B)
    assert abs(OTTO.inner(mu, D, C) - amari_tensor(OTTO, mu, C, A, B)) <= 1e-12
    np.testing.assert_allclose(D.density, d_tensor(OTTO, mu, B, A).density, atol=1e-12)


def test_d_otto_closed_structure(c4_instance):
    mu, (A, B, _) = c4_instance
    zero = TangentVector.zero(mu.space)
    assert np.max(np.abs(d_otto_closed(mu, zero, B).density)) == 0.0
    np.testing.assert_allclose(d_otto_closed(mu, A, B).density, d_otto_closed(mu, B, A).density, atol=1e-15)


def test_d_otto_grid_n128():
    mu, A, B, _ = smooth_tangents(128)
    assert sup_relative_error(mu, d_tensor(OTTO, mu, A, B), d_otto_closed(mu, A, B)) <= 1e-2


def test_d_otto_fourier_oracle():
    s, x, mu, tv = fourier_instance(256)
    A = tv(np.sin(x))
    exact = TangentVector(s, 2 * np.cos(2 * x) * mu.rho)
    assert sup_relative_error(mu, d_otto_closed(mu, A, A), exact) <= 1e-3


def test_d_tensor_size_limit():
    s = build_cycle_space(600, 1.0)
    mu = Density.uniform(s)
    with pytest.raises(ValueError, match="vertex_count"):
        d_tensor(OTTO, mu, TangentVector.zero(s), TangentVector.zero(s))


def test_levi_civita_fisher_rao_is_alpha_zero(c4_instance):
    mu, (A, B, _) = c4_instance
    lc = levi_civita_gamma(FR, mu, A, B).density
    np.testing.assert_allclose(lc, alpha_gamma(ConnectionSpec.alpha_family(FR, 0.0), mu, A, B).density, atol=1e-14)


def test_levi_civita_otto(c4_instance):
    mu, (A, B, C) = c4_instance
    lc = ConnectionSpec.levi_civita(OTTO)
    g_ab = christoffel(lc, mu, A, B)
    np.testing.assert_allclose(g_ab.density, christoffel(lc, mu, B, A).density, atol=1e-12)
    a0 = alpha_gamma(ConnectionSpec.alpha_family(OTTO, 0.0), mu, A, B)
    assert metric_norm(OTTO, mu, g_ab - a0) >= 1e-3
    assert conjugacy_residual(lc, lc, mu, A, B, C) <= 1e-8


def test_levi_civita_otto_grid_vs_closed():
    mu, A, B, _ = smooth_tangents(128)
    g_ab = levi_civita_gamma(OTTO, mu, A, B)
    assert sup_relative_error(mu, g_ab, levi_civita_otto_closed(mu, A, B)) <= 1e-2


def test_levi_civita_otto_identity_grid():
    mu, A, B, _ = smooth_tangents(64)
    combo = -0.5 * k_otto_closed(mu, A, B) - 0.5 * k_otto_closed(mu, B, A) + 0.5 * d_otto_closed(mu, A, B)
    assert sup_relative_error(mu, levi_civita_otto_closed(mu, A, B), combo) <= 1e-12


# Duality and curvature ----------------------------------------------------


@pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0])
def test_duality(c4_instance, alpha):
    mu, (A, B, C) = c4_instance
    assert duality_residual(FR, alpha, mu, A, B, C) <= 1e-8
    assert duality_residual(OTTO, alpha, mu, A, B, C) <= 1e-8


def test_curvature(c4):
    rng = SplitMix64(34)
    for _ in range(3):
        mu = random_density(c4, rng)
        A, B, C = (random_tangent(mu, rng) for _ in range(3))
        e = ConnectionSpec.alpha_family(OTTO, 1.0)
        assert metric_norm(OTTO, mu, curvature_fd(e, mu, A, B, C)) <= 1e-6
        assert np.max(np.abs(curvature_fd(ConnectionSpec.mixture(OTTO), mu, A, B, C).density)) == 0.0
        assert metric_norm(FR, mu, curvature_fd(ConnectionSpec.alpha_family(FR, 0.0), mu, A, B, C)) >= 1e-3
        lc = ConnectionSpec.levi_civita(OTTO)
        rab = curvature_fd(lc, mu, A, B, C).density
        np.testing.assert_allclose(rab, -curvature_fd(lc, mu, B, A, C).density, atol=1e-8)


def test_connection_spec_validation():
    with pytest.raises(ValueError):
        ConnectionSpec(OTTO, 0.0, "affine")
    with pytest.raises(ValueError):
        ConnectionSpec(OTTO, 1.0, "mixture")
    assert ConnectionSpec.alpha_family(OTTO, -1).is_flat_chart
    assert not ConnectionSpec.levi_civita(OTTO).is_flat_chart
