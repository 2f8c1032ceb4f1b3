"""Alpha-connections of a regular metric and their tensors.

Everything is expressed in the mixture chart, where constant tangent vectors
are parallel for the mixture connection.  A connection is then described by
its Christoffel term ``Gamma_mu(A, B) = nabla_A B - nabla^m_A B``:

* alpha-family: ``-(alpha + 1)/2 * K(A, B)``
* Levi-Civita:  ``-K(A, B)/2 - K(B, A)/2 + D(A, B)/2``

where ``K`` represents the mixture derivative of the metric and ``D`` is the
representer of ``C -> A(C; A, B)``.  The ``*_otto_closed`` functions evaluate
the explicit Otto formulas with the discrete gradient, carré du champ and
Laplacian of the space; they are independent of the definitional route and
agree with it up to discretization error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import discretization as disc
from .density import Density, TangentVector, _same_space, fisher_rao_inner
from .metrics import (
    RegularMetricModel,
    gram_matrix,
    metric_norm,
    perturbed,
    tangent_basis,
)

VARIANTS = ("alpha-family", "levi-civita", "mixture")


@dataclass(frozen=True)
class ConnectionSpec:
    model: RegularMetricModel
    alpha: float = -1.0
    variant: str = "alpha-family"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown connection variant {self.variant!r}")
        if self.variant == "mixture" and self.alpha != -1.0:
            raise ValueError("the mixture connection is the alpha = -1 member")

    @classmethod
    def alpha_family(cls, model, alpha: float) -> ConnectionSpec:
        return cls(model, float(alpha), "alpha-family")

    @classmethod
    def levi_civita(cls, model) -> ConnectionSpec:
        return cls(model, 0.0, "levi-civita")

    @classmethod
    def mixture(cls, model) -> ConnectionSpec:
        return cls(model, -1.0, "mixture")

    @property
    def is_flat_chart(self) -> bool:
        return self.variant == "mixture" or (self.variant == "alpha-family" and self.alpha == -1.0)


def _fn(mu: Density, v: TangentVector) -> np.ndarray:
    return v.density / mu.rho


def k_tensor(model: RegularMetricModel, mu: Density, A: TangentVector, B: TangentVector) -> TangentVector:
    """``Phi^{-1}`` of the centered representer ``a Phi(B) - d_A Phi(B)``.

    The representer can carry total mass (e.g. ``a b mu`` for Fisher-Rao);
    ``(int r) mu`` pairs to zero against every tangent vector, so it is
    removed before inverting ``Phi``.
    """
    _same_space(mu, A, B)
    pb = model.phi_array(mu, B.density)
    r = _fn(mu, A) * pb - model.gateaux_array(mu, A.density, B.density)
    r = r - np.dot(r, mu.space.reference_volume) * mu.rho
    return TangentVector(mu.space, model.phi_inverse_array(mu, r))


def amari_tensor(model, mu: Density, A, B, C) -> float:
    """``A(A; B, C) = G(K(A, B), C)``, minus the mixture derivative of G."""
    return model.inner(mu, k_tensor(model, mu, A, B), C)


def alpha_gamma(spec: ConnectionSpec, mu: Density, A, B) -> TangentVector:
    factor = (spec.alpha + 1.0) / 2.0
    if factor == 0.0:
        return TangentVector.zero(mu.space)
    return -factor * k_tensor(spec.model, mu, A, B)


def torsion(spec: ConnectionSpec, mu: Density, A, B) -> TangentVector:
    """``Gamma(A, B) - Gamma(B, A)`` for the connection ``spec``."""
    if spec.variant == "alpha-family":
        factor = (spec.alpha + 1.0) / 2.0
        if factor == 0.0:
            return TangentVector.zero(mu.space)
        return factor * (k_tensor(spec.model, mu, B, A) - k_tensor(spec.model, mu, A, B))
    return christoffel(spec, mu, A, B) - christoffel(spec, mu, B, A)


def d_tensor(model, mu: Density, A, B) -> TangentVector:
    """Representer ``D`` with ``G(D, C) = A(C; A, B)`` for every tangent ``C``.

    Dense solve against the Gram matrix of a tangent basis; limited to
    ``DENSE_LIMIT`` vertices.
    """
    _same_space(mu, A, B)
    n = mu.space.vertex_count
    if n > disc.DENSE_LIMIT:
        raise ValueError(f"d_tensor needs vertex_count <= {disc.DENSE_LIMIT}, got {n}")
    E = tangent_basis(mu.space)
    G = gram_matrix(model, mu, E)
    rhs = np.array(
        [amari_tensor(model, mu, TangentVector(mu.space, E[:, k]), A, B) for k in range(n - 1)]
    )
    try:
        x = np.linalg.solve(G.T, rhs)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Gram matrix is singular: {exc}") from None
    return TangentVector(mu.space, E @ x)


def levi_civita_gamma(model, mu: Density, A, B) -> TangentVector:
    kab = k_tensor(model, mu, A, B)
    kba = k_tensor(model, mu, B, A)
    return -0.5 * kab - 0.5 * kba + 0.5 * d_tensor(model, mu, A, B)


def christoffel(spec: ConnectionSpec, mu: Density, A, B) -> TangentVector:
    if spec.variant == "mixture":
        return TangentVector.zero(mu.space)
    if spec.variant == "levi-civita":
        return levi_civita_gamma(spec.model, mu, A, B)
    return alpha_gamma(spec, mu, A, B)


def curvature_fd(spec: ConnectionSpec, mu: Density, A, B, C, step: float = 1e-5) -> TangentVector:
    """``R(A, B) C`` for constant fields in the mixture chart.

    ``d_A Gamma(B, C) - d_B Gamma(A, C) + Gamma(A, Gamma(B, C)) - Gamma(B, Gamma(A, C))``
    with the base-point derivatives taken by central differences.
    """
    _same_space(mu, A, B, C)
    if spec.is_flat_chart:
        return TangentVector.zero(mu.space)

    def d_gamma(X, Y, Z):
        plus = christoffel(spec, perturbed(mu, X, step), Y, Z)
        minus = christoffel(spec, perturbed(mu, X, -step), Y, Z)
        return TangentVector(mu.space, (plus.density - minus.density) * (0.5 / step), check=False)

    g_bc = christoffel(spec, mu, B, C)
    g_ac = christoffel(spec, mu, A, C)
    R = (
        d_gamma(A, B, C)
        - d_gamma(B, A, C)
        + christoffel(spec, mu, A, g_bc)
        - christoffel(spec, mu, B, g_ac)
    )
    # Cancellation leaves round-off mass far above the result itself.
    return TangentVector(mu.space, R.density - R.total_mass * mu.rho)


def conjugacy_residual(spec: ConnectionSpec, dual: ConnectionSpec, mu: Density, A, B, C, step: float = 1e-5) -> float:
    """``|A G(B, C) - G(nabla_A B, C) - G(B, nabla*_A C)|`` for constant fields."""
    model = spec.model
    g_plus = model.inner(perturbed(mu, A, step), B, C)
    g_minus = model.inner(perturbed(mu, A, -step), B, C)
    derivative = (g_plus - g_minus) / (2.0 * step)
    first = model.inner(mu, christoffel(spec, mu, A, B), C)
    second = model.inner(mu, B, christoffel(dual, mu, A, C))
    return abs(derivative - first - second)


def duality_residual(model, alpha: float, mu: Density, A, B, C, step: float = 1e-5) -> float:
    return conjugacy_residual(
        ConnectionSpec.alpha_family(model, alpha),
        ConnectionSpec.alpha_family(model, -alpha),
        mu, A, B, C, step,
    )


def tensor_norms(model, mu: Density, v: TangentVector) -> dict:
    """Fisher-Rao norm and the model's own norm of a tangent vector."""
    return {
        "fisher_rao": float(np.sqrt(fisher_rao_inner(mu, v, v))),
        "model": metric_norm(model, mu, v),
    }


# Closed Otto formulas -------------------------------------------------------


class _OttoCalculus:
    def __init__(self, mu: Density, style: str | None):
        self.mu = mu
        self.s = mu.space
        self.style = self.s.resolve_style(style)

    def inv(self, a):
        return disc.solve_mu_laplacian(self.s, self.mu, a, self.style)

    def pair(self, f, g):
        s = self.s
        return disc.pointwise_inner(s, disc.gradient(s, f), disc.gradient(s, g), self.mu)

    def lap(self, f):
        return disc.mu_laplacian(self.s, self.mu, f, self.style)

    def measure(self, f) -> TangentVector:
        # Total mass is zero only up to the summation-by-parts error of the grid.
        return TangentVector(self.s, f * self.mu.rho, check=False)


def k_otto_closed(mu: Density, A, B, style: str | None = None) -> TangentVector:
    """``(a b + <grad Lap^{-1} b, grad a>) mu``.

    Mass-free to round-off on graph spaces; on grids the total mass is the
    O(h**2) defect of discrete integration by parts.
    """
    _same_space(mu, A, B)
    c = _OttoCalculus(mu, style)
    a, b = _fn(mu, A), _fn(mu, B)
    return c.measure(a * b + c.pair(c.inv(b), a))


def amari_otto_closed(mu: Density, A, B, C, style: str | None = None) -> float:
    """``int a <grad Lap^{-1} b, grad Lap^{-1} c> dmu``."""
    _same_space(mu, A, B, C)
    c = _OttoCalculus(mu, style)
    a, b, cc = _fn(mu, A), _fn(mu, B), _fn(mu, C)
    return float(np.dot(a * c.pair(c.inv(b), c.inv(cc)), mu.mass))


def torsion_otto_closed(mu: Density, A, B, alpha: float, style: str | None = None) -> TangentVector:
    _same_space(mu, A, B)
    c = _OttoCalculus(mu, style)
    a, b = _fn(mu, A), _fn(mu, B)
    return c.measure(0.5 * (alpha + 1.0) * (c.pair(c.inv(a), b) - c.pair(c.inv(b), a)))


def d_otto_closed(mu: Density, A, B, style: str | None = None) -> TangentVector:
    """``-Lap_mu <grad Lap^{-1} a, grad Lap^{-1} b> mu``."""
    _same_space(mu, A, B)
    c = _OttoCalculus(mu, style)
    a, b = _fn(mu, A), _fn(mu, B)
    return c.measure(-c.lap(c.pair(c.inv(a), c.inv(b))))


def levi_civita_otto_closed(mu: Density, A, B, style: str | None = None) -> TangentVector:
    """Otto Levi-Civita Christoffel term in one expression.

    ``-(2ab + Lap<grad ia, grad ib> + <grad ia, grad b> + <grad a, grad ib>) mu / 2``
    with ``ia = Lap^{-1} a``, ``ib = Lap^{-1} b``.
    """
    _same_space(mu, A, B)
    c = _OttoCalculus(mu, style)
    a, b = _fn(mu, A), _fn(mu, B)
    ia, ib = c.inv(a), c.inv(b)
    total = 2 * a * b + c.lap(c.pair(ia, ib)) + c.pair(ia, b) + c.pair(a, ib)
    return c.measure(-0.5 * total)


def sup_relative_error(mu: Density, approx: TangentVector, exact: TangentVector) -> float:
    """``max |d(approx - exact)/dmu| / max |d exact/dmu|``."""
    diff = np.max(np.abs((approx.density - exact.density) / mu.rho))
    return float(diff / np.max(np.abs(exact.density / mu.rho)))
