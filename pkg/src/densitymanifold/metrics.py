"""Regular Riemannian metrics ``G_mu(A, B) = <Phi_mu(A), B>^FR``.

A model supplies the operator family ``Phi_mu`` on tangent vectors, its
inverse, and its Gateaux derivative in the base point.  Two models are
provided: Fisher-Rao (``Phi = 1``) and Otto
(``Phi_mu(a mu) = -(Lap_mu^{-1} a) mu``).

The array-level methods (``phi_array`` and friends) act on density arrays of
shape ``(n,)`` or ``(n, k)``; the public methods wrap them for
:class:`TangentVector` values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import discretization as disc
from .density import Density, TangentVector, _same_space, fisher_rao_inner
from .rng import SplitMix64, random_density, random_tangent

RECENTER_RTOL = 1e-10


def _recenter(mu: Density, d: np.ndarray) -> np.ndarray:
    vol = mu.space.reference_volume
    total = vol @ d
    scale = np.abs(vol) @ np.abs(d)
    if np.any(np.abs(total) > RECENTER_RTOL * np.maximum(scale, 1e-300)):
        raise ArithmeticError(f"Phi output drifted off the tangent space (mass {np.max(np.abs(total)):.3e})")
    if d.ndim == 1:
        return d - total * mu.rho
    return d - np.outer(mu.rho, total)


def _col(v: np.ndarray, like: np.ndarray) -> np.ndarray:
    return v[:, None] if like.ndim == 2 else v


class RegularMetricModel:
    name = "regular"
    style: str | None = None

    def phi_array(self, mu: Density, d: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def phi_inverse_array(self, mu: Density, d: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gateaux_array(self, mu: Density, d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
        """Derivative of ``mu -> Phi_mu(nu2)`` along ``nu1`` (density arrays)."""
        return gateaux_phi_fd(
            self, mu, TangentVector(mu.space, d1), TangentVector(mu.space, d2)
        ).density

    def phi(self, mu: Density, nu: TangentVector) -> TangentVector:
        _same_space(mu, nu)
        return TangentVector(mu.space, self.phi_array(mu, nu.density))

    def phi_inverse(self, mu: Density, nu: TangentVector) -> TangentVector:
        _same_space(mu, nu)
        return TangentVector(mu.space, self.phi_inverse_array(mu, nu.density))

    def gateaux_phi(self, mu: Density, nu1: TangentVector, nu2: TangentVector) -> TangentVector:
        _same_space(mu, nu1, nu2)
        return TangentVector(mu.space, self.gateaux_array(mu, nu1.density, nu2.density))

    def inner(self, mu: Density, nu1: TangentVector, nu2: TangentVector) -> float:
        return fisher_rao_inner(mu, self.phi(mu, nu1), nu2)

    def __repr__(self):
        return f"{type(self).__name__}(style={self.style!r})" if self.style else f"{type(self).__name__}()"


class FisherRaoMetric(RegularMetricModel):
    name = "fisher_rao"

    def phi_array(self, mu, d):
        return np.array(d, dtype=float)

    def phi_inverse_array(self, mu, d):
        return np.array(d, dtype=float)

    def gateaux_array(self, mu, d1, d2):
        return np.zeros(np.broadcast_shapes(np.shape(d1), np.shape(d2)))

    def inner(self, mu, nu1, nu2):
        return fisher_rao_inner(mu, nu1, nu2)


class OttoMetric(RegularMetricModel):
    """Otto metric; ``style`` selects the Laplacian (``None``: the space's)."""

    name = "otto"

    def __init__(self, style: str | None = None):
        if style is not None and style not in disc.STYLES:
            raise ValueError(f"unknown laplacian style {style!r}")
        self.style = style

    def phi_array(self, mu, d):
        s = mu.space
        a = d / _col(mu.rho, d)
        h = disc.solve_mu_laplacian(s, mu, a, self.style)
        return _recenter(mu, -h * _col(mu.rho, d))

    def phi_inverse_array(self, mu, d):
        s = mu.space
        f = d / mu.rho
        return -disc.mu_laplacian(s, mu, f, self.style) * mu.rho

    def gateaux_array(self, mu, d1, d2):
        return _otto_gateaux(mu, d1, d2, self.style)


def fisher_rao_model() -> FisherRaoMetric:
    return FisherRaoMetric()


def otto_model(style: str | None = None) -> OttoMetric:
    return OttoMetric(style)


def metric_inner(model: RegularMetricModel, mu: Density, nu1: TangentVector, nu2: TangentVector) -> float:
    return model.inner(mu, nu1, nu2)


def metric_norm(model: RegularMetricModel, mu: Density, nu: TangentVector) -> float:
    return float(np.sqrt(max(model.inner(mu, nu, nu), 0.0)))


def default_fd_step(mu: Density, nu1: TangentVector, base: float = 1e-5) -> float:
    sup = float(np.max(np.abs(nu1.density / mu.rho)))
    return base / sup if sup > 0 else base


def perturbed(mu: Density, nu: TangentVector, t: float) -> Density:
    rho = mu.rho + t * nu.density
    if np.any(rho <= 0):
        raise ValueError(f"perturbation by step {t:.3e} leaves the positive cone")
    return Density(mu.space, rho)


def gateaux_phi_fd(model, mu: Density, nu1: TangentVector, nu2: TangentVector, step: float | None = None) -> TangentVector:
    """Central difference ``(Phi_{mu+t nu1}(nu2) - Phi_{mu-t nu1}(nu2)) / 2t``."""
    _same_space(mu, nu1, nu2)
    t = default_fd_step(mu, nu1) if step is None else step
    plus = model.phi_array(perturbed(mu, nu1, t), nu2.density)
    minus = model.phi_array(perturbed(mu, nu1, -t), nu2.density)
    d = (plus - minus) / (2.0 * t)
    # Both endpoints are mass-free; the quotient only amplifies their round-off.
    return TangentVector(mu.space, d - np.dot(d, mu.space.reference_volume) * mu.rho)


def _otto_gateaux(mu: Density, d1: np.ndarray, d2: np.ndarray, style) -> np.ndarray:
    # Phi_t(nu2) = -rho_t h_t with Lap_t h_t = d2/rho_t and h_t centered in mu_t;
    # differentiate both conditions at t = 0.
    s = mu.space
    rho = mu.rho
    a1 = d1 / rho
    a2 = d2 / rho
    h = disc.solve_mu_laplacian(s, mu, a2, style)
    rhs = -a1 * a2 - disc.laplacian_derivative(s, mu, d1, h, style)
    # Mean-zero by differentiating the solvability condition; the two terms
    # can cancel almost completely, leaving only round-off to check against.
    rhs = rhs - np.dot(rhs, mu.mass)
    dh = disc.solve_mu_laplacian(s, mu, rhs, style)
    dh = dh - np.dot(h * d1, s.reference_volume)
    return _recenter(mu, -(d1 * h + rho * dh))


def otto_gateaux_closed(mu: Density, nu1: TangentVector, nu2: TangentVector, style: str | None = None) -> TangentVector:
    """Exact derivative of ``mu -> Phi^O_mu(nu2)`` in direction ``nu1``."""
    _same_space(mu, nu1, nu2)
    return TangentVector(mu.space, _otto_gateaux(mu, nu1.density, nu2.density, style))


def tangent_basis(space) -> np.ndarray:
    """Columns ``delta_k / vol_k - delta_last / vol_last``, k < n - 1."""
    n = space.vertex_count
    vol = space.reference_volume
    B = np.zeros((n, n - 1))
    B[np.arange(n - 1), np.arange(n - 1)] = 1.0 / vol[:-1]
    B[n - 1, :] = -1.0 / vol[-1]
    return B


def gram_matrix(model: RegularMetricModel, mu: Density, basis: np.ndarray | None = None) -> np.ndarray:
    """``G[k, l] = G_mu(E_k, E_l)`` over a tangent basis (density columns)."""
    E = tangent_basis(mu.space) if basis is None else basis
    P = model.phi_array(mu, E)
    w = mu.space.reference_volume / mu.rho
    return P.T @ (w[:, None] * E)


@dataclass(frozen=True)
class SelfAdjointReport:
    trials: int
    max_symmetry_residual: float
    min_rayleigh_quotient: float

    @property
    def passed(self) -> bool:
        return self.min_rayleigh_quotient > 0


def check_selfadjoint_positive(model, mu: Density, trials: int, seed: int) -> SelfAdjointReport:
    """Random probe of symmetry and positivity of ``model.inner`` at ``mu``.

    The symmetry residual is normalized by ``sqrt(G(v1,v1) G(v2,v2))``; the
    Rayleigh quotient is ``G(v, v) / <v, v>^FR``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = SplitMix64(seed)
    worst = 0.0
    lowest = np.inf
    for _ in range(trials):
        v1 = random_tangent(mu, rng)
        v2 = random_tangent(mu, rng)
        g12 = model.inner(mu, v1, v2)
        g21 = model.inner(mu, v2, v1)
        g11 = model.inner(mu, v1, v1)
        g22 = model.inner(mu, v2, v2)
        scale = np.sqrt(abs(g11 * g22))
        worst = max(worst, abs(g12 - g21) / scale)
        lowest = min(lowest, g11 / fisher_rao_inner(mu, v1, v1), g22 / fisher_rao_inner(mu, v2, v2))
    return SelfAdjointReport(trials, float(worst), float(lowest))


__all__ = [
    "RegularMetricModel",
    "FisherRaoMetric",
    "OttoMetric",
    "fisher_rao_model",
    "otto_model",
    "metric_inner",
    "metric_norm",
    "gateaux_phi_fd",
    "otto_gateaux_closed",
    "check_selfadjoint_positive",
    "gram_matrix",
    "tangent_basis",
    "random_density",
]
