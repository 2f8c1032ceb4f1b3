"""Geodesics of a connection, integrated in the mixture chart.

With ``Gamma`` the Christoffel term of the connection, a geodesic solves

    d rho / dt = v,    d v / dt = -Gamma_rho(v, v),

integrated with the classical fourth-order Runge-Kutta scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connections import ConnectionSpec, christoffel
from .density import Density, TangentVector, _same_space

POSITIVITY_FLOOR = 1e-10


class GeodesicExitError(RuntimeError):
    """The trajectory reached the boundary of the positive cone."""


@dataclass(frozen=True)
class GeodesicState:
    mu: Density
    velocity: TangentVector
    time: float


def _density(space, rho: np.ndarray, t: float) -> Density:
    if np.min(rho) <= POSITIVITY_FLOOR:
        raise GeodesicExitError(
            f"geodesic exits the open cone at t = {t:.6g} (min rho {np.min(rho):.3e})"
        )
    return Density(space, rho)


def integrate_geodesic(spec: ConnectionSpec, mu0: Density, v0: TangentVector, T: float, steps: int) -> list[GeodesicState]:
    _same_space(mu0, v0)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not T > 0:
        raise ValueError("T must be positive")
    space = mu0.space
    dt = T / steps

    def accel(rho, v, t):
        mu = _density(space, rho, t)
        return -christoffel(spec, mu, TangentVector(space, v), TangentVector(space, v)).density

    rho, v = mu0.rho.copy(), v0.density.copy()
    states = [GeodesicState(mu0, v0, 0.0)]
    for k in range(steps):
        t = k * dt
        if spec.is_flat_chart:
            rho = rho + dt * v
        else:
            k1r, k1v = v, accel(rho, v, t)
            k2r, k2v = v + 0.5 * dt * k1v, accel(rho + 0.5 * dt * k1r, v + 0.5 * dt * k1v, t + 0.5 * dt)
            k3r, k3v = v + 0.5 * dt * k2v, accel(rho + 0.5 * dt * k2r, v + 0.5 * dt * k2v, t + 0.5 * dt)
            k4r, k4v = v + dt * k3v, accel(rho + dt * k3r, v + dt * k3v, t + dt)
            rho = rho + dt / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r)
            v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        mu = _density(space, rho, t + dt)
        rho = np.array(mu.rho)
        states.append(GeodesicState(mu, TangentVector(space, v), (k + 1) * dt))
    return states


@dataclass(frozen=True)
class GeodesicComparison:
    times: np.ndarray
    distances: np.ndarray

    @property
    def max_distance(self) -> float:
        return float(np.max(self.distances))


def l1_distance(mu: Density, nu: Density) -> float:
    _same_space(mu, nu)
    return float(np.sum(np.abs(mu.rho - nu.rho) * mu.space.reference_volume))


def compare_geodesics(spec_a: ConnectionSpec, spec_b: ConnectionSpec, mu0: Density, v0: TangentVector, T: float, steps: int) -> GeodesicComparison:
    """Per-step L1 distance between the two geodesics through ``(mu0, v0)``."""
    path_a = integrate_geodesic(spec_a, mu0, v0, T, steps)
    path_b = path_a if spec_b == spec_a else integrate_geodesic(spec_b, mu0, v0, T, steps)
    return GeodesicComparison(
        np.array([s.time for s in path_a]),
        np.array([l1_distance(a.mu, b.mu) for a, b in zip(path_a, path_b)]),
    )
