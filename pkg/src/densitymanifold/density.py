"""Points and tangent vectors of the density manifold.

Densities and tangent vectors are both stored as densities with respect to
the fixed reference volume of the space, so the mixture connection is the flat
connection on these coordinate arrays: parallel fields are constant arrays and
mixture geodesics are straight lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretization import Space

NORMALIZATION_DRIFT = 1e-8
MASS_TOL = 1e-12


def _same_space(*objs):
    s = objs[0].space
    for o in objs[1:]:
        if o.space is not s:
            raise ValueError("space mismatch")
    return s


@dataclass(frozen=True, eq=False)
class Density:
    """Strictly positive probability measure ``rho * reference_volume``.

    Total mass within ``NORMALIZATION_DRIFT`` of one is silently renormalized;
    anything further off is rejected.
    """

    space: Space
    rho: np.ndarray

    def __post_init__(self):
        rho = self.space.check_field(self.rho, "rho").copy()
        if np.any(~(rho > 0)):
            raise ValueError("density must be strictly positive")
        total = float(np.dot(rho, self.space.reference_volume))
        if abs(total - 1.0) > NORMALIZATION_DRIFT:
            raise ValueError(f"density has total mass {total!r}, expected 1")
        rho /= total
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def uniform(cls, space: Space) -> Density:
        return cls(space, np.full(space.vertex_count, 1.0 / space.reference_volume.sum()))

    @classmethod
    def from_unnormalized(cls, space: Space, values) -> Density:
        values = np.asarray(values, dtype=float)
        return cls(space, values / np.dot(values, space.reference_volume))

    @property
    def mass(self) -> np.ndarray:
        """Per-vertex probability masses ``mu_i``."""
        return self.rho * self.space.reference_volume

    def __add__(self, nu: TangentVector) -> Density:
        _same_space(self, nu)
        return Density(self.space, self.rho + nu.density)

    def __sub__(self, nu: TangentVector) -> Density:
        _same_space(self, nu)
        return Density(self.space, self.rho - nu.density)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Signed measure with zero total mass, stored as a density."""

    space: Space
    density: np.ndarray
    check: bool = True

    def __post_init__(self):
        d = self.space.check_field(self.density, "density").copy()
        if self.check:
            vol = self.space.reference_volume
            total = abs(float(np.dot(d, vol)))
            if total > MASS_TOL * max(1.0, float(np.dot(np.abs(d), vol))):
                raise ValueError(f"tangent vector has total mass {total:.3e}")
        d.setflags(write=False)
        object.__setattr__(self, "density", d)

    @classmethod
    def from_function(cls, mu: Density, a) -> TangentVector:
        """The tangent vector ``a * mu`` for a zero-mu-mean function ``a``."""
        return cls(mu.space, np.asarray(a, dtype=float) * mu.rho)

    @classmethod
    def zero(cls, space: Space) -> TangentVector:
        return cls(space, np.zeros(space.vertex_count))

    @property
    def mass(self) -> np.ndarray:
        return self.density * self.space.reference_volume

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.mass))

    def __add__(self, other: TangentVector) -> TangentVector:
        _same_space(self, other)
        return TangentVector(self.space, self.density + other.density, self.check and other.check)

    def __sub__(self, other: TangentVector) -> TangentVector:
        _same_space(self, other)
        return TangentVector(self.space, self.density - other.density, self.check and other.check)

    def __mul__(self, c: float) -> TangentVector:
        return TangentVector(self.space, c * self.density, self.check)

    __rmul__ = __mul__

    def __neg__(self) -> TangentVector:
        return TangentVector(self.space, -self.density, self.check)


@dataclass(frozen=True, eq=False)
class MeanZeroField:
    """A function centered against the density ``mu``."""

    values: np.ndarray
    mu: Density

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def radon_nikodym(nu, mu: Density) -> np.ndarray:
    """Pointwise ratio ``d nu / d mu``."""
    _same_space(nu, mu)
    if isinstance(nu, Density):
        return nu.rho / mu.rho
    return nu.density / mu.rho


def fisher_rao_inner(mu: Density, nu1: TangentVector, nu2: TangentVector) -> float:
    _same_space(mu, nu1, nu2)
    return float(np.sum(nu1.density * nu2.density / mu.rho * mu.space.reference_volume))


def project_mean_zero(f, mu: Density) -> MeanZeroField:
    f = mu.space.check_field(f)
    return MeanZeroField(f - np.dot(f, mu.mass), mu)


def mixture_geodesic(mu0: Density, mu1: Density, t: float) -> Density:
    _same_space(mu0, mu1)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return Density(mu0.space, (1.0 - t) * mu0.rho + t * mu1.rho)
