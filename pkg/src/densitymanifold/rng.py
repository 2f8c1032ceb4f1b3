"""Seedable SplitMix64 generator and the random draws used by experiments.

The sequence is fully specified so that trials can be reproduced by any
implementation:

* state update: ``state = (state + 0x9E3779B97F4A7C15) mod 2**64``
* output mix: ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``,
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``, ``z ^ (z >> 31)``
* uniform double: ``(next() >> 11) * 2**-53`` in ``[0, 1)``
* standard normal: Box-Muller cosine branch,
  ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``, two uniforms per normal.

Random densities are ``exp(scale * z)`` normalized against the reference
volume; random tangent vectors are Gaussian fields centered against ``mu``.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, size: int | None = None):
        if size is None:
            return (self.next_u64() >> 11) * 2.0**-53
        return np.array([(self.next_u64() >> 11) * 2.0**-53 for _ in range(size)])

    def normal(self, size: int | None = None):
        if size is None:
            u1 = self.uniform()
            u2 = self.uniform()
            return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        return np.array([self.normal() for _ in range(size)])


def random_density(space, rng: SplitMix64, scale: float = 0.5):
    """Draw ``rho ∝ exp(scale * z)`` with ``z`` standard normal per vertex."""
    from .density import Density

    z = rng.normal(space.vertex_count)
    rho = np.exp(scale * z)
    rho /= np.dot(rho, space.reference_volume)
    return Density(space, rho)


def random_tangent(mu, rng: SplitMix64, scale: float = 1.0):
    """Draw ``a mu`` with ``a`` a Gaussian field centered to zero mu-mean."""
    from .density import TangentVector

    z = scale * rng.normal(mu.space.vertex_count)
    a = z - np.dot(z, mu.mass)
    return TangentVector(mu.space, a * mu.rho)
