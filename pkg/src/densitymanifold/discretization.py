"""Finite sample spaces and the calculus of the mu-weighted Laplacian.

Two kinds of space are supported:

* ``cycle-grid``: a periodic 1-D grid with spacing ``h``; vector fields are
  stored as one tangential component per vertex and derivatives are central
  differences.
* ``weighted-graph``: a connected graph with positive edge weights; vector
  fields live on oriented edges ``i -> j`` (stored with ``i < j`` order as
  given).

The mu-Laplacian comes in two styles.  ``variational`` is the graph form

    (Lap_mu f)_i = 1/mu_i * sum_j w_ij theta_ij (f_j - f_i),
    theta_ij = (mu_i + mu_j) / 2,

with ``mu_i`` the vertex masses; grids use the cycle graph with
``w = 1/h**2``.  It is self-adjoint in L2(mu) to round-off.  ``compositional``
(grids only) is ``Lap_g f + grad f * grad log rho`` projected to zero
mu-mean, which reproduces the continuum algebra to O(h**2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.csgraph
import scipy.sparse.linalg

STYLES = ("variational", "compositional")
DENSE_LIMIT = 512
MEAN_ZERO_RTOL = 1e-10


class NotMeanZeroError(ValueError):
    """Right-hand side of a Laplacian solve is not centered against mu."""


class SolverError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True, eq=False)
class Space:
    """A discretized compact sample space with its reference volume.

    Instances hash by identity; operator factorizations are cached per space.
    """

    kind: str
    vertex_count: int
    reference_volume: np.ndarray
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_w: np.ndarray
    spacing: float | None = None
    laplacian_style: str = "variational"
    circumference: float | None = None
    coordinates: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_grid(self) -> bool:
        return self.kind == "cycle-grid"

    @property
    def edge_count(self) -> int:
        return len(self.edge_w)

    def resolve_style(self, style: str | None) -> str:
        style = style or self.laplacian_style
        if style not in STYLES:
            raise ValueError(f"unknown laplacian style {style!r}")
        if style == "compositional" and not self.is_grid:
            raise ValueError("compositional Laplacian is only defined on cycle grids")
        return style

    def check_field(self, f, name="field") -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape[0] != self.vertex_count:
            raise ValueError(
                f"{name} has {f.shape[0]} entries, space has {self.vertex_count} vertices"
            )
        return f

    def check_edge_field(self, X, name="edge field") -> np.ndarray:
        X = np.asarray(X, dtype=float)
        expected = self.vertex_count if self.is_grid else self.edge_count
        if X.shape[0] != expected:
            raise ValueError(f"{name} has {X.shape[0]} entries, expected {expected}")
        return X


def build_cycle_space(n: int, circumference: float, style: str = "variational") -> Space:
    if n < 3:
        raise ValueError(f"n too small: cycle grid needs n >= 3, got {n}")
    if not circumference > 0:
        raise ValueError(f"circumference must be positive, got {circumference}")
    if style not in STYLES:
        raise ValueError(f"unknown laplacian style {style!r}")
    h = circumference / n
    idx = np.arange(n)
    return Space(
        kind="cycle-grid",
        vertex_count=n,
        reference_volume=np.full(n, h),
        edge_i=idx,
        edge_j=(idx + 1) % n,
        edge_w=np.full(n, 1.0 / h**2),
        spacing=h,
        laplacian_style=style,
        circumference=float(circumference),
        coordinates=idx * h,
    )


def build_graph_space(volumes, edges) -> Space:
    """Weighted graph from per-vertex volumes and ``(i, j, w)`` triples."""
    vol = np.asarray(volumes, dtype=float)
    n = len(vol)
    if n < 2:
        raise ValueError("graph space needs at least 2 vertices")
    if np.any(~(vol > 0)):
        raise ValueError("reference volumes must be strictly positive")
    seen = set()
    ei, ej, ew = [], [], []
    for i, j, w in edges:
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) references a missing vertex")
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        if not w > 0:
            raise ValueError(f"non-positive weight {w} on edge ({i}, {j})")
        seen.add(key)
        ei.append(i)
        ej.append(j)
        ew.append(float(w))
    adj = sp.coo_matrix((np.ones(len(ei)), (ei, ej)), shape=(n, n))
    ncomp, _ = scipy.sparse.csgraph.connected_components(adj, directed=False)
    if ncomp != 1:
        raise ValueError(f"graph is disconnected ({ncomp} components)")
    return Space(
        kind="weighted-graph",
        vertex_count=n,
        reference_volume=vol,
        edge_i=np.array(ei, dtype=int),
        edge_j=np.array(ej, dtype=int),
        edge_w=np.array(ew),
    )


def _central(s: Space, f: np.ndarray) -> np.ndarray:
    return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * s.spacing)


def _second(s: Space, f: np.ndarray) -> np.ndarray:
    return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / s.spacing**2


def _scatter(s: Space, q: np.ndarray, sign: float) -> np.ndarray:
    n = s.vertex_count
    return np.bincount(s.edge_i, q, n) + sign * np.bincount(s.edge_j, q, n)


def _theta(s: Space, mass: np.ndarray) -> np.ndarray:
    return 0.5 * (mass[s.edge_i] + mass[s.edge_j])


def gradient(s: Space, f) -> np.ndarray:
    """Edge differences ``f_j - f_i`` on graphs, central differences on grids."""
    f = s.check_field(f)
    if s.is_grid:
        return _central(s, f)
    return f[s.edge_j] - f[s.edge_i]


def divergence(s: Space, mu, X, style: str | None = None) -> np.ndarray:
    """mu-divergence, the negative L2(mu)-adjoint of :func:`gradient`.

    Graphs and variational grids use the exact adjoint.  Compositional grids
    use ``div_g X + X * grad log rho`` recentered to zero mu-mean, which is
    adjoint only up to O(h**2).
    """
    X = s.check_edge_field(X)
    style = s.resolve_style(style)
    m = mu.mass
    if not s.is_grid:
        return _scatter(s, s.edge_w * _theta(s, m) * X, -1.0) / m
    if style == "variational":
        mX = m * X
        return (np.roll(mX, -1) - np.roll(mX, 1)) / (2.0 * s.spacing * m)
    out = _central(s, X) + X * _central(s, np.log(mu.rho))
    return out - np.dot(m, out)


def _lap_uncentered(s: Space, mu, f: np.ndarray) -> np.ndarray:
    return _second(s, f) + _central(s, f) * _central(s, np.log(mu.rho))


def mu_laplacian(s: Space, mu, f, style: str | None = None) -> np.ndarray:
    f = s.check_field(f)
    style = s.resolve_style(style)
    m = mu.mass
    if style == "variational":
        flux = s.edge_w * _theta(s, m) * (f[s.edge_j] - f[s.edge_i])
        return _scatter(s, flux, -1.0) / m
    out = _lap_uncentered(s, mu, f)
    return out - np.dot(m, out)


def laplacian_derivative(s: Space, mu, direction, f, style: str | None = None) -> np.ndarray:
    """Exact ``d/dt Lap_{mu + t nu} f`` at ``t = 0``.

    ``direction`` is the density of ``nu`` with respect to the reference
    volume.  The variational form is linear in mu through ``theta``; the
    compositional form depends on mu through ``log rho`` and the centering.
    """
    f = s.check_field(f)
    d = s.check_field(direction, "direction")
    style = s.resolve_style(style)
    m = mu.mass
    dm = d * s.reference_volume
    if style == "variational":
        df = f[s.edge_j] - f[s.edge_i]
        lap = _scatter(s, s.edge_w * _theta(s, m) * df, -1.0) / m
        dflux = s.edge_w * _theta(s, dm) * df
        return -(dm / m) * lap + _scatter(s, dflux, -1.0) / m
    Lf = _lap_uncentered(s, mu, f)
    dL = _central(s, f) * _central(s, d / mu.rho)
    return dL - np.dot(m, dL) - np.dot(dm, Lf)


def laplacian_matrix(s: Space, mu, style: str | None = None, sparse: bool = False):
    """Matrix of ``f -> Lap_mu f`` (dense unless ``sparse``)."""
    style = s.resolve_style(style)
    n = s.vertex_count
    m = mu.mass
    if style == "variational":
        c = s.edge_w * _theta(s, m)
        rows = np.concatenate([s.edge_i, s.edge_j, s.edge_i, s.edge_j])
        cols = np.concatenate([s.edge_j, s.edge_i, s.edge_i, s.edge_j])
        vals = np.concatenate([c, c, -c, -c])
        S = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        A = sp.diags(1.0 / m) @ S
        return A.tocsr() if sparse else A.toarray()
    h = s.spacing
    idx = np.arange(n)
    up, dn = (idx + 1) % n, (idx - 1) % n
    g = _central(s, np.log(mu.rho))
    rows = np.concatenate([idx, idx, idx])
    cols = np.concatenate([up, idx, dn])
    vals = np.concatenate(
        [np.full(n, 1 / h**2) + g / (2 * h), np.full(n, -2 / h**2), np.full(n, 1 / h**2) - g / (2 * h)]
    )
    L = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    if sparse:
        # Rank-one centering kept implicit for large grids.
        return L
    L = L.toarray()
    return L - np.outer(np.ones(n), m @ L)


@lru_cache(maxsize=64)
def _factorize(s: Space, rho_bytes: bytes, style: str):
    rho = np.frombuffer(rho_bytes, dtype=float)
    mu = _RawDensity(s, rho)
    n = s.vertex_count
    m = mu.mass
    if n <= DENSE_LIMIT:
        A = laplacian_matrix(s, mu, style)
        B = np.zeros((n + 1, n + 1))
        B[:n, :n] = A
        B[:n, n] = 1.0
        B[n, :n] = m
        return "dense", scipy.linalg.lu_factor(B), A
    if style == "variational":
        A = laplacian_matrix(s, mu, style, sparse=True)
        return "cg", (sp.diags(m) @ A).tocsr(), A
    L = laplacian_matrix(s, mu, style, sparse=True)
    A = L - sp.csr_matrix(np.outer(np.ones(n), m @ L.toarray()))
    B = sp.bmat([[A, np.ones((n, 1))], [m[None, :], None]]).tocsc()
    return "sparse", scipy.sparse.linalg.splu(B), A


@dataclass(frozen=True, eq=False)
class _RawDensity:
    space: Space
    rho: np.ndarray

    @property
    def mass(self):
        return self.rho * self.space.reference_volume


def center_rhs(mu, r: np.ndarray) -> np.ndarray:
    m = mu.mass
    mean = m @ r
    scale = np.abs(m) @ np.abs(r)
    if np.any(np.abs(mean) > MEAN_ZERO_RTOL * np.maximum(scale, np.finfo(float).tiny)):
        raise NotMeanZeroError(
            f"right-hand side has mu-mean {np.max(np.abs(mean)):.3e}, expected zero"
        )
    return r - mean


def solve_mu_laplacian(s: Space, mu, r, style: str | None = None) -> np.ndarray:
    """Unique zero-mu-mean ``h`` with ``Lap_mu h = r``.

    ``r`` may carry extra trailing columns.  Direct factorization up to
    ``DENSE_LIMIT`` vertices, conjugate gradient (variational) or sparse LU
    (compositional) above.  Raises :class:`NotMeanZeroError` if ``r`` is not
    centered and :class:`SolverError` if the residual check fails.
    """
    r = s.check_field(r, "rhs")
    style = s.resolve_style(style)
    r = center_rhs(mu, r)
    n = s.vertex_count
    m = mu.mass
    kind, fac, A = _factorize(s, np.ascontiguousarray(mu.rho, dtype=float).tobytes(), style)
    if kind == "dense":
        rhs = np.concatenate([r, np.zeros((1,) + r.shape[1:])])
        h = scipy.linalg.lu_solve(fac, rhs)[:n]
    elif kind == "sparse":
        rhs = np.concatenate([r, np.zeros((1,) + r.shape[1:])])
        h = fac.solve(rhs)[:n]
    else:
        cols = r.reshape(n, -1)
        out = []
        for k in range(cols.shape[1]):
            b = -(m * cols[:, k])
            x, info = scipy.sparse.linalg.cg(-fac, b, rtol=1e-14, atol=1e-12, maxiter=20 * n)
            if info != 0:
                res = np.max(np.abs(fac @ x + b))
                raise SolverError("conjugate gradient did not converge", res)
            out.append(x - m @ x)
        h = np.stack(out, axis=1).reshape(r.shape)
    residual = np.max(np.abs(A @ h - r)) if h.size else 0.0
    scale = max(1.0, np.max(np.abs(r)) if r.size else 0.0, _norm_inf(A) * np.max(np.abs(h), initial=0.0))
    if not np.isfinite(residual) or residual > 1e-12 * scale:
        raise SolverError("Laplacian solve failed residual check", residual)
    return h


def _norm_inf(A) -> float:
    if sp.issparse(A):
        return float(abs(A).sum(axis=1).max())
    return float(np.max(np.sum(np.abs(A), axis=1)))


def pointwise_inner(s: Space, X, Y, mu) -> np.ndarray:
    """Pointwise pairing of two vector fields (a discrete carré du champ).

    On graphs ``(1/(2 mu_i)) sum_j w_ij theta_ij X_ij Y_ij`` so that
    ``sum_i mu_i <grad f, grad g>_i = -sum_i mu_i (Lap_mu f)_i g_i`` exactly.
    On grids the product of the tangential components.
    """
    X = s.check_edge_field(X)
    Y = s.check_edge_field(Y)
    if s.is_grid:
        return X * Y
    m = mu.mass
    return _scatter(s, s.edge_w * _theta(s, m) * X * Y, 1.0) / (2.0 * m)
