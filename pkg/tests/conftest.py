import numpy as np
import pytest

from densitymanifold import Density, TangentVector, build_cycle_space, build_graph_space

TWO_PI = 2 * np.pi
C4_EDGES = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]


@pytest.fixture
def k2():
    return build_graph_space([1.0, 1.0], [(0, 1, 1.0)])


@pytest.fixture
def c4():
    return build_graph_space([1.0] * 4, C4_EDGES)


@pytest.fixture
def c4_instance(c4):
    """A fixed non-uniform density on C4 with three tangent vectors."""
    mu = Density(c4, np.array([0.4, 0.3, 0.1, 0.2]))
    a = np.array([1.0, -2.0, 0.5, 1.5])
    b = np.array([-0.3, 0.7, 2.0, -1.0])
    c = np.array([0.2, 0.4, -1.1, 0.9])
    vecs = []
    for f in (a, b, c):
        f = f - np.dot(f, mu.mass)
        vecs.append(TangentVector.from_function(mu, f))
    return mu, vecs


def dense_graph_laplacian(volumes, edges, rho):
    """Loop-assembled mu-Laplacian matrix, used as a reference."""
    vol = np.asarray(volumes, float)
    m = np.asarray(rho) * vol
    n = len(vol)
    L = np.zeros((n, n))
    for i, j, w in edges:
        c = w * 0.5 * (m[i] + m[j])
        L[i, j] += c / m[i]
        L[i, i] -= c / m[i]
        L[j, i] += c / m[j]
        L[j, j] -= c / m[j]
    return L


def smooth_grid_instance(n, style="compositional"):
    s = build_cycle_space(n, TWO_PI, style)
    x = s.coordinates
    mu = Density.from_unnormalized(s, np.exp(0.4 * np.cos(x) + 0.2 * np.sin(2 * x)))
    return s, x, mu


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number][1])
