"""Independent reference computations for the test suite.

Nothing here touches the jet arithmetic: metrics are evaluated as plain
floats and differentiated by nested central differences, and curvature is
assembled from its coordinate formula with explicit loops.
"""

from __future__ import annotations

import itertools

import numpy as np

from contactmetric.exprfield import evaluate
from contactmetric.riemann import MetricField

E = np.eye(3)


def metric_values(metric: MetricField, p, params=None) -> np.ndarray:
    return np.array([[evaluate(metric.g[i][j], p, params) for j in range(3)] for i in range(3)])


def fd_metric_gradient(metric: MetricField, p, params=None, h: float = 1e-5) -> np.ndarray:
    """dg[m, i, j] = d_m g_ij by central differences."""
    p = np.asarray(p, dtype=float)
    return np.array([(metric_values(metric, p + h * E[m], params) - metric_values(metric, p - h * E[m], params)) / (2 * h) for m in range(3)])


def fd_christoffel(metric: MetricField, p, params=None, h: float = 1e-5) -> np.ndarray:
    """Gamma[l, i, j] of the Levi-Civita connection."""
    g = metric_values(metric, p, params)
    ginv = np.linalg.inv(g)
    dg = fd_metric_gradient(metric, p, params, h)
    G = np.zeros((3, 3, 3))
    for l, i, j in itertools.product(range(3), repeat=3):
        G[l, i, j] = 0.5 * sum(ginv[l, m] * (dg[i, m, j] + dg[j, m, i] - dg[m, i, j]) for m in range(3))
    return G


def fd_riemann(metric: MetricField, p, params=None, h: float = 1e-3) -> np.ndarray:
    """R[i, j, k, l] = <R(d_i, d_j) d_k, d_l> with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]."""
    p = np.asarray(p, dtype=float)
    G = fd_christoffel(metric, p, params)
    dG = np.array([(fd_christoffel(metric, p + h * E[m], params) - fd_christoffel(metric, p - h * E[m], params)) / (2 * h) for m in range(3)])
    g = metric_values(metric, p, params)
    Rup = np.zeros((3, 3, 3, 3))  # Rup[i, j, k, m]: d_m component of R(d_i, d_j) d_k
    for i, j, k, m in itertools.product(range(3), repeat=4):
        s = dG[i, m, j, k] - dG[j, m, i, k]
        for q in range(3):
            s += G[m, i, q] * G[q, j, k] - G[m, j, q] * G[q, i, k]
        Rup[i, j, k, m] = s
    return np.einsum("ijkm,ml->ijkl", Rup, g)


def fd_sectional(metric: MetricField, p, u, v, params=None) -> float:
    R = fd_riemann(metric, p, params)
    g = metric_values(metric, p, params)
    u, v = np.asarray(u, float), np.asarray(v, float)
    num = np.einsum("ijkl,i,j,k,l->", R, u, v, v, u)
    return float(num / ((u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2))


def reeb_by_svd(alpha_values: np.ndarray, dalpha: np.ndarray) -> np.ndarray:
    """Kernel of the 2-form scaled so alpha(N) = 1."""
    _, _, vt = np.linalg.svd(dalpha)
    n = vt[-1]
    return n / float(alpha_values @ n)


def random_metric_rows(rng: np.random.Generator) -> list[list[str]]:
    """A random analytic metric, diagonally dominant on [-0.3, 0.3]^3."""
    coords = "xyz"

    def term(scale):
        a, b = (float(t) for t in rng.uniform(-1.5, 1.5, 2))
        i, j = (int(t) for t in rng.integers(0, 3, 2))
        kind = int(rng.integers(0, 3))
        c = float(rng.uniform(-scale, scale))
        inner = f"{a!r}*{coords[i]} + {b!r}*{coords[j]}"
        if kind == 0:
            return f"{c!r}*sin({inner})"
        if kind == 1:
            return f"{c!r}*exp({0.4 * a!r}*{coords[i]})*{coords[j]}"
        return f"{c!r}*({inner})^2"

    rows = [["0"] * 3 for _ in range(3)]
    for i in range(3):
        rows[i][i] = f"{float(rng.uniform(2.0, 3.0))!r} + {term(0.4)} + {term(0.4)}"
        for j in range(i + 1, 3):
            rows[i][j] = rows[j][i] = f"{term(0.25)} + {term(0.25)}"
    return rows
