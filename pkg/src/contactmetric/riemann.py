"""Levi-Civita connection and curvature of a metric on a 3-d chart.

Sign convention (used everywhere in the package)::

    R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z

so that ``<R(u, v)v, u>`` is the sectional curvature of span(u, v) for
orthonormal u, v.  The lowered tensor returned by :func:`riemann_tensor` is
``R[i, j, k, l] = <R(d_i, d_j) d_k, d_l>``.

All derivatives of the metric come from second-order jets; the derivative of
the Christoffel symbols is assembled analytically from (g, dg, d2g, g^-1,
d g^-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import DegeneratePlane, FrameNotOrthonormal, NotPositiveDefinite
from .exprfield import Expr, Jet2, eval_jet2, parse

PD_THRESHOLD = 1e-12
ORTHONORMAL_TOL = 1e-9


@dataclass(frozen=True)
class MetricField:
    """Symmetric 3x3 array of expressions g_ij in chart order (x, y, z)."""

    g: tuple[tuple[Expr, ...], ...]

    def __post_init__(self):
        if len(self.g) != 3 or any(len(row) != 3 for row in self.g):
            raise ValueError("metric must be 3x3")
        for i in range(3):
            for j in range(i):
                if self.g[i][j] != self.g[j][i]:
                    raise ValueError(f"metric entry ({i},{j}) differs from ({j},{i})")

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str | None]], params=()) -> "MetricField":
        """Build from source strings; ``None`` below the diagonal mirrors (j, i)."""
        g = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                src = rows[i][j]
                if src is None:
                    src = rows[j][i]
                if src is None:
                    raise ValueError(f"metric entry ({i},{j}) and its mirror are both missing")
                g[i][j] = parse(src, params)
        return cls(tuple(tuple(r) for r in g))

    @classmethod
    def diagonal(cls, entries: Sequence[str], params=()) -> "MetricField":
        rows = [["0"] * 3 for _ in range(3)]
        for i, e in enumerate(entries):
            rows[i][i] = e
        return cls.from_strings(rows, params)


@dataclass(frozen=True)
class MetricJet:
    """Metric and its first two derivatives at a point.

    ``dg[m, i, j] = d_m g_ij`` and ``d2g[m, n, i, j] = d_m d_n g_ij``;
    ``dg_inv[m]`` is the derivative of the inverse metric along d_m.
    """

    point: tuple[float, float, float]
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    dg_inv: np.ndarray

    def inner(self, u, v) -> float:
        return float(np.asarray(u) @ self.g @ np.asarray(v))

    def norm(self, u) -> float:
        return float(np.sqrt(self.inner(u, u)))


def _inverse3(g: np.ndarray) -> tuple[np.ndarray, float]:
    # rows of the adjugate are cross products of the columns
    c0, c1, c2 = g[:, 0], g[:, 1], g[:, 2]
    adj = np.array([np.cross(c1, c2), np.cross(c2, c0), np.cross(c0, c1)])
    det = float(c0 @ adj[0])
    return adj / det, det


def check_positive_definite(g: np.ndarray, point=None) -> None:
    m1 = g[0, 0]
    m2 = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    m3 = np.linalg.det(g)
    for order, minor in enumerate((m1, m2, m3), start=1):
        if not minor > PD_THRESHOLD:
            raise NotPositiveDefinite(
                f"leading principal minor {order} = {minor:.6g} at {point}"
            )


def metric_jet(metric: MetricField, p, params: Mapping[str, float] | None = None) -> MetricJet:
    p = tuple(float(c) for c in p)
    g = np.empty((3, 3))
    dg = np.empty((3, 3, 3))
    d2g = np.empty((3, 3, 3, 3))
    for i in range(3):
        for j in range(i, 3):
            jet = eval_jet2(metric.g[i][j], p, params)
            g[i, j] = g[j, i] = jet.v
            dg[:, i, j] = dg[:, j, i] = jet.g
            H = jet.hessian
            d2g[:, :, i, j] = d2g[:, :, j, i] = H
    check_positive_definite(g, p)
    g_inv, _ = _inverse3(g)
    dg_inv = -np.einsum("ab,mbc,cd->mad", g_inv, dg, g_inv)
    return MetricJet(p, g, g_inv, dg, d2g, dg_inv)


def christoffel(mj: MetricJet) -> tuple[np.ndarray, np.ndarray]:
    """Christoffel symbols ``(Gamma[l, i, j], Gamma_lower[i, j, m])``.

    ``Gamma_lower[i, j, m] = 1/2 (d_i g_jm + d_j g_im - d_m g_ij)`` and
    ``Gamma[l, i, j] = g^lm Gamma_lower[i, j, m]``.
    """
    dg = mj.dg
    low = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    return np.einsum("lm,ijm->lij", mj.g_inv, low), low


def christoffel_derivative(mj: MetricJet) -> np.ndarray:
    """``dGamma[m, l, i, j] = d_m Gamma^l_ij``, assembled without differencing."""
    d2 = mj.d2g  # d2[m, a, i, j] = d_m d_a g_ij
    dlow = 0.5 * (d2 + d2.transpose(0, 2, 1, 3) - d2.transpose(0, 2, 3, 1))
    _, low = christoffel(mj)
    return np.einsum("mln,ijn->mlij", mj.dg_inv, low) + np.einsum(
        "ln,mijn->mlij", mj.g_inv, dlow
    )


def riemann_tensor(mj: MetricJet) -> np.ndarray:
    """Fully lowered ``R[i, j, k, l] = <R(d_i, d_j) d_k, d_l>``."""
    G, _ = christoffel(mj)
    dG = christoffel_derivative(mj)
    # R^l_{k i j} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    up = (
        np.einsum("iljk->ijkl", dG)
        - np.einsum("jlik->ijkl", dG)
        + np.einsum("lim,mjk->ijkl", G, G)
        - np.einsum("ljm,mik->ijkl", G, G)
    )
    return np.einsum("ijkm,ml->ijkl", up, mj.g)


def _curvature_form(R: np.ndarray, a, b, c, d) -> float:
    return float(np.einsum("ijkl,i,j,k,l->", R, a, b, c, d))


def sectional_curvature(mj: MetricJet, u, v, R: np.ndarray | None = None) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    gram = mj.inner(u, u) * mj.inner(v, v) - mj.inner(u, v) ** 2
    if not gram > 1e-12:
        raise DegeneratePlane(f"Gram determinant {gram:.3g} of the plane is not positive")
    if R is None:
        R = riemann_tensor(mj)
    return _curvature_form(R, u, v, v, u) / gram


class Ordering(str, Enum):
    """Bivector basis order for a frame (f0, f1, f2).

    LEMMA is (f0^f1, f0^f2, f1^f2) for the frame (X, Y, N); SECTION4 is
    (e1^e2, e1^e3, e2^e3) for the frame (e1, e2, e3).  Both pick the same
    index pairs; the tag records which frame convention was used.
    """

    LEMMA = "LEMMA"
    SECTION4 = "SECTION4"


BIVECTOR_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class CurvatureMatrix:
    m: np.ndarray
    ordering: Ordering
    frame: tuple[np.ndarray, np.ndarray, np.ndarray]

    def to_dict(self) -> dict:
        return {
            "ordering": self.ordering.value,
            "matrix": self.m.tolist(),
            "frame": [np.asarray(f).tolist() for f in self.frame],
        }


def check_orthonormal(mj: MetricJet, frame, tol: float = ORTHONORMAL_TOL) -> None:
    F = np.array(frame, dtype=float)
    gram = F @ mj.g @ F.T
    err = np.max(np.abs(gram - np.eye(3)))
    if err > tol:
        raise FrameNotOrthonormal(f"frame Gram matrix deviates from identity by {err:.3g}")


def curvature_matrix(
    mj: MetricJet,
    frame,
    ordering: Ordering = Ordering.LEMMA,
    R: np.ndarray | None = None,
) -> CurvatureMatrix:
    """Matrix ``M[a, b] = <R(u_a, v_a) v_b, u_b>`` on the bivectors u_a ^ v_a."""
    check_orthonormal(mj, frame)
    if R is None:
        R = riemann_tensor(mj)
    F = [np.asarray(f, dtype=float) for f in frame]
    M = np.empty((3, 3))
    for a, (ia, ja) in enumerate(BIVECTOR_PAIRS):
        for b, (ib, jb) in enumerate(BIVECTOR_PAIRS):
            M[a, b] = _curvature_form(R, F[ia], F[ja], F[jb], F[ib])
    return CurvatureMatrix(M, Ordering(ordering), tuple(F))


def vector_jets(field: Sequence[Expr], p, params=None) -> tuple[np.ndarray, np.ndarray]:
    """Value and Jacobian ``D[l, i] = d_i Y^l`` of a vector field."""
    jets: list[Jet2] = [eval_jet2(c, p, params) for c in field]
    return np.array([j.v for j in jets]), np.array([j.g for j in jets])


def covariant_derivative(mj: MetricJet, X: Sequence[Expr], Y: Sequence[Expr], p=None, params=None) -> np.ndarray:
    """``(nabla_X Y)^l = X^i d_i Y^l + Gamma^l_ij X^i Y^j`` at the jet's point."""
    p = mj.point if p is None else p
    Xv, _ = vector_jets(X, p, params)
    Yv, DY = vector_jets(Y, p, params)
    return covariant_derivative_values(mj, Xv, Yv, DY)


def covariant_derivative_values(mj: MetricJet, Xv, Yv, DY, G: np.ndarray | None = None) -> np.ndarray:
    """Same as :func:`covariant_derivative` from raw values and Jacobian."""
    if G is None:
        G, _ = christoffel(mj)
    return DY @ Xv + np.einsum("lij,i,j->l", G, Xv, Yv)
