"""Pointwise evaluation of a (metric, one-form) pair.

:func:`local_geometry` gathers, at one chart point, everything the contact,
shape and blair modules need: the metric jet, Christoffel symbols, the
one-form with its first and second partials, the metric dual of the form and
the unit normal of its kernel together with their derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import NotContact
from .exprfield import Expr, eval_jet2, parse
from .riemann import MetricField, MetricJet, christoffel, metric_jet, riemann_tensor

CONTACT_TOL = 1e-9
FRAME_CANDIDATE_MIN = 1e-6

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0


@dataclass(frozen=True)
class OneFormField:
    """Components (alpha_x, alpha_y, alpha_z) in the basis dx, dy, dz."""

    components: tuple[Expr, Expr, Expr]

    @classmethod
    def from_strings(cls, comps: Sequence[str], params=()) -> "OneFormField":
        if len(comps) != 3:
            raise ValueError("a one-form needs three components")
        return cls(tuple(parse(c, params) for c in comps))


@dataclass(frozen=True)
class Pair:
    """A metric and a contact-form candidate on a box-shaped chart domain."""

    name: str
    metric: MetricField
    alpha: OneFormField
    params: Mapping[str, float] = field(default_factory=dict)
    domain_min: tuple[float, float, float] = (-1.0, -1.0, -1.0)
    domain_max: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def with_metric(self, metric: MetricField) -> "Pair":
        return Pair(self.name, metric, self.alpha, self.params, self.domain_min, self.domain_max)

    def with_alpha(self, alpha: OneFormField) -> "Pair":
        return Pair(self.name, self.metric, alpha, self.params, self.domain_min, self.domain_max)

    def sample(self, rng, n: int) -> list[tuple[float, float, float]]:
        lo = np.array(self.domain_min)
        hi = np.array(self.domain_max)
        return [tuple(float(c) for c in lo + (hi - lo) * np.array(rng.uniform3())) for _ in range(n)]


@dataclass(frozen=True)
class LocalGeometry:
    """All first-order data of a pair at one point.

    Array conventions: ``Dalpha[i, j] = d_i alpha_j``; ``D2alpha[m, i, j] =
    d_m d_i alpha_j``; Jacobians of vector fields are ``D[l, i] = d_i V^l``.
    """

    point: tuple[float, float, float]
    mj: MetricJet
    Gamma: np.ndarray
    Gamma_lower: np.ndarray
    alpha: np.ndarray
    Dalpha: np.ndarray
    D2alpha: np.ndarray
    sharp: np.ndarray  # metric dual of alpha
    Dsharp: np.ndarray
    normal: np.ndarray  # sharp / |sharp|, unit normal of ker alpha
    Dnormal: np.ndarray

    @property
    def dalpha(self) -> np.ndarray:
        """Coordinate matrix of d(alpha): ``W[i, j] = d_i alpha_j - d_j alpha_i``."""
        return self.Dalpha - self.Dalpha.T

    def inner(self, u, v) -> float:
        return self.mj.inner(u, v)

    def nabla(self, V: np.ndarray, DV: np.ndarray, U) -> np.ndarray:
        """Covariant derivative of the field with value V, Jacobian DV along U."""
        U = np.asarray(U, dtype=float)
        return DV @ U + np.einsum("lij,i,j->l", self.Gamma, U, V)

    def nabla_normal(self, U) -> np.ndarray:
        return self.nabla(self.normal, self.Dnormal, U)

    def project(self, u) -> np.ndarray:
        """Metric-orthogonal projection onto ker alpha."""
        u = np.asarray(u, dtype=float)
        return u - (self.alpha @ u) * self.normal / (self.alpha @ self.normal)

    def riemann(self) -> np.ndarray:
        return riemann_tensor(self.mj)

    def curl_alpha(self) -> tuple[np.ndarray, np.ndarray]:
        """Axial vector w of d(alpha) (``W[i, j] = eps_ijk w^k``) and its Jacobian."""
        w = np.einsum("kij,ij->k", _EPS, self.Dalpha)
        Dw = np.einsum("kij,mij->km", _EPS, self.D2alpha)
        return w, Dw

    def reeb(self) -> tuple[np.ndarray, np.ndarray]:
        """Reeb field of alpha and its Jacobian; raises NotContact."""
        w, Dw = self.curl_alpha()
        d = float(self.alpha @ w)
        if not abs(d) > CONTACT_TOL:
            raise NotContact(f"alpha ^ d(alpha) = {d:.3g} at {self.point}")
        Dd = self.Dalpha @ w + Dw.T @ self.alpha
        N = w / d
        DN = Dw / d - np.outer(w, Dd) / d**2
        return N, DN


def local_geometry(pair: Pair, p, params: Mapping[str, float] | None = None) -> LocalGeometry:
    params = pair.params if params is None else params
    p = tuple(float(c) for c in p)
    mj = metric_jet(pair.metric, p, params)
    G, Glow = christoffel(mj)
    jets = [eval_jet2(c, p, params) for c in pair.alpha.components]
    alpha = np.array([j.v for j in jets])
    Dalpha = np.array([j.g for j in jets]).T
    D2alpha = np.stack([j.hessian for j in jets], axis=-1)

    sharp = mj.g_inv @ alpha
    Dsharp = np.einsum("ilm,m->li", mj.dg_inv, alpha) + mj.g_inv @ Dalpha.T
    s = float(alpha @ sharp)
    if not s > 0.0:
        raise NotContact(f"alpha vanishes at {p}")
    ds = Dalpha @ sharp + Dsharp.T @ alpha
    rs = np.sqrt(s)
    normal = sharp / rs
    Dnormal = Dsharp / rs - 0.5 * np.outer(sharp, ds) / (s * rs)
    return LocalGeometry(p, mj, G, Glow, alpha, Dalpha, D2alpha, sharp, Dsharp, normal, Dnormal)


def xi_frame(lg: LocalGeometry) -> tuple[np.ndarray, np.ndarray, float]:
    """Deterministic orthonormal frame (e2, e3) of ker alpha and k = d(alpha)(e2, e3).

    Gram-Schmidt on the projections of d_x, d_y, d_z, keeping the first two
    that survive with norm > 1e-6.  The pair is swapped when needed so that
    k >= 0.
    """
    frame: list[np.ndarray] = []
    for c in np.eye(3):
        v = lg.project(c)
        for e in frame:
            v = v - lg.inner(v, e) * e
        n = np.sqrt(max(lg.inner(v, v), 0.0))
        if n > FRAME_CANDIDATE_MIN:
            frame.append(v / n)
        if len(frame) == 2:
            break
    e2, e3 = frame
    k = float(e2 @ lg.dalpha @ e3)
    if k < 0.0:
        e2, e3, k = e3, e2, -k
    return e2, e3, k
