"""Contact forms, Reeb fields and metric compatibility.

A metric g is compatible with the contact form alpha when the metric dual of
alpha is the Reeb field N (so N is a unit normal of xi = ker alpha) and
``k <u, J v> = d(alpha)(u, v)`` for a constant k and a complex structure J on
xi.  On a 2-plane every 2-form is a multiple of the area form, so the second
condition reduces to ``d(alpha)(e2, e3)`` being the same constant at every
point for orthonormal, consistently oriented frames (e2, e3).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import fd
from .exprfield import eval_jet2
from .errors import NotContact
from .local import CONTACT_TOL, LocalGeometry, OneFormField, Pair, local_geometry, xi_frame
from .rng import SplitMix64
from .shape import shape_data_local

COMPAT_TOL = 1e-9
J_TOL = 1e-10
PROPOSITION_TOL = 1e-8
K_SPREAD_TOL = 1e-8

# J in frame coordinates (e2, e3): J e2 = -e3, J e3 = e2, so that
# k <e2, J e3> = k = d(alpha)(e2, e3) with the frame oriented to k >= 0.
J_FRAME = np.array([[0.0, 1.0], [-1.0, 0.0]])

PREDICATES = (
    "contact",
    "reeb-dual",
    "unit-normal",
    "k-constant",
    "J-squared",
    "geodesic-reeb",
    "minimal",
)


@dataclass(frozen=True)
class TwoFormValue:
    """A 2-form at a point as an antisymmetric coordinate matrix."""

    m: np.ndarray

    def __call__(self, u, v) -> float:
        return float(np.asarray(u) @ self.m @ np.asarray(v))


@dataclass(frozen=True)
class ContactData:
    reeb: np.ndarray
    k: float
    xi_frame: tuple[np.ndarray, np.ndarray]
    J: np.ndarray = field(default_factory=lambda: J_FRAME.copy())

    def J_apply(self, u) -> np.ndarray:
        """J acting on a chart vector in xi (J N = 0)."""
        e2, e3 = self.xi_frame
        G = np.array([e2, e3]).T
        # coordinates of u in (e2, e3): least squares is exact for u in xi
        c, *_ = np.linalg.lstsq(G, np.asarray(u, dtype=float), rcond=None)
        return G @ (self.J @ c)


def exterior_derivative(alpha: OneFormField, p, params: Mapping[str, float] | None = None) -> TwoFormValue:
    D = np.array([eval_jet2(c, p, params).g for c in alpha.components]).T
    return TwoFormValue(D - D.T)


def _density(alpha: OneFormField, p, params) -> float:
    jets = [eval_jet2(c, p, params) for c in alpha.components]
    a = np.array([j.v for j in jets])
    D = np.array([j.g for j in jets]).T
    w = np.array([D[1, 2] - D[2, 1], D[2, 0] - D[0, 2], D[0, 1] - D[1, 0]])
    return float(a @ w)


def is_contact(alpha: OneFormField, points: Iterable, params=None) -> list[tuple[float, bool]]:
    """``alpha ^ d(alpha)`` as a multiple of dx^dy^dz, and whether it is nonzero, per point."""
    out = []
    for p in points:
        d = _density(alpha, p, params)
        out.append((d, abs(d) > CONTACT_TOL))
    if not out:
        raise ValueError("at least one sample point is required")
    return out


def reeb_field(alpha: OneFormField, p, params=None) -> np.ndarray:
    """Unique N with alpha(N) = 1 and d(alpha)(N, .) = 0.

    The kernel of the rank-2 matrix of d(alpha) is spanned by its axial
    vector w, so N = w / alpha(w); alpha(w) is the contact density.
    """
    D = exterior_derivative(alpha, p, params).m
    w = np.array([D[1, 2], D[2, 0], D[0, 1]])
    a = np.array([eval_jet2(c, p, params).v for c in alpha.components])
    d = float(a @ w)
    if not abs(d) > CONTACT_TOL:
        raise NotContact(f"alpha ^ d(alpha) = {d:.3g} at {tuple(p)}: Reeb system has rank < 3")
    return w / d


def contact_data(lg: LocalGeometry) -> ContactData:
    N, _ = lg.reeb()
    e2, e3, k = xi_frame(lg)
    return ContactData(N, k, (e2, e3))


def pointwise_errors(lg: LocalGeometry) -> dict[str, float]:
    """Deviation of the two pointwise compatibility conditions."""
    N, _ = lg.reeb()
    return {
        "reeb-dual": float(np.max(np.abs(lg.sharp - N))),
        "unit-normal": abs(float(np.sqrt(lg.inner(lg.sharp, lg.sharp))) - 1.0),
    }


def is_pointwise_compatible(lg: LocalGeometry, tol: float = COMPAT_TOL) -> bool:
    try:
        errs = pointwise_errors(lg)
    except NotContact:
        return False
    return all(v < tol for v in errs.values())


@dataclass
class PointCompat:
    point: tuple[float, float, float]
    contact_density: float | None = None
    reeb: list[float] | None = None
    alpha_sharp: list[float] | None = None
    reeb_dual_error: float | None = None
    unit_normal_error: float | None = None
    k: float | None = None
    xi_frame: list[list[float]] | None = None
    J: list[list[float]] | None = None
    J_squared_error: float | None = None
    dalpha_J_error: float | None = None
    geodesic_error: float | None = None
    mean_curvature: float | None = None
    error: str | None = None


@dataclass
class CompatReport:
    points: list[PointCompat]
    k: float | None
    k_spread: float | None
    predicates: dict[str, bool]

    @property
    def is_compatible(self) -> bool:
        return all(self.predicates.values())

    @property
    def failed_predicates(self) -> list[str]:
        return [name for name in PREDICATES if not self.predicates[name]]


def _check_point(pair: Pair, p, rng_vectors) -> PointCompat:
    rec = PointCompat(point=tuple(float(c) for c in p))
    lg = local_geometry(pair, p)
    w, _ = lg.curl_alpha()
    rec.contact_density = float(lg.alpha @ w)
    N, DN = lg.reeb()
    rec.reeb = N.tolist()
    rec.alpha_sharp = lg.sharp.tolist()
    errs = pointwise_errors(lg)
    rec.reeb_dual_error = errs["reeb-dual"]
    rec.unit_normal_error = errs["unit-normal"]
    cd = contact_data(lg)
    e2, e3 = cd.xi_frame
    rec.k = cd.k
    rec.xi_frame = [e2.tolist(), e3.tolist()]
    rec.J = cd.J.tolist()
    rec.J_squared_error = float(np.max(np.abs(cd.J @ cd.J + np.eye(2))))
    # k <u, J v> = d(alpha)(u, v) on random vectors of xi
    W = lg.dalpha
    worst = 0.0
    for a, b in rng_vectors:
        u = a[0] * e2 + a[1] * e3
        v = b[0] * e2 + b[1] * e3
        worst = max(worst, abs(cd.k * lg.inner(u, cd.J_apply(v)) - float(u @ W @ v)))
    rec.dalpha_J_error = worst
    rec.geodesic_error = float(np.max(np.abs(lg.nabla(N, DN, N))))
    rec.mean_curvature = shape_data_local(lg).H
    return rec


def compatibility_check(pair: Pair, points: Sequence, rng=None, n_vectors: int = 20) -> CompatReport:
    """Check every compatibility condition at the sample points.

    Also checks the consequences that must hold for a compatible metric: the
    Reeb field is geodesic and ker alpha is minimal (H = 0).
    """
    rng = rng or SplitMix64(0)
    records = []
    for p in points:
        vecs = []
        for _ in range(n_vectors):
            a = rng.symmetric3()[:2]
            b = rng.symmetric3()[:2]
            vecs.append((a, b))
        try:
            records.append(_check_point(pair, p, vecs))
        except NotContact as exc:
            records.append(PointCompat(point=tuple(float(c) for c in p), error=f"NotContact: {exc}"))

    ok = [r for r in records if r.error is None]
    preds = {name: False for name in PREDICATES}
    k_val = k_spread = None
    preds["contact"] = len(ok) == len(records)
    if ok:
        ks = np.array([r.k for r in ok])
        k_val = float(np.mean(ks))
        k_spread = float(ks.max() - ks.min())
        preds["reeb-dual"] = all(r.reeb_dual_error < COMPAT_TOL for r in ok)
        preds["unit-normal"] = all(r.unit_normal_error < COMPAT_TOL for r in ok)
        preds["k-constant"] = k_spread < K_SPREAD_TOL * max(1.0, abs(k_val))
        preds["J-squared"] = all(r.J_squared_error < J_TOL and r.dalpha_J_error < COMPAT_TOL for r in ok)
        preds["geodesic-reeb"] = all(r.geodesic_error < PROPOSITION_TOL for r in ok)
        preds["minimal"] = all(abs(r.mean_curvature) < PROPOSITION_TOL for r in ok)
    return CompatReport(records, k_val, k_spread, preds)


def _frame_field(pair: Pair, ref2, ref3, flip_e3: bool = False):
    def at(q):
        e2, e3, _ = xi_frame(local_geometry(pair, q))
        if flip_e3:
            e3 = -e3
        return np.concatenate([fd.align(e2, ref2), fd.align(e3, ref3)])

    return at


def bracket_normal_component(pair: Pair, p, flip_e3: bool = False) -> float:
    """``<[e2, e3], N>`` for the xi-frame field; equals +-k on compatible pairs."""
    lg = local_geometry(pair, p)
    e2, e3, _ = xi_frame(lg)
    if flip_e3:
        e3 = -e3
    field_at = _frame_field(pair, e2, e3, flip_e3)
    d_e2 = fd.directional(field_at, p, e2)  # derivative of (e2, e3) along e2
    d_e3 = fd.directional(field_at, p, e3)
    # torsion-free: [u, v] = D_u v - D_v u in coordinates
    bracket = d_e2[3:] - d_e3[:3]
    N, _ = lg.reeb()
    return lg.inner(bracket, N)
