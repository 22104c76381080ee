"""Second fundamental form and shape operator of the plane field ker alpha.

The second fundamental form is ``II(u, v) = 1/2 <nabla_u v~ + nabla_v u~, N>``
with N the unit normal of xi and u~, v~ extensions of u, v that stay inside
xi.  Extending by the projection ``u~(q) = P_q u`` onto ker alpha gives the
closed form used here::

    II(u, v) = Gamma_ij,m N^m u^i v^j - 1/2 (d_i alpha_j + d_j alpha_i) u^i v^j / |alpha|

Extending a vector that is not in xi as a constant field is wrong away from
the base point; only in-xi extensions are used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import fd
from .errors import GeometryError, UmbilicPoint
from .local import LocalGeometry, Pair, local_geometry, xi_frame

UMBILIC_TOL = 1e-6


def second_fundamental_form_chart(lg: LocalGeometry) -> np.ndarray:
    """Symmetric chart matrix S with II(u, v) = u^T S v for u, v in xi."""
    s = float(lg.alpha @ lg.sharp)
    sym = 0.5 * (lg.Dalpha + lg.Dalpha.T)
    return np.einsum("ijm,m->ij", lg.Gamma_lower, lg.normal) - sym / np.sqrt(s)


def second_fundamental_form_local(lg: LocalGeometry, frame=None) -> np.ndarray:
    if frame is None:
        e2, e3, _ = xi_frame(lg)
        frame = (e2, e3)
    F = np.array(frame)
    S = second_fundamental_form_chart(lg)
    II = F @ S @ F.T
    return 0.5 * (II + II.T)


def second_fundamental_form(pair: Pair, p, frame=None) -> np.ndarray:
    """II as a 2x2 matrix in an orthonormal frame of xi (default: :func:`xi_frame`)."""
    return second_fundamental_form_local(local_geometry(pair, p), frame)


@dataclass(frozen=True)
class ShapeData:
    second_fundamental_form: np.ndarray
    shape_operator: np.ndarray
    lam: float
    eigenvalues: tuple[float, float]
    H: float
    K_e: float
    frame: tuple[np.ndarray, np.ndarray]
    normal: np.ndarray
    k: float
    umbilic: bool
    principal_dirs: tuple[np.ndarray, np.ndarray] | None

    @property
    def half_gap(self) -> float:
        return 0.5 * (self.eigenvalues[1] - self.eigenvalues[0])


def _orient_first_positive(v: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scale = max(1.0, float(np.max(np.abs(v))))
    for comp in v:
        if abs(comp) > 1e-12 * scale:
            return (v, c) if comp > 0 else (-v, -c)
    return v, c


def shape_data_local(lg: LocalGeometry) -> ShapeData:
    e2, e3, k = xi_frame(lg)
    II = second_fundamental_form_local(lg, (e2, e3))
    # the frame is orthonormal, so the shape operator has the same matrix
    A = II.copy()
    vals, vecs = np.linalg.eigh(A)
    lam = float(vals[1])
    H = 0.5 * float(np.trace(A))
    K_e = float(np.linalg.det(A))
    umbilic = 0.5 * float(vals[1] - vals[0]) < UMBILIC_TOL
    dirs = None
    if not umbilic:
        c = vecs[:, 1]
        X = c[0] * e2 + c[1] * e3
        X, c = _orient_first_positive(X, c)
        # Y completes (X, Y) with the orientation of (e2, e3), so d(alpha)(X, Y) = k
        Y = -c[1] * e2 + c[0] * e3
        dirs = (X, Y)
    return ShapeData(II, A, lam, (float(vals[0]), lam), H, K_e, (e2, e3), lg.normal.copy(), k, umbilic, dirs)


def shape_data(pair: Pair, p) -> ShapeData:
    """Shape operator, principal curvatures and directions of xi at ``p``.

    ``lam`` is the larger eigenvalue.  X has a positive first nonzero chart
    coordinate and Y is X rotated by +pi/2 inside the oriented xi-frame.
    Points where the two eigenvalues are within 2e-6 are umbilic and carry no
    principal directions.
    """
    return shape_data_local(local_geometry(pair, p))


@dataclass(frozen=True)
class PrincipalFrame:
    lam: float
    X: np.ndarray
    Y: np.ndarray
    N: np.ndarray
    k: float


def principal_frame_local(lg: LocalGeometry) -> PrincipalFrame:
    sd = shape_data_local(lg)
    if sd.umbilic:
        raise UmbilicPoint(f"umbilic point at {lg.point} (lambda = {sd.lam:.3g})")
    X, Y = sd.principal_dirs
    return PrincipalFrame(sd.lam, X, Y, lg.normal.copy(), sd.k)


def principal_frame(pair: Pair, p) -> PrincipalFrame:
    return principal_frame_local(local_geometry(pair, p))


def principal_field(pair: Pair, ref: PrincipalFrame):
    """q -> (X, Y) at q concatenated, signs tracked to the reference frame."""

    def at(q):
        pf = principal_frame(pair, q)
        return np.concatenate([fd.align(pf.X, ref.X), fd.align(pf.Y, ref.Y)])

    return at


def principal_connection_normal(pair: Pair, p) -> tuple[float, float]:
    """``(<nabla_X Y, N>, <nabla_Y X, N>)`` for the principal frame at ``p``."""
    lg = local_geometry(pair, p)
    pf = principal_frame_local(lg)
    field = principal_field(pair, pf)
    dX = fd.directional(field, p, pf.X)
    dY = fd.directional(field, p, pf.Y)
    nabla_X_Y = dX[3:] + np.einsum("lij,i,j->l", lg.Gamma, pf.X, pf.Y)
    nabla_Y_X = dY[:3] + np.einsum("lij,i,j->l", lg.Gamma, pf.Y, pf.X)
    return lg.inner(nabla_X_Y, pf.N), lg.inner(nabla_Y_X, pf.N)


def principal_frame_bracket_check(pair: Pair, p) -> float:
    """``<nabla_X Y, N>`` on the principal frame; +-k/2 for compatible pairs."""
    return principal_connection_normal(pair, p)[0]


@dataclass
class UmbilicScan:
    umbilic_points: list[tuple[float, float, float]]
    min_lambda: float | None
    max_lambda: float | None
    grid_points: int
    skipped: list[dict]
    # one entry per grid point: point, lambda, half_gap, umbilic (None where skipped)
    records: list[dict]


def grid(lo, hi, n: int) -> list[tuple[float, float, float]]:
    axes = [np.linspace(a, b, n) if n > 1 else np.array([0.5 * (a + b)]) for a, b in zip(lo, hi)]
    return [tuple(float(c) for c in pt) for pt in itertools.product(*axes)]


def umbilic_scan(pair: Pair, lo, hi, n: int, tol: float = UMBILIC_TOL) -> UmbilicScan:
    """Evaluate lambda on an n^3 grid and list the umbilic grid points."""
    found, lams, skipped, records = [], [], [], []
    pts = grid(lo, hi, n)
    for pt in pts:
        try:
            sd = shape_data(pair, pt)
        except GeometryError as exc:
            skipped.append({"point": pt, "error": f"{type(exc).__name__}: {exc}"})
            records.append({"point": pt, "lambda": None, "half_gap": None, "umbilic": None})
            continue
        lams.append(sd.lam)
        umb = sd.half_gap < tol
        records.append({"point": pt, "lambda": sd.lam, "half_gap": sd.half_gap, "umbilic": umb})
        if umb:
            found.append(pt)
    return UmbilicScan(
        found,
        min(lams) if lams else None,
        max(lams) if lams else None,
        len(pts),
        skipped,
        records,
    )
