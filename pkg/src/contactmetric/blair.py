"""Curvature of a compatible metric in the principal frame (X, Y, N).

For a contact metric 3-manifold the curvature matrix on the bivectors
(X^Y, X^N, Y^N) is a function of a handful of extrinsic scalars: the
principal curvature lam of X, the contact constant k, derivatives of lam,
three connection coefficients and the Webster curvature.  This module
assembles that matrix, extracts the scalars from a concrete pair, and
compares the result with the curvature computed directly from the metric.

Two signs differ from the commonly printed form of the matrix, and direct
curvature decides both.  The (3, 3) entry is ``k^2/4 - lam^2 - N(lam)``; with
``+N(lam)`` the two Reeb-plane entries would always coincide.  The (1, 2)
entry ``<R(X, Y) N, X>`` is ``+Y(lam) - 2 lam <nabla_X X, Y>``, the X <-> Y,
lam -> -lam image of the (1, 3) entry.  Both choices are only visible where
N(lam) or Y(lam) is nonzero; the residual report carries the alternative
values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fd
from .contact import is_pointwise_compatible
from .errors import InvalidParams, NotCompatible, ZeroK
from .local import LocalGeometry, Pair, local_geometry, xi_frame
from .riemann import CurvatureMatrix, Ordering, curvature_matrix, sectional_curvature
from .shape import PrincipalFrame, principal_field, principal_frame, principal_frame_local, shape_data, shape_data_local

DEFAULT_TOL = 1e-5
N_LAMBDA_FLAG = 1e-8


@dataclass(frozen=True)
class LemmaScalars:
    lam: float
    k: float
    X_lambda: float
    Y_lambda: float
    N_lambda: float
    cXXY: float
    cYYX: float
    cNXY: float
    webster_K: float
    # Webster curvature from its commutator formula (finite-difference limited)
    webster_K_formula: float | None = None
    frame: tuple[np.ndarray, np.ndarray, np.ndarray] | None = field(default=None, compare=False)


def lemma_matrix(s: LemmaScalars) -> CurvatureMatrix:
    lam2 = s.lam * s.lam
    k2 = s.k * s.k
    m12 = s.Y_lambda - 2.0 * s.lam * s.cXXY
    m13 = s.X_lambda - 2.0 * s.lam * s.cYYX
    m23 = 2.0 * s.lam * s.cNXY
    M = np.array(
        [
            [-0.75 * k2 + lam2 + s.webster_K, m12, m13],
            [m12, 0.25 * k2 - lam2 + s.N_lambda, m23],
            [m13, m23, 0.25 * k2 - lam2 - s.N_lambda],
        ]
    )
    frame = s.frame if s.frame is not None else (np.full(3, np.nan),) * 3
    return CurvatureMatrix(M, Ordering.LEMMA, frame)


def _require_compatible(lg: LocalGeometry) -> None:
    if not is_pointwise_compatible(lg):
        raise NotCompatible(f"metric is not compatible with alpha at {lg.point}")


def _aligned_frame(pair: Pair, q, ref: PrincipalFrame) -> PrincipalFrame:
    pf = principal_frame(pair, q)
    return PrincipalFrame(pf.lam, fd.align(pf.X, ref.X), fd.align(pf.Y, ref.Y), pf.N, pf.k)


def _frame_derivatives(pair: Pair, p, pf: PrincipalFrame, lg: LocalGeometry) -> dict:
    """Covariant derivatives of the principal frame fields at p."""
    field_at = principal_field(pair, pf)
    G = lg.Gamma

    def nabla(U, V, dV):
        return dV + np.einsum("lij,i,j->l", G, U, V)

    out = {}
    for name, U in (("X", pf.X), ("Y", pf.Y), ("N", pf.N)):
        d = fd.directional(field_at, p, U)
        out[name + "X"] = nabla(U, pf.X, d[:3])
        out[name + "Y"] = nabla(U, pf.Y, d[3:])
    return out


def _connection_scalars(pair: Pair, q, ref: PrincipalFrame) -> np.ndarray:
    lg = local_geometry(pair, q)
    pf = _aligned_frame(pair, q, ref)
    nab = _frame_derivatives(pair, q, pf, lg)
    return np.array(
        [
            lg.inner(nab["XX"], pf.Y),
            lg.inner(nab["YY"], pf.X),
            lg.inner(nab["NX"], pf.Y),
        ]
    )


def extract_lemma_scalars(pair: Pair, p, webster_formula: bool = True) -> LemmaScalars:
    """Extrinsic scalars of the principal frame at ``p``.

    Directional derivatives use tracked-frame finite differences.  The
    Webster curvature is solved from the (1, 1) entry of the direct curvature
    matrix; when ``webster_formula`` is set it is also evaluated from its
    commutator formula as a cross-check.
    """
    lg = local_geometry(pair, p)
    pf = principal_frame_local(lg)
    _require_compatible(lg)

    def lam_at(q):
        return shape_data(pair, q).lam

    X_lam = fd.directional(lam_at, p, pf.X)
    Y_lam = fd.directional(lam_at, p, pf.Y)
    N_lam = fd.directional(lam_at, p, pf.N)
    nab = _frame_derivatives(pair, p, pf, lg)
    cXXY = lg.inner(nab["XX"], pf.Y)
    cYYX = lg.inner(nab["YY"], pf.X)
    cNXY = lg.inner(nab["NX"], pf.Y)

    direct = curvature_matrix(lg.mj, (pf.X, pf.Y, pf.N), Ordering.LEMMA)
    k2 = pf.k * pf.k
    webster = float(direct.m[0, 0]) + 0.75 * k2 - pf.lam**2

    formula = None
    if webster_formula:
        X_cYYX = fd.directional(lambda q: _connection_scalars(pair, q, pf)[1], p, pf.X)
        Y_cXXY = fd.directional(lambda q: _connection_scalars(pair, q, pf)[0], p, pf.Y)
        bracket_XY = nab["XY"] - nab["YX"]
        bracket_NY = nab["NY"] - lg.nabla_normal(pf.Y)
        formula = (
            X_cYYX
            + Y_cXXY
            - cYYX**2
            - cXXY**2
            - lg.inner(bracket_XY, pf.N) * lg.inner(bracket_NY, pf.X)
        )
    return LemmaScalars(
        pf.lam, pf.k, X_lam, Y_lam, N_lam, cXXY, cYYX, cNXY, webster, formula, (pf.X, pf.Y, pf.N)
    )


@dataclass
class LemmaResidual:
    point: tuple[float, float, float]
    direct: np.ndarray
    lemma: np.ndarray
    residual: np.ndarray
    max_residual: float
    passed: bool
    scalars: LemmaScalars
    webster_residual: float | None
    # deviation of the direct entries from the sign variants -Y(lam) in (1, 2)
    # and +N(lam) in (3, 3)
    display_sign_m12_residual: float
    display_sign_m33_residual: float
    flags: list[str]

    def to_dict(self) -> dict:
        s = self.scalars
        return {
            "point": list(self.point),
            "direct": self.direct.tolist(),
            "lemma": self.lemma.tolist(),
            "max_residual": self.max_residual,
            "passed": self.passed,
            "lambda": s.lam,
            "k": s.k,
            "X_lambda": s.X_lambda,
            "Y_lambda": s.Y_lambda,
            "N_lambda": s.N_lambda,
            "cXXY": s.cXXY,
            "cYYX": s.cYYX,
            "cNXY": s.cNXY,
            "webster_K": s.webster_K,
            "webster_K_formula": s.webster_K_formula,
            "webster_residual": self.webster_residual,
            "display_sign_m12_residual": self.display_sign_m12_residual,
            "display_sign_m33_residual": self.display_sign_m33_residual,
            "flags": self.flags,
        }


def lemma_consistency_check(pair: Pair, p, tol: float = DEFAULT_TOL, webster_formula: bool = True) -> LemmaResidual:
    """Compare the assembled matrix with direct curvature in the principal frame."""
    s = extract_lemma_scalars(pair, p, webster_formula)
    lg = local_geometry(pair, p)
    direct = curvature_matrix(lg.mj, s.frame, Ordering.LEMMA).m
    lemma = lemma_matrix(s).m
    res = np.abs(direct - lemma)
    alt_m12 = -s.Y_lambda - 2.0 * s.lam * s.cXXY
    alt_m33 = 0.25 * s.k**2 - s.lam**2 + s.N_lambda
    flags = []
    if abs(s.N_lambda) > N_LAMBDA_FLAG:
        flags.append("N(lambda) != 0: (3,3) entry uses -N(lambda); the +N(lambda) variant is reported")
    if abs(s.Y_lambda) > N_LAMBDA_FLAG:
        flags.append("Y(lambda) != 0: (1,2) entry uses +Y(lambda); the -Y(lambda) variant is reported")
    web_res = None if s.webster_K_formula is None else abs(s.webster_K - s.webster_K_formula)
    mx = float(res.max())
    return LemmaResidual(
        tuple(float(c) for c in p),
        direct,
        lemma,
        res,
        mx,
        mx < tol,
        s,
        web_res,
        abs(direct[0, 1] - alt_m12),
        abs(direct[2, 2] - alt_m33),
        flags,
    )


def ric_reeb_identity(pair: Pair, p) -> tuple[float, float, float]:
    """``K(X, N) + K(Y, N)`` against ``k^2/2 - 2 lam^2``.

    The left side is Ric(N, N), so any orthonormal frame of xi gives the
    same value; the deterministic xi-frame is used.
    """
    lg = local_geometry(pair, p)
    _require_compatible(lg)
    e2, e3, k = xi_frame(lg)
    N = lg.normal
    R = lg.riemann()
    lhs = sectional_curvature(lg.mj, e2, N, R) + sectional_curvature(lg.mj, e3, N, R)
    lam = shape_data_local(lg).lam
    rhs = 0.5 * k * k - 2.0 * lam * lam
    return lhs, rhs, abs(lhs - rhs)


def umbilic_obstruction(k: float) -> float:
    """Ric(N, N) forced at an umbilic point: ``k^2 / 2 > 0``."""
    if k == 0:
        raise ZeroK("k = 0: not a contact metric structure")
    return 0.5 * k * k


def space_form_constraints(k: float) -> dict[str, float]:
    """Principal curvature and sectional curvature forced on a space form.

    With all off-diagonal entries zero the Webster curvature is k^2/2, and
    equal diagonal entries give ``-3k^2/4 + k^2/2 + lam^2 = k^2/4 - lam^2``,
    i.e. ``lam^2 = k^2/4``.  The common sectional curvature is then
    ``k^2/4 - lam^2 = 0``: the only compatible space form is flat.
    """
    if not k > 0:
        raise InvalidParams(f"k must be positive, got {k!r}")
    kk = Fraction(k) ** 2
    webster = kk / 2
    # -3kk/4 + webster + L = kk/4 - L  with L = lam^2
    lam2 = (kk / 4 + Fraction(3, 4) * kk - webster) / 2
    lam = Fraction(k) / 2
    assert lam * lam == lam2
    sectional = kk / 4 - lam2
    return {"lambda": float(lam), "sectional": float(sectional), "webster_K": float(webster)}
