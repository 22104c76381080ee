"""Built-in (metric, contact form) pairs and the local-counterexample audit.

Three pairs are addressable by name:

``flat-torus``
    Euclidean metric with alpha = cos z dx + sin z dy.
``counterexample``
    g = [[A e^z, 1, 0], [1, x^2 + B e^-z, x], [0, x, 1]] with
    alpha = dz + x dy; positive definite iff AB > 1 (det g = AB - 1).
``hyperbolic``
    Half-space metric z^-2 (dx^2 + dy^2 + dz^2) with alpha = dz + x dy, a
    negative test: it is not compatible.

The counterexample's form is dz + x dy: with the metric's last row (0, x, 1)
the metric dual of dz + x dy is d/dz, while dz - x dy would not have a unit
Reeb dual.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .errors import InvalidParams
from .local import OneFormField, Pair, local_geometry
from .rng import SplitMix64
from .riemann import BIVECTOR_PAIRS, CurvatureMatrix, MetricField, Ordering, curvature_matrix, sectional_curvature

COUNTEREXAMPLE_METRIC = [
    ["A*exp(z)", "1", "0"],
    [None, "x^2 + B*exp(-z)", "x"],
    [None, None, "1"],
]
COUNTEREXAMPLE_ALPHA = ["0", "x", "1"]
# an entry of the printed matrix "matches" when it agrees to this tolerance on the whole grid
MATCH_TOL = 1e-6


@dataclass(frozen=True)
class CounterexampleParams:
    A: float = 1.0
    B: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise InvalidParams("A and B must be finite")
        if not self.A > 0:
            raise InvalidParams(f"A must be positive, got {self.A!r}")
        if not self.A * self.B > 1:
            raise InvalidParams(f"AB must exceed 1 for a positive definite metric, got {self.A * self.B!r}")

    @property
    def det(self) -> float:
        return self.A * self.B - 1.0

    @property
    def k(self) -> float:
        return 1.0 / math.sqrt(self.det)

    def as_dict(self) -> dict[str, float]:
        return {"A": float(self.A), "B": float(self.B)}


def counterexample_pair(p: CounterexampleParams | None = None) -> Pair:
    p = p or CounterexampleParams()
    params = p.as_dict()
    return Pair(
        "counterexample",
        MetricField.from_strings(COUNTEREXAMPLE_METRIC, params),
        OneFormField.from_strings(COUNTEREXAMPLE_ALPHA, params),
        params,
        (-0.4, -0.4, -0.4),
        (0.4, 0.4, 0.4),
    )


def flat_torus_pair() -> Pair:
    two_pi = 2.0 * math.pi
    return Pair(
        "flat-torus",
        MetricField.diagonal(["1", "1", "1"]),
        OneFormField.from_strings(["cos(z)", "sin(z)", "0"]),
        {},
        (0.0, 0.0, 0.0),
        (two_pi, two_pi, two_pi),
    )


def hyperbolic_pair() -> Pair:
    # z is kept above 0.1 so the metric entries stay bounded
    return Pair(
        "hyperbolic",
        MetricField.diagonal(["z^-2", "z^-2", "z^-2"]),
        OneFormField.from_strings(COUNTEREXAMPLE_ALPHA),
        {},
        (-1.0, -1.0, 0.2),
        (1.0, 1.0, 2.0),
    )


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    defaults: dict[str, float]
    build: Callable[[dict[str, float]], Pair]


def _build_counterexample(params: dict[str, float]) -> Pair:
    unknown = set(params) - {"A", "B"}
    if unknown:
        raise InvalidParams(f"unknown parameters {sorted(unknown)}")
    return counterexample_pair(CounterexampleParams(params.get("A", 1.0), params.get("B", 2.0)))


def _no_params(factory):
    def build(params: dict[str, float]) -> Pair:
        if params:
            raise InvalidParams(f"this pair takes no parameters, got {sorted(params)}")
        return factory()

    return build


GALLERY: dict[str, GalleryEntry] = {
    "flat-torus": GalleryEntry(
        "flat-torus",
        "Euclidean metric, alpha = cos z dx + sin z dy (compatible, flat)",
        {},
        _no_params(flat_torus_pair),
    ),
    "counterexample": GalleryEntry(
        "counterexample",
        "g = [[A e^z, 1, 0], [1, x^2 + B e^-z, x], [0, x, 1]], alpha = dz + x dy (compatible for AB > 1)",
        {"A": 1.0, "B": 2.0},
        _build_counterexample,
    ),
    "hyperbolic": GalleryEntry(
        "hyperbolic",
        "half-space metric z^-2 I on z > 0.1, alpha = dz + x dy (not compatible)",
        {},
        _no_params(hyperbolic_pair),
    ),
}


def gallery_pair(name: str, overrides: dict[str, float] | None = None) -> Pair:
    try:
        entry = GALLERY[name]
    except KeyError:
        raise InvalidParams(f"unknown gallery entry {name!r}; choose from {sorted(GALLERY)}") from None
    return entry.build({**entry.defaults, **(overrides or {})})


# --------------------------------------------------------------------------
# The printed frame and curvature matrix


def section4_frame(p: CounterexampleParams, pt) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(d/dz, d/dx / sqrt(a), sqrt(a/(AB-1)) (-d/dx / a + d/dy - x d/dz)), a = A e^z."""
    x, _, z = (float(c) for c in pt)
    a = p.A * math.exp(z)
    c = math.sqrt(a / p.det)
    e1 = np.array([0.0, 0.0, 1.0])
    e2 = np.array([1.0 / math.sqrt(a), 0.0, 0.0])
    e3 = c * np.array([-1.0 / a, 1.0, -x])
    return e1, e2, e3


def section4_closed_form(p: CounterexampleParams, pt) -> CurvatureMatrix:
    """The printed curvature matrix, entry by entry, tagged SECTION4."""
    x, _, z = (float(c) for c in pt)
    a = p.A * math.exp(z)
    d = p.det
    m11 = 0.25 * (p.A * p.B - 3.0 - 2.0 * x * x * a) / d
    m12 = -0.5 * x * math.sqrt(a / d)
    m13 = 0.5 * x * math.sqrt(a) / d
    M = np.array([[m11, m12, m13], [m12, -0.25, 0.0], [m13, 0.0, 0.25]])
    return CurvatureMatrix(M, Ordering.SECTION4, section4_frame(p, pt))


def bivector_orderings() -> list[tuple[tuple[int, int], ...]]:
    return list(itertools.permutations(BIVECTOR_PAIRS))


def _ordering_label(order) -> str:
    return ",".join(f"e{i + 1}^e{j + 1}" for i, j in order)


def _reordered(M: np.ndarray, order) -> np.ndarray:
    idx = [BIVECTOR_PAIRS.index(pair) for pair in order]
    return M[np.ix_(idx, idx)]


@dataclass
class VerdictReport:
    params: dict[str, float]
    radius: float
    grid: int
    seed: int
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    # wall-clock seconds; kept out of to_dict so reports stay reproducible
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "radius": self.radius,
            "grid": self.grid,
            "seed": self.seed,
            "summary": self.summary,
            "records": self.records,
        }


def ball_grid(radius: float, n: int) -> list[tuple[float, float, float]]:
    axis = np.linspace(-radius, radius, n) if n > 1 else np.array([0.0])
    pts = []
    for pt in itertools.product(axis, repeat=3):
        if math.fsum(c * c for c in pt) <= radius * radius * (1.0 + 1e-12):
            pts.append(tuple(float(c) for c in pt))
    return pts


def section4_verdict(p: CounterexampleParams, radius: float = 0.25, n: int = 9, seed: int = 42, random_planes: int = 20) -> VerdictReport:
    """Audit the negative-curvature claim on a grid in the ball of given radius.

    Nothing about the outcome is assumed: at every grid point the direct
    curvature matrix in the printed frame is compared with the printed
    matrix, and the three frame planes plus ``random_planes`` random planes
    are checked for the sign of their sectional curvature.
    """
    pair = counterexample_pair(p)
    rng = SplitMix64(seed)
    orders = bivector_orderings()
    report = VerdictReport(p.as_dict(), float(radius), int(n), int(seed))
    order_entries = {_ordering_label(o): np.zeros((3, 3)) for o in orders}
    entry_max_section4 = np.zeros((3, 3))
    offending = []
    all_neg = True
    direct_negdef = True
    printed_negdef = True
    min_k, max_k = math.inf, -math.inf
    origin = None
    t0 = time.perf_counter()
    for pt in ball_grid(radius, n):
        lg = local_geometry(pair, pt)
        R = lg.riemann()
        frame = section4_frame(p, pt)
        direct = curvature_matrix(lg.mj, frame, Ordering.SECTION4, R)
        closed = section4_closed_form(p, pt)
        diff = np.abs(direct.m - closed.m)
        entry_max_section4 = np.maximum(entry_max_section4, diff)
        for o in orders:
            lab = _ordering_label(o)
            order_entries[lab] = np.maximum(order_entries[lab], np.abs(_reordered(direct.m, o) - closed.m))
        frame_k = [float(direct.m[i, i]) for i in range(3)]
        rand_k = []
        for _ in range(random_planes):
            u = np.array(rng.symmetric3())
            v = np.array(rng.symmetric3())
            rand_k.append(sectional_curvature(lg.mj, u, v, R))
        ev_direct = np.linalg.eigvalsh(direct.m)
        ev_printed = np.linalg.eigvalsh(closed.m)
        direct_negdef &= bool(ev_direct[-1] < 0.0)
        printed_negdef &= bool(ev_printed[-1] < 0.0)
        labels = ["e1^e2", "e1^e3", "e2^e3"] + [f"random[{i}]" for i in range(random_planes)]
        for lab, val in zip(labels, frame_k + rand_k):
            if not val < 0.0:
                all_neg = False
                offending.append({"point": list(pt), "plane": lab, "sectional": val})
        allk = frame_k + rand_k
        min_k = min(min_k, min(allk))
        max_k = max(max_k, max(allk))
        rec = {
            "point": list(pt),
            "direct_matrix": direct.m.tolist(),
            "printed_matrix": closed.m.tolist(),
            "max_residual_section4": float(diff.max()),
            "frame_sectional": frame_k,
            "min_random_sectional": min(rand_k) if rand_k else None,
            "min_sectional": min(allk),
            "max_sectional": max(allk),
            "direct_eigenvalues": ev_direct.tolist(),
        }
        report.records.append(rec)
        if max(abs(c) for c in pt) == 0.0:
            origin = rec
    elapsed = time.perf_counter() - t0

    # the ordering that explains the most printed entries; ties by total mismatch
    def mismatch_count(lab):
        E = order_entries[lab]
        return int(np.sum(np.triu(E) > MATCH_TOL))

    best = min(order_entries, key=lambda lab: (mismatch_count(lab), float(np.triu(order_entries[lab]).sum()), lab))
    best_entries = order_entries[best]
    mismatched = [
        {"entry": [i + 1, j + 1], "max_abs_difference": float(best_entries[i, j])}
        for i in range(3)
        for j in range(i, 3)
        if best_entries[i, j] > MATCH_TOL
    ]
    s4 = _ordering_label(BIVECTOR_PAIRS)
    if all_neg:
        statement = (
            f"all {len(report.records) * (3 + random_planes)} sampled sectional curvatures in the "
            f"ball of radius {radius} are negative"
        )
    else:
        statement = (
            f"{len(offending)} sampled planes have nonnegative sectional curvature; "
            f"the curvature is not negative throughout the ball of radius {radius}"
        )
    report.elapsed = elapsed
    report.summary = {
        "statement": statement,
        "all_sectional_negative_everywhere": all_neg,
        "matrix_negative_definite_everywhere": direct_negdef,
        "printed_matrix_negative_definite_everywhere": printed_negdef,
        "counterexample_points": offending,
        "grid_points": len(report.records),
        "min_sectional": min_k,
        "max_sectional": max_k,
        "origin_frame_sectional": origin["frame_sectional"] if origin else None,
        "section4_ordering": s4,
        "max_residual_section4": float(entry_max_section4.max()),
        "entrywise_max_residual_section4": entry_max_section4.tolist(),
        "max_residual_by_ordering": {lab: float(E.max()) for lab, E in order_entries.items()},
        "mismatched_entries_by_ordering": {lab: mismatch_count(lab) for lab in order_entries},
        "best_matching_ordering": best,
        "best_ordering_mismatched_entries": mismatched,
        "tool_version": __version__,
        "seed": int(seed),
    }
    return report
