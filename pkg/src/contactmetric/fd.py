"""Central differences with one Richardson step, for fields without a closed form.

Principal frames are only defined up to sign, so callers that difference
vector fields align every sample to a reference vector first (see
:func:`align`).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

STEP = 1e-4


def align(v: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """``v`` with its sign flipped if it points away from ``ref``."""
    return -v if float(np.dot(v, ref)) < 0.0 else v


def directional(f: Callable, p, direction, h: float = STEP):
    """Derivative of ``f`` at ``p`` along ``direction``.

    Central differences at steps h and h/2 combined by Richardson
    extrapolation, which cancels the O(h^2) term.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(direction, dtype=float)

    def central(step):
        fp = np.asarray(f(tuple(p + step * d)), dtype=float)
        fm = np.asarray(f(tuple(p - step * d)), dtype=float)
        return (fp - fm) / (2.0 * step)

    coarse = central(h)
    fine = central(h / 2.0)
    out = (4.0 * fine - coarse) / 3.0
    return float(out) if out.ndim == 0 else out
