"""One-dimensional maximization by coarse grid plus golden-section refinement.

Every 1-D sup/inf over the Renyi parameter in this package goes through
:func:`grid_golden_max`: a uniform grid locates the best cell, then a
golden-section pass narrows the bracket to a requested width.  The grid guards
against flat or multimodal stretches better than derivative methods, and the
refinement recovers interior optima to near machine precision.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

__all__ = ["golden_max", "grid_golden_max"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Golden-section search for a maximum of ``f`` on [a, b].

    Returns ``(x_best, f(x_best))`` among all evaluated points, which makes the
    result a certified achieved value even if the bracket assumption fails.
    """
    best_x, best_v = a, f(a)
    vb = f(b)
    if vb > best_v:
        best_x, best_v = b, vb

    dist = b - a
    if dist <= tol:
        return best_x, best_v
    n_iter = int(math.ceil(math.log(tol / dist) / math.log(_INV_PHI)))

    c = a + _INV_PHI_SQ * dist
    d = a + _INV_PHI * dist
    yc = f(c)
    yd = f(d)
    for _ in range(max(n_iter - 1, 0)):
        if yc > yd:
            b, d, yd = d, c, yc
            dist *= _INV_PHI
            c = a + _INV_PHI_SQ * dist
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            dist *= _INV_PHI
            d = a + _INV_PHI * dist
            yd = f(d)
    for x, v in ((c, yc), (d, yd)):
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def grid_golden_max(
    f_vec: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    n_grid: int = 201,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Maximize ``f_vec`` on [lo, hi]: ``n_grid`` uniform points, then golden
    refinement of the bracket around the best cell.

    ``f_vec`` must accept an ndarray of abscissae and return values; -inf marks
    undefined points.  Grid endpoints are always evaluated exactly, so boundary
    optima are returned bit-for-bit.
    """
    grid = np.linspace(lo, hi, n_grid)
    vals = np.asarray(f_vec(grid), dtype=float)
    i = int(np.argmax(vals))
    best_x, best_v = float(grid[i]), float(vals[i])
    if not math.isfinite(best_v):
        return best_x, best_v

    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, n_grid - 1)])

    def f_scalar(x: float) -> float:
        return float(f_vec(np.asarray([x]))[0])

    x_ref, v_ref = golden_max(f_scalar, a, b, tol)
    if v_ref > best_v:
        return x_ref, v_ref
    return best_x, best_v
