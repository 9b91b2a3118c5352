"""
One-dimensional golden-section search and grid-then-refine optimization.
"""
import math

import numpy as np

from settings import GOLDEN_TOL

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_min(f, a, b, tol=GOLDEN_TOL):
    """
    Golden-section search for a minimum of a unimodal f on [a, b].

    Only interior points are evaluated, so f may be undefined at a and b.
    Returns (x, f(x)) for the best point evaluated.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    tol = max(tol * max(1.0, abs(a), abs(b)), np.finfo(float).eps * max(abs(a), abs(b)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    if h <= tol:
        return (c, yc) if yc <= yd else (d, yd)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    for _ in range(n):
        if yc <= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    return (c, yc) if yc <= yd else (d, yd)


def grid_then_golden(f, points, values, minimize=True, tol=GOLDEN_TOL):
    """
    Refine the best grid point of a sampled function by golden-section search
    on its two neighbouring cells.

    Parameters:
    - f: Scalar function
    - points: Sorted sample locations
    - values: f at points
    - minimize: Search for the minimum (True) or the maximum (False)

    Returns (x, f(x)); never worse than the best grid point. Ties keep the
    leftmost point, so the result is deterministic.
    """
    sign = 1.0 if minimize else -1.0
    scores = sign * np.asarray(values, dtype=float)
    k = int(np.argmin(scores))
    best_x, best_score = float(points[k]), float(scores[k])
    if len(points) < 2:
        return best_x, sign * best_score
    lo = float(points[max(k - 1, 0)])
    hi = float(points[min(k + 1, len(points) - 1)])
    x, score = golden_section_min(lambda s: sign * float(f(s)), lo, hi, tol)
    if score < best_score:
        best_x, best_score = x, score
    return best_x, sign * best_score
