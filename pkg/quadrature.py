"""
Adaptive Gauss-Kronrod quadrature used as the integration oracle.

Each cell is integrated with the 7-point Gauss rule and its 15-point Kronrod
extension; |K15 - G7| is the cell's error estimate. The cell with the largest
estimate is bisected until the summed estimate meets
max(rel_tol * |value|, QUAD_ABS_FLOOR) or the cell cap is reached.
"""
import heapq
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from errors import QuadratureError
from expr import FunctionSpec, evaluate
from settings import QUAD_ABS_FLOOR, QUAD_MAX_CELLS, QUAD_REL_TOL

logger = logging.getLogger(__name__)

# Kronrod nodes on [-1, 1] (nonnegative half) and weights; odd entries are the Gauss nodes
KRONROD_NODES = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
KRONROD_WEIGHTS = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
GAUSS_WEIGHTS = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-point abscissae and weights, symmetric about 0
_NODES = np.concatenate([-KRONROD_NODES[:-1], KRONROD_NODES[::-1]])
_K_WEIGHTS = np.concatenate([KRONROD_WEIGHTS[:-1], KRONROD_WEIGHTS[::-1]])
_G_WEIGHTS = np.zeros(15)
_G_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([GAUSS_WEIGHTS, GAUSS_WEIGHTS[-2::-1]])

# Sampling density used to locate sign changes of g(x) - g(t)
SIGN_SCAN_POINTS = 256


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    subdivisions: int


def _as_integrand(f):
    if isinstance(f, FunctionSpec):
        return lambda t: evaluate(f, t)
    return f


def _cell(func, left, right):
    half = 0.5 * (right - left)
    center = 0.5 * (left + right)
    values = np.asarray(func(center + half * _NODES), dtype=float)
    kronrod = half * float(values @ _K_WEIGHTS)
    gauss = half * float(values @ _G_WEIGHTS)
    return kronrod, abs(kronrod - gauss)


def integrate(f, a, b, rel_tol=QUAD_REL_TOL, breakpoints=(), max_cells=QUAD_MAX_CELLS):
    """
    Integrate f over [a, b].

    Parameters:
    - f: FunctionSpec or a numpy-vectorized callable
    - a, b: Limits with a <= b (a == b gives 0)
    - rel_tol: Relative tolerance
    - breakpoints: Kink points inside (a, b) seeded as cell boundaries
    - max_cells: Subdivision cap

    Returns a QuadResult. Raises QuadratureError when the cap is hit and
    DomainViolation if f cannot be evaluated inside [a, b].
    """
    if b < a:
        raise ValueError(f"integration needs a <= b, got [{a!r}, {b!r}]")
    if a == b:
        return QuadResult(0.0, 0.0, 0)

    func = _as_integrand(f)
    edges = sorted({a, b, *(float(p) for p in breakpoints if a < p < b)})

    # max-heap on error estimate; the counter keeps ordering deterministic
    heap = []
    total = 0.0
    total_err = 0.0
    for counter, (left, right) in enumerate(zip(edges[:-1], edges[1:])):
        value, err = _cell(func, left, right)
        heapq.heappush(heap, (-err, counter, left, right, value))
        total += value
        total_err += err
    counter = len(heap)

    while total_err > max(rel_tol * abs(total), QUAD_ABS_FLOOR):
        if len(heap) >= max_cells:
            worst = heap[0]
            raise QuadratureError(
                f"no convergence after {len(heap)} cells (error estimate {total_err:.3g})",
                worst_cell=(worst[2], worst[3]),
            )
        neg_err, _, left, right, value = heapq.heappop(heap)
        middle = 0.5 * (left + right)
        if not left < middle < right:
            # cell at floating-point resolution; keep it as is
            heapq.heappush(heap, (0.0, counter, left, right, value))
            counter += 1
            total_err += neg_err
            continue
        left_value, left_err = _cell(func, left, middle)
        right_value, right_err = _cell(func, middle, right)
        heapq.heappush(heap, (-left_err, counter, left, middle, left_value))
        heapq.heappush(heap, (-right_err, counter + 1, middle, right, right_value))
        counter += 2
        total += left_value + right_value - value
        total_err += left_err + right_err + neg_err

    # resum to shed the drift of the running total
    total = float(sum(sorted((item[4] for item in heap), key=abs)))
    total_err = float(sum(-item[0] for item in heap))
    logger.debug("integrated over [%r, %r] with %d cells, err %.3g", a, b, len(heap), total_err)
    return QuadResult(total, total_err, len(heap))


def sign_changes(h, a, b, points=SIGN_SCAN_POINTS):
    """
    Locate the zeros of h in (a, b) where h changes sign.

    Samples h on a uniform grid and refines each bracket by bisection.
    Returns a sorted list of roots.
    """
    if not a < b:
        return []
    grid = np.linspace(a, b, points + 1)
    values = np.asarray(h(grid), dtype=float)
    roots = []
    for k in range(points):
        left_value, right_value = values[k], values[k + 1]
        if left_value == 0.0 and 0 < k:
            roots.append(float(grid[k]))
        elif left_value * right_value < 0:
            root = bisect(lambda s: float(h(np.asarray(s))), grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
            roots.append(float(root))
    return roots


def integrate_abs_diff(g, x, a, b, rel_tol=QUAD_REL_TOL, weight=None):
    """
    Integrate |g(x) - g(t)| dt over [a, b], optionally against a weight w(t).

    The integrand is C0 but not C1 at t = x and wherever g(t) crosses g(x), so
    the integral is split at x and at every sign change found by bisection;
    on each piece the sign is fixed and the smooth integrand is integrated.

    Parameters:
    - g: FunctionSpec of the comparison function
    - x: Point in [a, b]
    - a, b: Interval
    - rel_tol: Relative tolerance per piece
    - weight: Optional numpy-vectorized weight w(t) >= 0; its breakpoints
      attribute, when present, seeds the cells

    Returns a QuadResult summed over the pieces.
    """
    if not a <= x <= b:
        raise ValueError(f"x = {x!r} must lie in [{a!r}, {b!r}]")
    gx = evaluate(g, x)

    def difference(t):
        return gx - evaluate(g, t)

    edges = sorted({a, b, x, *sign_changes(difference, a, x), *sign_changes(difference, x, b)})
    kinks = getattr(weight, "breakpoints", ())
    value = 0.0
    err = 0.0
    cells = 0
    for left, right in zip(edges[:-1], edges[1:]):
        middle = 0.5 * (left + right)
        sign = 1.0 if difference(middle) >= 0 else -1.0
        if weight is None:
            piece = integrate(lambda t, s=sign: s * difference(t), left, right, rel_tol)
        else:
            piece = integrate(
                lambda t, s=sign: s * difference(t) * weight(t), left, right, rel_tol, breakpoints=kinks)
        value += piece.value
        err += piece.err_estimate
        cells += piece.subdivisions
    return QuadResult(value, err, cells)
