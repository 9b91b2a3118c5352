"""
Derivative-ratio seminorms that every bound multiplies by.

Sampled estimates take the maximum over a uniform grid of `grid` cells and
refine it by golden-section search around the best cell. They are lower
estimates of the true supremum; the provenance travels into every report.
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from errors import OstrowskiError, PreconditionError
from expr import derivative
from interval import Interval
from search import grid_then_golden
from settings import G_PRIME_ZERO, MIN_SUP_GRID, SUP_GRID

logger = logging.getLogger(__name__)


class Provenance(Enum):
    ANALYTIC = "analytic"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class SupEstimate:
    """
    Parameters:
    - value: Estimated supremum, >= 0
    - argmax: Location of the estimate; None for user-asserted values
    - provenance: ANALYTIC (asserted) or SAMPLED (grid + refinement)
    - interval: Where the supremum is taken
    """

    value: float
    argmax: object
    provenance: Provenance
    interval: Interval

    def __post_init__(self):
        if not self.value >= 0:
            raise PreconditionError(f"a seminorm must be nonnegative, got {self.value!r}")
        if self.argmax is not None and not self.interval.contains(self.argmax):
            raise PreconditionError(f"argmax {self.argmax!r} lies outside [{self.interval.a!r}, {self.interval.b!r}]")

    @classmethod
    def analytic(cls, value, interval):
        return cls(float(value), None, Provenance.ANALYTIC, interval)

    @property
    def is_sampled(self):
        return self.provenance is Provenance.SAMPLED

    def scaled(self, factor):
        """Same estimate multiplied by a nonnegative factor."""
        return SupEstimate(self.value * factor, self.argmax, self.provenance, self.interval)

    def as_dict(self):
        return {"value": self.value, "argmax": self.argmax, "provenance": self.provenance.value}


def _check_grid(grid):
    if grid < MIN_SUP_GRID:
        raise PreconditionError(f"grid must have at least {MIN_SUP_GRID} cells, got {grid}")


def _endpoint_value(ratio, t):
    try:
        value = float(ratio(np.asarray(t)))
    except (OstrowskiError, FloatingPointError, ZeroDivisionError):
        return None
    return value if np.isfinite(value) else None


def _sampled_sup(ratio, interval, grid, open_left=False, open_right=False, label="sup"):
    """
    Maximize a nonnegative vectorized ratio over a uniform grid, then refine.

    Open ends are tried on their own and dropped when the ratio is undefined
    or infinite there.
    """
    points = np.linspace(interval.a, interval.b, grid + 1)
    inner = points[1 if open_left else 0:len(points) - 1 if open_right else len(points)]
    values = np.asarray(ratio(inner), dtype=float)

    extra_points = []
    extra_values = []
    for flag, t in ((open_left, interval.a), (open_right, interval.b)):
        if flag:
            value = _endpoint_value(ratio, t)
            if value is not None:
                extra_points.append(t)
                extra_values.append(value)
    if extra_points:
        order = np.argsort(np.concatenate([inner, extra_points]), kind="stable")
        inner = np.concatenate([inner, extra_points])[order]
        values = np.concatenate([values, extra_values])[order]

    argmax, value = grid_then_golden(lambda s: ratio(np.asarray(s)), inner, values, minimize=False)
    logger.debug("%s on [%r, %r]: %.17g at %r", label, interval.a, interval.b, value, argmax)
    return SupEstimate(max(float(value), 0.0), float(argmax), Provenance.SAMPLED, interval)


def _require_sign_constant(g, points):
    slopes = derivative(g, points)
    small = np.abs(slopes) < G_PRIME_ZERO
    if np.any(small):
        point = float(points[np.flatnonzero(small)[0]])
        raise PreconditionError(f"g' = {g} vanishes on the interval", point)
    signs = np.sign(slopes)
    flipped = signs != signs[0]
    if np.any(flipped):
        point = float(points[np.flatnonzero(flipped)[0]])
        raise PreconditionError(f"g' = ({g})' changes sign on the interval", point)


def sup_ratio(f, g, interval, grid=SUP_GRID, open_left=False, open_right=False):
    """
    Sampled ||f'/g'||_inf on an interval.

    Parameters:
    - f, g: FunctionSpecs
    - interval: Interval
    - grid: Number of grid cells (>= 64)
    - open_left, open_right: Treat an endpoint as excluded; it is still used
      when both derivatives exist there

    Returns a SupEstimate. Raises PreconditionError if g' vanishes or changes
    sign on the sampled grid.
    """
    _check_grid(grid)
    points = np.linspace(interval.a, interval.b, grid + 1)
    inner = points[1 if open_left else 0:len(points) - 1 if open_right else len(points)]
    _require_sign_constant(g, inner)

    def ratio(t):
        return np.abs(derivative(f, t) / derivative(g, t))

    return _sampled_sup(ratio, interval, grid, open_left, open_right, label=f"|({f})'/({g})'|")


def seminorm_Kp(f, interval, p, grid=SUP_GRID, open_left=False, open_right=False):
    """K_p(f') = sup of u^(1-p) |f'(u)| over a positive interval, p != 0."""
    _check_grid(grid)
    if p == 0:
        raise PreconditionError("K_p needs p != 0")
    interval.require_positive()

    def ratio(u):
        return np.power(u, 1.0 - p) * np.abs(derivative(f, u))

    return _sampled_sup(ratio, interval, grid, open_left, open_right, label=f"K_{p:g}")


def seminorm_P(f, interval, grid=SUP_GRID, open_left=False, open_right=False):
    """P(f') = sup of |u f'(u)| over a positive interval."""
    _check_grid(grid)
    interval.require_positive()

    def ratio(u):
        return np.abs(u * derivative(f, u))

    return _sampled_sup(ratio, interval, grid, open_left, open_right, label="P")


def seminorm_Mp_split(f, interval, x, p, grid=SUP_GRID):
    """
    Local constants around x for the local-power bound.

    Returns (left, right) with left = sup over (a, x) of |f'(t)| (x - t)^(1-p)
    and right = sup over (x, b) of |f'(t)| (t - x)^(1-p): the smallest M1, M2
    with |f'(t)| <= M_i |x - t|^(p-1) on each side.
    """
    _check_grid(grid)
    if not p > 0:
        raise PreconditionError(f"the local-power constants need p > 0, got {p!r}")
    left_half, right_half = interval.split(x)

    def left_ratio(t):
        return np.abs(derivative(f, t)) * np.power(x - t, 1.0 - p)

    def right_ratio(t):
        return np.abs(derivative(f, t)) * np.power(t - x, 1.0 - p)

    left = _sampled_sup(left_ratio, left_half, grid, open_right=True, label=f"M1_{p:g}")
    right = _sampled_sup(right_ratio, right_half, grid, open_left=True, label=f"M2_{p:g}")
    return left, right
