"""
Weighted Ostrowski bounds: the one-point rule error measured against the
weighted average (1/M) int w f, and the weight median that cancels the g(x)
term of the weighted bound.
"""
import logging
from dataclasses import dataclass

import numpy as np

from errors import PreconditionError
from expr import as_function, evaluate
from interval import Interval
from quadrature import integrate
from settings import (
    CUMULATIVE_CELLS,
    ENVELOPE_GRID,
    MEDIAN_TOL,
    NEGATIVE_WEIGHT_TOL,
    QUAD_REL_TOL,
)
from supnorm import SupEstimate

logger = logging.getLogger(__name__)

MEDIAN_MAX_STEPS = 200
EDGE_STEPS = 80


def _support_edges(w, points, values):
    """Points where w switches between zero and positive, located to float resolution."""
    positive = values > 0
    edges = []
    for k in np.flatnonzero(positive[:-1] != positive[1:]):
        lo, hi = float(points[k]), float(points[k + 1])
        for _ in range(EDGE_STEPS):
            middle = 0.5 * (lo + hi)
            if not lo < middle < hi:
                break
            if (evaluate(w, middle) > 0) == positive[k]:
                lo = middle
            else:
                hi = middle
        edges.append(hi)
    return tuple(edges)


def _norm(norm):
    return norm.value if isinstance(norm, SupEstimate) else float(norm)


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """
    A nonnegative weight on a fixed interval with its mass and cumulative table.

    Parameters:
    - w: FunctionSpec of the weight
    - interval: Interval the weight lives on
    - total_mass: M = int_a^b w
    - nodes: Cell boundaries of the cumulative table
    - cumulative: F at the nodes, F(a) = 0 and F(b) = M
    - rel_tol: Quadrature tolerance for every weighted integral
    - breakpoints: Edges of the support of w, seeded into every integration

    Build instances with WeightSpec.build; they are immutable afterwards.
    """

    w: object
    interval: Interval
    total_mass: float
    nodes: np.ndarray
    cumulative: np.ndarray
    rel_tol: float = QUAD_REL_TOL
    breakpoints: tuple = ()

    @classmethod
    def build(cls, w, interval, rel_tol=QUAD_REL_TOL, samples=ENVELOPE_GRID, cells=CUMULATIVE_CELLS):
        """
        Check the weight for negative values, then tabulate its cumulative mass.

        Raises PreconditionError when w dips below -NEGATIVE_WEIGHT_TOL or when
        its mass is not positive.
        """
        w = as_function(w)
        points = np.linspace(interval.a, interval.b, samples + 1)
        values = np.asarray(evaluate(w, points), dtype=float)
        worst = int(np.argmin(values))
        if values[worst] < -NEGATIVE_WEIGHT_TOL:
            raise PreconditionError(f"weight {w} is negative ({values[worst]:.3g})", float(points[worst]))

        edges = _support_edges(w, points, values)

        def clamped(t):
            return np.maximum(evaluate(w, t), 0.0)

        nodes = np.linspace(interval.a, interval.b, cells + 1)
        pieces = [integrate(clamped, left, right, rel_tol, breakpoints=edges).value for left, right in zip(nodes[:-1], nodes[1:])]
        cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
        total_mass = float(cumulative[-1])
        if not total_mass > 0:
            raise PreconditionError(f"weight {w} has no mass on [{interval.a!r}, {interval.b!r}]")
        logger.debug("weight %s: mass %.17g on [%r, %r]", w, total_mass, interval.a, interval.b)
        return cls(w, interval, total_mass, nodes, cumulative, rel_tol, edges)

    @classmethod
    def uniform(cls, interval, rel_tol=QUAD_REL_TOL):
        return cls.build("1", interval, rel_tol)

    def __call__(self, t):
        """w(t) with quadrature-noise negatives clamped to 0."""
        return np.maximum(evaluate(self.w, t), 0.0)

    def mass_below(self, x):
        """F(x) = int_a^x w."""
        x = self.interval.require_point(x)
        k = int(np.searchsorted(self.nodes, x, side="right")) - 1
        k = min(max(k, 0), len(self.nodes) - 2)
        piece = integrate(self, float(self.nodes[k]), x, self.rel_tol, breakpoints=self.breakpoints)
        return float(self.cumulative[k]) + piece.value

    def weighted_integral(self, g, lo, hi):
        """int_lo^hi w g."""
        g = as_function(g)
        return integrate(
            lambda t: self(t) * evaluate(g, t), lo, hi, self.rel_tol, breakpoints=self.breakpoints).value

    def average(self, f):
        """(1/M) int_a^b w f."""
        return self.weighted_integral(f, self.interval.a, self.interval.b) / self.total_mass


def weighted_lhs(f, weight, x):
    """|f(x) - (1/M) int_a^b w f|."""
    x = weight.interval.require_point(x)
    return abs(evaluate(f, x) - weight.average(f))


def find_weight_median(weight, tol=MEDIAN_TOL):
    """
    Point x0 that splits the weight's mass in half: |F(x0) - M/2| <= tol * M.

    The cumulative table picks the cell holding M/2, then bisection narrows it.
    When w vanishes on a plateau around the median the leftmost qualifying
    point is returned.
    """
    target = 0.5 * weight.total_mass
    slack = tol * weight.total_mass
    k = int(np.searchsorted(weight.cumulative, target - slack, side="left")) - 1
    k = min(max(k, 0), len(weight.nodes) - 2)
    lo, hi = float(weight.nodes[k]), float(weight.nodes[k + 1])
    for _ in range(MEDIAN_MAX_STEPS):
        middle = 0.5 * (lo + hi)
        if not lo < middle < hi:
            break
        if weight.mass_below(middle) >= target - slack:
            hi = middle
        else:
            lo = middle
        if hi - lo <= tol * weight.interval.length * 1e-3:
            break
    residual = abs(weight.mass_below(hi) - target)
    if residual > slack:
        logger.warning("weight median residual %.3g exceeds %.3g", residual, slack)
    return hi


def weighted_bound(g, weight, x, norm):
    """
    Weighted comparison-function bound.

    Parameters:
    - g: FunctionSpec with g' != 0 on (a, b)
    - weight: WeightSpec
    - x: Point in (a, b)
    - norm: ||f'/g'||_inf

    Returns |g(x)(F(x) - (M - F(x)))/M + (int_x^b w g - int_a^x w g)/M| * norm.
    """
    interval = weight.interval
    x = interval.require_point(x, interior=True)
    M = weight.total_mass
    F = weight.mass_below(x)
    left = weight.weighted_integral(g, interval.a, x)
    right = weight.weighted_integral(g, x, interval.b)
    core = evaluate(g, x) * (F - (M - F)) / M + (right - left) / M
    return abs(core) * _norm(norm)


def weighted_median_bound(g, weight, norm, x0=None):
    """
    Weighted bound at the weight median, where the g(x0) term cancels:
    |int_x0^b w g - int_a^x0 w g| / M * norm.
    """
    if x0 is None:
        x0 = find_weight_median(weight)
    interval = weight.interval
    left = weight.weighted_integral(g, interval.a, x0)
    right = weight.weighted_integral(g, x0, interval.b)
    return abs(right - left) / weight.total_mass * _norm(norm)


def weighted_split_bound(g, weight, x, norm_left, norm_right):
    """Weighted bound with separate seminorms on (a, x) and (x, b)."""
    interval = weight.interval
    x = interval.require_point(x, interior=True)
    M = weight.total_mass
    F = weight.mass_below(x)
    gx = evaluate(g, x)
    left = abs(gx * F - weight.weighted_integral(g, interval.a, x)) / M * _norm(norm_left)
    right = abs(gx * (M - F) - weight.weighted_integral(g, x, interval.b)) / M * _norm(norm_right)
    return left + right
