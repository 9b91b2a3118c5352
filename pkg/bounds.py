"""
Closed-form right-hand sides of the Ostrowski-type bounds and the report that
pairs each of them with the true left-hand side |f(x) - (1/(b-a)) int f|.

Every function returns the bound for a given seminorm (or comparison-function
constant); the seminorm itself comes from supnorm.py or from the caller.
"""
import logging
import math
from dataclasses import dataclass, field

from errors import PreconditionError
from expr import evaluate
from interval import Interval
from means import (
    cos_mean,
    exponential,
    identric,
    logarithmic,
    power_mean,
    sin_mean,
)
from quadrature import integrate
from settings import QUAD_REL_TOL, TOL_ABS, TOL_REL
from supnorm import SupEstimate

logger = logging.getLogger(__name__)

QUARTER_TURN = math.pi / 2


def _norm(norm):
    return norm.value if isinstance(norm, SupEstimate) else float(norm)


def _check_constant(value, name):
    if not value >= 0:
        raise PreconditionError(f"{name} must be nonnegative, got {value!r}")
    return value


def _offset(interval, x):
    # (x - A) / (b - a)
    return (x - interval.midpoint) / interval.length


# ---------------------------------------------------------------------------
# Left-hand side
# ---------------------------------------------------------------------------

def lhs(f, interval, x, rel_tol=QUAD_REL_TOL):
    """
    |f(x) - (1/(b-a)) int_a^b f(t) dt|, the error of the one-point rule at x.
    """
    average = integrate(f, interval.a, interval.b, rel_tol).value / interval.length
    return abs(evaluate(f, x) - average)


# ---------------------------------------------------------------------------
# Classic and comparison-function bounds
# ---------------------------------------------------------------------------

def classic_ostrowski(M, interval, x):
    """
    [1/4 + ((x - A)/(b - a))^2] (b - a) M for |f'| <= M.

    The constant 1/4 is attained by f(t) = t at x = a or x = b.
    """
    x = interval.require_point(x)
    M = _check_constant(_norm(M), "M")
    return (0.25 + _offset(interval, x) ** 2) * interval.length * M


def general_bound(g, interval, x, norm, rel_tol=QUAD_REL_TOL):
    """
    Comparison-function bound for any g with g' != 0 on (a, b).

    Parameters:
    - g: FunctionSpec of the comparison function
    - interval: Interval
    - x: Point in [a, b]
    - norm: ||f'/g'||_inf (SupEstimate or float)
    - rel_tol: Quadrature tolerance for the integrals of g

    Returns |2((x - A)/(b - a)) g(x) + (int_x^b g - int_a^x g)/(b - a)| * norm.
    """
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    left = integrate(g, a, x, rel_tol).value
    right = integrate(g, x, b, rel_tol).value
    core = 2.0 * _offset(interval, x) * evaluate(g, x) + (right - left) / interval.length
    return abs(core) * _check_constant(_norm(norm), "the seminorm")


def midpoint_bound(g, interval, norm, rel_tol=QUAD_REL_TOL):
    """General bound at x = (a + b)/2, where the g(x) term vanishes."""
    A = interval.midpoint
    left = integrate(g, interval.a, A, rel_tol).value
    right = integrate(g, A, interval.b, rel_tol).value
    return abs(right - left) / interval.length * _check_constant(_norm(norm), "the seminorm")


def power_bound(interval, x, p, Kp):
    """
    Bound for g(t) = t^p on a positive interval with K_p = sup u^(1-p)|f'(u)|.

    Three branches: p > 0, p < 0 with p != -1, and p = -1 (logarithmic mean).
    """
    interval.require_positive()
    if p == 0:
        raise PreconditionError("the power bound needs p != 0")
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    A = interval.midpoint
    if p > 0:
        branch = 2 * x ** p * (x - A) + (b - x) * power_mean(p, b, x) - (x - a) * power_mean(p, x, a)
    elif p == -1:
        branch = (x - a) / logarithmic(x, a) - (b - x) / logarithmic(b, x) - 2 / x * (x - A)
    else:
        branch = (x - a) * power_mean(p, x, a) - (b - x) * power_mean(p, b, x) - 2 * x ** p * (x - A)
    return _check_constant(_norm(Kp), "K_p") / (abs(p) * interval.length) * branch


def log_bound(interval, x, P):
    """Bound for g(t) = ln t with P = sup |u f'(u)|, written with the identric mean."""
    interval.require_positive()
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    spread = (b - x) * math.log(identric(x, b)) - (x - a) * math.log(identric(a, x))
    return _check_constant(_norm(P), "P") / interval.length * (spread + 2 * (x - interval.midpoint) * math.log(x))


def exp_bound(interval, x, gamma):
    """Bound for |f'(t)| <= gamma e^t (comparison g = e^t), exponential mean E."""
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    core = (2 * _offset(interval, x) * math.exp(x)
            + ((b - x) * exponential(x, b) - (x - a) * exponential(a, x)) / interval.length)
    return _check_constant(_norm(gamma), "gamma") * abs(core)


def exp_midpoint_bound(interval, gamma):
    A = interval.midpoint
    return 0.5 * abs(exponential(A, interval.b) - exponential(interval.a, A)) * _check_constant(_norm(gamma), "gamma")


def cos_bound(interval, x, gamma1):
    """Bound for |f'(t)| <= gamma1 cos t on [a, b] inside (0, pi/2); cos-mean C."""
    interval.require_within(0.0, QUARTER_TURN)
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    core = (2 * _offset(interval, x) * math.sin(x)
            + ((x - a) * cos_mean(a, x) - (b - x) * cos_mean(x, b)) / interval.length)
    return _check_constant(_norm(gamma1), "gamma1") * abs(core)


def cos_midpoint_bound(interval, gamma1):
    interval.require_within(0.0, QUARTER_TURN)
    A = interval.midpoint
    return 0.5 * abs(cos_mean(interval.a, A) - cos_mean(A, interval.b)) * _check_constant(_norm(gamma1), "gamma1")


def sin_bound(interval, x, gamma2):
    """
    Bound for |f'(t)| <= gamma2 sin t on [a, b] inside (0, pi/2); sin-mean S.

    g = cos t is decreasing, so the bracket is negative as written; its
    absolute value is returned.
    """
    interval.require_within(0.0, QUARTER_TURN)
    x = interval.require_point(x)
    a, b = interval.a, interval.b
    core = (2 * _offset(interval, x) * math.cos(x)
            + ((b - x) * sin_mean(x, b) - (x - a) * sin_mean(a, x)) / interval.length)
    return _check_constant(_norm(gamma2), "gamma2") * abs(core)


def sin_midpoint_bound(interval, gamma2):
    interval.require_within(0.0, QUARTER_TURN)
    A = interval.midpoint
    return 0.5 * abs(sin_mean(A, interval.b) - sin_mean(interval.a, A)) * _check_constant(_norm(gamma2), "gamma2")


# ---------------------------------------------------------------------------
# Split-norm bounds
# ---------------------------------------------------------------------------

def split_bound(g, interval, x, norm_left, norm_right, rel_tol=QUAD_REL_TOL):
    """
    Bound with separate seminorms on (a, x) and (x, b); g needs a sign-constant
    derivative on each half only and may have a kink at x.
    """
    x = interval.require_point(x, interior=True)
    a, b = interval.a, interval.b
    gx = evaluate(g, x)
    left = abs(gx * (x - a) - integrate(g, a, x, rel_tol).value) * _check_constant(_norm(norm_left), "the left seminorm")
    right = abs(gx * (b - x) - integrate(g, x, b, rel_tol).value) * _check_constant(_norm(norm_right), "the right seminorm")
    return (left + right) / interval.length


def split_midpoint_bound(g, interval, norm_left, norm_right, rel_tol=QUAD_REL_TOL):
    a, b = interval.a, interval.b
    A = interval.midpoint
    gA = evaluate(g, A)
    scale = 2.0 / interval.length
    left = abs(gA - scale * integrate(g, a, A, rel_tol).value) * _check_constant(_norm(norm_left), "the left seminorm")
    right = abs(gA - scale * integrate(g, A, b, rel_tol).value) * _check_constant(_norm(norm_right), "the right seminorm")
    return 0.5 * (left + right)


def local_power_bound(interval, x, p, M1, M2):
    """
    [M1 (x - a)^(p+1) + M2 (b - x)^(p+1)] / (p (p + 1) (b - a)) for
    |f'(t)| <= M_i |x - t|^(p-1) on each side of x.
    """
    if not p > 0:
        raise PreconditionError(f"the local-power bound needs p > 0, got {p!r}")
    x = interval.require_point(x, interior=True)
    left = _check_constant(_norm(M1), "M1") * (x - interval.a) ** (p + 1)
    right = _check_constant(_norm(M2), "M2") * (interval.b - x) ** (p + 1)
    return (left + right) / (p * (p + 1) * interval.length)


def local_power_midpoint_bound(interval, p, M1, M2):
    """(b - a)^p (M1 + M2) / (2^(p+1) p (p + 1)), the local-power bound at the midpoint."""
    if not p > 0:
        raise PreconditionError(f"the local-power bound needs p > 0, got {p!r}")
    total = _check_constant(_norm(M1), "M1") + _check_constant(_norm(M2), "M2")
    return interval.length ** p * total / (2 ** (p + 1) * p * (p + 1))


def local_power_symmetric_bound(M, interval, x, p):
    """[(x - a)^(p+1) + (b - x)^(p+1)] M / (p (p + 1) (b - a)) with one two-sided constant M."""
    if not p > 0:
        raise PreconditionError(f"the local-power bound needs p > 0, got {p!r}")
    x = interval.require_point(x)
    spread = (x - interval.a) ** (p + 1) + (interval.b - x) ** (p + 1)
    return spread * _check_constant(_norm(M), "M") / (p * (p + 1) * interval.length)


# ---------------------------------------------------------------------------
# Midpoint bounds on positive intervals
# ---------------------------------------------------------------------------

def midpoint_power_bound(interval, p, M1, M2):
    """
    Midpoint bound for g = t^p with |f'(t)| <= M_i t^(p-1) on each half:
    (1/(2|p|)) [M1 |A^p - L_p^p(a, A)| + M2 |L_p^p(A, b) - A^p|].
    """
    interval.require_positive()
    if p in (0, -1):
        raise PreconditionError(f"the midpoint power bound needs p not in {{0, -1}}, got {p!r}")
    a, b = interval.a, interval.b
    A = interval.midpoint
    left = _check_constant(_norm(M1), "M1") * abs(A ** p - power_mean(p, a, A))
    right = _check_constant(_norm(M2), "M2") * abs(power_mean(p, A, b) - A ** p)
    return (left + right) / (2 * abs(p))


def midpoint_linear_bound(interval, N1, N2):
    """(1/8)(N1 + N2)(b - a) for |f'| <= N_i on each half."""
    interval.require_positive()
    total = _check_constant(_norm(N1), "N1") + _check_constant(_norm(N2), "N2")
    return 0.125 * total * interval.length


def midpoint_reciprocal_bound(interval, M1, M2):
    """Midpoint bound for g = 1/t with |f'(t)| <= M_i t^-2, via the logarithmic mean."""
    interval.require_positive()
    a, b = interval.a, interval.b
    A = interval.midpoint
    L_left = logarithmic(a, A)
    L_right = logarithmic(A, b)
    left = _check_constant(_norm(M1), "M1") * abs(A - L_left) / (L_left * A)
    right = _check_constant(_norm(M2), "M2") * abs(L_right - A) / (L_right * A)
    return 0.5 * (left + right)


def midpoint_log_bound(interval, M1, M2):
    """
    Midpoint bound for g = ln t with |f'(t)| <= M_i / t, via the identric mean:
    (1/2)[M1 ln(A / I(a, A)) + M2 ln(I(A, b) / A)], which is
    ln G((A / I(a, A))^M1, (I(A, b) / A)^M2) with G the geometric mean.
    """
    interval.require_positive()
    a, b = interval.a, interval.b
    A = interval.midpoint
    left = _check_constant(_norm(M1), "M1") * abs(math.log(A / identric(a, A)))
    right = _check_constant(_norm(M2), "M2") * abs(math.log(identric(A, b) / A))
    return 0.5 * (left + right)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def envelope_warning(asserted, sampled, label, tol_rel=TOL_REL, tol_abs=TOL_ABS):
    """
    Compare a caller-asserted constant with its sampled counterpart.

    Returns a warning message when the sampled value exceeds the assertion,
    otherwise None. Never raises: the assertion is the caller's.
    """
    if sampled.value <= asserted * (1 + tol_rel) + tol_abs:
        return None
    message = (f"hypothesis for {label} looks violated: sampled {sampled.value:.17g} "
               f"at t={sampled.argmax!r} exceeds asserted {asserted:.17g}")
    logger.warning(message)
    return message


@dataclass(frozen=True)
class BoundReport:
    """
    One bound evaluated at one point, paired with the true error.

    Parameters:
    - bound_id: Catalog identifier of the bound
    - lhs: |f(x) - mean of f| (or its weighted analogue)
    - rhs: The bound
    - slack: rhs - lhs
    - ratio: lhs / rhs (0 when both vanish, inf when only rhs does)
    - seminorm: Seminorm of the bound (left one for split bounds)
    - x, a, b: Evaluation point and interval
    - seminorm_right: Right seminorm of split bounds
    - inputs: Echo of the case inputs
    - warnings: Hypothesis-envelope warnings
    - status: "pass" or "fail" once a harness has checked it
    """

    bound_id: str
    lhs: float
    rhs: float
    slack: float
    ratio: float
    seminorm: SupEstimate
    x: float
    a: float
    b: float
    seminorm_right: SupEstimate = None
    inputs: dict = field(default_factory=dict)
    warnings: tuple = ()
    status: str = ""

    @classmethod
    def build(cls, bound_id, lhs_value, rhs_value, interval, x, seminorm,
              seminorm_right=None, inputs=None, warnings=()):
        if rhs_value <= 0:
            ratio = 0.0 if lhs_value == 0 else math.inf
        else:
            ratio = lhs_value / rhs_value
        return cls(
            bound_id=bound_id,
            lhs=float(lhs_value),
            rhs=float(rhs_value),
            slack=float(rhs_value - lhs_value),
            ratio=float(ratio),
            seminorm=seminorm,
            x=float(x),
            a=interval.a,
            b=interval.b,
            seminorm_right=seminorm_right,
            inputs=dict(inputs or {}),
            warnings=tuple(warnings),
        )

    @property
    def interval(self):
        return Interval(self.a, self.b)

    @property
    def certified(self):
        """True when no seminorm in the report is a sampled lower estimate."""
        norms = [self.seminorm] + ([self.seminorm_right] if self.seminorm_right else [])
        return not any(norm.is_sampled for norm in norms)

    def passes(self, tol_rel=TOL_REL, tol_abs=TOL_ABS):
        return self.lhs <= self.rhs * (1 + tol_rel) + tol_abs

    def violation(self):
        """How far lhs exceeds rhs (0 when it does not)."""
        return max(self.lhs - self.rhs, 0.0)

    def as_dict(self):
        record = {
            "bound_id": self.bound_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "ratio": self.ratio,
            "seminorm": self.seminorm.as_dict(),
            "x": self.x,
            "a": self.a,
            "b": self.b,
        }
        if self.seminorm_right is not None:
            record["seminorm_right"] = self.seminorm_right.as_dict()
        record["inputs"] = self.inputs
        record["warnings"] = list(self.warnings)
        if self.status:
            record["status"] = self.status
        return record
