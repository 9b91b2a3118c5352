"""
Special means of two numbers used by the closed-form bounds.

Every mean is written in terms of the midpoint m = (x + y) / 2 and the
half-gap h = |y - x| / 2 (u = h / m for the means of positive numbers). The
removable quotients sinh(z)/z, sin(z)/z and atanh(u)/u then carry all of the
cancellation, and on the diagonal |x - y| <= DELTA_SWITCH * (1 + |x|) they are
replaced by their Taylor series. Inputs are sorted first, so every mean is
symmetric bit for bit.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

from errors import DomainViolation, PreconditionError
from settings import DELTA_SWITCH, P_LIMIT_WINDOW

logger = logging.getLogger(__name__)

# Step used to estimate d/dp ln L_p near p = 0
P_LIMIT_STEP = 1e-3


class MeanTag(Enum):
    ARITHMETIC = "A"
    LOGARITHMIC = "L"
    PLOGARITHMIC = "Lp"
    IDENTRIC = "I"
    EXPONENTIAL = "E"
    COS = "C"
    SIN = "S"
    GEOMETRIC = "G"


POSITIVE_ONLY = {MeanTag.LOGARITHMIC, MeanTag.PLOGARITHMIC, MeanTag.IDENTRIC, MeanTag.GEOMETRIC}


@dataclass(frozen=True)
class MeanKind:
    """
    Which mean to evaluate. PLOGARITHMIC carries its order p, which may not be
    -1 or 0 (those limits are the logarithmic and identric means).
    """

    tag: MeanTag
    p: float = None

    def __post_init__(self):
        if self.tag is MeanTag.PLOGARITHMIC:
            if self.p is None or not math.isfinite(self.p):
                raise PreconditionError("the p-logarithmic mean needs a finite order p")
            if self.p in (-1.0, 0.0):
                raise PreconditionError(f"p = {self.p:g} is excluded; use the {'L' if self.p == -1 else 'I'} mean")
        elif self.p is not None:
            raise PreconditionError(f"mean {self.tag.value} takes no order p")

    @classmethod
    def parse(cls, tag, p=None):
        """Build a MeanKind from its short tag (A, L, Lp, I, E, C, S, G)."""
        try:
            mean_tag = MeanTag(tag)
        except ValueError:
            names = ", ".join(item.value for item in MeanTag)
            raise PreconditionError(f"unknown mean {tag!r}; expected one of {names}") from None
        return cls(mean_tag, p if mean_tag is MeanTag.PLOGARITHMIC else None)

    @property
    def label(self):
        return f"L_{self.p:g}" if self.tag is MeanTag.PLOGARITHMIC else self.tag.value


# ---------------------------------------------------------------------------
# Removable quotients
# ---------------------------------------------------------------------------

def _sinhc(z):
    if abs(z) < 1e-4:
        z2 = z * z
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0
    return math.sinh(z) / z


def _sinc(z):
    if abs(z) < 1e-4:
        z2 = z * z
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    return math.sin(z) / z


def _atanhc(u):
    if abs(u) < 1e-4:
        u2 = u * u
        return 1.0 + u2 / 3.0 + u2 * u2 / 5.0
    return math.atanh(u) / u


def _on_diagonal(lo, hi):
    return hi - lo <= DELTA_SWITCH * (1.0 + abs(lo))


def _positive_pair(lo, hi, name):
    if lo <= 0:
        raise DomainViolation(f"{name}({lo!r}, {hi!r})", lo, "mean of positive numbers needs x > 0 and y > 0")


def _midpoint_gap(lo, hi):
    m = 0.5 * lo + 0.5 * hi
    h = 0.5 * (hi - lo)
    return m, h


# ---------------------------------------------------------------------------
# Means
# ---------------------------------------------------------------------------

def arithmetic(x, y):
    lo, hi = sorted((x, y))
    return 0.5 * lo + 0.5 * hi


def geometric(x, y):
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "G")
    if _on_diagonal(lo, hi):
        m, h = _midpoint_gap(lo, hi)
        u2 = (h / m) ** 2
        return m * (1.0 - u2 / 2.0 - u2 * u2 / 8.0)
    return math.sqrt(lo) * math.sqrt(hi)


def logarithmic(x, y):
    """L(x, y) = (y - x) / (ln y - ln x), with L(x, x) = x."""
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "L")
    m, h = _midpoint_gap(lo, hi)
    u = h / m
    if _on_diagonal(lo, hi):
        u2 = u * u
        return m * (1.0 - u2 / 3.0 - 4.0 * u2 * u2 / 45.0)
    return m / _atanhc(u)


def _identric_log_ratio(u):
    # ln(I / m) as a function of the normalized half-gap u
    if u < 1e-4:
        u2 = u * u
        return -u2 / 6.0 - u2 * u2 / 20.0
    spread = (1.0 + u) * math.log1p(u) - (1.0 - u) * math.log1p(-u)
    return spread / (2.0 * u) - 1.0


def identric(x, y):
    """
    I(x, y) = exp((y ln y - x ln x) / (y - x) - 1), with I(x, x) = x.

    Evaluated as m * exp(ln(I/m)) so that y^y never overflows.
    """
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "I")
    m, h = _midpoint_gap(lo, hi)
    return m * math.exp(_identric_log_ratio(h / m))


def _power_ratio(p, u):
    # L_p^p / m^p as a function of u, valid for every real p
    q = p + 1.0
    if u < 1e-4:
        u2 = u * u
        return (1.0 + (q - 1.0) * (q - 2.0) * u2 / 6.0
                + (q - 1.0) * (q - 2.0) * (q - 3.0) * (q - 4.0) * u2 * u2 / 120.0)
    z = math.atanh(u)
    return math.exp(0.5 * q * math.log1p(-u * u)) * _atanhc(u) * _sinhc(q * z)


def power_mean(p, x, y):
    """
    L_p^p(x, y), the mean value of t^p over [x, y].

    Defined for every real p: p = -1 gives 1/L(x, y), p = 0 gives 1 and
    x = y gives x^p.
    """
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "L_p^p")
    m, h = _midpoint_gap(lo, hi)
    return m ** p * _power_ratio(p, h / m)


def _plog_direct(p, lo, hi):
    m, h = _midpoint_gap(lo, hi)
    u = h / m
    if _on_diagonal(lo, hi):
        q = p + 1.0
        u2 = u * u
        # series of ln(phi) / p to second order in u
        return m * math.exp((q - 2.0) * u2 / 6.0)
    return m * math.exp(math.log(_power_ratio(p, u)) / p)


def mean_limit_check(p, x, y):
    """
    L_p(x, y) through a formula that stays accurate as p -> 0 and p -> -1.

    Near p = 0 the direct ratio ln(phi)/p loses digits, so ln(L_p/m) is taken
    as ln(I/m) plus a central-difference slope in p. Near p = -1 the direct
    formula is already stable (q = p + 1 only enters through sinh(q z)/(q z)).

    Parameters:
    - p: Order of the mean, any real (p = 0 gives I, p = -1 gives L)
    - x, y: Positive arguments
    """
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "L_p")
    if p == -1.0:
        return logarithmic(lo, hi)
    if p == 0.0:
        return identric(lo, hi)
    if abs(p) > P_LIMIT_WINDOW:
        return _plog_direct(p, lo, hi)
    m, h = _midpoint_gap(lo, hi)
    at_zero = _identric_log_ratio(h / m)
    above = math.log(_plog_direct(P_LIMIT_STEP, lo, hi) / m)
    below = math.log(_plog_direct(-P_LIMIT_STEP, lo, hi) / m)
    slope = (above - below) / (2.0 * P_LIMIT_STEP)
    return m * math.exp(at_zero + slope * p)


def plogarithmic(p, x, y):
    if abs(p) <= P_LIMIT_WINDOW or abs(p + 1.0) <= P_LIMIT_WINDOW:
        return mean_limit_check(p, x, y)
    lo, hi = sorted((x, y))
    _positive_pair(lo, hi, "L_p")
    return _plog_direct(p, lo, hi)


def exponential(x, y):
    """E(x, y) = (e^x - e^y) / (x - y), with E(x, x) = e^x."""
    lo, hi = sorted((x, y))
    m, h = _midpoint_gap(lo, hi)
    try:
        return math.exp(m) * _sinhc(h)
    except OverflowError:
        raise DomainViolation(f"E({lo!r}, {hi!r})", hi, "overflow") from None


def cos_mean(x, y):
    """C(x, y) = (cos x - cos y) / (x - y), with C(x, x) = -sin x."""
    lo, hi = sorted((x, y))
    m, h = _midpoint_gap(lo, hi)
    return -math.sin(m) * _sinc(h)


def sin_mean(x, y):
    """S(x, y) = (sin x - sin y) / (x - y), with S(x, x) = cos x."""
    lo, hi = sorted((x, y))
    m, h = _midpoint_gap(lo, hi)
    return math.cos(m) * _sinc(h)


_EVALUATORS = {
    MeanTag.ARITHMETIC: arithmetic,
    MeanTag.LOGARITHMIC: logarithmic,
    MeanTag.IDENTRIC: identric,
    MeanTag.EXPONENTIAL: exponential,
    MeanTag.COS: cos_mean,
    MeanTag.SIN: sin_mean,
    MeanTag.GEOMETRIC: geometric,
}


def evaluate_mean(kind, x, y):
    """
    Evaluate a special mean.

    Parameters:
    - kind: MeanKind
    - x, y: Arguments; positive for L, L_p, I and G

    Returns the mean as a float. Raises DomainViolation for nonpositive
    arguments of L, L_p, I, G.
    """
    x = float(x)
    y = float(y)
    if kind.tag is MeanTag.PLOGARITHMIC:
        return plogarithmic(kind.p, x, y)
    return _EVALUATORS[kind.tag](x, y)
