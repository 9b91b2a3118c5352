"""
Random test functions with exactly known derivative maxima.

Families: polynomials of degree <= 4 with coefficients in [-2, 2],
a e^(bt), a sin(bt + c) and a ln t + b. Every member can report
max |f'| on any interval in closed form, which lets the harness build
rigorous (analytic) seminorms for the inequality suite.
"""
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from errors import PreconditionError
from expr import parse
from interval import Interval

FAMILIES = ("polynomial", "exponential", "sine", "logarithm")

# Intervals are drawn from [INTERVAL_LOW, INTERVAL_HIGH]
INTERVAL_LOW = 0.1
INTERVAL_HIGH = 5.0
MIN_LENGTH = 0.05

COEFFICIENT_RANGE = 2.0
MAX_DEGREE = 4


def _number(value):
    return f"({float(value)!r})"


@dataclass(frozen=True)
class CorpusFunction:
    """
    Parameters:
    - family: One of FAMILIES
    - params: Family parameters (coefficients low to high for polynomials)
    - text: Expression text of f
    """

    family: str
    params: tuple
    text: str

    @property
    def spec(self):
        return parse(self.text)

    def max_slope(self, interval):
        """max |f'(t)| over [a, b]."""
        a, b = interval.a, interval.b
        if self.family == "polynomial":
            slope = Polynomial(self.params).deriv()
            candidates = [a, b]
            if slope.degree() >= 1:
                candidates += [r.real for r in slope.deriv().roots() if abs(r.imag) < 1e-12 and a < r.real < b]
            return float(max(abs(slope(t)) for t in candidates))
        if self.family == "exponential":
            scale, rate = self.params
            return abs(scale * rate) * max(math.exp(rate * a), math.exp(rate * b))
        if self.family == "sine":
            scale, rate, phase = self.params
            lo, hi = rate * a + phase, rate * b + phase
            # |cos| reaches 1 at multiples of pi
            if math.floor(hi / math.pi) > math.floor(lo / math.pi) or lo % math.pi == 0:
                return abs(scale * rate)
            return abs(scale * rate) * max(abs(math.cos(lo)), abs(math.cos(hi)))
        if self.family == "logarithm":
            if a <= 0:
                raise PreconditionError("a ln t + b needs a positive interval")
            scale, _ = self.params
            return abs(scale) / a
        raise ValueError(f"unknown family {self.family!r}")


def polynomial(coefficients):
    terms = [_number(coefficients[0])]
    for power, c in enumerate(coefficients[1:], start=1):
        terms.append(f"{_number(c)} * t" if power == 1 else f"{_number(c)} * t^{power}")
    return CorpusFunction("polynomial", tuple(float(c) for c in coefficients), " + ".join(terms))


def exponential(scale, rate):
    return CorpusFunction("exponential", (float(scale), float(rate)), f"{_number(scale)} * exp({_number(rate)} * t)")


def sine(scale, rate, phase):
    return CorpusFunction(
        "sine", (float(scale), float(rate), float(phase)),
        f"{_number(scale)} * sin({_number(rate)} * t + {_number(phase)})",
    )


def logarithm(scale, shift):
    return CorpusFunction("logarithm", (float(scale), float(shift)), f"{_number(scale)} * ln(t) + {_number(shift)}")


def random_function(rng, family=None):
    family = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
    if family == "polynomial":
        degree = int(rng.integers(1, MAX_DEGREE + 1))
        return polynomial(rng.uniform(-COEFFICIENT_RANGE, COEFFICIENT_RANGE, degree + 1))
    if family == "exponential":
        return exponential(rng.uniform(-COEFFICIENT_RANGE, COEFFICIENT_RANGE), rng.uniform(-1.0, 1.0))
    if family == "sine":
        return sine(rng.uniform(-COEFFICIENT_RANGE, COEFFICIENT_RANGE), rng.uniform(0.5, 3.0), rng.uniform(0.0, 2 * math.pi))
    return logarithm(rng.uniform(-COEFFICIENT_RANGE, COEFFICIENT_RANGE), rng.uniform(-COEFFICIENT_RANGE, COEFFICIENT_RANGE))


def random_interval(rng, low=INTERVAL_LOW, high=INTERVAL_HIGH):
    while True:
        a, b = sorted(rng.uniform(low, high, 2))
        if b - a >= MIN_LENGTH:
            return Interval(float(a), float(b))


def random_corpus(n, seed):
    """n (function, interval) pairs drawn from the families in turn."""
    rng = np.random.default_rng(seed)
    return [(random_function(rng, FAMILIES[k % len(FAMILIES)]), random_interval(rng)) for k in range(n)]
