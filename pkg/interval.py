"""
Closed interval [a, b] with the validity predicates the bounds require.
"""
import math
from dataclasses import dataclass

from errors import PreconditionError


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise PreconditionError(f"interval endpoints must be finite, got [{self.a!r}, {self.b!r}]")
        if not self.a < self.b:
            raise PreconditionError(f"interval needs a < b, got [{self.a!r}, {self.b!r}]")

    @property
    def length(self):
        return self.b - self.a

    @property
    def midpoint(self):
        return 0.5 * (self.a + self.b)

    def contains(self, x):
        return self.a <= x <= self.b

    def require_point(self, x, interior=False):
        """
        Check that x lies in [a, b] (or in (a, b) when interior is set).

        Returns x as a float.
        """
        x = float(x)
        inside = self.a < x < self.b if interior else self.a <= x <= self.b
        if not inside:
            bracket = f"({self.a!r}, {self.b!r})" if interior else f"[{self.a!r}, {self.b!r}]"
            raise PreconditionError(f"x = {x!r} must lie in {bracket}")
        return x

    def require_positive(self):
        if self.a <= 0:
            raise PreconditionError(f"this bound needs [a, b] inside (0, inf), got a = {self.a!r}")
        return self

    def require_within(self, low, high):
        if not (low < self.a and self.b < high):
            raise PreconditionError(f"this bound needs [a, b] inside ({low!r}, {high!r}), got [{self.a!r}, {self.b!r}]")
        return self

    def split(self, x):
        """The two halves [a, x] and [x, b] for an interior point x."""
        x = self.require_point(x, interior=True)
        return Interval(self.a, x), Interval(x, self.b)

    def as_dict(self):
        return {"a": self.a, "b": self.b}
