"""Closed intervals with exact scalar endpoints.

The game referee, the cylinder machinery and the avoidance certificates all
compare interval endpoints exactly, so this is a thin layer over
:mod:`schmidtlab.numeric` comparisons.
"""

from __future__ import annotations

from fractions import Fraction

from .numeric import (
    Scalar,
    scalar_add,
    scalar_compare,
    scalar_max,
    scalar_min,
    scalar_mul,
    scalar_sub,
    scalar_to_float,
    scalar_to_json,
)

__all__ = ["Interval", "Cylinder"]


class Interval(object):
    """A closed interval [lo, hi] with lo <= hi, endpoints exact scalars."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if isinstance(lo, int):
            lo = Fraction(lo)
        if isinstance(hi, int):
            hi = Fraction(hi)
        if scalar_compare(lo, hi) > 0:
            raise ValueError(f"interval endpoints out of order: [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def length(self) -> Scalar:
        return scalar_sub(self.hi, self.lo)

    def midpoint(self) -> Scalar:
        return scalar_mul(scalar_add(self.lo, self.hi), Fraction(1, 2))

    def contains_point(self, x) -> bool:
        return scalar_compare(self.lo, x) <= 0 and scalar_compare(x, self.hi) <= 0

    def contains_point_strictly(self, x) -> bool:
        return scalar_compare(self.lo, x) < 0 and scalar_compare(x, self.hi) < 0

    def contains(self, other: "Interval") -> bool:
        return scalar_compare(self.lo, other.lo) <= 0 and scalar_compare(other.hi, self.hi) <= 0

    def contains_strictly(self, other: "Interval") -> bool:
        return scalar_compare(self.lo, other.lo) < 0 and scalar_compare(other.hi, self.hi) < 0

    def intersects(self, other: "Interval") -> bool:
        return scalar_compare(self.lo, other.hi) <= 0 and scalar_compare(other.lo, self.hi) <= 0

    def overlaps_interior(self, other: "Interval") -> bool:
        """True when the intersection has positive length."""
        return scalar_compare(self.lo, other.hi) < 0 and scalar_compare(other.lo, self.hi) < 0

    def intersection(self, other: "Interval") -> "Interval | None":
        lo = scalar_max(self.lo, other.lo)
        hi = scalar_min(self.hi, other.hi)
        if scalar_compare(lo, hi) > 0:
            return None
        return Interval(lo, hi)

    def distance_to_point(self, x) -> Scalar:
        if scalar_compare(x, self.lo) < 0:
            return scalar_sub(self.lo, x)
        if scalar_compare(x, self.hi) > 0:
            return scalar_sub(x, self.hi)
        return Fraction(0)

    def __eq__(self, other):
        return (
            isinstance(other, Interval)
            and scalar_compare(self.lo, other.lo) == 0
            and scalar_compare(self.hi, other.hi) == 0
        )

    __hash__ = None

    def __repr__(self):
        return f"[{scalar_to_float(self.lo):.9g}, {scalar_to_float(self.hi):.9g}]"

    def to_json(self):
        return [scalar_to_json(self.lo), scalar_to_json(self.hi)]


class Cylinder(object):
    """A finite symbol word together with the exact interval it codes.

    The stored interval is the closure; orientation and half-openness are
    representation details of the individual map backends.
    """

    __slots__ = ("word", "interval")

    def __init__(self, word, interval: Interval):
        self.word = tuple(word)
        self.interval = interval

    def length(self):
        return self.interval.length()

    def __eq__(self, other):
        return isinstance(other, Cylinder) and self.word == other.word and self.interval == other.interval

    __hash__ = None

    def __repr__(self):
        return f"Cylinder({''.join(str(s) for s in self.word) or 'e'}, {self.interval!r})"
