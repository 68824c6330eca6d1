"""Exact phase accumulation and reduction modulo 2*pi.

Phases here reach 1e20 rad and beyond, where a double's absolute resolution
is worse than the period itself.  A :class:`PrecisePhase` therefore holds an
exact rational value; reduction subtracts an integer multiple of a 2*pi
constant carried to 120 decimal digits, so the residue is good to ~1e-60 rad
for every phase up to the 1e50 rad ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Real

from .errors import InvalidInputError, PhaseRangeError

_PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647"
)
PI = Fraction(_PI_DIGITS)
TWO_PI = 2 * PI

MAX_FACTORS = 8
MAX_MAGNITUDE = Fraction(10) ** 50


def as_fraction(x) -> Fraction:
    """Exact rational value of ``x``; floats convert without rounding."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, PrecisePhase):
        return x.value
    if isinstance(x, (float, Decimal)):
        if not math.isfinite(x):
            raise InvalidInputError(f"non-finite value {x!r}")
    elif not isinstance(x, (int, str, Real)):
        raise InvalidInputError(f"not a real scalar: {x!r}")
    try:
        return Fraction(x)
    except (ValueError, OverflowError, TypeError) as exc:
        raise InvalidInputError(f"cannot convert {x!r} to a phase") from exc


@dataclass(frozen=True, order=True)
class PrecisePhase:
    """A phase in radians held as an exact rational."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    def __add__(self, other):
        if isinstance(other, PrecisePhase):
            return PrecisePhase(self.value + other.value)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, PrecisePhase):
            return PrecisePhase(self.value - other.value)
        return NotImplemented

    def __neg__(self):
        return PrecisePhase(-self.value)

    def __mul__(self, k):
        if isinstance(k, PrecisePhase):
            return NotImplemented
        return PrecisePhase(self.value * as_fraction(k))

    __rmul__ = __mul__

    def __truediv__(self, other):
        # phase / phase is a dimensionless exact ratio
        if isinstance(other, PrecisePhase):
            return self.value / other.value
        return PrecisePhase(self.value / as_fraction(other))

    def __float__(self):
        return float(self.value)

    def __bool__(self):
        return bool(self.value)

    def reduced(self) -> float:
        return reduce_mod_2pi(self)


def phase_from_product(factors, divisors=()) -> PrecisePhase:
    """Exact product of ``factors`` divided by the product of ``divisors``.

    Each entry may be a float, int, Fraction, Decimal or numeric string.
    """
    factors = list(factors)
    divisors = list(divisors)
    if len(factors) + len(divisors) > MAX_FACTORS:
        raise InvalidInputError(f"at most {MAX_FACTORS} factors allowed")
    num = Fraction(1)
    for f in factors:
        num *= as_fraction(f)
    for q in divisors:
        q = as_fraction(q)
        if q == 0:
            raise InvalidInputError("zero divisor")
        num /= q
    return PrecisePhase(num)


def reduce_mod_2pi(phase) -> float:
    """Residue of ``phase`` in [0, 2*pi), rounded once to a double."""
    x = as_fraction(phase)
    if abs(x) > MAX_MAGNITUDE:
        raise PhaseRangeError(f"|phase| = {float(x):.3e} rad exceeds 1e50 rad")
    k = math.floor(x / TWO_PI)
    r = float(x - k * TWO_PI)
    # the residue may round up onto the double nearest 2*pi
    return 0.0 if r >= math.tau else r


def circular_distance(a: float, b: float) -> float:
    """Smallest |a - b| modulo 2*pi."""
    d = math.fmod(abs(a - b), math.tau)
    return min(d, math.tau - d)
