"""Rational interval enclosures and certified base-2 logarithms.

Every real quantity in this package is reported as a closed interval with
exact rational endpoints.  Refining a quantity produces a nested interval,
so an enclosure doubles as a finite-precision stand-in for an on-demand
refinable real.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class DomainError(ValueError):
    """An operation was evaluated outside its mathematical domain."""


_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact Fraction; reject anything else."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise DomainError(f"malformed rational: {text!r}")
    return Fraction(text)


def rational_str(value) -> str:
    """Serialize an exact rational as "p/q" (or "p" for integers).

    Accepts Fraction, int, or any canonical Rational (e.g. gmpy2.mpq);
    all of them print in the same normalized form.
    """
    return str(value)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] certified to contain a real value.

    ``level`` records the refinement depth that produced the interval;
    successive refinements of one quantity are nested and carry
    non-decreasing levels.
    """

    lo: Fraction
    hi: Fraction
    level: int = 0

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure: {self.lo} > {self.hi}")

    @staticmethod
    def exact(value: Fraction, level: int = 0) -> "Enclosure":
        value = Fraction(value)
        return Enclosure(value, value, level)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi,
                         max(self.level, other.level))

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo, self.level)

    def scaled(self, factor: Fraction) -> "Enclosure":
        """Multiply by an exact scalar (either sign)."""
        factor = Fraction(factor)
        if factor >= 0:
            return Enclosure(self.lo * factor, self.hi * factor, self.level)
        return Enclosure(self.hi * factor, self.lo * factor, self.level)

    def to_json(self) -> dict:
        return {"lo": rational_str(self.lo), "hi": rational_str(self.hi),
                "level": self.level}

    @staticmethod
    def from_json(doc: dict) -> "Enclosure":
        return Enclosure(parse_rational(doc["lo"]), parse_rational(doc["hi"]),
                         int(doc["level"]))


def exact_log2(x: Fraction) -> int | None:
    """Return k when x == 2**k exactly, else None."""
    n, d = x.numerator, x.denominator
    if n <= 0:
        return None
    if d == 1 and n & (n - 1) == 0:
        return n.bit_length() - 1
    if n == 1 and d & (d - 1) == 0:
        return -(d.bit_length() - 1)
    return None


def floor_log2(x: Fraction) -> int:
    """Largest k with 2**k <= x, for x > 0."""
    if x <= 0:
        raise DomainError("floor_log2 requires a positive argument")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** k > x:
        k -= 1
    while Fraction(2) ** (k + 1) <= x:
        k += 1
    return k


def bits_for_width(width: Fraction) -> int:
    """Smallest m >= 0 with 2**-m <= width."""
    if width <= 0:
        raise DomainError("width must be positive")
    m = 0
    while Fraction(1, 1 << m) > width:
        m += 1
    return m


def _extract_log_digits(y: Fraction, m: int, precision: int) -> int | None:
    """Certified binary digits of log2(y) for y in (1, 2).

    Works on an outward-rounded dyadic bracket of y with ``precision``
    fractional bits; squaring doubles the true value's exponent, so the k-th
    comparison against 2 decides the k-th digit.  Returns None when the
    bracket is too wide to certify a digit (caller retries at higher
    precision; log2(y) is irrational here, so retrying terminates).
    """
    scale = 1 << precision
    zlo = (y.numerator * scale) // y.denominator
    zhi = -((-y.numerator * scale) // y.denominator)
    digits = 0
    for _ in range(m):
        zlo = (zlo * zlo) // scale
        zhi = -((-zhi * zhi) // scale)
        two = 2 * scale
        if zhi < two:
            bit = 0
        elif zlo >= two:
            bit = 1
            zlo //= 2
            zhi = (zhi + 1) // 2
        else:
            return None
        digits = (digits << 1) | bit
    return digits


def log2_enclosure(x: Fraction, max_width: Fraction) -> Enclosure:
    """Enclosure of log2(x) with width <= max_width and dyadic endpoints.

    Exact powers of two yield a zero-width enclosure.  Everything else is
    resolved digit by digit through certified comparisons of dyadic powers
    of two against x, so no transcendental routine is trusted.
    """
    x = Fraction(x)
    if x <= 0:
        raise DomainError("log2 requires a positive argument")
    max_width = Fraction(max_width)
    if max_width <= 0:
        raise DomainError("target width must be positive")

    k = exact_log2(x)
    if k is not None:
        return Enclosure.exact(Fraction(k))
    if x < 1:
        return -log2_enclosure(1 / x, max_width)

    m = max(1, bits_for_width(max_width))
    k = floor_log2(x)
    y = x / Fraction(2) ** k
    precision = m + 64
    digits = _extract_log_digits(y, m, precision)
    while digits is None:
        precision *= 2
        digits = _extract_log_digits(y, m, precision)
    lo = k + Fraction(digits, 1 << m)
    return Enclosure(lo, lo + Fraction(1, 1 << m), level=m)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator in the closed interval [lo, hi].

    Ties on denominator are broken by the continued-fraction walk, which is
    deterministic.  Used to pin down exact rational roots once an isolating
    interval is narrow enough.
    """
    if lo > hi:
        raise ValueError("empty interval")
    if hi < 0:
        return -simplest_between(-hi, -lo)
    if lo <= 0:
        return Fraction(0)
    ceil_lo = -((-lo.numerator) // lo.denominator)
    if ceil_lo <= hi:
        return Fraction(ceil_lo)
    whole = lo.numerator // lo.denominator
    frac = simplest_between(1 / (hi - whole), 1 / (lo - whole))
    return whole + 1 / frac
