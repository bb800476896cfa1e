from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certcap.enclosure import (DomainError, Enclosure, log2_enclosure,
                               parse_rational, rational_str, simplest_between)

mpmath.mp.dps = 60


def oracle_log2(x: Fraction) -> mpmath.mpf:
    return mpmath.log(mpmath.mpf(x.numerator) / x.denominator, 2)


def test_exact_power_of_two():
    enc = log2_enclosure(Fraction(4), Fraction(1, 1024))
    assert enc.lo == enc.hi == 2


def test_log2_one_is_zero():
    enc = log2_enclosure(Fraction(1), Fraction(1))
    assert enc.lo == enc.hi == 0


def test_log2_of_5_halves_matches_oracle():
    width = Fraction(1, 2 ** 20)
    enc = log2_enclosure(Fraction(5, 2), width)
    assert enc.width <= width
    value = oracle_log2(Fraction(5, 2))
    assert mpmath.mpf(enc.lo.numerator) / enc.lo.denominator <= value
    assert value <= mpmath.mpf(enc.hi.numerator) / enc.hi.denominator


def test_nonpositive_rejected():
    with pytest.raises(DomainError):
        log2_enclosure(Fraction(0), Fraction(1, 2))
    with pytest.raises(DomainError):
        log2_enclosure(Fraction(-3), Fraction(1, 2))
    with pytest.raises(DomainError):
        log2_enclosure(Fraction(3), Fraction(0))


positive_rationals = st.fractions(min_value=Fraction(1, 500), max_value=500) \
    .filter(lambda f: f > 0)


@given(x=positive_rationals, bits=st.integers(min_value=1, max_value=10))
def test_certificate_checks_by_exact_powers(x, bits):
    # dyadic endpoints let the containment be verified with exact integer
    # powers: 2**lo <= x <= 2**hi  <=>  2**(lo*2^m) <= x**(2^m)
    enc = log2_enclosure(x, Fraction(1, 2 ** bits))
    for endpoint, should_be_below in ((enc.lo, True), (enc.hi, False)):
        m = endpoint.denominator.bit_length() - 1
        lhs = Fraction(2) ** endpoint.numerator
        rhs = x ** (1 << m)
        if should_be_below:
            assert lhs <= rhs
        else:
            assert lhs >= rhs


@given(x=positive_rationals)
@settings(max_examples=50)
def test_refinements_are_nested(x):
    widths = [Fraction(1, 2 ** k) for k in (2, 5, 9, 14)]
    encs = [log2_enclosure(x, w) for w in widths]
    for outer, inner in zip(encs, encs[1:]):
        assert outer.lo <= inner.lo and inner.hi <= outer.hi
        assert inner.width <= outer.width


@given(x=positive_rationals)
@settings(max_examples=50)
def test_reciprocal_negates(x):
    enc = log2_enclosure(x, Fraction(1, 256))
    rec = log2_enclosure(1 / x, Fraction(1, 256))
    assert rec.lo == -enc.hi and rec.hi == -enc.lo


def test_near_power_of_two_triggers_precision_retry():
    # a continued-fraction convergent of sqrt(2) puts log2(x) within ~2^-150
    # of the dyadic value 1/2, forcing the digit extraction to retry at
    # higher internal precision; the result must still be a correct bracket
    p, q = 1, 1
    while q.bit_length() < 80:
        p, q = p + 2 * q, p + q  # convergents of sqrt(2)
    x = Fraction(p, q)
    assert abs(p * p - 2 * q * q) == 1
    enc = log2_enclosure(x, Fraction(1, 2 ** 8))
    assert enc.width <= Fraction(1, 2 ** 8)
    assert enc.lo <= Fraction(1, 2) <= enc.hi
    # and the exact-power certificate still holds at these endpoints
    for endpoint, below in ((enc.lo, True), (enc.hi, False)):
        m = endpoint.denominator.bit_length() - 1
        lhs = Fraction(2) ** endpoint.numerator
        rhs = x ** (1 << m)
        assert (lhs <= rhs) if below else (lhs >= rhs)


def test_enclosure_invariants():
    with pytest.raises(ValueError):
        Enclosure(Fraction(1), Fraction(0))
    e = Enclosure(Fraction(1, 3), Fraction(1, 2))
    assert e.contains(Fraction(2, 5))
    assert not e.contains(Fraction(3, 5))
    assert (-e).lo == Fraction(-1, 2)
    assert (e + e).hi == Fraction(1)
    assert e.scaled(Fraction(-2)).lo == Fraction(-1)
    assert Enclosure.from_json(e.to_json()) == e


def test_rational_parsing():
    assert parse_rational("5/2") == Fraction(5, 2)
    assert parse_rational("-3") == Fraction(-3)
    assert rational_str(Fraction(10, 4)) == "5/2"
    for bad in ("0.5", "5/0", "a/b", "1/-2", ""):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_simplest_between():
    assert simplest_between(Fraction(21, 64), Fraction(11, 32)) == Fraction(1, 3)
    assert simplest_between(Fraction(-1, 3), Fraction(1, 7)) == 0
    assert simplest_between(Fraction(5, 2), Fraction(7, 2)) == 3
    assert simplest_between(Fraction(-11, 32), Fraction(-21, 64)) == Fraction(-1, 3)


@given(lo=st.fractions(min_value=-50, max_value=50),
       width=st.fractions(min_value=Fraction(1, 10 ** 6), max_value=2))
@settings(max_examples=100, deadline=None)
def test_simplest_between_is_in_interval_and_minimal(lo, width):
    import math
    hi = lo + width
    best = simplest_between(lo, hi)
    assert lo <= best <= hi
    # nothing with a strictly smaller denominator fits in the interval
    # (spot-check small denominators; full sweep would be quadratic)
    for q in range(1, min(best.denominator, 300)):
        candidate = Fraction(math.ceil(lo * q), q)
        assert candidate > hi or candidate < lo
