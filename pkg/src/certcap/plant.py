"""Plant descriptions and certified structural analysis.

The instability exponent is computed through the symmetric Gram matrix
A A^T (half the clamped log-spectrum), which keeps the whole pipeline inside
the certified symmetric eigenvalue machinery.  Detectability and
stabilizability are decided exactly: the unobservable (resp. uncontrollable)
subspace is computed over the rationals and its induced dynamics are put
through an exact all-roots-inside-the-unit-circle test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .enclosure import DomainError, Enclosure, log2_enclosure, parse_rational, rational_str
from .linalg import (Matrix, as_matrix, char_poly, gram, is_square, kernel_basis,
                     mat_mul, restrict_to_invariant, transpose)
from .roots import schur_stable, symmetric_eigenvalue_enclosures

DEFAULT_ETA_WIDTH = Fraction(1, 1 << 30)


class PlantFormatError(ValueError):
    """Plant document fails the schema or shape checks."""


@dataclass(frozen=True)
class Plant:
    a: Matrix
    c: Matrix | None = None
    b: Matrix | None = None
    disturbance_bound: Fraction | None = None

    def __post_init__(self):
        if not is_square(self.a):
            raise PlantFormatError("A must be square")
        n = len(self.a)
        if self.c is not None and any(len(row) != n for row in self.c):
            raise PlantFormatError("C must have n columns")
        if self.b is not None and len(self.b) != n:
            raise PlantFormatError("B must have n rows")
        if self.disturbance_bound is not None and self.disturbance_bound < 0:
            raise PlantFormatError("disturbance bound must be >= 0")

    @property
    def dim(self) -> int:
        return len(self.a)

    def to_json(self) -> dict:
        doc = {"A": [[rational_str(v) for v in row] for row in self.a]}
        if self.c is not None:
            doc["C"] = [[rational_str(v) for v in row] for row in self.c]
        if self.b is not None:
            doc["B"] = [[rational_str(v) for v in row] for row in self.b]
        if self.disturbance_bound is not None:
            doc["D"] = rational_str(self.disturbance_bound)
        return doc


def load_plant(doc) -> Plant:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise PlantFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "A" not in doc:
        raise PlantFormatError("plant document must be an object with an A matrix")

    def mat(key):
        if key not in doc or doc[key] is None:
            return None
        return as_matrix([[parse_rational(v) for v in row] for row in doc[key]])

    bound = parse_rational(doc["D"]) if "D" in doc else None
    return Plant(mat("A"), c=mat("C"), b=mat("B"), disturbance_bound=bound)


def instability_exponent(a: Matrix, max_width: Fraction = DEFAULT_ETA_WIDTH) -> Enclosure:
    """Enclosure of the data rate generated by the plant's unstable part.

    Half the sum of log2 of the Gram spectrum of A clamped below at one.
    The clamp makes the quantity continuous where an eigenvalue sits exactly
    on the unit circle, so no special casing is needed there; a matrix whose
    Gram spectrum is certified below one yields exactly zero.
    """
    a = as_matrix(a)
    max_width = Fraction(max_width)
    if max_width <= 0:
        raise DomainError("target width must be positive")
    n = len(a)
    eig_width = max_width / (2 * n)
    log_width = max_width / (8 * n)
    spectrum = symmetric_eigenvalue_enclosures(gram(a), eig_width)
    total = Enclosure.exact(Fraction(0))
    one = Fraction(1)
    for enc in spectrum:
        lo = max(one, enc.lo)
        hi = max(one, enc.hi)
        if hi == one:
            continue
        lo_log = Enclosure.exact(Fraction(0)) if lo == one else log2_enclosure(lo, log_width)
        hi_log = log2_enclosure(hi, log_width)
        total = total + Enclosure(lo_log.lo, hi_log.hi)
    result = total.scaled(Fraction(1, 2))
    if result.width > max_width:
        raise RuntimeError("width budget violated in exponent assembly")
    return result


def is_unstable(a: Matrix, rounds: int = 8) -> str:
    """"yes" / "no" / "undetermined" stability classification.

    Tests the Gram spectrum against one: certified above on some eigenvalue
    (including exact hits, which the root machinery pins) means unstable,
    certified below on all means stable.  The budget is a number of
    width-halving rounds; a boundary eigenvalue that stays unresolved within
    it yields "undetermined".
    """
    a = as_matrix(a)
    width = Fraction(1, 16)
    one = Fraction(1)
    for _ in range(max(1, rounds)):
        spectrum = symmetric_eigenvalue_enclosures(gram(a), width)
        if any(enc.lo >= one for enc in spectrum):
            return "yes"
        if all(enc.hi < one for enc in spectrum):
            return "no"
        undecided = [enc for enc in spectrum if enc.lo < one <= enc.hi]
        if all(enc.is_exact for enc in undecided):
            return "yes" if any(enc.lo == one for enc in undecided) else "no"
        width /= 16
    return "undetermined"


def _unobservable_basis(a: Matrix, c: Matrix):
    n = len(a)
    rows = [list(row) for row in c]
    power = c
    for _ in range(n - 1):
        power = mat_mul(power, a)
        rows.extend(list(row) for row in power)
    return kernel_basis(as_matrix(rows))


def is_detectable(a: Matrix, c: Matrix) -> bool:
    """Every mode outside the open unit circle is visible to the sensor map.

    Equivalent to the per-eigenvalue rank condition [A - zI; C] full rank at
    all |z| >= 1: the rank drops exactly at eigenvalues of A restricted to
    the unobservable subspace, so it suffices to decide Schur stability of
    that restriction, which is exact rational work.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    basis = _unobservable_basis(a, c)
    if not basis:
        return True
    restriction = restrict_to_invariant(a, basis)
    return schur_stable(char_poly(restriction))


def is_stabilizable(a: Matrix, b: Matrix) -> bool:
    """Every mode outside the open unit circle is reachable from the inputs."""
    return is_detectable(transpose(as_matrix(a)), transpose(as_matrix(b)))
