"""Exact polynomial root machinery over the rationals.

Provides Sturm-sequence isolation and bisection of real roots, exact
detection of rational roots, certified eigenvalue enclosures for symmetric
rational matrices via the characteristic polynomial, and an exact test for
all roots lying strictly inside the unit circle.

Polynomials are tuples of Fractions, low degree first, trailing zeros
stripped.
"""

from __future__ import annotations

from fractions import Fraction

from .enclosure import DomainError, Enclosure, simplest_between
from .linalg import Matrix, char_poly, is_symmetric

Poly = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# basic polynomial arithmetic

def poly_trim(coeffs) -> Poly:
    c = [Fraction(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(p: Poly) -> int:
    return len(p) - 1


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Poly) -> Poly:
    return poly_trim(c * k for k, c in enumerate(p) if k > 0)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return poly_trim(out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        factor = rem[shift + len(b) - 1] * inv
        if factor == 0:
            continue
        quo[shift] = factor
        for j, bj in enumerate(b):
            rem[shift + j] -= factor * bj
    return poly_trim(quo), poly_trim(rem)


def poly_monic(p: Poly) -> Poly:
    if not p:
        return p
    inv = 1 / p[-1]
    return tuple(c * inv for c in p)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def square_free_part(p: Poly) -> Poly:
    if poly_degree(p) < 1:
        return poly_monic(p)
    g = poly_gcd(p, poly_deriv(p))
    q, _ = poly_divmod(p, g)
    return poly_monic(q)


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = prod f_i^i with the f_i square-free and coprime."""
    p = poly_monic(p)
    if poly_degree(p) < 1:
        return []
    dp = poly_deriv(p)
    g = poly_gcd(p, dp)
    b, _ = poly_divmod(p, g)
    c, _ = poly_divmod(dp, g)
    d = _poly_sub(c, poly_deriv(b))
    out: list[tuple[Poly, int]] = []
    i = 1
    while poly_degree(b) > 0:
        a = poly_gcd(b, d)
        if poly_degree(a) > 0:
            out.append((poly_monic(a), i))
        b, _ = poly_divmod(b, a)
        c, _ = poly_divmod(d, a)
        d = _poly_sub(c, poly_deriv(b))
        i += 1
    return out


def _poly_sub(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return poly_trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                     for i in range(n))


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return poly_trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                     for i in range(n))


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation

def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, poly_deriv(p)]
    while seq[-1] and poly_degree(seq[-1]) > 0:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(tuple(-c for c in r))
    if not seq[-1]:
        seq.pop()
    return seq


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(values) -> int:
    signs = [s for s in (_sign(v) for v in values) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_variations_at(seq: list[Poly], x: Fraction) -> int:
    return _variations(poly_eval(p, x) for p in seq)


def count_roots_half_open(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a square-free polynomial."""
    if a >= b:
        return 0
    return sturm_variations_at(seq, a) - sturm_variations_at(seq, b)


def cauchy_root_bound(p: Poly) -> Fraction:
    """Strict bound: every root r satisfies |r| < bound."""
    if poly_degree(p) < 1:
        return Fraction(1)
    lead = abs(p[-1])
    return 1 + max(abs(c) for c in p[:-1]) / lead


def isolate_real_roots(p: Poly):
    """Isolate the distinct real roots of a square-free polynomial.

    Returns (exact_roots, intervals): rational roots hit head-on during
    bisection come back exact, the rest as (lo, hi, poly) with a sign change
    across the interval and exactly one root inside.  ``poly`` is the
    (possibly deflated) polynomial to use for further refinement.
    """
    exact: list[Fraction] = []
    p = poly_monic(p)
    while True:
        if poly_degree(p) < 1:
            return sorted(exact), []
        hit, intervals = _isolate_once(p)
        if hit is None:
            return sorted(exact), [(lo, hi, p) for lo, hi in sorted(intervals)]
        exact.append(hit)
        p, _ = poly_divmod(p, (-hit, Fraction(1)))


def _isolate_once(p: Poly):
    seq = sturm_sequence(p)
    bound = cauchy_root_bound(p)
    intervals: list[tuple[Fraction, Fraction]] = []
    va = sturm_variations_at(seq, -bound)
    vb = sturm_variations_at(seq, bound)
    stack = [(-bound, bound, va, vb)]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count == 0:
            continue
        if count == 1:
            intervals.append((a, b))
            continue
        mid = (a + b) / 2
        if poly_eval(p, mid) == 0:
            return mid, []
        vm = sturm_variations_at(seq, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    return None, intervals


def refine_root_interval(p: Poly, lo: Fraction, hi: Fraction,
                         max_width: Fraction) -> tuple[Fraction, Fraction]:
    """Sign bisection of an isolating interval down to the requested width.

    Collapses to an exact point when a bisection midpoint lands on the root.
    """
    sign_lo = _sign(poly_eval(p, lo))
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        v = poly_eval(p, mid)
        if v == 0:
            return mid, mid
        if sign_lo * _sign(v) < 0:
            hi = mid
        else:
            lo, sign_lo = mid, _sign(v)
    return lo, hi


def _integer_leading_bound(p: Poly) -> int:
    """|leading coefficient| of the primitive integer form of p.

    Any rational root written in lowest terms has a denominator dividing it.
    """
    from math import gcd, lcm
    denom = 1
    for c in p:
        denom = lcm(denom, c.denominator)
    ints = [int(c * denom) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return abs(ints[-1] // (g or 1))


def rational_root_in_interval(p: Poly, lo: Fraction, hi: Fraction):
    """Exact rational root in an isolating interval, or None.

    Refines the interval below the separation radius of rationals whose
    denominator can divide the leading integer coefficient, then checks the
    unique candidate.  Certified either way.
    """
    bmax = _integer_leading_bound(p)
    sep = Fraction(1, 2 * bmax * bmax)
    lo, hi = refine_root_interval(p, lo, hi, sep)
    if lo == hi:
        return lo, (lo, hi)
    cand = simplest_between(lo, hi)
    if cand.denominator <= bmax and poly_eval(p, cand) == 0:
        return cand, (lo, hi)
    return None, (lo, hi)


# ---------------------------------------------------------------------------
# certified eigenvalue enclosures for symmetric rational matrices

class _RootItem:
    __slots__ = ("lo", "hi", "poly", "multiplicity")

    def __init__(self, lo, hi, poly, multiplicity):
        self.lo = lo
        self.hi = hi
        self.poly = poly
        self.multiplicity = multiplicity

    @property
    def exact(self):
        return self.lo == self.hi

    def refine(self, width):
        if not self.exact:
            self.lo, self.hi = refine_root_interval(self.poly, self.lo, self.hi, width)


def real_roots_with_multiplicity(p: Poly) -> list[_RootItem]:
    """All real roots of p as refinable items, rational ones pinned exactly."""
    items: list[_RootItem] = []
    for factor, mult in square_free_decomposition(p):
        exact, intervals = isolate_real_roots(factor)
        for r in exact:
            items.append(_RootItem(r, r, factor, mult))
        for lo, hi, poly in intervals:
            root, (lo, hi) = rational_root_in_interval(poly, lo, hi)
            if root is not None:
                items.append(_RootItem(root, root, poly, mult))
            else:
                items.append(_RootItem(lo, hi, poly, mult))
    return items


def _separate_items(items: list[_RootItem]) -> None:
    changed = True
    while changed:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                if a.lo <= b.hi and b.lo <= a.hi:
                    width = max(a.hi - a.lo, b.hi - b.lo) / 4
                    a.refine(width)
                    b.refine(width)
                    changed = True


def symmetric_eigenvalue_enclosures(m: Matrix, max_width: Fraction) -> list[Enclosure]:
    """Disjoint enclosures covering the spectrum of a symmetric matrix.

    One enclosure per eigenvalue counting multiplicity, sorted by lower
    endpoint, each of width <= max_width; rational eigenvalues come back as
    zero-width intervals.  Characteristic-polynomial coefficients, Sturm
    isolation and bisection are all exact.
    """
    if not is_symmetric(m):
        raise DomainError("eigenvalue enclosures require an exactly symmetric matrix")
    max_width = Fraction(max_width)
    if max_width <= 0:
        raise DomainError("target width must be positive")
    p = char_poly(m)
    items = real_roots_with_multiplicity(p)
    if sum(it.multiplicity for it in items) != len(m):
        raise RuntimeError("symmetric matrix with non-real spectrum detected")
    for it in items:
        it.refine(max_width)
    _separate_items(items)
    out: list[Enclosure] = []
    for it in sorted(items, key=lambda it: (it.lo, it.hi)):
        enc = Enclosure(it.lo, it.hi)
        out.extend([enc] * it.multiplicity)
    return out


# ---------------------------------------------------------------------------
# exact Schur stability (all roots strictly inside the unit circle)

def _pair_remainder(g: Poly):
    """Remainder of g modulo x^2 - s*x + q as bivariate polynomials in (s, q).

    Returns (r1, r0) with g = Q*(x^2 - s x + q) + r1(s,q)*x + r0(s,q).
    Bivariate polynomials are dicts {(deg_s, deg_q): coeff}.
    """
    u = {}
    v = {(0, 0): Fraction(1)}  # x^0 = 0*x + 1
    r1: dict = {}
    r0: dict = {}

    def add_into(dst, src, coeff):
        for key, val in src.items():
            dst[key] = dst.get(key, Fraction(0)) + coeff * val
            if dst[key] == 0:
                del dst[key]

    for k, a_k in enumerate(g):
        if a_k != 0:
            add_into(r1, u, a_k)
            add_into(r0, v, a_k)
        # advance: x^(k+1) = (s*u + v) x - q*u
        nu: dict = {}
        for (ds, dq), val in u.items():
            nu[(ds + 1, dq)] = nu.get((ds + 1, dq), Fraction(0)) + val
        for key, val in v.items():
            nu[key] = nu.get(key, Fraction(0)) + val
            if nu[key] == 0:
                del nu[key]
        nv = {(ds, dq + 1): -val for (ds, dq), val in u.items()}
        u, v = nu, nv
    return r1, r0


def _bivar_to_s_poly(biv: dict, q: Fraction) -> Poly:
    """Specialize the q variable, returning a univariate polynomial in s."""
    if not biv:
        return ()
    out = [Fraction(0)] * (max(ds for ds, _ in biv) + 1)
    for (ds, dq), val in biv.items():
        out[ds] += val * q ** dq
    return poly_trim(out)


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    rows = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return det


def _sylvester_resultant(a: Poly, b: Poly, deg_a: int, deg_b: int) -> Fraction:
    """Resultant via the Sylvester determinant at fixed generic degrees."""
    n = deg_a + deg_b
    rows = []
    ac = list(a) + [Fraction(0)] * (deg_a + 1 - len(a))
    bc = list(b) + [Fraction(0)] * (deg_b + 1 - len(b))
    for i in range(deg_b):
        row = [Fraction(0)] * n
        for j, c in enumerate(reversed(ac)):
            row[i + j] = c
        rows.append(row)
    for i in range(deg_a):
        row = [Fraction(0)] * n
        for j, c in enumerate(reversed(bc)):
            row[i + j] = c
        rows.append(row)
    return _det_fraction(rows)


def _interpolate(points: list[tuple[Fraction, Fraction]]) -> Poly:
    """Lagrange interpolation through exact points."""
    result: Poly = ()
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        term: Poly = (yi,)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            factor = 1 / (xi - xj)
            term = poly_mul(term, (-xj * factor, factor))
        result = _poly_add(result, term)
    return result


def pair_product_poly(g: Poly) -> Poly:
    """Polynomial in q vanishing at every product of two distinct roots of g.

    In particular every complex-conjugate pair contributes its squared
    modulus as a real root, and any real root q* >= 1 certifies a pair of
    roots of g whose moduli multiply to at least one.
    """
    d = poly_degree(g)
    if d < 2:
        return (Fraction(1),)
    g = poly_monic(g)
    r1, r0 = _pair_remainder(g)
    deg_s_r1 = d - 1
    deg_s_r0 = d - 2
    num_points = d * d + 2
    points = []
    for k in range(1, num_points + 1):
        q = Fraction(k)
        a = _bivar_to_s_poly(r1, q)
        b = _bivar_to_s_poly(r0, q)
        points.append((q, _sylvester_resultant(a, b, deg_s_r1, deg_s_r0)))
    phi = _interpolate(points)
    if not phi:
        raise RuntimeError("degenerate pair-product polynomial")
    return phi


def schur_stable(p: Poly) -> bool:
    """True iff every root of p (real or complex) satisfies |root| < 1.

    Exact decision: rational/irrational real roots via Sturm counts outside
    (-1, 1); complex pairs via real roots >= 1 of the pair-product
    polynomial, whose roots are products of root pairs of p.
    """
    p = poly_trim(p)
    if poly_degree(p) < 1:
        return True
    g = square_free_part(p)
    while g and g[0] == 0:  # roots at the origin are stable
        g = poly_trim(g[1:])
    if poly_degree(g) < 1:
        return True
    if poly_eval(g, Fraction(1)) == 0 or poly_eval(g, Fraction(-1)) == 0:
        return False
    seq = sturm_sequence(g)
    bound = cauchy_root_bound(g)
    if bound > 1:
        if count_roots_half_open(seq, Fraction(1), bound) > 0:
            return False
        if count_roots_half_open(seq, -bound, Fraction(-1)) > 0:
            return False
    if poly_degree(g) >= 2:
        phi = square_free_part(pair_product_poly(g))
        if poly_eval(phi, Fraction(1)) == 0:
            return False
        phi_seq = sturm_sequence(phi)
        phi_bound = cauchy_root_bound(phi)
        if phi_bound > 1 and count_roots_half_open(phi_seq, Fraction(1), phi_bound) > 0:
            return False
    return True
