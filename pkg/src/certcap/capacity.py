"""Channel capacity quantities with exact or certified-interval results.

Three quantities live here: the feedback zero-error capacity through
Shannon's minimax over output support masses (an exact rational LP), a
monotone upper-bound ladder for that quantity on stream channels, and
two-sided certified bounds on the ordinary capacity via alternating
optimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .channel import Channel, SupportCertificate, certify_support
from .confgraph import confusability_graph, is_zero_capacity
from .enclosure import DomainError, Enclosure, log2_enclosure, rational_str
from .linprog import LinearProgram, solve_lp

DEFAULT_C0FB_WIDTH = Fraction(1, 1 << 20)


@dataclass(frozen=True)
class MinimaxSolution:
    """Value and optimizers of min over inputs dists of the worst output mass."""

    value: Fraction
    distribution: tuple[Fraction, ...]
    # dual weights over the output constraints; they certify the value from
    # below, which is the direction the feedback capacity bound needs
    output_weights: tuple[Fraction, ...]
    support_sets: tuple[tuple[int, ...], ...]


def minimax_support_mass(ch: Channel, cert: SupportCertificate | None = None) -> MinimaxSolution:
    """Smallest achievable worst-output support mass, exactly.

    The inner quantity for output y is the total input probability placed on
    inputs that can reach y; minimizing the maximum over y is the LP solved
    here.  With ``cert`` given, only proven-positive entries count, which on
    partial support can only shrink the value (sound for upper bounds on the
    feedback zero-error capacity).
    """
    if cert is None:
        if not ch.is_exact:
            raise DomainError("stream channels need an explicit support certificate")
        cert = certify_support(ch, 0)
    nx, ny = len(ch.inputs), len(ch.outputs)
    support_sets = tuple(tuple(x for x in range(nx) if (x, y) in cert.positive)
                         for y in range(ny))
    if all(not s for s in support_sets):
        return MinimaxSolution(Fraction(0), (Fraction(1),) + (Fraction(0),) * (nx - 1),
                               (Fraction(0),) * ny, support_sets)
    names = [f"p{x}" for x in range(nx)] + ["t"]
    lp = LinearProgram("min", names, {"t": 1})
    lp.add({f"p{x}": 1 for x in range(nx)}, "=", 1)
    for x in range(nx):
        lp.add({f"p{x}": 1}, ">=", 0)
    constraint_outputs = []
    for y in range(ny):
        if support_sets[y]:
            coeffs = {f"p{x}": Fraction(1) for x in support_sets[y]}
            coeffs["t"] = Fraction(-1)
            lp.add(coeffs, "<=", 0)
            constraint_outputs.append(y)
    sol = solve_lp(lp)
    dist = tuple(sol.assignment[f"p{x}"] for x in range(nx))
    weights = [Fraction(0)] * ny
    for idx, y in enumerate(constraint_outputs):
        weights[y] = -sol.dual[1 + nx + idx]  # <=-row duals are nonpositive here
    return MinimaxSolution(sol.optimum, dist, tuple(weights), support_sets)


def verify_minimax_lower_bound(solution: MinimaxSolution, value: Fraction) -> bool:
    """Re-check from raw rationals that the minimax value is >= value.

    Independent of the simplex path: the output weights must be a convex
    combination, and for every input the weighted count of constraints it
    appears in must reach value (then any distribution pays at least value).
    """
    w = solution.output_weights
    if any(x < 0 for x in w) or sum(w) != 1:
        return False
    nx = len(solution.distribution)
    for x in range(nx):
        covered = sum(w[y] for y, s in enumerate(solution.support_sets) if x in s)
        if covered < value:
            return False
    return True


@dataclass(frozen=True)
class FeedbackCapacity:
    """Feedback zero-error capacity: exact symbolic form plus an enclosure."""

    zero_capacity: bool
    inverse_mass: Fraction  # capacity = log2 of this (1 when zero_capacity)
    enclosure: Enclosure
    minimax: MinimaxSolution | None

    def to_json(self) -> dict:
        return {"exact_inverse_psi": rational_str(self.inverse_mass),
                "zero_capacity": self.zero_capacity,
                "enclosure": self.enclosure.to_json()}


def feedback_zero_error_capacity(ch: Channel,
                                 max_width: Fraction = DEFAULT_C0FB_WIDTH) -> FeedbackCapacity:
    """Shannon's feedback zero-error capacity of an exact channel.

    Zero exactly when the confusability graph is complete; otherwise
    log2(1/mass) with the exact rational 1/mass retained so comparisons can
    be refined later to any precision.
    """
    if not ch.is_exact:
        raise DomainError("exact channel required; use the minimax ladder for streams")
    cert = certify_support(ch, 0)
    graph = confusability_graph(cert, ch.inputs, len(ch.outputs))
    if is_zero_capacity(graph):
        return FeedbackCapacity(True, Fraction(1), Enclosure.exact(Fraction(0)), None)
    sol = minimax_support_mass(ch, cert)
    inverse = 1 / sol.value
    return FeedbackCapacity(False, inverse, log2_enclosure(inverse, max_width), sol)


@dataclass(frozen=True)
class MinimaxRung:
    level: int
    support_size: int
    mass: Fraction
    upper: Enclosure | None  # enclosure of log2(1/mass); None while mass == 0
    solution: MinimaxSolution


@dataclass(frozen=True)
class MinimaxLadder:
    """Monotone support-refinement ladder for stream channels.

    Proven support only grows with the level, so the minimax mass is
    nondecreasing and log2(1/mass) is a valid upper bound on the feedback
    zero-error capacity that converges downward as entries resolve.
    """

    rungs: tuple = ()

    @property
    def last(self) -> MinimaxRung | None:
        return self.rungs[-1] if self.rungs else None

    @property
    def best_upper(self) -> Enclosure | None:
        return self.last.upper if self.rungs else None


def minimax_ladder_step(ch: Channel, level: int, ladder: MinimaxLadder, *,
                        width: Fraction = DEFAULT_C0FB_WIDTH) -> MinimaxLadder:
    last = ladder.last
    if last is not None and level <= last.level:
        raise DomainError("ladder levels must increase")
    cert = certify_support(ch, level)
    sol = minimax_support_mass(ch, cert)
    if last is not None and sol.value < last.mass:
        raise RuntimeError("support refinement decreased the minimax mass")
    upper = None if sol.value == 0 else log2_enclosure(1 / sol.value, width)
    rung = MinimaxRung(level, len(cert.positive), sol.value, upper, sol)
    return MinimaxLadder(ladder.rungs + (rung,))


# ---------------------------------------------------------------------------
# ordinary capacity: alternating optimization with certified two-sided bounds

@dataclass(frozen=True)
class ShannonBounds:
    lower: Enclosure
    upper: Enclosure
    iterations: int
    input_distribution: tuple[Fraction, ...]

    @property
    def gap(self) -> Fraction:
        return self.upper.hi - self.lower.lo

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json(),
                "iterations": self.iterations,
                "input_distribution": [rational_str(p) for p in self.input_distribution]}


def certified_capacity_bounds(rows, dist, log_width):
    """Mutual information and worst relative-entropy enclosures at one dist.

    Both are valid capacity bounds for any input distribution: the mutual
    information from below, the largest divergence of a row from the output
    marginal from above.
    """
    ny = len(rows[0])
    marginal = [sum(dist[x] * rows[x][y] for x in range(len(rows)))
                for y in range(ny)]
    for y in range(ny):
        if marginal[y] == 0 and any(row[y] > 0 for row in rows):
            raise DomainError(
                "distribution assigns zero mass to a reachable output; "
                "the divergence upper bound would be vacuous")
    info = Enclosure.exact(Fraction(0))
    per_input = []
    for x, row in enumerate(rows):
        div = Enclosure.exact(Fraction(0))
        for y, w in enumerate(row):
            if w == 0:
                continue
            term = log2_enclosure(w / marginal[y], log_width)
            div = div + term.scaled(w)
        per_input.append(div)
        if dist[x] > 0:
            info = info + div.scaled(dist[x])
    upper = Enclosure(max(d.lo for d in per_input), max(d.hi for d in per_input))
    return info, upper


def _float_step(rows, dist):
    """Heuristic alternating-optimization update; certification never trusts it."""
    nx, ny = len(rows), len(rows[0])
    p = [float(v) for v in dist]
    q = [sum(p[x] * float(rows[x][y]) for x in range(nx)) for y in range(ny)]
    logs = []
    for x in range(nx):
        acc = 0.0
        for y in range(ny):
            w = float(rows[x][y])
            if w > 0 and q[y] > 0:
                acc += w * math.log2(w / q[y])
        logs.append(acc)
    peak = max(logs)
    weights = [p[x] * (2.0 ** (logs[x] - peak)) for x in range(nx)]
    total = sum(weights)
    return [w / total for w in weights]


def next_distribution(rows, dist, grid_bits=40):
    """One heuristic update snapped to a positive rational distribution.

    The snap keeps entries strictly positive (so output marginals never
    vanish on reachable outputs) and renormalizes exactly.
    """
    weights = _float_step(rows, dist)
    scale = 1 << grid_bits
    nums = [max(1, round(w * scale)) for w in weights]
    total = sum(nums)
    return tuple(Fraction(v, total) for v in nums)


def shannon_capacity(ch: Channel, tolerance, *, max_iterations: int = 100_000) -> ShannonBounds:
    """Certified bracket [lower.lo, upper.hi] around the channel capacity.

    The input distribution evolves by the classic alternating-optimization
    update in floating point, but every reported bound is recomputed in
    exact rational arithmetic with interval log2 terms, so the bracket is
    sound regardless of how the iteration behaves.  Stops once the certified
    gap is within tolerance.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")
    if not ch.is_exact:
        raise DomainError("exact channel required")
    rows = ch.rows
    nx, ny = len(ch.inputs), len(ch.outputs)
    terms = nx * ny + nx + 4
    log_width = tolerance / (8 * terms)
    dist = tuple(Fraction(1, nx) for _ in range(nx))
    best_lower: Enclosure | None = None
    best_upper: Enclosure | None = None
    best_dist = dist
    iterations = 0
    while True:
        iterations += 1
        lower, upper = certified_capacity_bounds(rows, dist, log_width)
        if best_lower is None or lower.lo > best_lower.lo:
            best_lower, best_dist = lower, dist
        if best_upper is None or upper.hi < best_upper.hi:
            best_upper = upper
        if best_upper.hi - best_lower.lo <= tolerance:
            break
        if iterations >= max_iterations:
            raise RuntimeError(
                f"no certified gap <= {tolerance} within {max_iterations} iterations")
        dist = next_distribution(rows, dist)
    return ShannonBounds(best_lower, best_upper, iterations, best_dist)
