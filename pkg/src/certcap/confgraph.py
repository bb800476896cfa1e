"""Confusability graphs, strong powers, exact independence numbers, and the
monotone lower-bound ladder for zero-error rates.

Adjacency is stored as one bitmask per vertex, which keeps the
branch-and-bound solver allocation-free and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .channel import ResourceCapError, SupportCertificate
from .enclosure import Enclosure, log2_enclosure

DEFAULT_VERTEX_CAP = 4096
DEFAULT_NODE_BUDGET = 200_000
DEFAULT_RATE_WIDTH = Fraction(1, 1 << 16)


class LadderError(ValueError):
    """The ladder refused an unsound extension."""


@dataclass(frozen=True)
class ConfusabilityGraph:
    """Vertices are channel inputs; edges join inputs some output can confuse.

    ``conservative`` marks graphs whose edge set may overestimate the true
    one because unresolved support entries were treated as positive; such
    graphs are unusable for certified independence lower bounds.
    """

    vertices: tuple
    adjacency: tuple[int, ...]  # bitmask of neighbours per vertex index
    level: int = 0
    conservative: bool = False

    def __post_init__(self):
        n = len(self.vertices)
        for i, mask in enumerate(self.adjacency):
            if mask >> n:
                raise ValueError("adjacency mask outside vertex range")
            if mask & (1 << i):
                raise ValueError("self-loop in confusability graph")
        for i in range(n):
            for j in range(i + 1, n):
                if bool(self.adjacency[i] & (1 << j)) != bool(self.adjacency[j] & (1 << i)):
                    raise ValueError("adjacency must be symmetric")

    def __len__(self) -> int:
        return len(self.vertices)

    def are_adjacent(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] & (1 << j))

    def is_complete(self) -> bool:
        n = len(self.vertices)
        full = (1 << n) - 1
        return all(self.adjacency[i] | (1 << i) == full for i in range(n))

    def is_independent(self, indices) -> bool:
        indices = list(indices)
        return all(not self.are_adjacent(a, b)
                   for k, a in enumerate(indices) for b in indices[k + 1:])


def confusability_graph(cert: SupportCertificate, inputs: tuple,
                        n_outputs: int) -> ConfusabilityGraph:
    """Graph on the channel inputs from a support certificate.

    Two inputs are joined when some output is proven positive under both;
    if a potential shared output involves an unresolved entry the edge is
    added too and the result is flagged conservative.
    """
    n = len(inputs)
    maybe_positive = cert.positive | cert.unresolved
    adjacency = [0] * n
    conservative = False
    for i in range(n):
        for j in range(i + 1, n):
            definite = any((i, y) in cert.positive and (j, y) in cert.positive
                           for y in range(n_outputs))
            if definite:
                edge = True
            else:
                possible = any((i, y) in maybe_positive and (j, y) in maybe_positive
                               for y in range(n_outputs))
                edge = possible
                if possible:
                    conservative = True
            if edge:
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
    return ConfusabilityGraph(tuple(inputs), tuple(adjacency),
                              level=cert.level, conservative=conservative)


def strong_power(g: ConfusabilityGraph, n: int,
                 cap: int = DEFAULT_VERTEX_CAP) -> ConfusabilityGraph:
    """n-th strong power: tuples adjacent iff equal-or-adjacent coordinatewise."""
    if n < 1:
        raise ValueError("power must be >= 1")
    size = len(g) ** n
    if size > cap:
        raise ResourceCapError(f"{size} vertices exceed the cap of {cap}")
    base = len(g)
    tuples = list(product(range(base), repeat=n))
    index = {t: k for k, t in enumerate(tuples)}
    adjacency = [0] * size
    for a_idx, a in enumerate(tuples):
        for b_idx in range(a_idx + 1, size):
            b = tuples[b_idx]
            ok = all(x == y or g.are_adjacent(x, y) for x, y in zip(a, b))
            if ok:
                adjacency[a_idx] |= 1 << b_idx
                adjacency[b_idx] |= 1 << a_idx
    vertices = tuple(tuple(g.vertices[i] for i in t) for t in tuples)
    return ConfusabilityGraph(vertices, tuple(adjacency),
                              level=g.level, conservative=g.conservative)


def is_zero_capacity(g: ConfusabilityGraph) -> bool:
    """True iff no two inputs are ever distinguishable (complete graph)."""
    if g.conservative:
        raise LadderError("zero-capacity test needs an exact graph")
    return g.is_complete()


@dataclass(frozen=True)
class IndependenceResult:
    alpha: int
    witness: tuple  # vertex labels
    exact: bool     # False when the node budget cut the search short


def max_independent_set(g: ConfusabilityGraph, *,
                        node_budget: int | None = None,
                        seed_witness: tuple = (),
                        vertex_cap: int = DEFAULT_VERTEX_CAP) -> IndependenceResult:
    """Exact maximum independent set by branch and bound.

    Runs as a maximum-clique search on the complement with a greedy-colouring
    bound and degree ordering.  ``seed_witness`` (vertex labels) primes the
    incumbent, and ``node_budget`` caps the search; when the budget runs out
    the best set found is returned flagged as a lower bound only.
    """
    n = len(g)
    if n > vertex_cap:
        raise ResourceCapError(f"{n} vertices exceed the cap of {vertex_cap}")
    if n == 0:
        return IndependenceResult(0, (), True)
    full = (1 << n) - 1
    comp = [(~g.adjacency[i]) & full & ~(1 << i) for i in range(n)]

    label_index = {v: i for i, v in enumerate(g.vertices)}
    best_mask = 0
    for label in seed_witness:
        best_mask |= 1 << label_index[label]
    if not g.is_independent(i for i in range(n) if best_mask >> i & 1):
        raise ValueError("seed witness is not independent")
    best = [best_mask.bit_count(), best_mask]

    order = sorted(range(n), key=lambda v: (-comp[v].bit_count(), v))
    nodes = [node_budget if node_budget is not None else -1]
    exact = [True]

    def expand(candidates: int, size: int, mask: int) -> None:
        if nodes[0] == 0:
            exact[0] = False
            return
        if nodes[0] > 0:
            nodes[0] -= 1
        # greedy colouring of the candidate set for the pruning bound
        colour_of: list[tuple[int, int]] = []  # (vertex, colour) in paint order
        rest = candidates
        colour = 0
        while rest:
            colour += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                colour_of.append((v, colour))
                avail &= ~comp[v]
                avail &= ~(1 << v)
                rest &= ~(1 << v)
        for v, colour in reversed(colour_of):
            if size + colour <= best[0]:
                return
            new_mask = mask | (1 << v)
            new_candidates = candidates & comp[v]
            if new_candidates:
                expand(new_candidates, size + 1, new_mask)
                if nodes[0] == 0 and not exact[0]:
                    return
            elif size + 1 > best[0]:
                best[0] = size + 1
                best[1] = new_mask
            candidates &= ~(1 << v)

    start = 0
    for v in order:
        start |= 1 << v
    expand(start, 0, 0)

    witness_idx = sorted(i for i in range(n) if best[1] >> i & 1)
    witness = tuple(g.vertices[i] for i in witness_idx)
    if not g.is_independent(witness_idx):
        raise RuntimeError("solver produced a dependent witness")
    return IndependenceResult(best[0], witness, exact[0])


@dataclass(frozen=True)
class LadderRung:
    n: int
    alpha: int
    witness: tuple
    rate_lo: Enclosure  # encloses log2(alpha)/n
    exact: bool

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": self.alpha,
                "rate_lo_lo": str(self.rate_lo.lo), "rate_lo_hi": str(self.rate_lo.hi),
                "witness": [list(v) if isinstance(v, tuple) else v
                            for v in self.witness],
                "exact": self.exact}


@dataclass(frozen=True)
class CapacityLadder:
    """Monotone lower-bound ladder for the zero-error rate of a graph.

    running_best tracks the rung with the largest certified lower endpoint;
    because every witness is a genuine zero-error code, every rung is sound
    and the supremum characterization makes the running maximum the right
    report (per-rung normalized rates need not be monotone).
    """

    rungs: tuple = ()
    running_best: Enclosure | None = None

    def recorded(self, n: int) -> LadderRung | None:
        return next((r for r in self.rungs if r.n == n), None)

    def to_json(self) -> dict:
        doc = {"rungs": [r.to_json() for r in self.rungs]}
        if self.running_best is not None:
            doc["running_best"] = self.running_best.to_json()
        return doc


def extend_ladder(ladder: CapacityLadder, g: ConfusabilityGraph, n: int, *,
                  rate_width: Fraction = DEFAULT_RATE_WIDTH,
                  node_budget: int | None = DEFAULT_NODE_BUDGET,
                  vertex_cap: int = DEFAULT_VERTEX_CAP) -> CapacityLadder:
    """Append rung n: alpha of the n-th strong power plus its rate enclosure.

    Refuses conservative graphs: a witness over uncertain support is not a
    certified zero-error code.  The incumbent is seeded with products of
    earlier witnesses, so recorded alphas always satisfy the
    supermultiplicative inequality even when the node budget truncates the
    search.
    """
    if g.conservative:
        raise LadderError(
            "conservative graph: unresolved channel entries may hide edges, "
            "so independence would not certify a zero-error code")
    if ladder.recorded(n) is not None:
        raise LadderError(f"rung {n} already recorded")
    power = strong_power(g, n, cap=vertex_cap) if n > 1 else g
    seed = _best_product_witness(ladder, n)
    result = max_independent_set(power, node_budget=node_budget,
                                 seed_witness=seed, vertex_cap=vertex_cap)
    rate = log2_enclosure(Fraction(result.alpha), rate_width * n).scaled(Fraction(1, n))
    rung = LadderRung(n, result.alpha, result.witness, rate, result.exact)
    rungs = tuple(sorted(ladder.rungs + (rung,), key=lambda r: r.n))
    best = ladder.running_best
    if best is None or rate.lo > best.lo:
        best = rate
    return CapacityLadder(rungs, best)


def _best_product_witness(ladder: CapacityLadder, n: int) -> tuple:
    """Largest concatenation of recorded witnesses filling block length n."""
    best: tuple = ()
    sizes = {r.n: r for r in ladder.rungs}

    def build(remaining: int, parts: list) -> None:
        nonlocal best
        if remaining == 0:
            combined = [tuple()]
            for rung in parts:
                combined = [prefix + _as_tuple(w)
                            for prefix in combined for w in rung.witness]
            if len(combined) > len(best):
                best = tuple(combined)
            return
        for k in sorted(sizes, reverse=True):
            if k <= remaining:
                build(remaining - k, parts + [sizes[k]])
                break  # greedy largest-first split is enough for a seed

    build(n, [])
    return best


def _as_tuple(vertex) -> tuple:
    return vertex if isinstance(vertex, tuple) else (vertex,)
