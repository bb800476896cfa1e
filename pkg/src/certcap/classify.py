"""Budgeted semi-decision engine for estimation/stabilization solvability.

Each regime pairs anytime refinement tasks (exponent enclosures, ladder
rungs, minimax levels, capacity iterations) with one-sided halting
predicates, interleaved fairly by a deterministic dovetailer.  A verdict is
emitted only with a machine-checkable certificate that re-validates from raw
rationals; anything that cannot fire within the step budget is reported as
Undetermined with a progress report, never guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .capacity import (MinimaxLadder, certified_capacity_bounds,
                       feedback_zero_error_capacity, minimax_ladder_step,
                       next_distribution)
from .channel import Channel, ResourceCapError, certify_support
from .confgraph import CapacityLadder, confusability_graph, extend_ladder
from .enclosure import Enclosure, exact_log2, log2_enclosure, parse_rational, rational_str
from .linalg import Matrix, as_matrix
from .plant import Plant, instability_exponent, is_detectable, is_stabilizable

REGIME_KINDS = ("se-nofb", "se-fb", "stab-fb", "weak")

SOLVABLE, UNSOLVABLE, UNDETERMINED = "Solvable", "Unsolvable", "Undetermined"


class RegimePreconditionError(ValueError):
    """A regime prerequisite (detectability, stabilizability, ...) fails."""


class InternalInvariantViolation(RuntimeError):
    """A halting predicate un-fired under refinement."""


@dataclass(frozen=True)
class Regime:
    """Problem flavour: estimation / stabilization, with or without feedback."""

    kind: str

    def __post_init__(self):
        if self.kind not in REGIME_KINDS:
            raise ValueError(f"unknown regime {self.kind!r}")

    @property
    def disturbance(self) -> bool:
        return self.kind != "weak"

    def validate(self, plant: Plant) -> None:
        if self.kind in ("se-nofb", "se-fb", "stab-fb"):
            if plant.disturbance_bound is None or plant.disturbance_bound <= 0:
                raise RegimePreconditionError(
                    f"regime {self.kind} models a disturbed plant: D > 0 required")
        else:
            if plant.disturbance_bound not in (None, 0):
                raise RegimePreconditionError(
                    "regime weak models an undisturbed plant: drop D or set it to 0")
        if plant.c is None:
            raise RegimePreconditionError(f"regime {self.kind} needs a sensor map C")
        if not is_detectable(plant.a, plant.c):
            raise RegimePreconditionError("pair (A, C) is not detectable")
        if self.kind == "stab-fb":
            if plant.b is None:
                raise RegimePreconditionError("regime stab-fb needs an input map B")
            if not is_stabilizable(plant.a, plant.b):
                raise RegimePreconditionError("pair (A, B) is not stabilizable")


def dyadic_pow2_compare(value: Fraction, exponent: Fraction) -> int:
    """Exact sign of value - 2**exponent for a dyadic exponent p / 2**m."""
    if value <= 0:
        return -1
    denom = exponent.denominator
    if denom & (denom - 1):
        raise ValueError("exponent must be dyadic")
    m = denom.bit_length() - 1
    if m > 64:
        raise ValueError("dyadic exponent too deep to compare exactly")
    p = exponent.numerator
    left = Fraction(value) ** (1 << m)
    right = Fraction(2) ** p
    return (left > right) - (left < right)


def _log_endpoint_sound(value: Fraction, enclosure: Enclosure) -> bool:
    """Check lo <= log2(value) <= hi without trusting the stored interval.

    Shallow dyadic endpoints are settled by exact integer powers; deeper
    ones by re-deriving the digits, which is deterministic, so any
    tampering shows up as a mismatch.
    """
    deepest = max(enclosure.lo.denominator, enclosure.hi.denominator)
    if deepest.bit_length() - 1 <= 32:
        return (dyadic_pow2_compare(value, enclosure.lo) >= 0
                and dyadic_pow2_compare(value, enclosure.hi) <= 0)
    fresh = log2_enclosure(value, Fraction(1, 1 << max(1, enclosure.level)))
    return fresh.lo == enclosure.lo and fresh.hi == enclosure.hi


# ---------------------------------------------------------------------------
# anytime refinement tasks

_WIDTH_FLOOR = Fraction(1, 1 << 120)


class EtaTask:
    name = "eta"

    def __init__(self, a: Matrix, start_width: Fraction = Fraction(1, 16)):
        self.a = as_matrix(a)
        self.width = start_width
        self.enclosure: Enclosure | None = None

    def exhausted(self) -> bool:
        if self.enclosure is None:
            return False
        return self.enclosure.is_exact or self.width < _WIDTH_FLOOR

    def step(self) -> None:
        self.enclosure = instability_exponent(self.a, self.width)
        self.width /= 16

    def progress(self) -> dict:
        return {"width": rational_str(self.width),
                "enclosure": self.enclosure.to_json() if self.enclosure else None}


class FixedEtaTask:
    """Wraps an externally supplied exponent enclosure; nothing to refine."""

    name = "eta"

    def __init__(self, enclosure: Enclosure):
        self.enclosure = enclosure
        self._stepped = False

    def exhausted(self) -> bool:
        return self._stepped

    def step(self) -> None:
        self._stepped = True

    def progress(self) -> dict:
        return {"enclosure": self.enclosure.to_json()}


class FeedbackCapacityTask:
    """Exact channel: one LP solve, then log-enclosure refinement."""

    name = "fb-capacity"

    def __init__(self, ch: Channel):
        self.channel = ch
        self.width = Fraction(1, 1 << 10)
        self.result = None

    @property
    def enclosure(self) -> Enclosure | None:
        return self.result.enclosure if self.result else None

    def exhausted(self) -> bool:
        if self.result is None:
            return False
        return self.result.enclosure.is_exact or self.width < _WIDTH_FLOOR

    def step(self) -> None:
        self.result = feedback_zero_error_capacity(self.channel, self.width)
        self.width /= 16

    def progress(self) -> dict:
        return {"width": rational_str(self.width),
                "enclosure": self.enclosure.to_json() if self.result else None}


class MinimaxLadderTask:
    """Stream channel: support level climbs, minimax mass rises monotonically."""

    name = "psi-ladder"

    def __init__(self, ch: Channel):
        self.channel = ch
        self.level = -1
        self.max_level = ch.max_declared_level()
        self.ladder = MinimaxLadder()

    @property
    def upper(self) -> Enclosure | None:
        return self.ladder.best_upper

    def exhausted(self) -> bool:
        return self.level >= self.max_level

    def step(self) -> None:
        self.level += 1
        self.ladder = minimax_ladder_step(self.channel, self.level, self.ladder)

    def progress(self) -> dict:
        last = self.ladder.last
        return {"level": self.level,
                "mass": rational_str(last.mass) if last else None,
                "upper": last.upper.to_json() if last and last.upper else None}


class ZeroErrorLadderTask:
    """Independence-number rungs; on streams, first resolve the support."""

    name = "ladder"

    def __init__(self, ch: Channel, vertex_cap: int = 1024, node_budget: int = 20_000):
        self.channel = ch
        self.vertex_cap = vertex_cap
        self.node_budget = node_budget
        self.level = -1
        self.max_level = ch.max_declared_level()
        self.graph = None
        self.ladder = CapacityLadder()
        self.next_n = 1
        self._capped = False
        if ch.is_exact:
            cert = certify_support(ch, 0)
            self.graph = confusability_graph(cert, ch.inputs, len(ch.outputs))
            self.level = 0

    @property
    def best(self) -> Enclosure | None:
        return self.ladder.running_best

    def exhausted(self) -> bool:
        if self.graph is None:
            return self.level >= self.max_level
        return self._capped

    def step(self) -> None:
        if self.graph is None:
            self.level += 1
            cert = certify_support(self.channel, self.level)
            g = confusability_graph(cert, self.channel.inputs, len(self.channel.outputs))
            if not g.conservative:
                self.graph = g
            return
        if len(self.graph) ** self.next_n > self.vertex_cap:
            self._capped = True
            return
        try:
            self.ladder = extend_ladder(self.ladder, self.graph, self.next_n,
                                        node_budget=self.node_budget,
                                        vertex_cap=self.vertex_cap)
        except ResourceCapError:
            self._capped = True
            return
        self.next_n += 1

    def progress(self) -> dict:
        return {"support_level": self.level, "rungs": len(self.ladder.rungs),
                "running_best": self.best.to_json() if self.best else None,
                "conservative_graph": self.graph is None}


class CapacityBoundsTask:
    """Anytime alternating-optimization bounds on the ordinary capacity."""

    name = "shannon"

    def __init__(self, ch: Channel, max_iterations: int = 1_000_000):
        self.rows = ch.rows
        nx = len(ch.inputs)
        self.dist = tuple(Fraction(1, nx) for _ in range(nx))
        self.lower: Enclosure | None = None
        self.upper: Enclosure | None = None
        self.lower_dist = self.dist
        self.upper_dist = self.dist
        self.lower_width = self.upper_width = Fraction(1, 1 << 12)
        self.iterations = 0
        self.max_iterations = max_iterations
        self.log_width = Fraction(1, 1 << 12)

    def exhausted(self) -> bool:
        return self.iterations >= self.max_iterations

    def step(self) -> None:
        lower, upper = certified_capacity_bounds(self.rows, self.dist, self.log_width)
        if self.lower is None or lower.lo > self.lower.lo:
            self.lower = lower
            self.lower_dist, self.lower_width = self.dist, self.log_width
        if self.upper is None or upper.hi < self.upper.hi:
            self.upper = upper
            self.upper_dist, self.upper_width = self.dist, self.log_width
        self.dist = next_distribution(self.rows, self.dist)
        if self.log_width > Fraction(1, 1 << 60):
            self.log_width /= 4
        self.iterations += 1

    def progress(self) -> dict:
        return {"iterations": self.iterations,
                "lower": self.lower.to_json() if self.lower else None,
                "upper": self.upper.to_json() if self.upper else None}


# ---------------------------------------------------------------------------
# the dovetailer

def _assert_monotone_predicates(previous: dict, current: dict) -> None:
    for name, was_true in previous.items():
        if was_true and not current[name]:
            raise InternalInvariantViolation(
                f"predicate {name!r} fired and then un-fired under refinement")


def dovetail(tasks, predicates, budget: int):
    """Fair round-robin over refinement tasks with monotone halting predicates.

    One task step consumes one budget unit; predicates are evaluated after
    every step and the first (in declaration order) to fire wins.  Returns
    (fired_name, steps_used) or (None, steps_used) when the budget is
    exhausted or every task has run out of refinements.
    """
    history = {name: False for name, _ in predicates}
    steps = 0
    while steps < budget:
        active = [t for t in tasks if not t.exhausted()]
        if not active:
            break
        for task in active:
            if steps >= budget:
                break
            if task.exhausted():
                continue
            task.step()
            steps += 1
            current = {name: bool(check()) for name, check in predicates}
            _assert_monotone_predicates(history, current)
            history = {name: history[name] or current[name] for name in history}
            for name, _ in predicates:
                if current[name]:
                    return name, steps
    return None, steps


# ---------------------------------------------------------------------------
# certificates and verdicts

@dataclass(frozen=True)
class IndependentSetCertificate:
    n: int
    alpha: int
    witness: tuple
    rate_lo: Enclosure
    eta: Enclosure

    def to_json(self) -> dict:
        return {"kind": "independent-set", "n": self.n, "alpha": self.alpha,
                "witness": [list(v) if isinstance(v, tuple) else v for v in self.witness],
                "rate_lo": self.rate_lo.to_json(), "eta": self.eta.to_json()}


@dataclass(frozen=True)
class PsiCertificate:
    """Unsolvable via a certified upper bound on the feedback zero-error rate."""

    mass: Fraction
    support_level: int
    output_weights: tuple
    complete_graph: bool
    c0fb_upper: Enclosure
    eta_lo: Fraction

    def to_json(self) -> dict:
        return {"kind": "psi", "psi": rational_str(self.mass),
                "support_level": self.support_level,
                "output_weights": [rational_str(w) for w in self.output_weights],
                "complete_graph": self.complete_graph,
                "c0fb_upper": self.c0fb_upper.to_json(),
                "eta_lo": rational_str(self.eta_lo)}


@dataclass(frozen=True)
class SeparationCertificate:
    quantity: str   # "c0fb" | "shannon" | "alphabet-bound"
    relation: str   # "eta-below-capacity" | "capacity-below-eta"
    eta: Enclosure
    capacity: Enclosure
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": "separated-intervals", "quantity": self.quantity,
                "relation": self.relation, "eta": self.eta.to_json(),
                "capacity": self.capacity.to_json(), "payload": self.payload}


@dataclass(frozen=True)
class BudgetReport:
    steps: int
    limit: int
    progress: dict
    note: str = ""

    def to_json(self) -> dict:
        return {"kind": "budget", "steps": self.steps, "limit": self.limit,
                "progress": self.progress, "note": self.note}


@dataclass(frozen=True)
class Verdict:
    outcome: str
    regime: str
    certificate: object
    steps: int
    budget: int

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "regime": self.regime,
                "certificate": self.certificate.to_json(),
                "budget": {"limit": self.budget, "steps": self.steps}}

    def to_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# classification

def classify(plant: Plant, ch: Channel, regime: Regime, budget: int) -> Verdict:
    """Dovetailed classification of (plant, channel) under a regime.

    Halting semantics per regime:
      se-nofb   Solvable on a witnessed zero-error code beating the exponent;
                no Unsolvable direction exists (no sound upper bound on the
                no-feedback zero-error rate is implemented).
      se-fb     Solvable / Unsolvable by separating the exponent from the
                feedback zero-error capacity; on stream channels only the
                Unsolvable direction can ever fire.
      stab-fb   same comparisons as se-fb.
      weak      both directions against the ordinary capacity bracket.
    Exact-equality boundaries come back Undetermined: the underlying
    threshold statements are strict on both sides.
    """
    regime.validate(plant)
    eta_task = EtaTask(plant.a)
    return _run_classification(eta_task, ch, regime, budget)


def classify_fixed_plant(eta: Enclosure, ch: Channel, direction: str,
                         budget: int) -> Verdict:
    """Single-sided query for a fixed exponent value against one capacity.

    direction "capacity-above" runs the zero-error ladder and can halt
    Solvable; "capacity-below" runs the feedback-capacity upper bound and
    can halt Unsolvable.  When the exponent provably reaches log2 of the
    smaller alphabet size, no channel on these alphabets can beat it and
    "capacity-above" short-circuits to Unsolvable for every channel.
    """
    if direction not in ("capacity-above", "capacity-below"):
        raise ValueError(f"unknown direction {direction!r}")
    regime_name = f"fixed-plant:{direction}"
    alphabet = min(len(ch.inputs), len(ch.outputs))
    if direction == "capacity-above":
        bound = _eta_reaches_alphabet_bound(eta, alphabet)
        if bound is not None:
            cert = SeparationCertificate(
                "alphabet-bound", "capacity-below-eta", eta, bound,
                {"alphabet": alphabet,
                 "note": "no channel on these alphabets has zero-error rate "
                         "above log2 of the smaller alphabet"})
            return Verdict(UNSOLVABLE, regime_name, cert, 0, budget)
        tasks = [FixedEtaTask(eta), ZeroErrorLadderTask(ch)]
        ladder = tasks[1]
        predicates = [(SOLVABLE, lambda: ladder.best is not None
                       and ladder.best.lo > eta.hi)]
    else:
        tasks = [FixedEtaTask(eta)]
        if ch.is_exact:
            cap_task = FeedbackCapacityTask(ch)
            upper = lambda: cap_task.enclosure
        else:
            cap_task = MinimaxLadderTask(ch)
            upper = lambda: cap_task.upper
        tasks.append(cap_task)
        predicates = [(UNSOLVABLE, lambda: upper() is not None
                       and upper().hi < eta.lo)]
    fired, steps = dovetail(tasks, predicates, budget)
    if fired is None:
        return _undetermined(regime_name, tasks, steps, budget)
    if fired == SOLVABLE:
        cert = _ladder_certificate(tasks[1], eta)
    else:
        cert = _capacity_below_certificate(tasks[1], eta, ch)
    verdict = Verdict(fired, regime_name, cert, steps, budget)
    _require_valid(verdict, ch)
    return verdict


def _run_classification(eta_task, ch: Channel, regime: Regime, budget: int) -> Verdict:
    kind = regime.kind
    tasks: list = [eta_task]
    predicates: list = []

    def eta_enc() -> Enclosure | None:
        return eta_task.enclosure

    if kind == "se-nofb":
        ladder = ZeroErrorLadderTask(ch)
        tasks.append(ladder)
        predicates.append((SOLVABLE, lambda: eta_enc() is not None
                           and ladder.best is not None
                           and ladder.best.lo > eta_enc().hi))
    elif kind in ("se-fb", "stab-fb"):
        if ch.is_exact:
            cap = FeedbackCapacityTask(ch)
            tasks.append(cap)
            upper = lambda: cap.enclosure
            lower = lambda: cap.enclosure
            predicates.append((SOLVABLE, lambda: eta_enc() is not None
                               and lower() is not None
                               and eta_enc().hi < lower().lo))
        else:
            cap = MinimaxLadderTask(ch)
            tasks.append(cap)
            upper = lambda: cap.upper
        predicates.append((UNSOLVABLE, lambda: eta_enc() is not None
                           and upper() is not None
                           and upper().hi < eta_enc().lo))
        if ch.is_exact:
            # exact equality of exact values: the threshold statements are
            # strict on both sides, so no verdict can ever fire
            predicates.append(("boundary", lambda: eta_enc() is not None
                               and upper() is not None
                               and eta_enc().is_exact and upper().is_exact
                               and eta_enc().lo == upper().lo))
    elif kind == "weak":
        if not ch.is_exact:
            raise RegimePreconditionError(
                "weak regime needs exact channel entries for capacity bounds")
        ba = CapacityBoundsTask(ch)
        tasks.append(ba)
        predicates.append((SOLVABLE, lambda: eta_enc() is not None
                           and ba.lower is not None
                           and eta_enc().hi < ba.lower.lo))
        predicates.append((UNSOLVABLE, lambda: eta_enc() is not None
                           and ba.upper is not None
                           and ba.upper.hi < eta_enc().lo))

    fired, steps = dovetail(tasks, predicates, budget)
    if fired is None or fired == "boundary":
        note = "boundary: exponent equals the capacity exactly" if fired == "boundary" else ""
        return _undetermined(kind, tasks, steps, budget, note)
    cap_task = tasks[1]
    eta = eta_task.enclosure
    if kind == "se-nofb":
        cert = _ladder_certificate(cap_task, eta)
    elif kind in ("se-fb", "stab-fb"):
        if fired == UNSOLVABLE:
            cert = _capacity_below_certificate(cap_task, eta, ch)
        else:
            cert = _feedback_solvable_certificate(cap_task, eta, ch)
    else:
        relation = "eta-below-capacity" if fired == SOLVABLE else "capacity-below-eta"
        if fired == SOLVABLE:
            enc, dist, width = cap_task.lower, cap_task.lower_dist, cap_task.lower_width
        else:
            enc, dist, width = cap_task.upper, cap_task.upper_dist, cap_task.upper_width
        cert = SeparationCertificate(
            "shannon", relation, eta, enc,
            {"input_distribution": [rational_str(p) for p in dist],
             "log_width": rational_str(width)})
    verdict = Verdict(fired, kind, cert, steps, budget)
    _require_valid(verdict, ch)
    return verdict


def _undetermined(kind, tasks, steps, budget, note="") -> Verdict:
    progress = {t.name: t.progress() for t in tasks}
    return Verdict(UNDETERMINED, kind, BudgetReport(steps, budget, progress, note),
                   steps, budget)


def _eta_reaches_alphabet_bound(eta: Enclosure, alphabet: int) -> Enclosure | None:
    exact = exact_log2(Fraction(alphabet))
    if exact is not None:
        if eta.is_exact and eta.lo == exact:
            return Enclosure.exact(Fraction(exact))
        if eta.lo >= exact:
            return Enclosure.exact(Fraction(exact))
        return None
    bound = log2_enclosure(Fraction(alphabet), Fraction(1, 1 << 20))
    if eta.lo >= bound.hi:
        return bound
    if eta.is_exact and dyadic_pow2_compare(Fraction(alphabet), eta.lo) == 0:
        return bound
    return None


def _ladder_certificate(ladder_task, eta: Enclosure) -> IndependentSetCertificate:
    best_rung = max(ladder_task.ladder.rungs, key=lambda r: r.rate_lo.lo)
    return IndependentSetCertificate(best_rung.n, best_rung.alpha,
                                     best_rung.witness, best_rung.rate_lo, eta)


def _capacity_below_certificate(cap_task, eta: Enclosure, ch: Channel) -> PsiCertificate:
    if isinstance(cap_task, FeedbackCapacityTask):
        result = cap_task.result
        if result.zero_capacity:
            return PsiCertificate(Fraction(1), 0, (), True, result.enclosure, eta.lo)
        sol = result.minimax
        return PsiCertificate(sol.value, 0, sol.output_weights, False,
                              result.enclosure, eta.lo)
    rung = cap_task.ladder.last
    return PsiCertificate(rung.mass, rung.level, rung.solution.output_weights,
                          False, rung.upper, eta.lo)


def _feedback_solvable_certificate(cap_task, eta: Enclosure, ch: Channel) -> SeparationCertificate:
    result = cap_task.result
    sol = result.minimax
    pair = _nonadjacent_pair(ch)
    return SeparationCertificate(
        "c0fb", "eta-below-capacity", eta, result.enclosure,
        {"inverse_psi": rational_str(result.inverse_mass),
         "distribution": [rational_str(p) for p in sol.distribution],
         "nonadjacent_pair": list(pair)})


def _nonadjacent_pair(ch: Channel) -> tuple[int, int]:
    cert = certify_support(ch, 0)
    graph = confusability_graph(cert, ch.inputs, len(ch.outputs))
    n = len(graph)
    for i in range(n):
        for j in range(i + 1, n):
            if not graph.are_adjacent(i, j):
                return i, j
    raise RegimePreconditionError("confusability graph is complete")


# ---------------------------------------------------------------------------
# certificate re-validation (independent of the solver paths)

def _require_valid(verdict: Verdict, ch: Channel) -> None:
    if not revalidate(verdict, ch):
        raise InternalInvariantViolation("certificate failed re-validation")


def revalidate(verdict: Verdict, ch: Channel) -> bool:
    """Re-check a halted verdict's certificate from raw rationals.

    Interval separations are recomputed by direct comparisons, witnesses are
    re-verified pairwise against the channel support, minimax bounds are
    re-derived from the stored dual weights, and dyadic log endpoints are
    checked by exact integer powers.  No solver state is trusted.
    """
    cert = verdict.certificate
    if isinstance(cert, BudgetReport):
        return verdict.outcome == UNDETERMINED
    if isinstance(cert, IndependentSetCertificate):
        return _check_independent_set(cert, ch)
    if isinstance(cert, PsiCertificate):
        return _check_psi(cert, ch)
    if isinstance(cert, SeparationCertificate):
        return _check_separation(cert, ch)
    return False


def _support_sets(ch: Channel, level: int):
    cert = certify_support(ch, level)
    return tuple(tuple(x for x in range(len(ch.inputs)) if (x, y) in cert.positive)
                 for y in range(len(ch.outputs)))


def _check_independent_set(cert: IndependentSetCertificate, ch: Channel) -> bool:
    if ch.is_exact:
        support = _support_sets(ch, 0)
    else:
        level = ch.max_declared_level()
        sc = certify_support(ch, level)
        if sc.unresolved:
            return False
        support = _support_sets(ch, level)
    labels = [v if isinstance(v, tuple) else (v,) for v in cert.witness]
    if len(labels) != cert.alpha or len(set(labels)) != cert.alpha:
        return False
    index = {v: i for i, v in enumerate(ch.inputs)}
    adjacent_single = _single_letter_adjacency(support, len(ch.inputs))

    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            va, vb = labels[a], labels[b]
            if len(va) != cert.n or len(vb) != cert.n:
                return False
            confusable = all(
                x == y or adjacent_single[index[x]][index[y]]
                for x, y in zip(va, vb))
            if confusable:
                return False
    # rate endpoint: alpha >= 2**(n * rate_lo.lo), checked by exact powers
    rate_claim = cert.rate_lo.lo * cert.n
    if dyadic_pow2_compare(Fraction(cert.alpha), rate_claim) < 0:
        return False
    return cert.eta.hi < cert.rate_lo.lo


def _single_letter_adjacency(support, nx):
    adj = [[False] * nx for _ in range(nx)]
    for xs in support:
        for i in xs:
            for j in xs:
                if i != j:
                    adj[i][j] = True
    return adj


def _check_psi(cert: PsiCertificate, ch: Channel) -> bool:
    if cert.complete_graph:
        if not ch.is_exact:
            return False
        support = _support_sets(ch, 0)
        adj = _single_letter_adjacency(support, len(ch.inputs))
        n = len(ch.inputs)
        complete = all(adj[i][j] for i in range(n) for j in range(n) if i != j)
        return complete and cert.eta_lo > 0 and cert.c0fb_upper.hi == 0
    support = _support_sets(ch, cert.support_level)
    covered_ok = True
    weights = cert.output_weights
    if any(w < 0 for w in weights) or sum(weights) != 1:
        return False
    for x in range(len(ch.inputs)):
        covered = sum(weights[y] for y, s in enumerate(support) if x in s)
        if covered < cert.mass:
            covered_ok = False
    if not covered_ok:
        return False
    # upper endpoint really bounds log2(1/mass)
    if not _log_endpoint_sound(1 / cert.mass, cert.c0fb_upper):
        return False
    return cert.c0fb_upper.hi < cert.eta_lo


def _check_separation(cert: SeparationCertificate, ch: Channel) -> bool:
    if cert.relation == "eta-below-capacity":
        separated = cert.eta.hi < cert.capacity.lo
    else:
        separated = cert.capacity.hi < cert.eta.lo
    if not separated and cert.quantity != "alphabet-bound":
        return False
    if cert.quantity == "alphabet-bound":
        alphabet = cert.payload["alphabet"]
        if alphabet != min(len(ch.inputs), len(ch.outputs)):
            return False
        enc = log2_enclosure(Fraction(alphabet), Fraction(1, 1 << 20))
        return cert.eta.lo >= enc.lo
    if cert.quantity == "c0fb":
        inverse = parse_rational(cert.payload["inverse_psi"])
        dist = [parse_rational(p) for p in cert.payload["distribution"]]
        if any(p < 0 for p in dist) or sum(dist) != 1:
            return False
        support = _support_sets(ch, 0)
        worst = max((sum(dist[x] for x in s) for s in support if s),
                    default=Fraction(1))
        if worst > 1 / inverse:
            return False
        i, j = cert.payload["nonadjacent_pair"]
        adj = _single_letter_adjacency(support, len(ch.inputs))
        if adj[i][j] or i == j:
            return False
        # capacity enclosure really brackets log2(inverse)
        return _log_endpoint_sound(inverse, cert.capacity)
    if cert.quantity == "shannon":
        dist = tuple(parse_rational(p) for p in cert.payload["input_distribution"])
        width = parse_rational(cert.payload["log_width"])
        lower, upper = certified_capacity_bounds(ch.rows, dist, width)
        if cert.relation == "eta-below-capacity":
            return cert.eta.hi < lower.lo
        return upper.hi < cert.eta.lo
    return False
