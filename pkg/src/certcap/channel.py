"""Discrete memoryless channels with exact or stream-refined entries.

Exact channels carry rational transition probabilities.  Stream channels
carry per-entry refinement schedules: finite lists of nested intervals
indexed by level, standing in for entries that are only ever known to
finite precision.  Positivity of such an entry can be certified once its
interval clears zero; vanishing is certified only by an explicit exact-zero
pin in the schedule, never by silence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .enclosure import DomainError, parse_rational, rational_str


class ChannelFormatError(ValueError):
    """Input document fails the channel schema or stochasticity checks."""


class ResourceCapError(RuntimeError):
    """A requested construction exceeds the configured size cap."""


ScheduleStep = tuple[int, Fraction, Fraction]  # (level, lo, hi)

DEFAULT_PRODUCT_CAP = 4096


@dataclass(frozen=True)
class Channel:
    """Finite-alphabet channel; ``rows`` for exact mode, ``schedules`` for stream."""

    inputs: tuple
    outputs: tuple
    rows: tuple | None = None
    schedules: tuple | None = None

    @property
    def mode(self) -> str:
        return "exact" if self.rows is not None else "stream"

    @property
    def is_exact(self) -> bool:
        return self.rows is not None

    def entry(self, xi: int, yi: int) -> Fraction:
        if not self.is_exact:
            raise DomainError("exact entry requested from a stream channel")
        return self.rows[xi][yi]

    def entry_interval(self, xi: int, yi: int, level: int) -> tuple[Fraction, Fraction]:
        """Certified interval for entry (x, y) at a refinement level."""
        if self.is_exact:
            w = self.rows[xi][yi]
            return w, w
        lo, hi = Fraction(0), Fraction(1)
        for step_level, step_lo, step_hi in self.schedules[xi][yi]:
            if step_level > level:
                break
            lo, hi = step_lo, step_hi
        return lo, hi

    def max_declared_level(self) -> int:
        if self.is_exact:
            return 0
        return max((step[0] for row in self.schedules for cell in row for step in cell),
                   default=0)

    def to_json(self) -> dict:
        doc = {"inputs": list(self.inputs), "outputs": list(self.outputs),
               "mode": self.mode}
        if self.is_exact:
            doc["rows"] = [[rational_str(w) for w in row] for row in self.rows]
        else:
            doc["schedules"] = [[[{"level": lv, "lo": rational_str(lo),
                                   "hi": rational_str(hi)} for lv, lo, hi in cell]
                                 for cell in row] for row in self.schedules]
        return doc


def exact_channel(inputs, outputs, rows) -> Channel:
    inputs = tuple(inputs)
    outputs = tuple(outputs)
    mat = tuple(tuple(Fraction(w) for w in row) for row in rows)
    if len(mat) != len(inputs) or any(len(r) != len(outputs) for r in mat):
        raise ChannelFormatError("row/alphabet shape mismatch")
    for xi, row in enumerate(mat):
        if any(w < 0 or w > 1 for w in row):
            raise ChannelFormatError(f"entry outside [0, 1] in row {xi}")
        if sum(row) != 1:
            raise ChannelFormatError(
                f"row {xi} sums to {sum(row)}, not 1")
    return Channel(inputs, outputs, rows=mat)


def stream_channel(inputs, outputs, schedules) -> Channel:
    """Stream channel from per-entry interval schedules.

    Each cell is a list of (level, lo, hi), strictly increasing in level and
    nested in interval; a step with lo == hi == 0 is the explicit exact-zero
    pin.  Row sums must contain 1 at every declared level.
    """
    inputs = tuple(inputs)
    outputs = tuple(outputs)
    sched = tuple(tuple(tuple((int(lv), Fraction(lo), Fraction(hi))
                              for lv, lo, hi in cell)
                        for cell in row) for row in schedules)
    if len(sched) != len(inputs) or any(len(r) != len(outputs) for r in sched):
        raise ChannelFormatError("schedule/alphabet shape mismatch")
    for xi, row in enumerate(sched):
        for yi, cell in enumerate(row):
            prev_level = -1
            prev = (Fraction(0), Fraction(1))
            for lv, lo, hi in cell:
                if lv <= prev_level:
                    raise ChannelFormatError(
                        f"schedule levels not increasing at entry ({xi},{yi})")
                if not (0 <= lo <= hi <= 1):
                    raise ChannelFormatError(
                        f"schedule interval invalid at entry ({xi},{yi})")
                if lo < prev[0] or hi > prev[1]:
                    raise ChannelFormatError(
                        f"schedule not nested at entry ({xi},{yi})")
                prev_level, prev = lv, (lo, hi)
    ch = Channel(inputs, outputs, schedules=sched)
    for level in range(ch.max_declared_level() + 1):
        for xi in range(len(inputs)):
            bounds = [ch.entry_interval(xi, yi, level) for yi in range(len(outputs))]
            lo_sum = sum(b[0] for b in bounds)
            hi_sum = sum(b[1] for b in bounds)
            if not (lo_sum <= 1 <= hi_sum):
                raise ChannelFormatError(
                    f"row {xi} interval sum excludes 1 at level {level}")
    return ch


def load_channel(doc) -> Channel:
    """Validate a channel JSON document (dict, JSON text, or file path)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ChannelFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ChannelFormatError("channel document must be a JSON object")
    try:
        inputs = list(doc["inputs"])
        outputs = list(doc["outputs"])
        mode = doc.get("mode", "exact")
    except KeyError as exc:
        raise ChannelFormatError(f"missing channel field: {exc}") from exc
    if mode == "exact":
        if "rows" not in doc:
            raise ChannelFormatError("exact channel requires rows")
        rows = [[parse_rational(w) if isinstance(w, str) else _bad(w)
                 for w in row] for row in doc["rows"]]
        return exact_channel(inputs, outputs, rows)
    if mode == "stream":
        if "schedules" not in doc:
            raise ChannelFormatError("stream channel requires schedules")
        sched = [[[(int(step["level"]), parse_rational(step["lo"]),
                    parse_rational(step["hi"])) for step in cell]
                  for cell in row] for row in doc["schedules"]]
        return stream_channel(inputs, outputs, sched)
    raise ChannelFormatError(f"unknown channel mode {mode!r}")


def _bad(value):
    raise ChannelFormatError(f"entries must be rational strings, got {value!r}")


@dataclass(frozen=True)
class SupportCertificate:
    """Partition of X x Y into proven-positive / proven-zero / unresolved.

    For exact channels everything resolves at level 0.  For stream channels
    the proven sets grow monotonically with the level, and an entry is
    proven zero only when its schedule pins it to [0, 0].
    """

    positive: frozenset
    zero: frozenset
    unresolved: frozenset
    level: int

    def __post_init__(self):
        if self.positive & self.zero or self.positive & self.unresolved \
                or self.zero & self.unresolved:
            raise ValueError("support certificate sets must be disjoint")


def certify_support(ch: Channel, level: int = 0) -> SupportCertificate:
    if level < 0:
        raise DomainError("level must be non-negative")
    positive, zero, unresolved = set(), set(), set()
    for xi in range(len(ch.inputs)):
        for yi in range(len(ch.outputs)):
            lo, hi = ch.entry_interval(xi, yi, level)
            if lo > 0:
                positive.add((xi, yi))
            elif lo == hi == 0:
                zero.add((xi, yi))
            else:
                unresolved.add((xi, yi))
    return SupportCertificate(frozenset(positive), frozenset(zero),
                              frozenset(unresolved), level)


def product_channel(ch: Channel, n: int, cap: int = DEFAULT_PRODUCT_CAP) -> Channel:
    """n-fold memoryless extension on tuple alphabets, exact entries only."""
    if not ch.is_exact:
        raise DomainError("product channels need exact entries")
    if n < 1:
        raise DomainError("block length must be >= 1")
    size = len(ch.inputs) ** n
    if size > cap:
        raise ResourceCapError(f"{size} input tuples exceed the cap of {cap}")
    in_tuples = list(product(range(len(ch.inputs)), repeat=n))
    out_tuples = list(product(range(len(ch.outputs)), repeat=n))
    rows = []
    for xs in in_tuples:
        row = []
        for ys in out_tuples:
            w = Fraction(1)
            for x, y in zip(xs, ys):
                w *= ch.rows[x][y]
                if w == 0:
                    break
            row.append(w)
        rows.append(tuple(row))
    new_inputs = tuple(tuple(ch.inputs[i] for i in xs) for xs in in_tuples)
    new_outputs = tuple(tuple(ch.outputs[i] for i in ys) for ys in out_tuples)
    return Channel(new_inputs, new_outputs, rows=tuple(rows))


# ---------------------------------------------------------------------------
# built-in parametric families

def binary_symmetric(p) -> Channel:
    p = Fraction(p)
    return exact_channel((0, 1), (0, 1), [[1 - p, p], [p, 1 - p]])


def noiseless(q: int) -> Channel:
    rows = [[Fraction(int(i == j)) for j in range(q)] for i in range(q)]
    return exact_channel(tuple(range(q)), tuple(range(q)), rows)


def typewriter(q: int) -> Channel:
    """Each input lands on itself or its cyclic successor with probability 1/2."""
    half = Fraction(1, 2)
    rows = [[half if j in (i, (i + 1) % q) else Fraction(0) for j in range(q)]
            for i in range(q)]
    return exact_channel(tuple(range(q)), tuple(range(q)), rows)


def resolving_stream(ch: Channel, resolve_level: int) -> Channel:
    """Stream wrapper whose entries pin to the exact values at a given level.

    Below the pin level every entry is only known inside a shrinking
    interval; zero entries hover at [0, 2^-level] until pinned, which
    exercises the one-sided nature of support detection.
    """
    if not ch.is_exact:
        raise DomainError("needs an exact channel to wrap")
    sched = []
    for xi in range(len(ch.inputs)):
        row = []
        for yi in range(len(ch.outputs)):
            w = ch.rows[xi][yi]
            steps = []
            for lv in range(resolve_level):
                slack = Fraction(1, 2 ** (lv + 1))
                steps.append((lv, max(Fraction(0), w - slack), min(Fraction(1), w + slack)))
            steps.append((resolve_level, w, w))
            row.append(tuple(steps))
        sched.append(tuple(row))
    return stream_channel(ch.inputs, ch.outputs, sched)


def hovering_stream(ch: Channel, entries, depth: int = 64) -> Channel:
    """Stream wrapper where the chosen zero entries never resolve.

    Each listed (x, y) must be an exact zero; its schedule hovers at
    [0, 2^-level] down to ``depth`` without an exact-zero pin, so support
    certification leaves it unresolved at every level.  Its row partner at
    (x, x-column...) is widened correspondingly so row sums stay valid.
    """
    if not ch.is_exact:
        raise DomainError("needs an exact channel to wrap")
    entries = {tuple(e) for e in entries}
    for xi, yi in entries:
        if ch.rows[xi][yi] != 0:
            raise DomainError("hovering entries must be exact zeros")
    sched = []
    for xi in range(len(ch.inputs)):
        hovering_here = [e for e in entries if e[0] == xi]
        row = []
        for yi in range(len(ch.outputs)):
            w = ch.rows[xi][yi]
            if (xi, yi) in entries:
                steps = tuple((lv, Fraction(0), Fraction(1, 2 ** lv))
                              for lv in range(depth))
            elif hovering_here and w > 0:
                # absorb the hover slack so the row-sum interval contains 1
                steps = tuple((lv, max(Fraction(0), w - Fraction(len(hovering_here), 2 ** lv)), w)
                              for lv in range(depth))
            else:
                steps = ((0, w, w),)
            row.append(steps)
        sched.append(tuple(row))
    return stream_channel(ch.inputs, ch.outputs, sched)
