"""Desk-scale control-loop simulation in exact rational arithmetic.

Epoch-quantizer scheme for scalar or diagonal plants: the coder and decoder
share an uncertainty box, each epoch the box is split into cells, the cell
index crosses the channel as a block codeword, and both sides refine.  With
a zero-error code the two stay synchronized and the radius recursion gives
an analytic sup bound; over a noisy channel with a code that is not
zero-error the mirrored states drift apart and the error blows up, which is
what the divergence smoke runs demonstrate.

All state arithmetic is exact rational; channel noise and disturbances are
sampled through a seeded generator with exact inverse-CDF comparisons, so
identical configurations reproduce identical trajectories byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .channel import Channel
from .classify import Regime
from .enclosure import rational_str
from .plant import Plant

try:  # GMP-backed rationals cut the long exact runs by ~5x when available
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction


class SimulationError(ValueError):
    """Configuration cannot run (bad shapes, impossible contraction, ...)."""


@dataclass(frozen=True)
class CodeSpec:
    """Block code over the channel input alphabet (symbol indices)."""

    block_length: int
    codewords: tuple

    def __post_init__(self):
        if any(len(c) != self.block_length for c in self.codewords):
            raise SimulationError("codeword length mismatch")
        if len(set(self.codewords)) != len(self.codewords):
            raise SimulationError("duplicate codewords")

    @property
    def size(self) -> int:
        return len(self.codewords)


def identity_code(ch: Channel) -> CodeSpec:
    return CodeSpec(1, tuple((i,) for i in range(len(ch.inputs))))


def witness_code(ch: Channel, witness) -> CodeSpec:
    """Code from independent-set witness labels (tuples of input symbols)."""
    index = {v: i for i, v in enumerate(ch.inputs)}
    words = []
    for label in witness:
        label = label if isinstance(label, tuple) else (label,)
        words.append(tuple(index[s] for s in label))
    if not words:
        raise SimulationError("empty witness")
    return CodeSpec(len(words[0]), tuple(words))


@dataclass(frozen=True)
class SimConfig:
    plant: Plant
    channel: Channel
    regime: Regime
    code: CodeSpec
    horizon: int
    seed: int
    initial_radius: Fraction = Fraction(1)
    x0: tuple | None = None
    divergence_threshold: Fraction = Fraction(1000)
    stop_at_divergence: bool = True

    def modes(self) -> tuple[Fraction, ...]:
        a = self.plant.a
        n = len(a)
        for i in range(n):
            for j in range(n):
                if i != j and a[i][j] != 0:
                    raise SimulationError("simulator supports scalar/diagonal A only")
        return tuple(a[i][i] for i in range(n))

    def start_state(self) -> tuple[Fraction, ...]:
        if self.x0 is not None:
            xs = tuple(Fraction(v) for v in self.x0)
            if len(xs) != len(self.plant.a):
                raise SimulationError("x0 dimension mismatch")
            if any(abs(v) > self.initial_radius for v in xs):
                raise SimulationError("x0 outside the initial uncertainty box")
            return xs
        return tuple(self.initial_radius / 3 for _ in range(len(self.plant.a)))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    message_sent: int
    codeword: tuple
    received: tuple
    message_decoded: int
    radius_after: tuple


@dataclass(frozen=True)
class Trajectory:
    times: tuple
    x: tuple
    x_hat: tuple
    u: tuple
    error: tuple          # sup-norm estimation error per step
    radius: tuple         # decoder's certified radius per step (sup-norm)
    zetas: tuple
    transcript: tuple
    summary: dict

    def to_csv(self) -> str:
        lines = ["t,x,x_hat,error,u"]
        for i, t in enumerate(self.times):
            lines.append(",".join([
                str(t), _vec(self.x[i]), _vec(self.x_hat[i]),
                rational_str(self.error[i]), _vec(self.u[i])]))
        return "\n".join(lines) + "\n"

    def verify_recursion(self, cfg: SimConfig) -> bool:
        """Re-check x(t+1) = A x(t) + B u(t) + zeta(t) exactly, post hoc."""
        modes = cfg.modes()
        b = cfg.plant.b
        for t in range(len(self.times) - 1):
            for i, a_i in enumerate(modes):
                drive = Fraction(0)
                if b is not None and self.u[t]:
                    drive = sum(b[i][j] * self.u[t][j] for j in range(len(self.u[t])))
                expect = a_i * self.x[t][i] + drive + self.zetas[t][i]
                if self.x[t + 1][i] != expect:
                    return False
        return True


def _vec(values) -> str:
    return ";".join(rational_str(v) for v in values)


# ---------------------------------------------------------------------------
# exact channel sampling

def sample_output(rng: random.Random, row) -> int:
    """Inverse-CDF draw honoring rational probabilities exactly.

    The uniform variate is consumed lazily bit by bit until its dyadic
    bracket falls inside a single CDF cell, so every output index has
    exactly its row probability.
    """
    cums = list(accumulate(row))
    num = 0
    bits = 0
    while True:
        num = (num << 32) | rng.getrandbits(32)
        bits += 32
        lo = Fraction(num, 1 << bits)
        hi = Fraction(num + 1, 1 << bits)
        for idx, cum in enumerate(cums):
            if hi <= cum:
                prev = cums[idx - 1] if idx else Fraction(0)
                if lo >= prev:
                    return idx
                break
        else:
            continue


def _sample_disturbance(rng: random.Random, bound):
    if bound == 0:
        return _rational(0)
    k = rng.getrandbits(32)
    return bound * _rational(2 * k - (1 << 32), 1 << 32)


# ---------------------------------------------------------------------------
# cell allocation across modes

def _allocate_cells(modes, n: int, total: int, allow_boundary: bool):
    """Per-mode cell counts with product <= total.

    Strict contraction needs a_i**n < M_i per mode; the weak flavour allows
    equality (no decay, flagged as boundary by the caller).
    """
    mins = []
    for a in modes:
        growth = a ** n
        if growth < 1 or (growth == 1 and allow_boundary):
            need = 1
        elif allow_boundary:
            need = int(-((-growth.numerator) // growth.denominator))  # ceil
        else:
            need = int(growth.numerator // growth.denominator) + 1
        mins.append(need)
    product = 1
    for m in mins:
        product *= m
    if product > total:
        raise SimulationError(
            "contraction impossible: the code carries too few messages for "
            f"the plant growth (needs {product}, code has {total})")
    # hand out spare capacity to the slowest-contracting mode, deterministically
    improved = True
    while improved:
        improved = False
        order = sorted(range(len(mins)),
                       key=lambda i: (-(modes[i] ** n) / mins[i], i))
        for i in order:
            if product // mins[i] * (mins[i] + 1) <= total:
                product = product // mins[i] * (mins[i] + 1)
                mins[i] += 1
                improved = True
                break
    return mins


# ---------------------------------------------------------------------------
# the epoch quantizer loop

def _run_loop(cfg: SimConfig, *, with_control: bool, allow_boundary: bool) -> Trajectory:
    modes = cfg.modes()
    dim = len(modes)
    n = cfg.code.block_length
    if cfg.plant.c is not None:
        c = cfg.plant.c
        if len(c) != dim or any(c[i][j] != (1 if i == j else 0)
                                for i in range(len(c)) for j in range(dim)):
            raise SimulationError("simulator supports full-state sensing (C = I) only")
    if any(a < 0 for a in modes):
        raise SimulationError("simulator expects non-negative diagonal entries")

    b = cfg.plant.b
    if with_control:
        if b is None:
            raise SimulationError("stabilization needs an input map B")
        if len(b[0]) != dim or any(b[i][j] != 0 for i in range(dim)
                                   for j in range(dim) if i != j) \
                or any(b[i][i] == 0 for i in range(dim)):
            raise SimulationError("stabilization supports diagonal invertible B only")

    # hot loop runs on the fastest exact-rational type available
    modes = tuple(_rational(a.numerator, a.denominator) for a in modes)
    bound = cfg.plant.disturbance_bound or Fraction(0)
    bound = _rational(bound.numerator, bound.denominator)
    gains = None
    if with_control:
        gains = tuple(_rational(b[i][i].numerator, b[i][i].denominator)
                      for i in range(dim))

    cells = _allocate_cells(modes, n, cfg.code.size, allow_boundary)
    used = 1
    for m in cells:
        used *= m

    rng = random.Random(cfg.seed)
    x = [_rational(v.numerator, v.denominator) for v in cfg.start_state()]
    coder_center = [_rational(0)] * dim
    r0 = _rational(cfg.initial_radius.numerator, cfg.initial_radius.denominator)
    coder_radius = [r0] * dim
    dec_center = list(coder_center)
    dec_radius = list(coder_radius)

    times, xs, xhats, us, errors, radii, zetas = [], [], [], [], [], [], []
    transcript = []
    rows = cfg.channel.rows
    epoch = 0
    t = 0
    max_error = _rational(0)
    diverged_at = None

    def record(u_now):
        nonlocal max_error, diverged_at
        err = max(abs(x[i] - dec_center[i]) for i in range(dim))
        times.append(t)
        xs.append(tuple(x))
        xhats.append(tuple(dec_center))
        us.append(tuple(u_now))
        errors.append(err)
        radii.append(max(dec_radius))
        if err > max_error:
            max_error = err
        if diverged_at is None and err > cfg.divergence_threshold:
            diverged_at = t

    while t < cfg.horizon:
        if diverged_at is not None and cfg.stop_at_divergence:
            break
        # quantize against the coder's box and transmit the cell index
        idxs = []
        for i in range(dim):
            lo = coder_center[i] - coder_radius[i]
            width = 2 * coder_radius[i] / cells[i]
            if width == 0:
                idx = 0
            else:
                idx = int((x[i] - lo) / width)
                idx = min(max(idx, 0), cells[i] - 1)
            idxs.append(idx)
        message = 0
        for i in reversed(range(dim)):
            message = message * cells[i] + idxs[i]
        codeword = cfg.code.codewords[message]
        received = tuple(sample_output(rng, rows[sym]) for sym in codeword)
        decoded = _decode(rows, cfg.code, used, received)

        def refine(center, radius, msg):
            rest = msg
            for i in range(dim):
                k = rest % cells[i]
                rest //= cells[i]
                lo = center[i] - radius[i]
                width = 2 * radius[i] / cells[i]
                center[i] = lo + width * k + width / 2
                radius[i] = radius[i] / cells[i]

        refine(coder_center, coder_radius, message)   # coder mirrors its own send
        refine(dec_center, dec_radius, decoded)       # decoder uses what it decoded
        transcript.append(EpochRecord(epoch, message, codeword, received, decoded,
                                      tuple(dec_radius)))
        epoch += 1

        for _ in range(n):
            if t >= cfg.horizon:
                break
            if diverged_at is not None and cfg.stop_at_divergence:
                break
            u_now = ()
            if with_control:
                u_now = tuple(-modes[i] * dec_center[i] / gains[i] for i in range(dim))
            record(u_now)
            zeta = tuple(_sample_disturbance(rng, bound) for _ in range(dim))
            zetas.append(zeta)
            for i in range(dim):
                drive = gains[i] * u_now[i] if with_control else 0
                x[i] = modes[i] * x[i] + drive + zeta[i]
                coder_center[i] = modes[i] * coder_center[i] + drive
                coder_radius[i] = modes[i] * coder_radius[i] + bound
                dec_center[i] = modes[i] * dec_center[i] + drive
                dec_radius[i] = modes[i] * dec_radius[i] + bound
            t += 1

    per_mode_bound = []
    for i, a in enumerate(modes):
        growth = a ** n
        drift = bound * sum(a ** j for j in range(n))
        shrink = 1 - growth / cells[i]
        star = drift / shrink if shrink > 0 else None
        per_mode_bound.append(star)
    if all(s is not None for s in per_mode_bound):
        analytic = max(max(r0, s) for s in per_mode_bound)
    else:
        analytic = None

    ratios = [(a ** n) / cells[i] for i, a in enumerate(modes)]
    decay_ratio = max(ratios)
    zero_error_ok = all(r.message_sent == r.message_decoded for r in transcript)

    summary = {
        "regime": cfg.regime.kind,
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "epochs": epoch,
        "block_length": n,
        "message_count": cfg.code.size,
        "cells": list(cells),
        "max_error": rational_str(max_error),
        "analytic_bound": rational_str(analytic) if analytic is not None else None,
        "bounded": analytic is not None and max_error <= analytic,
        "decay_ratio": rational_str(decay_ratio),
        "boundary": decay_ratio == 1,
        "diverged_at": diverged_at,
        "zero_error_transcript": zero_error_ok,
    }
    return Trajectory(tuple(times), tuple(xs), tuple(xhats), tuple(us),
                      tuple(errors), tuple(radii), tuple(zetas),
                      tuple(transcript), summary)


def _decode(rows, code: CodeSpec, used: int, received) -> int:
    best, best_like = None, None
    unique_compatible = None
    compatible = 0
    for m in range(used):
        like = Fraction(1)
        for sym, y in zip(code.codewords[m], received):
            like *= rows[sym][y]
            if like == 0:
                break
        if like > 0:
            compatible += 1
            unique_compatible = m
            if best_like is None or like > best_like:
                best, best_like = m, like
    if compatible == 1:
        return unique_compatible
    if best is None:
        return 0
    return best


def run_estimation(cfg: SimConfig) -> Trajectory:
    """Tracking run: quantized state estimation over the channel.

    Refuses when no per-mode cell allocation contracts strictly (code rate
    at or below the plant's growth).  With a zero-error code the recorded
    error never exceeds the analytic radius bound; with anything else the
    bound is reported but typically violated, which is the point of the
    divergence smoke runs.
    """
    if cfg.regime.kind not in ("se-nofb", "se-fb"):
        raise SimulationError("estimation run expects an se-* regime")
    return _run_loop(cfg, with_control=False, allow_boundary=False)


def run_stabilization(cfg: SimConfig) -> Trajectory:
    """Stabilization run: per-mode deadbeat control from the decoded estimate.

    The coder mirror is handed the applied control drive; over a channel
    where the code is not zero-error the coder and decoder boxes still
    desynchronize through mis-decoded cells, so those runs diverge.
    """
    if cfg.regime.kind != "stab-fb":
        raise SimulationError("stabilization run expects regime stab-fb")
    return _run_loop(cfg, with_control=True, allow_boundary=False)


def run_weak_detection(cfg: SimConfig) -> Trajectory:
    """Undisturbed tracking: the radius decays geometrically (or sits at the
    boundary when the code rate exactly matches the growth, which is flagged
    rather than refused)."""
    if cfg.regime.kind != "weak":
        raise SimulationError("weak detection expects regime weak")
    if (cfg.plant.disturbance_bound or 0) != 0:
        raise SimulationError("weak detection models an undisturbed plant (D = 0)")
    return _run_loop(cfg, with_control=False, allow_boundary=True)
