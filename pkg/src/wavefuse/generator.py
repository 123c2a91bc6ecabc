"""Signal generators as state transition systems.

A generator is a pair of an initial state and a pure step function.  Each
step yields a continuation flag, one sample, and the successor state.
Combinators compose step functions, so a whole patch renders in a single
loop without intermediate per-stage buffers.

Step results are plain tuples ``(cont, sample, next_state)``; ``StepResult``
is exported as a documented alias.  When ``cont`` is falsy the sample and
state slots are never examined by the drivers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Tuple

import numpy as np

from . import buffers

StepResult = Tuple[bool, Any, Any]

# Numerical Recipes 32-bit linear congruential generator.  Pinned so that
# every back-end produces the same noise stream for the same seed.
LCG_MULT = 1664525
LCG_INC = 1013904223
LCG_MASK = 0xFFFFFFFF


@dataclass(frozen=True)
class GeneratorDef:
    """Immutable description of a sample stream.

    ``step(state) -> (cont, sample, next_state)`` must be pure: re-running
    from ``initial`` reproduces the identical sequence.
    """

    initial: Any
    step: Callable[[Any], StepResult]


def fraction(x: float) -> float:
    """Wrap ``x`` to [0, 1) as ``x - floor(x)``.  Works for negative x."""
    return x - math.floor(x)


def saw_wave(phase):
    """Sawtooth waveform on [0, 1): descends from 1 through -1."""
    return 1.0 - 2.0 * phase


def exponential(half_life: float, amp: float = 1.0) -> GeneratorDef:
    """Exponential decay: amp, amp*r, amp*r^2, ... with r = 2**(-1/half_life).

    The decay factor is computed once here, not per sample.  Never
    terminates.
    """
    if not (half_life > 0.0) or not math.isfinite(half_life):
        raise ValueError(f"half_life must be positive and finite, got {half_life!r}")
    decay = 2.0 ** (-1.0 / half_life)

    def step(y):
        return True, y, y * decay

    return GeneratorDef(amp, step)


def osci(wave: Callable[[float], Any], phase0: float, freq: float) -> GeneratorDef:
    """Oscillator with the phase as internal state.

    Emits ``wave(phase)`` while advancing the phase by ``freq`` cycles per
    sample, wrapped to [0, 1).  Never terminates.
    """
    if not (0.0 <= phase0 < 1.0):
        raise ValueError(f"phase0 must lie in [0, 1), got {phase0!r}")
    if not math.isfinite(freq):
        raise ValueError(f"freq must be finite, got {freq!r}")

    def step(phase):
        return True, wave(phase), fraction(phase + freq)

    return GeneratorDef(phase0, step)


def ramp_linear(start: float, slope: float) -> GeneratorDef:
    """Arithmetic progression start, start+slope, start+2*slope, ..."""

    def step(y):
        return True, y, y + slope

    return GeneratorDef(float(start), step)


def constant(value) -> GeneratorDef:
    """Generator that repeats ``value`` forever."""

    def step(state):
        return True, value, state

    return GeneratorDef(None, step)


def silence() -> GeneratorDef:
    return constant(0.0)


def lcg_next(state: int) -> int:
    return (LCG_MULT * state + LCG_INC) & LCG_MASK


def lcg_to_amplitude(state: int) -> float:
    """Map a 32-bit LCG state to [-1, 1)."""
    return state * 2.0 ** -31 - 1.0


def noise(seed: int) -> GeneratorDef:
    """White noise from the pinned 32-bit LCG, scaled to [-1, 1).

    The state advances first and the sample is taken from the updated
    state, so the seed itself never leaks into the output.  Deterministic
    per seed; never terminates.
    """

    def step(s):
        s = lcg_next(s)
        return True, lcg_to_amplitude(s), s

    return GeneratorDef(seed & LCG_MASK, step)


def noise_burst(seed: int, length: int) -> GeneratorDef:
    """Noise for ``length`` samples, then silence forever.

    Used as a plucked-string excitation; it must not terminate, because the
    feedback loop it feeds keeps ringing.
    """
    if length < 0:
        raise ValueError("length must be >= 0")

    def step(state):
        s, remaining = state
        s = lcg_next(s)
        y = lcg_to_amplitude(s) if remaining > 0 else 0.0
        return True, y, (s, remaining - 1 if remaining > 0 else 0)

    return GeneratorDef((seed & LCG_MASK, length), step)


def zip_with(f: Callable[[Any, Any], Any], a: GeneratorDef, b: GeneratorDef) -> GeneratorDef:
    """Combine two generators samplewise; runs while both continue."""
    a_step, b_step = a.step, b.step

    def step(state):
        sa, sb = state
        ca, ya, sa2 = a_step(sa)
        cb, yb, sb2 = b_step(sb)
        if not (ca and cb):
            return False, None, state
        return True, f(ya, yb), (sa2, sb2)

    return GeneratorDef((a.initial, b.initial), step)


def amplify(env: GeneratorDef, signal: GeneratorDef) -> GeneratorDef:
    """Samplewise product; terminates as soon as either input terminates."""
    return zip_with(lambda e, x: e * x, env, signal)


def mix(a: GeneratorDef, b: GeneratorDef) -> GeneratorDef:
    """Samplewise sum; terminates as soon as either input terminates."""
    return zip_with(lambda x, y: x + y, a, b)


def from_buffer(buf) -> GeneratorDef:
    """Replay a buffer; the read position is the internal state."""
    n = len(buf)

    def step(pos):
        if pos >= n:
            return False, None, pos
        return True, buf[pos], pos + 1

    return GeneratorDef(0, step)


def render(g: GeneratorDef, max_samples: int, dtype=np.float32):
    """Run the fused loop, writing up to ``max_samples`` samples.

    Returns a buffer whose length is the number of samples actually
    produced (the generator may terminate early).  Exactly one output
    buffer is allocated; allocation failures propagate.
    """
    if max_samples < 0:
        raise ValueError("max_samples must be >= 0")
    out = buffers.alloc_samples(max_samples, dtype=dtype)
    state = g.initial
    step = g.step
    pos = 0
    while pos < max_samples:
        cont, y, state = step(state)
        if not cont:
            break
        out[pos] = y
        pos += 1
    return out[:pos]


def collect(g: GeneratorDef, max_samples: int) -> list:
    """Like render but into a list, for generators of non-scalar samples."""
    items = []
    state = g.initial
    step = g.step
    while len(items) < max_samples:
        cont, y, state = step(state)
        if not cont:
            break
        items.append(y)
    return items


def render_chunked(g: GeneratorDef, chunk_size: int, dtype=np.float32) -> Iterator:
    """Demand-driven rendering into chunks of ``chunk_size`` samples.

    Generator state is carried between chunks; nothing is computed until a
    chunk is requested, so one chunk of an infinite signal returns in
    finite time.  The concatenation of all chunks equals ``render`` output.
    """
    if chunk_size <= 0:
        raise ValueError("chunk_size must be > 0")
    state = g.initial
    step = g.step
    while True:
        out = buffers.alloc_samples(chunk_size, dtype=dtype)
        pos = 0
        cont = True
        while pos < chunk_size:
            cont, y, state = step(state)
            if not cont:
                break
            out[pos] = y
            pos += 1
        if pos:
            yield out[:pos]
        if not cont:
            return
