"""Serially vectorized generators: ordinary generator definitions whose
samples are whole lane vectors.

Serial vectorization runs N interleaved copies of a process at stride-N
parameters, so lane i of block b holds output sample b*N + i.  An
oscillator with phase p and frequency f becomes lane phases
(p, frac(p+f), ..., frac(p+(N-1)f)) advancing by N*f; an exponential
becomes lane amplitudes amp*r^i decaying by r^N per block.  Because the
samples are numpy arrays, all generator and causal combinators apply
unchanged.
"""

from __future__ import annotations

import math

import numpy as np

from ..causal import CausalDef
from ..filters import FirstOrderParam, SecondOrderParam
from ..generator import (
    GeneratorDef,
    LCG_INC,
    LCG_MASK,
    LCG_MULT,
    lcg_next,
)
from .decompose import decompose_recursive
from .lanes import cum_sum, first_order_vec_block, shift_up


def _check_lanes(lanes: int) -> None:
    if lanes < 1 or (lanes & (lanes - 1)):
        raise ValueError(f"lane count must be a power of two, got {lanes}")


def osci_vec_serial(wave, phase0: float, freq: float, lanes: int = 4) -> GeneratorDef:
    """Oscillator over lane vectors; flattened output equals the scalar one."""
    _check_lanes(lanes)
    if not (0.0 <= phase0 < 1.0):
        raise ValueError(f"phase0 must lie in [0, 1), got {phase0!r}")
    init = np.array([(phase0 + i * freq) % 1.0 for i in range(lanes)])
    stride = lanes * freq

    def step(phases):
        nxt = phases + stride
        return True, wave(phases), nxt - np.floor(nxt)

    return GeneratorDef(init, step)


def exponential_vec_serial(half_life: float, amp: float = 1.0, lanes: int = 4) -> GeneratorDef:
    """Exponential decay over lane vectors: lanes amp*r^i, block decay r^N."""
    _check_lanes(lanes)
    if not (half_life > 0.0) or not math.isfinite(half_life):
        raise ValueError(f"half_life must be positive and finite, got {half_life!r}")
    r = 2.0 ** (-1.0 / half_life)
    init = amp * r ** np.arange(lanes, dtype=np.float64)
    block_decay = r ** lanes

    def step(amps):
        return True, amps, amps * block_decay

    return GeneratorDef(init, step)


def lcg_stride(n: int):
    """Multiplier and increment of the n-fold composed LCG (mod 2^32)."""
    a, c = 1, 0
    for _ in range(n):
        a = (LCG_MULT * a) & LCG_MASK
        c = (LCG_MULT * c + LCG_INC) & LCG_MASK
    return a, c


def noise_vec_serial(seed: int, lanes: int = 4) -> GeneratorDef:
    """LCG noise over lane vectors; integer-exact match with the scalar noise."""
    _check_lanes(lanes)
    a_n, c_n = lcg_stride(lanes)
    states = []
    s = seed & LCG_MASK
    for _ in range(lanes):
        s = lcg_next(s)
        states.append(s)
    init = np.array(states, dtype=np.uint64)
    a_n = np.uint64(a_n)
    c_n = np.uint64(c_n)
    mask = np.uint64(LCG_MASK)

    def step(state):
        y = state.astype(np.float64) * 2.0 ** -31 - 1.0
        return True, y, (a_n * state + c_n) & mask

    return GeneratorDef(init, step)


def noise_burst_vec(seed: int, length: int, lanes: int = 4) -> GeneratorDef:
    """Noise for ``length`` samples then silence, at block granularity."""
    base = noise_vec_serial(seed, lanes)
    n_step = base.step

    def step(state):
        nstate, t = state
        cont, y, nstate2 = n_step(nstate)
        keep = (t + np.arange(lanes)) < length
        return cont, np.where(keep, y, 0.0), (nstate2, t + lanes)

    return GeneratorDef((base.initial, 0), step)


def ramp_vec_serial(start: float, slope: float, lanes: int = 4) -> GeneratorDef:
    _check_lanes(lanes)
    init = start + slope * np.arange(lanes, dtype=np.float64)
    stride = slope * lanes

    def step(vals):
        return True, vals, vals + stride

    return GeneratorDef(init, step)


def first_order_recursive_vec(p: FirstOrderParam, lanes: int = 4) -> CausalDef:
    """Block form of ``y[t] = x[t] + k*y[t-1]`` via the shift-add rounds."""
    _check_lanes(lanes)
    k = p.k

    def step(block, carry):
        out, carry2 = first_order_vec_block(k, block, carry)
        return True, out, carry2

    return CausalDef(0.0, step)


def _delayed(block: np.ndarray, tail: np.ndarray, m: int) -> np.ndarray:
    """The block's input stream delayed by m, reaching into the stored tail."""
    if m == len(block):
        return tail[-m:].copy()
    return np.concatenate((tail[-m:], block[:-m]))


def second_order_recursive_vec(p: SecondOrderParam, lanes: int = 4) -> CausalDef:
    """Block biquad: numerator taps, the decomposed FIR stages, then the
    strided recursion whose lags are one and two whole blocks."""
    _check_lanes(lanes)
    deco = decompose_recursive([1.0, -p.a, p.b], lanes)
    return _staged_biquad(p, deco.stages, deco.iir, lanes)


def _staged_biquad(p: SecondOrderParam, stages, iir, lanes: int) -> CausalDef:
    rec_a = -iir[1] if len(iir) > 1 else 0.0
    rec_b = iir[2] if len(iir) > 2 else 0.0
    n0, n1, n2 = p.n0, p.n1, p.n2
    zeros = np.zeros(lanes)

    def initial():
        stage_tails = tuple(np.zeros(2 * lag) for lag, _ in stages)
        return (np.zeros(2), stage_tails, zeros.copy(), zeros.copy())

    def step(x, state):
        x_tail, stage_tails, y1, y2 = state
        # numerator: 3 taps on the raw input
        ext = np.concatenate((x_tail, x))
        cur = n0 * x + n1 * ext[1:1 + lanes] + n2 * ext[0:lanes]
        new_tails = []
        for (lag, coeffs), tail in zip(stages, stage_tails):
            alpha, beta = coeffs[1], coeffs[2]
            stream = np.concatenate((tail, cur))
            nxt = cur + alpha * stream[lag:lag + lanes] + beta * stream[0:lanes]
            new_tails.append(stream[-2 * lag:].copy())
            cur = nxt
        y = cur + rec_a * y1 - rec_b * y2
        return True, y, (ext[-2:].copy(), tuple(new_tails), y, y1)

    return CausalDef(initial(), step)


def allpass_stage_vec(k: float, lanes: int = 4) -> CausalDef:
    """Block form of ``y = k*x + x[-1] - k*y[-1]``: 2-tap numerator plus the
    first-order shift-add recursion with coefficient -k."""
    _check_lanes(lanes)

    def step(block, state):
        x_last, carry = state
        ext = np.concatenate(([x_last], block[:-1]))
        t = k * block + ext
        out, carry2 = first_order_vec_block(-k, t, carry)
        return True, out, (float(block[-1]), carry2)

    return CausalDef((0.0, 0.0), step)


def controlled_first_order_vec(ctrl: GeneratorDef, lanes: int = 4) -> CausalDef:
    """First-order filter with one parameter per block (vector rate).

    Parameters hold constant within each block; the matching scalar
    reference updates its coefficient every ``lanes`` samples.
    """
    _check_lanes(lanes)
    c_step = ctrl.step

    def step(block, state):
        cs, carry = state
        cont, p, cs2 = c_step(cs)
        if not cont:
            return False, None, state
        out, carry2 = first_order_vec_block(p.k, block, carry)
        return True, out, (cs2, carry2)

    return CausalDef((ctrl.initial, 0.0), step)


def controlled_biquad_cascade_vec(ctrl: GeneratorDef, lanes: int = 4) -> CausalDef:
    """Biquad cascade with one section tuple per block (vector rate).

    Each block's sections are decomposed for the lane stride on the fly;
    control streams usually hold values for many blocks, so the cost is
    amortized by a small memo table.
    """
    _check_lanes(lanes)
    c_step = ctrl.step
    memo: dict = {}

    def stages_for(p: SecondOrderParam):
        key = (p.a, p.b)
        hit = memo.get(key)
        if hit is None:
            deco = decompose_recursive([1.0, -p.a, p.b], lanes)
            hit = (deco.stages, -deco.iir[1], deco.iir[2])
            memo[key] = hit
        return hit

    def initial_hist():
        # per section: x tail(2), stage tails, y1, y2
        return None

    def section_apply(p, x, hist, stage_count):
        stages, rec_a, rec_b = stages_for(p)
        if hist is None:
            x_tail = np.zeros(2)
            tails = tuple(np.zeros(2 * lag) for lag, _ in stages)
            y1 = np.zeros(lanes)
            y2 = np.zeros(lanes)
        else:
            x_tail, tails, y1, y2 = hist
        ext = np.concatenate((x_tail, x))
        cur = p.n0 * x + p.n1 * ext[1:1 + lanes] + p.n2 * ext[0:lanes]
        new_tails = []
        for (lag, coeffs), tail in zip(stages, tails):
            alpha, beta = coeffs[1], coeffs[2]
            stream = np.concatenate((tail, cur))
            nxt = cur + alpha * stream[lag:lag + lanes] + beta * stream[0:lanes]
            new_tails.append(stream[-2 * lag:].copy())
            cur = nxt
        y = cur + rec_a * y1 - rec_b * y2
        return y, (ext[-2:].copy(), tuple(new_tails), y, y1)

    def step(x, state):
        cs, hists = state
        cont, secs, cs2 = c_step(cs)
        if not cont:
            return False, None, state
        if hists is None:
            hists = (None,) * len(secs)
        cur = x
        new_hists = []
        for p, hist in zip(secs, hists):
            cur, h2 = section_apply(p, cur, hist, len(secs))
            new_hists.append(h2)
        return True, cur, (cs2, tuple(new_hists))

    return CausalDef((ctrl.initial, None), step)


def osci_proc_vec(wave, phase0: float, lanes: int = 4) -> CausalDef:
    """Frequency-modulated oscillator over blocks.

    Sample-rate FM needs the running phase, which is the cumulative sum of
    the frequency block (computed by the shift-add scan) offset by the
    carried phase, with the fraction taken lanewise.
    """
    _check_lanes(lanes)
    if not (0.0 <= phase0 < 1.0):
        raise ValueError(f"phase0 must lie in [0, 1), got {phase0!r}")

    def step(freqs, carry):
        sums = cum_sum(np.asarray(freqs, dtype=np.float64))
        phases = carry + shift_up(sums, 1)
        phases -= np.floor(phases)
        carry2 = carry + sums[-1]
        return True, wave(phases), carry2 - math.floor(carry2)

    return CausalDef(phase0, step)


def render_blocks(g: GeneratorDef, n_samples: int, dtype=np.float32) -> np.ndarray:
    """Flatten a block generator to ``n_samples`` samples.

    Whole blocks are produced and the flattened stream is truncated, so the
    result is identical to the scalar stream for non-terminating programs
    regardless of whether ``n_samples`` is a multiple of the lane count.
    """
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    out = None
    pos = 0
    state = g.initial
    step = g.step
    while pos < n_samples:
        cont, block, state = step(state)
        if not cont:
            break
        block = np.asarray(block)
        if out is None:
            from .. import buffers

            out = buffers.alloc_samples(n_samples + len(block), dtype=dtype)
        take = min(len(block), n_samples - pos + len(block))
        out[pos:pos + len(block)] = block
        pos += len(block)
    if out is None:
        from .. import buffers

        out = buffers.alloc_samples(0, dtype=dtype)
    return out[:min(pos, n_samples)]
