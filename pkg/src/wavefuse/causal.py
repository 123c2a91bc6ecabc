"""Causal processes and their combinator algebra.

A causal process consumes exactly one input sample per output sample, and
every output depends only on current and past inputs.  The combinators
(``arr``, ``compose``, ``first``, ``loop``) obey the arrow laws, and
``loop`` implements feedback with a one-sample delay, so a feedback patch
can never demand its own current output: deadlock freedom is structural.

Keeping transformations as processes (rather than generator-to-generator
functions) is what lets one source feed several consumers while being
stepped exactly once per tick; see ``fanout``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Tuple

from .generator import GeneratorDef, fraction

CausalStepResult = Tuple[bool, Any, Any]


@dataclass(frozen=True)
class CausalDef:
    """Initial state plus pure step ``(input, state) -> (cont, output, state)``."""

    initial: Any
    step: Callable[[Any, Any], CausalStepResult]


def arr(f: Callable[[Any], Any]) -> CausalDef:
    """Stateless transformation; never terminates on its own."""

    def step(a, state):
        return True, f(a), state

    return CausalDef(None, step)


def identity() -> CausalDef:
    return arr(lambda a: a)


def compose(g: CausalDef, f: CausalDef) -> CausalDef:
    """Serial composition: run ``g``, feed its output to ``f``.

    Continues only while both continue; the state is the pair of states.
    """
    g_step, f_step = g.step, f.step

    def step(a, state):
        sg, sf = state
        cg, b, sg2 = g_step(a, sg)
        if not cg:
            return False, None, state
        cf, c, sf2 = f_step(b, sf)
        if not cf:
            return False, None, state
        return True, c, (sg2, sf2)

    return CausalDef((g.initial, f.initial), step)


def first(f: CausalDef) -> CausalDef:
    """Apply ``f`` to the first tuple component, pass the second through."""
    f_step = f.step

    def step(pair, state):
        a, c = pair
        cf, b, state2 = f_step(a, state)
        if not cf:
            return False, None, state
        return True, (b, c), state2

    return CausalDef(f.initial, step)


def swap() -> CausalDef:
    return arr(lambda pair: (pair[1], pair[0]))


def second(f: CausalDef) -> CausalDef:
    return compose(compose(swap(), first(f)), swap())


def fanout() -> CausalDef:
    """Duplicate each input sample into a pair."""
    return arr(lambda x: (x, x))


def mix_proc() -> CausalDef:
    """Stateless pairwise addition."""
    return arr(lambda pair: pair[0] + pair[1])


def parallel(f: CausalDef, g: CausalDef) -> CausalDef:
    """f *** g: apply f and g to the two components of a pair."""
    return compose(first(f), second(g))


def apply(f: CausalDef, g: GeneratorDef) -> GeneratorDef:
    """Run a causal process over a generator, producing a fused generator.

    The result is a plain generator: causality is lost once the input is
    fixed.
    """
    f_step, g_step = f.step, g.step

    def step(state):
        sg, sf = state
        cg, a, sg2 = g_step(sg)
        if not cg:
            return False, None, state
        cf, b, sf2 = f_step(a, sf)
        if not cf:
            return False, None, state
        return True, b, (sg2, sf2)

    return GeneratorDef((g.initial, f.initial), step)


def take(n: int) -> CausalDef:
    """Pass through the first ``n`` inputs, then terminate."""
    if n < 0:
        raise ValueError("n must be >= 0")

    def step(a, remaining):
        if remaining <= 0:
            return False, None, remaining
        return True, a, remaining - 1

    return CausalDef(n, step)


def delay1(init) -> CausalDef:
    """Delay by one sample, emitting ``init`` first."""

    def step(a, held):
        return True, held, a

    return CausalDef(init, step)


def delayN(n: int, init) -> CausalDef:
    """Delay by ``n`` samples via a ring buffer held in the state.

    The state is an immutable (ring, position) pair so re-running from the
    initial state stays reproducible.
    """
    if n < 1:
        raise ValueError("delay must be >= 1")

    def step(a, state):
        ring, pos = state
        out = ring[pos]
        ring2 = ring[:pos] + (a,) + ring[pos + 1:]
        pos2 = pos + 1
        if pos2 == n:
            pos2 = 0
        return True, out, (ring2, pos2)

    return CausalDef(((init,) * n, 0), step)


def loop(init, body: CausalDef) -> CausalDef:
    """Feedback: the body's second output is fed back to its second input.

    The fed-back value is delayed by exactly one sample and starts at
    ``init``.  Computing tick t never requires the body's own tick-t
    output, so no fixpoint iteration is needed.  If the body terminates,
    termination propagates immediately and the final fed-back value is
    discarded.
    """
    body_step = body.step

    def step(a, state):
        sb, fed = state
        cb, out, sb2 = body_step((a, fed), sb)
        if not cb:
            return False, None, state
        b, fed2 = out
        return True, b, (sb2, fed2)

    return CausalDef((body.initial, init), step)


def osci_proc(wave: Callable[[float], Any], phase0: float) -> CausalDef:
    """Oscillator that consumes its frequency control as input.

    Causal with respect to the frequency control: the phase advances by the
    current input each tick.  With a constant control it coincides with the
    plain oscillator.
    """
    if not (0.0 <= phase0 < 1.0):
        raise ValueError(f"phase0 must lie in [0, 1), got {phase0!r}")

    def step(freq, phase):
        return True, wave(phase), fraction(phase + freq)

    return CausalDef(phase0, step)


def counting(g: GeneratorDef, counter: dict) -> GeneratorDef:
    """Wrap a generator so every step increments ``counter['steps']``.

    Diagnostic aid for checking that a shared source is evaluated exactly
    once per output sample.
    """
    g_step = g.step

    def step(state):
        counter["steps"] = counter.get("steps", 0) + 1
        return g_step(state)

    return GeneratorDef(g.initial, step)


def shared_mix(source: GeneratorDef, f: CausalDef) -> GeneratorDef:
    """mix(x, f(x)) with x computed once per tick.

    The naive generator-level translation would run ``source`` twice per
    output sample; routing through ``fanout`` keeps one evaluation.
    """
    return apply(compose(compose(fanout(), second(f)), mix_proc()), source)
