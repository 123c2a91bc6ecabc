"""Recursive filters with explicit, opaque parameter types.

The filtering pipeline is split into three independent pieces: generation
of filter parameters, resampling of those parameters up to the audio rate,
and the actual per-sample recurrence.  Parameters are distinct types per
filter family, so a first-order coefficient cannot be fed to a biquad.

Design formulas pinned here (the paper cites the standard literature but
fixes none):

* first-order lowpass feedback ``k = exp(-2*pi*fc)``
* Butterworth cascades by bilinear transform of the analog prototype poles
* first-order allpass recurrence ``y[t] = k*x[t] + x[t-1] - k*y[t-1]``
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .causal import CausalDef, arr, compose, delayN, loop, second
from .generator import GeneratorDef
from . import causal as _causal


@dataclass(frozen=True)
class FirstOrderParam:
    """Feedback coefficient for ``y[t] = x[t] + k*y[t-1]``; |k| < 1 is stable."""

    k: float

    @staticmethod
    def stable(k: float) -> "FirstOrderParam":
        if not abs(k) < 1.0:
            raise ValueError(f"|k| must be < 1 for stability, got {k!r}")
        return FirstOrderParam(k)


@dataclass(frozen=True)
class SecondOrderParam:
    """Coefficients for ``1/(1 - a*z^-1 + b*z^-2)`` plus optional numerator.

    The recurrence is ``y[t] = n0*x[t] + n1*x[t-1] + n2*x[t-2]
    + a*y[t-1] - b*y[t-2]``; the default numerator (1, 0, 0) gives the
    pure-recursive form.
    """

    a: float
    b: float
    n0: float = 1.0
    n1: float = 0.0
    n2: float = 0.0

    @staticmethod
    def from_pole(radius: float, angle: float, n0=1.0, n1=0.0, n2=0.0) -> "SecondOrderParam":
        if not abs(radius) < 1.0:
            raise ValueError(f"pole radius must be < 1, got {radius!r}")
        return SecondOrderParam(
            a=2.0 * radius * math.cos(angle), b=radius * radius, n0=n0, n1=n1, n2=n2
        )

    def pole_radius(self) -> float:
        roots = _quadratic_roots(1.0, -self.a, self.b)
        return max(abs(r) for r in roots)


@dataclass(frozen=True)
class AllpassParam:
    """Coefficient for ``y[t] = k*x[t] + x[t-1] - k*y[t-1]``; |k| < 1."""

    k: float

    def __post_init__(self):
        if not abs(self.k) < 1.0:
            raise ValueError(f"|k| must be < 1, got {self.k!r}")


@dataclass(frozen=True)
class ControlRated:
    """A parameter stream at control rate: one value per ``factor`` samples."""

    params: GeneratorDef
    factor: int

    def __post_init__(self):
        if not (isinstance(self.factor, int) and self.factor >= 1):
            raise ValueError(f"factor must be an integer >= 1, got {self.factor!r}")


def _quadratic_roots(c2, c1, c0):
    disc = cmath.sqrt(c1 * c1 - 4.0 * c2 * c0)
    return ((-c1 + disc) / (2 * c2), (-c1 - disc) / (2 * c2))


# ---------------------------------------------------------------------------
# fixed-parameter filters


def first_order_recursive(p: FirstOrderParam) -> CausalDef:
    """y[t] = x[t] + k*y[t-1], history starts at zero."""
    k = p.k

    def step(x, y1):
        y = x + k * y1
        return True, y, y

    return CausalDef(0.0, step)


def first_order_norm(p: FirstOrderParam) -> CausalDef:
    """Unit-DC-gain variant: y[t] = (1-k)*x[t] + k*y[t-1]."""
    k = p.k
    g = 1.0 - k

    def step(x, y1):
        y = g * x + k * y1
        return True, y, y

    return CausalDef(0.0, step)


def second_order_recursive(p: SecondOrderParam) -> CausalDef:
    """Biquad recurrence with zero-initialized history."""
    a, b, n0, n1, n2 = p.a, p.b, p.n0, p.n1, p.n2

    def step(x, state):
        x1, x2, y1, y2 = state
        y = n0 * x + n1 * x1 + n2 * x2 + a * y1 - b * y2
        return True, y, (x, x1, y, y1)

    return CausalDef((0.0, 0.0, 0.0, 0.0), step)


def biquad_cascade(sections: Sequence[SecondOrderParam]) -> CausalDef:
    proc = second_order_recursive(sections[0])
    for p in sections[1:]:
        proc = compose(proc, second_order_recursive(p))
    return proc


def allpass_stage(p: AllpassParam) -> CausalDef:
    """First-order allpass: unit magnitude response at every frequency."""
    k = p.k

    def step(x, state):
        x1, y1 = state
        y = k * x + x1 - k * y1
        return True, y, (x, y)

    return CausalDef((0.0, 0.0), step)


def allpass_cascade(n_stages: int, p: AllpassParam) -> CausalDef:
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    proc = allpass_stage(p)
    for _ in range(n_stages - 1):
        proc = compose(proc, allpass_stage(p))
    return proc


# ---------------------------------------------------------------------------
# parameter design


def _check_cutoff(fc: float) -> None:
    if not (0.0 < fc < 0.5):
        raise ValueError(f"cutoff must lie in (0, 0.5) cycles/sample, got {fc!r}")


def lowpass_by_slope(fc: float) -> FirstOrderParam:
    """First-order lowpass coefficient ``k = exp(-2*pi*fc)``.

    Larger cutoffs give weaker feedback; fc -> 0.5 leaves k ~ 0.043.
    """
    _check_cutoff(fc)
    return FirstOrderParam(math.exp(-2.0 * math.pi * fc))


def first_order_gain(k: float, f: float) -> float:
    """Magnitude of 1/(1 - k*z^-1) at frequency f (cycles/sample)."""
    w = 2.0 * math.pi * f
    return 1.0 / abs(1.0 - k * cmath.exp(-1j * w))


def lowpass_by_resonance(fc: float, gain_at_fc: float) -> FirstOrderParam:
    """First-order lowpass from a prescribed amplification at the cutoff.

    Solves |1/(1 - k e^{-iw})| = gain for the stable root, so specifying
    the gain that ``lowpass_by_slope`` produces recovers the same k.
    """
    _check_cutoff(fc)
    if gain_at_fc <= 0.0:
        raise ValueError("gain must be positive")
    w = 2.0 * math.pi * fc
    c = math.cos(w)
    disc = c * c - 1.0 + 1.0 / (gain_at_fc * gain_at_fc)
    if disc < 0.0:
        raise ValueError(f"no real coefficient reaches gain {gain_at_fc!r} at {fc!r}")
    k = c - math.sqrt(disc)
    if not abs(k) < 1.0:
        raise ValueError(f"requested gain leads outside the stable region: k={k!r}")
    return FirstOrderParam(k)


def lowpass_param_from_cutoff(fc: float, resonance: float | None = None):
    """Cutoff to parameters, selected by slope (None) or resonant gain."""
    if resonance is None:
        return lowpass_by_slope(fc)
    return lowpass_by_resonance(fc, resonance)


def butterworth_lowpass_cascade(order: int, fc: float) -> list[SecondOrderParam]:
    """Even-order Butterworth lowpass as order/2 biquad sections.

    Analog prototype pole pairs s^2 + q_k s + 1 with
    q_k = 2 cos(pi (2k+1) / (2 order)), prewarped and mapped by the
    bilinear transform.  DC gain of every section is exactly one and the
    half-power point lands on fc.
    """
    if order < 2 or order % 2:
        raise ValueError(f"order must be even and >= 2, got {order!r}")
    _check_cutoff(fc)
    w = math.tan(math.pi * fc)
    sections = []
    for k in range(order // 2):
        q = 2.0 * math.cos(math.pi * (2 * k + 1) / (2 * order))
        c0 = 1.0 + q * w + w * w
        d1 = (2.0 * w * w - 2.0) / c0
        d2 = (1.0 - q * w + w * w) / c0
        g = w * w / c0
        sections.append(
            SecondOrderParam(a=-d1, b=d2, n0=g, n1=2.0 * g, n2=g)
        )
    return sections


def cascade_response(sections: Sequence[SecondOrderParam], f: float) -> complex:
    """Frequency response of a biquad cascade at f cycles/sample."""
    z1 = cmath.exp(-2j * math.pi * f)
    h = 1.0 + 0.0j
    for p in sections:
        num = p.n0 + p.n1 * z1 + p.n2 * z1 * z1
        den = 1.0 - p.a * z1 + p.b * z1 * z1
        h *= num / den
    return h


# ---------------------------------------------------------------------------
# parameter resampling


def _lerp(p, q, t: float):
    if isinstance(p, (int, float)):
        return p + (q - p) * t
    if isinstance(p, tuple):
        return tuple(_lerp(pi, qi, t) for pi, qi in zip(p, q))
    # parameter records interpolate fieldwise
    fields = {
        name: _lerp(getattr(p, name), getattr(q, name), t)
        for name in p.__dataclass_fields__
    }
    return replace(p, **fields)


def resample_constant(ctrl: ControlRated) -> GeneratorDef:
    """Repeat each control value ``factor`` times (classical control rate)."""
    factor = ctrl.factor
    src_step = ctrl.params.step

    def step(state):
        src, held, remaining = state
        if remaining == 0:
            cont, held, src = src_step(src)
            if not cont:
                return False, None, state
            remaining = factor
        return True, held, (src, held, remaining - 1)

    return GeneratorDef((ctrl.params.initial, None, 0), step)


def resample_linear(ctrl: ControlRated) -> GeneratorDef:
    """Piecewise-linear interpolation between consecutive control values.

    Each segment contributes ``factor`` samples starting at its left value;
    the stream ends when the control stream stops supplying a right
    endpoint.
    """
    factor = ctrl.factor
    src_step = ctrl.params.step

    def step(state):
        src, left, right, idx, primed = state
        if not primed:
            cont, left, src = src_step(src)
            if not cont:
                return False, None, state
            cont, right, src = src_step(src)
            if not cont:
                return False, None, state
            idx, primed = 0, True
        if idx == factor:
            left = right
            cont, right, src = src_step(src)
            if not cont:
                return False, None, state
            idx = 0
        y = _lerp(left, right, idx / factor)
        return True, y, (src, left, right, idx + 1, primed)

    return GeneratorDef((ctrl.params.initial, None, None, 0, False), step)


# ---------------------------------------------------------------------------
# parameter-driven filtering


def _recurrence_for(family):
    if family is FirstOrderParam:
        def fo(p, x, state):
            y = x + p.k * state
            return y, y
        return fo, 0.0
    if family is SecondOrderParam:
        def so(p, x, state):
            x1, x2, y1, y2 = state
            y = p.n0 * x + p.n1 * x1 + p.n2 * x2 + p.a * y1 - p.b * y2
            return y, (x, x1, y, y1)
        return so, (0.0, 0.0, 0.0, 0.0)
    if family is AllpassParam:
        def ap(p, x, state):
            x1, y1 = state
            y = p.k * x + x1 - p.k * y1
            return y, (x, y)
        return ap, (0.0, 0.0)
    raise TypeError(f"unknown filter family: {family!r}")


def controlled_filter(params: GeneratorDef, family) -> CausalDef:
    """Filter consuming one parameter per sample alongside each input.

    ``params`` must already run at the sample rate (resample first).  A
    constant parameter stream reproduces the fixed filter exactly; the
    process terminates when the parameter stream is exhausted.
    """
    recur, hist0 = _recurrence_for(family)
    p_step = params.step

    def step(x, state):
        sp, hist = state
        cont, p, sp2 = p_step(sp)
        if not cont:
            return False, None, state
        y, hist2 = recur(p, x, hist)
        return True, y, (sp2, hist2)

    return CausalDef((params.initial, hist0), step)


def controlled_biquad_cascade(params: GeneratorDef) -> CausalDef:
    """Cascade driven by a stream of section tuples, one tuple per sample."""
    p_step = params.step

    def step(x, state):
        sp, hists = state
        cont, secs, sp2 = p_step(sp)
        if not cont:
            return False, None, state
        new_hists = []
        y = x
        for p, hist in zip(secs, hists):
            x1, x2, y1, y2 = hist
            out = p.n0 * y + p.n1 * x1 + p.n2 * x2 + p.a * y1 - p.b * y2
            new_hists.append((y, x1, out, y1))
            y = out
        return True, y, (sp2, tuple(new_hists))

    def initial_for(n_sections):
        return (params.initial, ((0.0, 0.0, 0.0, 0.0),) * n_sections)

    # the section count is fixed by the first control value; probe it once
    cont, first_secs, _ = params.step(params.initial)
    if not cont:
        raise ValueError("empty parameter stream")
    return CausalDef(initial_for(len(first_secs)), step)


# ---------------------------------------------------------------------------
# plucked string


def karplus_strong(
    delay: int,
    damping: FirstOrderParam,
    excitation: GeneratorDef,
    loop_gain: float = 0.99,
) -> GeneratorDef:
    """Feedback of ``delay`` samples through a first-order lowpass.

    The damping lowpass is the unit-DC-gain form, so ``loop_gain`` is the
    round-trip amplification at DC; the output decays whenever it is below
    one.  Built from ``loop``, whose one-sample feedback delay supplies the
    first tap of the delay line.
    """
    if delay < 1:
        raise ValueError("delay must be >= 1")
    damp = compose(first_order_norm(damping), arr(lambda v: loop_gain * v))
    path = compose(delayN(delay - 1, 0.0), damp) if delay > 1 else damp
    add_dup = arr(lambda xc: (xc[0] + xc[1], xc[0] + xc[1]))
    proc = loop(0.0, compose(add_dup, second(path)))
    return _causal.apply(proc, excitation)
