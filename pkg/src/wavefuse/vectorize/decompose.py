"""Restructuring recursive filters for lane-parallel execution.

Multiplying a transfer function's denominator by its alternating polynomial
(odd-lag coefficients negated) cancels every odd-lag term.  Iterating that
extension turns a purely recursive filter of any order into a short
non-recursive filter followed by a recursion whose lags are all multiples
of the lane width:

    1/(1 - k z^-1) = (1 + k z^-1) / (1 - k^2 z^-2)
                   = (1 + k z^-1)(1 + k^2 z^-2) / (1 - k^4 z^-4)

Polynomials are coefficient lists over z^-1 (index = lag).  The arithmetic
is generic over the number type, so ``fractions.Fraction`` coefficients
stay exact while floats round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [0 * (p[0] * q[0])] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] = out[i + j] + pi * qj
    return out


def _check_monic(d: Sequence) -> None:
    if len(d) == 0 or d[0] != 1:
        raise ValueError("denominator must have constant term 1")


def eliminate_odd_lags(d: Sequence):
    """Return (multiplier, product) cancelling all odd lags of ``d``.

    The multiplier is ``d`` with odd-lag coefficients negated.  The odd
    coefficients of the product cancel identically (each pairing appears
    with both signs), so they are zeroed structurally rather than left as
    rounding residue.
    """
    _check_monic(d)
    mult = [(-c if i % 2 else c) for i, c in enumerate(d)]
    prod = poly_mul(list(d), mult)
    for i in range(1, len(prod), 2):
        prod[i] = 0 * prod[i]
    return mult, prod


@dataclass(frozen=True)
class FilterDecomposition:
    """Short-term FIR part and long-term strided recursion.

    ``fir`` is a polynomial over z^-1 (dense, lag 0 first).  ``iir`` is the
    residual denominator with all lags multiples of ``stride``, stored
    compactly: ``iir[i]`` is the coefficient at lag ``i * stride`` and
    ``iir[0] == 1``.  The defining identity is
    ``fir(z) * d(z) == iir(z^stride)``.
    """

    fir: tuple
    iir: tuple
    stride: int

    @property
    def stages(self):
        """The FIR part factored per elimination round.

        Each entry is ``(lag, coefficients)``: the round's multiplier has
        its taps at multiples of ``lag``.  Applying the stages in order
        equals applying ``fir`` as one mask.
        """
        return self._stages


def decompose_recursive(d: Sequence, stride: int) -> FilterDecomposition:
    """Iterate the odd-lag elimination until all recursion lags reach
    ``stride`` (a power of two).  ``stride == 1`` is the identity
    decomposition."""
    _check_monic(d)
    if stride < 1 or (stride & (stride - 1)):
        raise ValueError(f"stride must be a power of two, got {stride}")
    one = d[0]  # multiplicative unit of the coefficient type
    fir = [one]
    stages = []
    cur = list(d)
    lag = 1
    while lag < stride:
        mult, prod = eliminate_odd_lags(cur)
        # spread the multiplier's taps onto the original lag grid
        spread = [0 * one] * ((len(mult) - 1) * lag + 1)
        for i, c in enumerate(mult):
            spread[i * lag] = c
        stages.append((lag, tuple(mult)))
        fir = poly_mul(fir, spread)
        cur = prod[::2]  # halve the lag grid
        lag *= 2
    deco = FilterDecomposition(fir=tuple(fir), iir=tuple(cur), stride=stride)
    object.__setattr__(deco, "_stages", tuple(stages))
    return deco


def expand_decomposition(deco: FilterDecomposition) -> list:
    """Expand the strided recursion back onto the unit lag grid:
    the polynomial ``iir(z^stride)``.  Useful for identity checks."""
    out = [0 * deco.iir[0]] * ((len(deco.iir) - 1) * deco.stride + 1)
    for i, c in enumerate(deco.iir):
        out[i * deco.stride] = c
    return out
