"""Lane-vector primitives: shift-up, parallel prefix sum, and the shift-add
scheme that turns a first-order recurrence into log2(N) rounds.

A lane vector is a 1-D array of N samples, N a power of two, with lane 0
earliest in time.  The association order inside a block is pinned (rounds
in increasing shift), so results are reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np


def _check_pow2(n: int) -> int:
    if n < 1 or (n & (n - 1)):
        raise ValueError(f"lane count must be a power of two, got {n}")
    return int(n).bit_length() - 1


def shift_up(v: np.ndarray, n: int) -> np.ndarray:
    """Shift lanes toward higher indices, zero-filling the lowest n lanes."""
    width = len(v)
    if not 0 <= n <= width:
        raise ValueError(f"shift must lie in [0, {width}], got {n}")
    out = np.zeros_like(v)
    if n < width:
        out[n:] = v[: width - n]
    return out


def cum_sum(v: np.ndarray) -> np.ndarray:
    """Prefix sum by log2(N) shift-add rounds: x <- x + (x shifted up 2^j)."""
    rounds = _check_pow2(len(v))
    x = np.array(v, copy=True)
    shift = 1
    for _ in range(rounds):
        x = x + shift_up(x, shift)
        shift *= 2
    return x


def first_order_vec_block(k: float, v: np.ndarray, y_prev: float):
    """One block of ``y[t] = x[t] + k*y[t-1]`` in log2(N) rounds plus carry.

    Within the block: ``x <- x + k^(2^j) * (x shifted up 2^j)`` for
    increasing j; then the previous block's last output is carried in as
    ``y[i] += k^(i+1) * y_prev``.  Returns the output block and the new
    carry (its last lane).  With k = 1 the rounds reduce to ``cum_sum``.
    """
    n = len(v)
    rounds = _check_pow2(n)
    x = np.asarray(v, dtype=np.float64).copy()
    kp = float(k)
    shift = 1
    for _ in range(rounds):
        x = x + kp * shift_up(x, shift)
        kp *= kp
        shift *= 2
    carry_weights = float(k) ** np.arange(1, n + 1)
    x = x + carry_weights * y_prev
    return x, float(x[-1])
