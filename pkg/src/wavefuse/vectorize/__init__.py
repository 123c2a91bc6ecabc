"""Lane-parallel execution: SIMD-style lane math, filter restructuring, and
block generators whose samples are whole lane vectors."""

from .lanes import shift_up, cum_sum, first_order_vec_block
from .decompose import (
    FilterDecomposition,
    eliminate_odd_lags,
    decompose_recursive,
    poly_mul,
    expand_decomposition,
)
from .blockgen import (
    osci_vec_serial,
    exponential_vec_serial,
    noise_vec_serial,
    noise_burst_vec,
    ramp_vec_serial,
    first_order_recursive_vec,
    second_order_recursive_vec,
    allpass_stage_vec,
    controlled_first_order_vec,
    controlled_biquad_cascade_vec,
    osci_proc_vec,
    render_blocks,
)

__all__ = [
    "shift_up",
    "cum_sum",
    "first_order_vec_block",
    "FilterDecomposition",
    "eliminate_odd_lags",
    "decompose_recursive",
    "poly_mul",
    "expand_decomposition",
    "osci_vec_serial",
    "exponential_vec_serial",
    "noise_vec_serial",
    "noise_burst_vec",
    "ramp_vec_serial",
    "first_order_recursive_vec",
    "second_order_recursive_vec",
    "allpass_stage_vec",
    "controlled_first_order_vec",
    "controlled_biquad_cascade_vec",
    "osci_proc_vec",
    "render_blocks",
]
