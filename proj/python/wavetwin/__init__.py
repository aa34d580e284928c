"""Python interface to the wavetwin C++ core."""

from ._wavetwin import (
    PacketBank,
    PacketCell,
    PacketClass,
    TwinConfig,
    available_filter_pairs,
    blur_pool,
    build_packet_bank,
    cmod,
    cost_table,
    cross_correlate,
    cwblock_forward,
    dt_features,
    dt_features_complex,
    hilbert2d,
    kl_divergence,
    max_pool,
    mean_flip_rate,
    mem_footprint,
    one_hot_mixing,
    pipeline_flops,
    positive_fraction,
    rmax,
    sparsity_penalty,
    sparsity_subgradient,
    synthetic_bandlimited_kernel,
    verify_prop1,
    verify_prop2,
    wblock_forward,
    wpt_forward,
    wpt_inverse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
