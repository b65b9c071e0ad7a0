"""Tornado tabulation hashing: hashers, concentration bounds, and sketches."""

from tornadohash._core import (  # noqa: F401
    BottomKSketch,
    HashParams,
    KPartitionMinSketch,
    RandomOracle,
    SimpleTabulation,
    TornadoHasher,
    VectorKSample,
    bottomk_build,
    bottomk_union,
    classic_chernoff,
    config_sha256,
    derived_independent,
    is_linearly_independent,
    jaccard_estimate,
    kpm_build,
    kpm_union,
    lambert_w_newton,
    lambert_w_upper,
    layer_profile,
    local_uniformity_error,
    mu_bar,
    pretty1_bound,
    run_experiment_json,
    select_tornado,
    subsampling_bound,
    symbol_table,
    threshold_sample,
    upper_tail_tornado,
    vectork_build,
    zero_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
