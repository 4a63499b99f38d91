"""Effective sum-rate of partitioned distributed-MIMO networks under ZFBF.

The library models K single-antenna access points jointly serving K users
with zero-forcing beamforming and per-frame water-filling.  Training a
group of k APs costs k**r symbols of a T-symbol frame, so splitting the
network into smaller orthogonal groups trades beamforming gain against
overhead.  The package enumerates the integer partitions of K, scores each
by its overhead-discounted sum-rate, and finds the best partition both
unconstrained and under a cap on the total overhead fraction (via a
bounded-knapsack reformulation solved and cross-checked exactly).

Monte Carlo rate estimation runs on a compiled Cython kernel when the
extension is built, with a vectorized NumPy fallback (select with the
DMIMOPART_KERNEL environment variable; see dmimopart._kernel).
"""

from ._kernel import BACKEND, available_backends, batch_zfbf_rates, get_backend
from .channel import (
    DEFAULT_COND_LIMIT,
    BeamformingSolution,
    ChannelRealization,
    derive_seed,
    draw_channel,
    waterfill,
    zfbf_sum_rate,
    zfbf_weights,
)
from .errors import (
    ConfigError,
    DmimoError,
    IllConditionedChannelError,
    IncompleteRatesError,
    InvalidInputError,
    SizeLimitError,
)
from .knapsack import (
    ORACLE_MAX_SIZE,
    BasicElement,
    ConstrainedSolution,
    KnapsackCandidate,
    enumerate_candidates,
    oracle_bruteforce,
    solve_constrained,
    transform_bkp,
)
from .overhead import FrameSplit, OverheadParams, frame_split, full_network_alpha, scaling
from .partition import (
    MAX_NETWORK_SIZE,
    Partition,
    PartitionScore,
    enumerate_partitions,
    optimal_partition,
    score_partition,
)
from .simulation import (
    RateCell,
    RateTable,
    SimConfig,
    SweepRow,
    build_rate_table,
    full_network_effective,
    partition_stderr,
    partitioned_effective,
    per_draw_optimal_rates,
    snr_db_to_power,
    sweep_aps,
    sweep_cct,
    sweep_mao,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BasicElement",
    "BeamformingSolution",
    "ChannelRealization",
    "ConfigError",
    "ConstrainedSolution",
    "DEFAULT_COND_LIMIT",
    "DmimoError",
    "FrameSplit",
    "IllConditionedChannelError",
    "IncompleteRatesError",
    "InvalidInputError",
    "KnapsackCandidate",
    "MAX_NETWORK_SIZE",
    "ORACLE_MAX_SIZE",
    "OverheadParams",
    "Partition",
    "PartitionScore",
    "RateCell",
    "RateTable",
    "SimConfig",
    "SizeLimitError",
    "SweepRow",
    "available_backends",
    "batch_zfbf_rates",
    "build_rate_table",
    "derive_seed",
    "draw_channel",
    "enumerate_candidates",
    "enumerate_partitions",
    "frame_split",
    "full_network_alpha",
    "full_network_effective",
    "get_backend",
    "optimal_partition",
    "oracle_bruteforce",
    "partition_stderr",
    "partitioned_effective",
    "per_draw_optimal_rates",
    "scaling",
    "score_partition",
    "snr_db_to_power",
    "solve_constrained",
    "sweep_aps",
    "sweep_cct",
    "sweep_mao",
    "transform_bkp",
    "waterfill",
    "zfbf_sum_rate",
    "zfbf_weights",
]
