"""Overhead scaling law and frame-fraction arithmetic.

A frame of T symbols is split between overhead (training, feedback,
synchronization) and data.  Overhead for a group of size k scales as k**r;
with the network split into D orthogonal groups, group d gets the data
fraction 1/D - k_d**r / T of the frame (clipped at zero: a group whose
overhead eats its whole slot transmits nothing) while its overhead occupies
k_d**r / T of the frame.  Across an unclipped partition these per-group
fractions add up to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class OverheadParams:
    """Overhead exponent r (> 0) and frame length T in symbols (>= 1)."""

    t: int
    r: float = 2.0

    def __post_init__(self):
        if self.t < 1:
            raise InvalidInputError(f"frame length must be >= 1, got {self.t}")
        if not self.r > 0:
            raise InvalidInputError(f"overhead exponent must be > 0, got {self.r}")


@dataclass(frozen=True)
class FrameSplit:
    """Per-group frame fractions for one group in a D-way partition."""

    data_fraction: float      # max(0, 1/D - k**r / T)
    overhead_fraction: float  # min(k**r / T, 1)
    group_size: int
    num_groups: int


def scaling(params: OverheadParams, k: int) -> float:
    """Overhead symbols L(k) = k**r for a group of size k."""
    if k < 1:
        raise InvalidInputError(f"group size must be >= 1, got {k}")
    return float(k) ** params.r


def full_network_alpha(params: OverheadParams, k: int) -> float:
    """Overhead fraction min(k**r / T, 1) when the whole network is one group."""
    return min(scaling(params, k) / params.t, 1.0)


def frame_split(params: OverheadParams, group_size: int, num_groups: int) -> FrameSplit:
    """Data and overhead fractions of one size-``group_size`` group among D."""
    if num_groups < 1:
        raise InvalidInputError(f"number of groups must be >= 1, got {num_groups}")
    raw = scaling(params, group_size) / params.t
    return FrameSplit(
        data_fraction=max(0.0, 1.0 / num_groups - raw),
        overhead_fraction=min(raw, 1.0),
        group_size=group_size,
        num_groups=num_groups,
    )
