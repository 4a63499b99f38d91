"""Integer partitions of the network and the exhaustive optimal search.

A partition splits the K APs/clients into orthogonal groups; its effective
sum-rate is sum over group types of N_d * data_fraction_d * R_d, where R_d
is the (mean) ZFBF sum-rate of a size-d group and the data fraction comes
from :mod:`dmimopart.overhead`.  The unconstrained optimum is found by
scoring all p(K) partitions, which stays tiny for practical sizes
(p(10) = 42).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import IncompleteRatesError, InvalidInputError, SizeLimitError
from .overhead import OverheadParams, frame_split, scaling

# Enumeration guard; p(30) = 5604 partitions, still instant, but the count
# grows sub-exponentially fast beyond that.
MAX_NETWORK_SIZE = 30


@dataclass(frozen=True)
class Partition:
    """Multiset of group sizes, stored as (size, count) pairs, sizes descending."""

    groups: tuple[tuple[int, int], ...]

    def __post_init__(self):
        groups = tuple((int(s), int(c)) for s, c in self.groups)
        if not groups:
            raise InvalidInputError("partition must contain at least one group")
        for size, count in groups:
            if size < 1 or count < 1:
                raise InvalidInputError(f"sizes and counts must be >= 1, got {groups}")
        sizes = [s for s, _ in groups]
        if any(a <= b for a, b in zip(sizes, sizes[1:])):
            raise InvalidInputError(f"sizes must be strictly decreasing, got {sizes}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "Partition":
        """Build from an unordered list of group sizes, e.g. [1, 3, 1] -> 3x3+2*(1x1)."""
        ordered = sorted(sizes, reverse=True)
        groups = []
        for size in ordered:
            if groups and groups[-1][0] == size:
                groups[-1][1] += 1
            else:
                groups.append([size, 1])
        return cls(tuple((s, c) for s, c in groups))

    @property
    def k_total(self) -> int:
        """Total number of APs/clients covered."""
        return sum(s * c for s, c in self.groups)

    @property
    def d_total(self) -> int:
        """Total number of groups D."""
        return sum(c for _, c in self.groups)

    def sizes(self) -> tuple[int, ...]:
        """Expanded size list, descending, e.g. (3, 1, 1)."""
        return tuple(s for s, c in self.groups for _ in range(c))

    def label(self) -> str:
        """Human-readable form like ``3x3+2*(1x1)``."""
        parts = []
        for size, count in self.groups:
            block = f"{size}x{size}"
            parts.append(block if count == 1 else f"{count}*({block})")
        return "+".join(parts)


@dataclass(frozen=True)
class PartitionScore:
    """One scored partition: effective sum-rate and total overhead fraction."""

    partition: Partition
    effective_rate: float
    total_overhead: float
    per_group_rates: dict[int, float]


def _descending_partitions(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    # Reverse-lexicographic enumeration: largest first part first.
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _descending_partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(k: int, max_k: int = MAX_NETWORK_SIZE) -> list[Partition]:
    """All p(k) partitions of k in reverse-lexicographic order.

    The first entry is the single full-network group, the last is k
    singletons.  ``k`` above ``max_k`` raises :class:`SizeLimitError` to
    guard against combinatorial blowup.
    """
    if k < 1:
        raise InvalidInputError(f"network size must be >= 1, got {k}")
    if k > max_k:
        raise SizeLimitError(f"network size {k} exceeds enumeration limit {max_k}")
    return [Partition.from_sizes(sizes) for sizes in _descending_partitions(k, k)]


def _checked_rates(partition: Partition, rates: dict[int, float]) -> dict[int, float]:
    used = {}
    for size, _ in partition.groups:
        if size not in rates:
            raise IncompleteRatesError(f"no rate supplied for group size {size}")
        if not rates[size] >= 0:
            raise InvalidInputError(f"rate for size {size} must be >= 0, got {rates[size]}")
        used[size] = float(rates[size])
    return used


def score_partition(
    partition: Partition, rates: dict[int, float], oh: OverheadParams
) -> PartitionScore:
    """Effective sum-rate and total overhead of one partition.

    effective_rate = sum_d N_d * max(0, 1/D - k_d**r / T) * R_d, and
    total_overhead = sum_d N_d * k_d**r / T (unclipped, may exceed 1).
    """
    used = _checked_rates(partition, rates)
    d = partition.d_total
    effective = 0.0
    total_overhead = 0.0
    for size, count in partition.groups:
        split = frame_split(oh, size, d)
        effective += count * split.data_fraction * used[size]
        total_overhead += count * scaling(oh, size) / oh.t
    return PartitionScore(
        partition=partition,
        effective_rate=effective,
        total_overhead=total_overhead,
        per_group_rates=used,
    )


def optimal_partition(
    k: int,
    rates: dict[int, float],
    oh: OverheadParams,
    max_k: int = MAX_NETWORK_SIZE,
) -> tuple[PartitionScore, list[PartitionScore]]:
    """Exhaustive search over all partitions of k.

    Returns the best score and the full list ranked by effective rate
    (descending).  Ties are broken deterministically: fewer groups first,
    then earlier in reverse-lexicographic enumeration order.
    """
    scored = [score_partition(p, rates, oh) for p in enumerate_partitions(k, max_k)]

    def sort_key(item):
        idx, score = item
        return (-score.effective_rate, score.partition.d_total, idx)

    ranked = [s for _, s in sorted(enumerate(scored), key=sort_key)]
    return ranked[0], ranked
