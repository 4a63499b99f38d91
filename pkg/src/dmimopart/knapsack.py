"""Overhead-constrained partitioning via the knapsack transformation.

The constrained problem (maximize effective sum-rate subject to a total
overhead fraction cap alpha_th) is a bounded knapsack over group types.  It
is solved exactly in two steps: expand group types into "basic MIMO
elements" (count copies of a jxj group, count = 1..floor(K/j)), then
combine elements with distinct sizes into complete network partitions.
Because every candidate already covers all K APs, the zero-one problem
degenerates to picking the most profitable candidate whose overhead fits
the cap - a sort plus a linear scan (the greedy-split solve).

An independent brute-force oracle (partition enumeration + scoring) backs
the solver in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompleteRatesError, InvalidInputError, SizeLimitError
from .overhead import OverheadParams, frame_split, scaling
from .partition import Partition, enumerate_partitions, score_partition

# The oracle exhaustively re-scores every partition; keep it at sizes where
# that is obviously cheap.
ORACLE_MAX_SIZE = 12


@dataclass(frozen=True)
class BasicElement:
    """``count`` copies of a ``size`` x ``size`` group, as one zero-one item."""

    size: int
    count: int
    aps: int       # count * size
    profit: float  # count * R_size


@dataclass(frozen=True)
class KnapsackCandidate:
    """One complete network partition with its knapsack profit and weight."""

    composition: Partition
    profit: float   # data-fraction-weighted effective sum-rate
    weight: float   # total overhead fraction
    index: int      # position in enumeration order


@dataclass(frozen=True)
class ConstrainedSolution:
    """Best candidate under the overhead cap, or None when infeasible."""

    chosen: KnapsackCandidate | None
    alpha_threshold: float
    feasible_count: int


def _checked_full_rates(k: int, rates: dict[int, float]) -> dict[int, float]:
    out = {}
    for j in range(1, k + 1):
        if j not in rates:
            raise IncompleteRatesError(f"no rate supplied for group size {j}")
        if not rates[j] >= 0:
            raise InvalidInputError(f"rate for size {j} must be >= 0, got {rates[j]}")
        out[j] = float(rates[j])
    return out


def transform_bkp(k: int, rates: dict[int, float]) -> list[BasicElement]:
    """Expand the bounded problem into basic MIMO elements.

    For each group size j in 1..k, emits elements for count = 1..floor(k/j),
    in that loop order.  The total element count is sum_j floor(k/j).
    """
    if k < 1:
        raise InvalidInputError(f"network size must be >= 1, got {k}")
    used = _checked_full_rates(k, rates)
    elements = []
    for j in range(1, k + 1):
        for count in range(1, k // j + 1):
            elements.append(
                BasicElement(size=j, count=count, aps=count * j, profit=count * used[j])
            )
    return elements


def _max_counts(elements: list[BasicElement], k: int) -> dict[int, int]:
    by_size: dict[int, set[int]] = {}
    for el in elements:
        if el.aps != el.count * el.size:
            raise InvalidInputError(f"inconsistent element {el}")
        by_size.setdefault(el.size, set()).add(el.count)
    for j in range(1, k + 1):
        expected = set(range(1, k // j + 1))
        if by_size.get(j) != expected:
            raise InvalidInputError(
                f"element list does not match transform_bkp output for k={k} (size {j})"
            )
    return {j: k // j for j in range(1, k + 1)}


def enumerate_candidates(
    elements: list[BasicElement],
    k: int,
    oh: OverheadParams,
    rates: dict[int, float],
) -> list[KnapsackCandidate]:
    """All valid element combinations, one candidate per partition of k.

    A combination picks at most one element per size (zero-one semantics);
    requiring the AP counts to sum to K makes candidates exactly the integer
    partitions of K, so the candidate count is the partition function p(k).
    Profit and weight use the same per-group fractions as
    :func:`dmimopart.partition.score_partition`.
    """
    used = _checked_full_rates(k, rates)
    max_counts = _max_counts(elements, k)
    sizes_desc = sorted(max_counts, reverse=True)

    combos: list[tuple[tuple[int, int], ...]] = []

    def extend(size_idx: int, remaining: int, chosen: list[tuple[int, int]]):
        if remaining == 0:
            combos.append(tuple(chosen))
            return
        if size_idx >= len(sizes_desc):
            return
        size = sizes_desc[size_idx]
        top = min(max_counts[size], remaining // size)
        for count in range(top, -1, -1):
            if count:
                chosen.append((size, count))
            extend(size_idx + 1, remaining - count * size, chosen)
            if count:
                chosen.pop()

    extend(0, k, [])

    candidates = []
    for index, combo in enumerate(combos):
        composition = Partition(combo)
        d = composition.d_total
        profit = 0.0
        weight = 0.0
        for size, count in composition.groups:
            split = frame_split(oh, size, d)
            profit += count * split.data_fraction * used[size]
            weight += count * scaling(oh, size) / oh.t
        candidates.append(
            KnapsackCandidate(composition=composition, profit=profit, weight=weight, index=index)
        )
    return candidates


def _check_alpha(alpha_th: float) -> float:
    if not 0.0 <= alpha_th <= 1.0:
        raise InvalidInputError(f"alpha threshold must lie in [0, 1], got {alpha_th}")
    return float(alpha_th)


def solve_constrained(
    candidates: list[KnapsackCandidate], alpha_th: float
) -> ConstrainedSolution:
    """Greedy-split solve: sort by profit, take the first feasible candidate.

    Exact because each candidate is already a complete partition.  Profit
    ties break toward smaller weight, then fewer groups, then enumeration
    order.  Returns ``chosen=None`` when nothing fits under the cap.
    """
    if not candidates:
        raise InvalidInputError("candidate list must be non-empty")
    alpha_th = _check_alpha(alpha_th)
    ordered = sorted(
        candidates,
        key=lambda c: (-c.profit, c.weight, c.composition.d_total, c.index),
    )
    chosen = next((c for c in ordered if c.weight <= alpha_th), None)
    feasible = sum(1 for c in candidates if c.weight <= alpha_th)
    return ConstrainedSolution(chosen=chosen, alpha_threshold=alpha_th, feasible_count=feasible)


def oracle_bruteforce(
    k: int,
    rates: dict[int, float],
    oh: OverheadParams,
    alpha_th: float,
) -> ConstrainedSolution:
    """Independent check: exhaustively score partitions and filter by overhead.

    Shares nothing with the transformation path beyond the public scoring
    formula; must agree with :func:`solve_constrained` on every instance,
    tie-breaks included.
    """
    if k > ORACLE_MAX_SIZE:
        raise SizeLimitError(f"oracle limited to k <= {ORACLE_MAX_SIZE}, got {k}")
    alpha_th = _check_alpha(alpha_th)

    best = None
    best_key = None
    feasible = 0
    for index, part in enumerate(enumerate_partitions(k)):
        score = score_partition(part, rates, oh)
        if score.total_overhead <= alpha_th:
            feasible += 1
            key = (-score.effective_rate, score.total_overhead, part.d_total, index)
            if best_key is None or key < best_key:
                best_key = key
                best = KnapsackCandidate(
                    composition=part,
                    profit=score.effective_rate,
                    weight=score.total_overhead,
                    index=index,
                )
    return ConstrainedSolution(chosen=best, alpha_threshold=alpha_th, feasible_count=feasible)
