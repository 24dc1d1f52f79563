"""Head/tail-breaks partitioning and the cumulative tail-walk schedule.

Head/tail breaks splits a heavy-tailed multiset at its arithmetic mean: the
"head" is everything strictly above the mean, the "tail" everything else.
The first split always happens (when the head is non-empty); the head is
split again only while it holds at least two members and makes up less than
``head_fraction_limit`` of the set it came from.  Bins are reported
innermost-first: bin 1 is the extreme head (largest values), the last bin is
the outermost tail.

Each bin carries a threshold equal to the mean of the union of bins 1..i,
which is exactly the split mean that separated bin i+1 from the rest (the
innermost bin's threshold is its own mean), so the recursion can be audited
from the emitted partition alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Bin", "BinPartition", "head_tail_breaks", "tail_members", "walk_schedule"]


@dataclass(frozen=True)
class Bin:
    threshold: float
    values: tuple
    members: tuple


@dataclass(frozen=True)
class BinPartition:
    bins: tuple  # innermost (largest values) first
    head_fraction_limit: float

    @property
    def n_bins(self) -> int:
        return len(self.bins)

    def sizes(self) -> tuple:
        return tuple(len(b.values) for b in self.bins)

    def thresholds(self) -> tuple:
        return tuple(b.threshold for b in self.bins)


def head_tail_breaks(values, head_fraction_limit: float = 0.4, *, items=None) -> BinPartition:
    """Partition positive values into head/tail-breaks bins.

    ``items``, when given, is a parallel sequence of member identities (one
    per value); bins then carry those identities instead of the raw values.
    All-equal input yields a single bin.
    """
    vals = np.asarray(values, dtype=np.float64).ravel()
    if len(vals) == 0:
        raise ValueError("empty value set")
    if not np.all(np.isfinite(vals)) or vals.min() <= 0:
        raise ValueError("values must be positive and finite")
    if not 0.0 < head_fraction_limit < 1.0:
        raise ValueError(f"head_fraction_limit must be in (0, 1), got {head_fraction_limit}")
    if items is not None:
        items = list(items)
        if len(items) != len(vals):
            raise ValueError("items must parallel values")

    outer_first = []  # index arrays, outermost tail first
    cur = np.arange(len(vals))
    while True:
        mean = float(vals[cur].mean())
        head = cur[vals[cur] > mean]
        # len(head) == len(cur) guards the all-equal case where the computed
        # mean rounds just below every value; neither side is a real split.
        if len(head) == 0 or len(head) == len(cur):
            outer_first.append(cur)
            break
        outer_first.append(cur[vals[cur] <= mean])
        fraction = len(head) / len(cur)
        if len(head) >= 2 and fraction < head_fraction_limit:
            cur = head
        else:
            outer_first.append(head)
            break

    bins = []
    acc_sum = 0.0
    acc_n = 0
    for idx in reversed(outer_first):
        acc_sum += float(vals[idx].sum())
        acc_n += len(idx)
        threshold = acc_sum / acc_n
        bin_values = tuple(float(v) for v in vals[idx])
        bin_members = tuple(items[i] for i in idx) if items is not None else bin_values
        bins.append(Bin(threshold, bin_values, bin_members))
    return BinPartition(tuple(bins), float(head_fraction_limit))


def tail_members(partition: BinPartition) -> tuple:
    """Members of bin 1, the innermost head (the distribution's extreme tail)."""
    return partition.bins[0].members


def walk_schedule(partition: BinPartition, k: int) -> tuple:
    """Cumulative member sequences for walking up the tail.

    Element j (1-based) concatenates the members of bins 1..j, so sizes are
    the prefix sums of bin sizes and consecutive elements are nested.
    """
    if not 1 <= k <= partition.n_bins:
        raise ValueError(f"requested {k} bins but the partition has {partition.n_bins}")
    steps = []
    acc: list = []
    for b in partition.bins[:k]:
        acc.extend(b.members)
        steps.append(tuple(acc))
    return tuple(steps)
