"""Group-count bookkeeping, the statistical-parity gap, and paired-classifier
diagnostics (McNemar's test, phi coefficient)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UndefinedStatisticError


class GroupCounts:
    """The four community counters behind every fairness computation:
    deprived/favored crossed with positive/negative outcome."""

    __slots__ = ("deprived_pos", "deprived_neg", "favored_pos", "favored_neg")

    def __init__(self, deprived_pos=0.0, deprived_neg=0.0,
                 favored_pos=0.0, favored_neg=0.0):
        self.deprived_pos = deprived_pos
        self.deprived_neg = deprived_neg
        self.favored_pos = favored_pos
        self.favored_neg = favored_neg

    def add(self, is_deprived: bool, is_positive: bool, weight=1.0) -> None:
        if is_deprived:
            if is_positive:
                self.deprived_pos += weight
            else:
                self.deprived_neg += weight
        elif is_positive:
            self.favored_pos += weight
        else:
            self.favored_neg += weight

    def remove(self, is_deprived: bool, is_positive: bool, weight=1.0) -> None:
        self.add(is_deprived, is_positive, -weight)

    @property
    def total(self):
        return (self.deprived_pos + self.deprived_neg
                + self.favored_pos + self.favored_neg)

    def copy(self) -> "GroupCounts":
        return GroupCounts(self.deprived_pos, self.deprived_neg,
                           self.favored_pos, self.favored_neg)

    def __eq__(self, other):
        return (isinstance(other, GroupCounts)
                and self.deprived_pos == other.deprived_pos
                and self.deprived_neg == other.deprived_neg
                and self.favored_pos == other.favored_pos
                and self.favored_neg == other.favored_neg)

    def __repr__(self):
        return (f"GroupCounts(dp={self.deprived_pos}, dn={self.deprived_neg}, "
                f"fp={self.favored_pos}, fn={self.favored_neg})")


def update(counts: GroupCounts, is_deprived: bool, is_positive: bool) -> GroupCounts:
    """Return a new GroupCounts with exactly one field incremented."""
    out = counts.copy()
    out.add(is_deprived, is_positive)
    return out


def discrimination(counts: GroupCounts) -> float:
    """Statistical-parity gap: favored positive rate minus deprived positive rate.

    Returns exactly 0.0 when either community is empty — no evidence of
    disparity, and the convention keeps downstream gain computations
    well-defined for one-community partitions.
    """
    dep = counts.deprived_pos + counts.deprived_neg
    fav = counts.favored_pos + counts.favored_neg
    if dep <= 0 or fav <= 0:
        return 0.0
    return counts.favored_pos / fav - counts.deprived_pos / dep


@dataclass(frozen=True)
class ContingencyPair:
    """2x2 paired-decision table for two classifiers on the same instances."""

    both_pos: int
    a_pos_b_neg: int  # discordant b
    a_neg_b_pos: int  # discordant c
    both_neg: int


def mcnemar(pair: ContingencyPair) -> tuple[float, int]:
    """Continuity-corrected McNemar statistic: (|b-c|-1)^2 / (b+c), df=1.

    Raises UndefinedStatisticError when there are no discordant pairs.
    """
    b, c = pair.a_pos_b_neg, pair.a_neg_b_pos
    if b + c == 0:
        raise UndefinedStatisticError("McNemar undefined: no discordant pairs")
    return (abs(b - c) - 1) ** 2 / (b + c), 1


def phi_correlation(x, y) -> float:
    """Pearson product-moment correlation of two 0/1 sequences.

    Computed from the 2x2 table: (n11*n00 - n10*n01) / sqrt of the four
    marginal products. Raises UndefinedStatisticError if either sequence is
    constant (or shorter than 2).
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n11 = n10 = n01 = n00 = 0
    for a, b in zip(x, y):
        if a:
            if b:
                n11 += 1
            else:
                n10 += 1
        elif b:
            n01 += 1
        else:
            n00 += 1
    x1, x0 = n11 + n10, n01 + n00
    y1, y0 = n11 + n01, n10 + n00
    if len(x) < 2 or x1 == 0 or x0 == 0 or y1 == 0 or y0 == 0:
        raise UndefinedStatisticError("phi undefined for constant sequences")
    return (n11 * n00 - n10 * n01) / math.sqrt(x1 * x0 * y1 * y0)
