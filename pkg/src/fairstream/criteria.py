"""Split-merit mathematics and per-attribute observers.

Merits combine two ingredients computed over the partition a candidate split
would induce:

* information gain — entropy reduction of the binary class distribution;
* fairness gain — reduction of the absolute statistical-parity gap, either
  branch-weighted (``fg``) or unweighted across branches (``ufg``, which
  deliberately up-weights small branches carrying concentrated disparity).

Four criterion kinds are supported:

=====  ==============================================================
ig     information gain alone
fig    ig when fg == 0, else ig * fg
ufig   ig when ufg == 0, else ig * ufg
afig   ig * exp(gamma * ufg) — smooth, sign-preserving, tunable
=====  ==============================================================

Observers are the sufficient statistics a leaf keeps per attribute: nominal
attributes get a per-value table of class and community counts; numeric
attributes get one running Gaussian per class plus one per community cell,
from which branch masses for candidate thresholds are estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .fairness import GroupCounts, discrimination

KIND_IG = "ig"
KIND_FIG = "fig"
KIND_UFIG = "ufig"
KIND_AFIG = "afig"
CRITERION_KINDS = (KIND_IG, KIND_FIG, KIND_UFIG, KIND_AFIG)

# |fg| below this is the floating-point realization of "fg == 0 exactly"
EXACT_ZERO = 1e-12

# exp() overflows just past 709; clamping keeps extreme gamma sweeps finite
_EXP_CLAMP = 700.0


class ClassDist:
    """Counts of the two class labels (index 0 = negative, 1 = positive)."""

    __slots__ = ("neg", "pos")

    def __init__(self, neg=0.0, pos=0.0):
        self.neg = neg
        self.pos = pos

    def add(self, class_index: int, weight=1.0) -> None:
        if class_index:
            self.pos += weight
        else:
            self.neg += weight

    @property
    def total(self):
        return self.neg + self.pos

    def copy(self) -> "ClassDist":
        return ClassDist(self.neg, self.pos)

    def __repr__(self):
        return f"ClassDist(neg={self.neg}, pos={self.pos})"


def entropy(dist: ClassDist) -> float:
    """Base-2 entropy of a binary class distribution; empty -> 0, 0*log0 -> 0."""
    total = dist.total
    if total <= 0:
        return 0.0
    h = 0.0
    for c in (dist.neg, dist.pos):
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


@dataclass
class BranchStats:
    """One branch of a candidate partition."""

    weight: float
    class_dist: ClassDist
    group_counts: GroupCounts


@dataclass
class PartitionView:
    """A candidate split seen as parent + branches.

    The parent is the exact sum of the branches, so branch weights always sum
    to the parent weight and information gain is non-negative up to rounding.
    """

    parent: BranchStats
    branches: list[BranchStats]

    @staticmethod
    def from_branches(branches: list[BranchStats]) -> "PartitionView":
        parent_cd = ClassDist()
        parent_gc = GroupCounts()
        weight = 0.0
        for b in branches:
            weight += b.weight
            parent_cd.neg += b.class_dist.neg
            parent_cd.pos += b.class_dist.pos
            parent_gc.deprived_pos += b.group_counts.deprived_pos
            parent_gc.deprived_neg += b.group_counts.deprived_neg
            parent_gc.favored_pos += b.group_counts.favored_pos
            parent_gc.favored_neg += b.group_counts.favored_neg
        return PartitionView(BranchStats(weight, parent_cd, parent_gc), branches)


def information_gain(partition: PartitionView) -> float:
    """Parent entropy minus weight-averaged branch entropies."""
    w = partition.parent.weight
    if w <= 0:
        return 0.0
    ig = entropy(partition.parent.class_dist)
    for b in partition.branches:
        if b.weight > 0:
            ig -= (b.weight / w) * entropy(b.class_dist)
    return ig


def _has_both_communities(gc: GroupCounts) -> bool:
    return (gc.deprived_pos + gc.deprived_neg) > 0 and \
        (gc.favored_pos + gc.favored_neg) > 0


def _branch_abs_disc(gc: GroupCounts) -> float:
    """Branch disparity as seen by the gain computations.

    A branch holding only one community hides the cross-community comparison
    entirely — rewarding that (branch disc 0) would make community-separating
    splits look maximally fair, the exact redlining loophole a fairness-aware
    criterion must close. Such branches therefore count as maximally
    disparate.
    """
    if not _has_both_communities(gc):
        return 1.0
    return abs(discrimination(gc))


def fairness_gain(partition: PartitionView) -> float:
    """|Disc| of the parent minus branch-weighted |Disc| of the branches.

    Negative values mean the split concentrates disparity (in either
    direction — absolute values capture reverse discrimination too).
    Single-community branches count as maximally disparate; if the parent
    itself holds one community there is no cross-community evidence at all
    and the gain is 0 (the criterion then reduces to information gain).
    """
    w = partition.parent.weight
    if w <= 0 or not _has_both_communities(partition.parent.group_counts):
        return 0.0
    fg = abs(discrimination(partition.parent.group_counts))
    for b in partition.branches:
        if b.weight > 0:
            fg -= (b.weight / w) * _branch_abs_disc(b.group_counts)
    return fg


def universal_fairness_gain(partition: PartitionView) -> float:
    """|Disc| of the parent minus the plain (unweighted) sum of branch |Disc|.

    Dropping the weights stops large branches from drowning out small ones,
    so locally concentrated disparity counts at full strength. Single
    community branches are treated as in fairness_gain.
    """
    if not _has_both_communities(partition.parent.group_counts):
        return 0.0
    ufg = abs(discrimination(partition.parent.group_counts))
    for b in partition.branches:
        ufg -= _branch_abs_disc(b.group_counts)
    return ufg


def fair_information_gain(ig: float, fg: float) -> float:
    """ig when fg is exactly zero, else ig * fg."""
    if abs(fg) < EXACT_ZERO:
        return ig
    return ig * fg


def universal_fair_information_gain(ig: float, ufg: float) -> float:
    """ig when ufg is exactly zero, else ig * ufg."""
    if abs(ufg) < EXACT_ZERO:
        return ig
    return ig * ufg


def adaptive_fair_information_gain(ig: float, ufg: float, gamma: float) -> float:
    """ig * exp(gamma * ufg).

    The exponential smooths the fairness influence (never flips the sign of
    ig) and gamma dials it: 0 recovers plain information gain, larger values
    weight disparity reduction more. Exponents are exact up to |30| and then
    bent smoothly onto (-700, 700) so extreme gamma sweeps stay finite
    without collapsing the merit ranking into ties.
    """
    x = gamma * ufg
    if abs(x) > 30.0:
        # exact below 30, then bent smoothly onto (-700, 700): continuous,
        # strictly increasing, C1 at the seam (tanh'(0) = 1)
        span = _EXP_CLAMP - 30.0
        x = math.copysign(30.0 + span * math.tanh((abs(x) - 30.0) / span), x)
    return ig * math.exp(x)


def hoeffding_bound(range_r: float, delta: float, n: int) -> float:
    """Confidence radius sqrt(R^2 * ln(1/delta) / (2n))."""
    if n <= 0:
        raise ConfigError("hoeffding_bound needs n > 0")
    return math.sqrt(range_r * range_r * math.log(1.0 / delta) / (2.0 * n))


@dataclass(frozen=True)
class CriterionConfig:
    """Split-decision parameters shared by every tree learner."""

    kind: str = KIND_FIG
    gamma: float = 1.0            # afig only
    delta: float = 1e-7           # Hoeffding confidence
    tau: float = 0.05             # tie-break threshold
    grace_period: int = 200       # instances between split attempts per leaf
    numeric_split_points: int = 10

    def __post_init__(self):
        if self.kind not in CRITERION_KINDS:
            raise ConfigError(f"unknown criterion kind {self.kind!r}")
        if not (0.0 < self.delta < 1.0):
            raise ConfigError(f"delta must be in (0,1), got {self.delta}")
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ConfigError(f"gamma must be finite and >= 0, got {self.gamma}")
        if self.grace_period < 1:
            raise ConfigError("grace_period must be >= 1")
        if self.numeric_split_points < 1:
            raise ConfigError("numeric_split_points must be >= 1")


@dataclass
class SplitCandidate:
    """An attribute (plus threshold for numeric tests) with its merits.

    ``attribute is None`` marks the null candidate — the "don't split" option
    that every enumeration includes with merit 0.
    """

    attribute: str | None
    attr_index: int               # position in the schema, -1 for null
    threshold: float | None
    info_gain: float
    fairness_gain: float          # fg or ufg per the active criterion, 0 for ig
    merit: float
    partition: PartitionView | None = None
    branch_values: list[int] | None = None  # nominal: observed value indices


def _merit(partition, config, gamma):
    ig = information_gain(partition)
    kind = config.kind
    if kind == KIND_IG:
        return ig, 0.0, ig
    if kind == KIND_FIG:
        fg = fairness_gain(partition)
        return ig, fg, fair_information_gain(ig, fg)
    ufg = universal_fairness_gain(partition)
    if kind == KIND_UFIG:
        return ig, ufg, universal_fair_information_gain(ig, ufg)
    return ig, ufg, adaptive_fair_information_gain(ig, ufg, gamma)


class NominalObserver:
    """Per-value class and community counts for one nominal attribute.

    Each table row is [neg, pos, dep_neg, dep_pos, fav_neg, fav_pos]; the
    community slots are only advanced when the sensitive value is known.
    """

    __slots__ = ("table",)

    def __init__(self):
        self.table: dict[int, list[float]] = {}

    def observe(self, value: int, class_index: int, deprived) -> None:
        row = self.table.get(value)
        if row is None:
            row = [0.0] * 6
            self.table[value] = row
        row[class_index] += 1.0
        if deprived is not None:
            row[2 + (0 if deprived else 2) + class_index] += 1.0

    def cell_count(self) -> int:
        return 6 * len(self.table)

    def branches(self) -> tuple[list[int], list[BranchStats]]:
        values = sorted(self.table)
        out = []
        for v in values:
            row = self.table[v]
            cd = ClassDist(row[0], row[1])
            gc = GroupCounts(deprived_pos=row[3], deprived_neg=row[2],
                             favored_pos=row[5], favored_neg=row[4])
            out.append(BranchStats(cd.total, cd, gc))
        return values, out


class GaussianEstimator:
    """Running mean/variance (Welford) plus observed min/max."""

    __slots__ = ("n", "mean", "_m2", "min", "max")

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self._m2 = 0.0
        self.min = math.inf
        self.max = -math.inf

    def observe(self, x: float) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self._m2 += delta * (x - self.mean)
        if x < self.min:
            self.min = x
        if x > self.max:
            self.max = x

    @property
    def variance(self) -> float:
        # sample variance; a single observation has no spread
        if self.n < 2:
            return 0.0
        return self._m2 / (self.n - 1)

    def mass_below(self, t: float) -> float:
        """Expected fraction of this estimator's mass at or below t."""
        if self.n == 0:
            return 0.0
        sd = math.sqrt(self.variance)
        if sd <= 0:
            return 1.0 if self.mean <= t else 0.0
        return 0.5 * (1.0 + math.erf((t - self.mean) / (sd * math.sqrt(2.0))))


class GaussianObserver:
    """Numeric-attribute statistics: one Gaussian per class label and one per
    community-outcome cell, fed only with non-missing observations."""

    __slots__ = ("per_class", "per_cell")

    def __init__(self):
        self.per_class = (GaussianEstimator(), GaussianEstimator())
        # cells: (deprived,neg), (deprived,pos), (favored,neg), (favored,pos)
        self.per_cell = (GaussianEstimator(), GaussianEstimator(),
                         GaussianEstimator(), GaussianEstimator())

    def observe(self, x: float, class_index: int, deprived) -> None:
        self.per_class[class_index].observe(x)
        if deprived is not None:
            self.per_cell[(0 if deprived else 2) + class_index].observe(x)

    def cell_count(self) -> int:
        # per estimator: n, mean, m2, min, max
        return 5 * (len(self.per_class) + len(self.per_cell))

    def split_range(self):
        mn = min(e.min for e in self.per_class)
        mx = max(e.max for e in self.per_class)
        return mn, mx

    def branches_at(self, t: float) -> list[BranchStats]:
        """Two branches (<= t, > t) with Gaussian tail-mass statistics."""
        left_cd, right_cd = ClassDist(), ClassDist()
        for ci, est in enumerate(self.per_class):
            if est.n == 0:
                continue
            lo = est.n * est.mass_below(t)
            left_cd.add(ci, lo)
            right_cd.add(ci, est.n - lo)
        left_gc, right_gc = GroupCounts(), GroupCounts()
        for cell, est in enumerate(self.per_cell):
            if est.n == 0:
                continue
            deprived = cell < 2
            positive = bool(cell % 2)
            lo = est.n * est.mass_below(t)
            left_gc.add(deprived, positive, lo)
            right_gc.add(deprived, positive, est.n - lo)
        return [BranchStats(left_cd.total, left_cd, left_gc),
                BranchStats(right_cd.total, right_cd, right_gc)]


def make_observer(is_nominal: bool):
    return NominalObserver() if is_nominal else GaussianObserver()


def enumerate_candidates(observers, config: CriterionConfig,
                         gamma: float | None = None) -> list[SplitCandidate]:
    """Rank every splittable attribute, best merit first.

    ``observers`` is an iterable of (attr_index, attr_name, observer) in
    schema order. Nominal attributes yield one multiway candidate over their
    observed values; numeric attributes are probed at ``numeric_split_points``
    evenly spaced thresholds and only the best survives. The null candidate
    (merit 0) is always present, and outranks real candidates carrying exactly
    its merit, so a split must strictly beat doing nothing.
    """
    if gamma is None:
        gamma = config.gamma
    candidates = [SplitCandidate(None, -1, None, 0.0, 0.0, 0.0)]
    for attr_index, name, obs in observers:
        if isinstance(obs, NominalObserver):
            values, branches = obs.branches()
            if len(values) < 2:
                continue
            pv = PartitionView.from_branches(branches)
            ig, fg, merit = _merit(pv, config, gamma)
            candidates.append(SplitCandidate(name, attr_index, None, ig, fg,
                                             merit, pv, values))
        else:
            mn, mx = obs.split_range()
            if not (mn < mx):
                continue
            step = (mx - mn) / (config.numeric_split_points + 1)
            best = None
            for i in range(1, config.numeric_split_points + 1):
                t = mn + step * i
                branches = obs.branches_at(t)
                if min(b.weight for b in branches) < 1e-9:
                    continue
                pv = PartitionView.from_branches(branches)
                ig, fg, merit = _merit(pv, config, gamma)
                if best is None or merit > best.merit:
                    best = SplitCandidate(name, attr_index, t, ig, fg, merit, pv)
            if best is not None:
                candidates.append(best)
    # merit desc; exact ties: null first, then schema order
    candidates.sort(key=lambda c: (-c.merit, c.attribute is not None, c.attr_index))
    return candidates
