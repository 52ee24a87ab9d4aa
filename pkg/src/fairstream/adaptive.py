"""Concept-adapting fairness-aware tree: tunable-gamma growth plus drift
detection, alternate subtrees, and replace/prune arbitration.

Every internal node carries a monitor comparing its recent (windowed)
accuracy and absolute statistical-parity gap of routed predictions against
its lifetime baselines. When a full window deteriorates beyond a Hoeffding
margin, the live gamma is re-weighted from the relative deterioration of the
two metrics (accuracy losing ground shrinks gamma, fairness losing ground
grows it) and a fresh single-leaf alternate starts shadow-training on the
node's routed instances with that gamma snapshot. After a probation period
the alternate either replaces the node (strictly better on one windowed
metric without losing the other by more than the margin) or is pruned.

Predictions are always served by the main tree; a replacement swaps a whole
subtree between train calls, so no prediction ever mixes the two.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .criteria import CriterionConfig, KIND_AFIG
from .errors import ConfigError
from .fairness import GroupCounts, discrimination
from .stream import Instance, Schema
from .tree import FahtTree, InternalNode, LeafStats, _dump_class, _dump_groups, _fmt, DUMP_HEADER


def deterioration(baseline: float, current: float) -> float:
    """Relative change (current - baseline) / baseline; negative means the
    metric got worse. A zero baseline carries no signal and yields 0."""
    if baseline <= 0:
        return 0.0
    return (current - baseline) / baseline


def _clamp_a(a: float) -> float:
    # the deterioration level is specified to live in (0, 1]
    return min(a, 1.0)


def adapt_gamma(gamma: float, b: float, c: float) -> float:
    """Re-weight gamma from the accuracy (b) and fairness (c) deterioration.

    Accuracy deteriorating more shrinks gamma by the deterioration level a,
    fairness deteriorating more grows it; equal deterioration (or none)
    leaves gamma unchanged. The level a is clamped into (0, 1], so a full
    accuracy collapse bottoms gamma out at 0. The result is never negative.
    """
    if b < 0 <= c:
        out = (1.0 - _clamp_a(abs(b))) * gamma
    elif c < 0 <= b:
        out = (1.0 + _clamp_a(abs(c))) * gamma
    elif b < c < 0:
        out = (1.0 - _clamp_a((b - c) / c)) * gamma
    elif c < b < 0:
        out = (1.0 + _clamp_a((c - b) / b)) * gamma
    else:
        out = gamma
    return max(out, 0.0)


@dataclass(frozen=True)
class DriftConfig:
    """Drift-detection knobs. ``window=None`` disables the machinery
    entirely (the tree then grows exactly like a fixed-gamma afig tree).

    The default confidence (0.05, a 3.9-point margin at window 1000) is
    deliberately moderate: parity swells on real ordered streams are a few
    points, and a false alarm only costs one bounded probation.
    """

    window: int | None = 1000
    delta_drift: float = 0.05
    probation: int | None = None   # default: min(2000, 2 * window)
    freeze_gamma: bool = False     # keep gamma fixed (preset trade-off mode)

    def __post_init__(self):
        if self.window is not None and self.window < 1:
            raise ConfigError("drift window must be >= 1 (or None to disable)")
        if not (0.0 < self.delta_drift < 1.0):
            raise ConfigError("delta_drift must be in (0,1)")
        if self.probation is not None and self.probation < 1:
            raise ConfigError("probation must be >= 1")

    @property
    def enabled(self) -> bool:
        return self.window is not None

    @property
    def margin(self) -> float:
        """Significance margin for deterioration and replacement tests."""
        return math.sqrt(math.log(1.0 / self.delta_drift) / (2.0 * self.window))

    @property
    def probation_length(self) -> int:
        if self.probation is not None:
            return self.probation
        return min(2000, 2 * self.window)


class DriftMonitor:
    """Lifetime vs sliding-window accuracy and |Disc| of routed predictions.

    The window is a ring buffer of (correct, deprived, predicted_positive)
    triples; window counters are maintained incrementally on eviction. The
    flag only fires once the window is full.
    """

    __slots__ = ("window", "margin", "ring", "n", "n_correct", "life_groups",
                 "win_correct", "win_groups")

    def __init__(self, window: int, margin: float):
        self.window = window
        self.margin = margin
        self.ring: deque = deque()
        self.n = 0
        self.n_correct = 0
        self.life_groups = GroupCounts()
        self.win_correct = 0
        self.win_groups = GroupCounts()

    @property
    def baseline_accuracy(self) -> float:
        return self.n_correct / self.n if self.n else 0.0

    @property
    def window_accuracy(self) -> float:
        return self.win_correct / len(self.ring) if self.ring else 0.0

    @property
    def baseline_disc(self) -> float:
        return abs(discrimination(self.life_groups))

    @property
    def window_disc(self) -> float:
        return abs(discrimination(self.win_groups))

    def record(self, correct: bool, deprived, predicted_positive: bool) -> bool:
        """Fold one routed prediction in; returns the current drift flag."""
        self.n += 1
        self.n_correct += correct
        if deprived is not None:
            self.life_groups.add(deprived, predicted_positive)
        if len(self.ring) == self.window:
            old_correct, old_dep, old_pos = self.ring.popleft()
            self.win_correct -= old_correct
            if old_dep is not None:
                self.win_groups.remove(old_dep, old_pos)
        self.ring.append((correct, deprived, predicted_positive))
        self.win_correct += correct
        if deprived is not None:
            self.win_groups.add(deprived, predicted_positive)
        if len(self.ring) < self.window:
            return False
        return (self.window_accuracy < self.baseline_accuracy - self.margin
                or self.window_disc > self.baseline_disc + self.margin)

    def deterioration_signals(self) -> tuple[float, float]:
        """(b, c): relative deterioration of accuracy and of fairness
        performance (1 - |Disc|), window vs lifetime baseline."""
        b = deterioration(self.baseline_accuracy, self.window_accuracy)
        c = deterioration(1.0 - self.baseline_disc, 1.0 - self.window_disc)
        return b, c


class AltState:
    """A shadow subtree in probation at one anchor node."""

    __slots__ = ("root", "gamma", "routed", "monitor")

    def __init__(self, root, gamma: float, monitor: DriftMonitor):
        self.root = root
        self.gamma = gamma
        self.routed = 0
        self.monitor = monitor


class AdaptiveInternalNode(InternalNode):
    """Internal node that also accumulates sufficient statistics for routed
    instances, monitors its own prediction quality, and may own an alternate."""

    __slots__ = ("stats", "monitor", "alt")

    def __init__(self, *args, stats=None, monitor=None):
        super().__init__(*args)
        self.stats = stats
        self.monitor = monitor
        self.alt = None


class CfahtTree(FahtTree):
    """Drift-adapting fairness-aware tree (criterion kind must be afig)."""

    def __init__(self, schema: Schema, config: CriterionConfig,
                 drift: DriftConfig = DriftConfig()):
        if config.kind != KIND_AFIG:
            raise ConfigError("CfahtTree requires criterion kind 'afig'")
        super().__init__(schema, config)
        self.drift = drift
        self.gamma = config.gamma  # live value, adapted at alternate creation
        self.alternates_created = 0
        self.replacements = 0
        self.prunes = 0

    def effective_gamma(self) -> float:
        return self.gamma

    def _new_internal(self, *args) -> AdaptiveInternalNode:
        monitor = (DriftMonitor(self.drift.window, self.drift.margin)
                   if self.drift.enabled else None)
        return AdaptiveInternalNode(*args, stats=LeafStats(self.schema),
                                    monitor=monitor)

    def _leaf_class_index(self, path, leaf) -> int:
        dist = leaf.stats.class_dist
        if dist.total <= 0:
            if not path:
                return 0
            dist = path[-1][0].class_dist_at_split
        return 1 if (dist.pos + 1.0) / (dist.total + 2.0) > 0.5 else 0

    def train(self, inst: Instance) -> None:
        path, leaf = self._route(self.root, inst)

        # outcome of the pre-update tree, as a prequential monitor would see it
        pred = self._leaf_class_index(path, leaf)
        correct = pred == inst.class_index
        pred_pos = pred == 1

        for node, _slot in path:
            node.stats.update(inst)
        leaf.stats.update(inst)

        flags = []
        if self.drift.enabled:
            for node, _slot in path:
                flags.append(node.monitor.record(correct, inst.deprived, pred_pos))

        for node, _slot in path:
            if node.alt is not None:
                self._alt_step(node.alt, inst)

        self._maybe_split(self, path, leaf, self.gamma)

        if self.drift.enabled:
            self._drift_actions(path, flags)

    def _alt_step(self, alt: AltState, inst: Instance) -> None:
        """One shadow-training step: score the alternate's own prediction,
        then fold the instance into it (with its snapshot gamma)."""
        apath, aleaf = self._route(alt.root, inst)
        pred = self._leaf_class_index(apath, aleaf)
        alt.monitor.record(pred == inst.class_index, inst.deprived, pred == 1)
        for anode, _slot in apath:
            anode.stats.update(inst)
            if anode.monitor is not None:
                # keeps baselines warm for life after promotion; never acted on
                anode.monitor.record(pred == inst.class_index, inst.deprived, pred == 1)
        aleaf.stats.update(inst)
        self._maybe_split(alt, apath, aleaf, alt.gamma)
        alt.routed += 1

    def _drift_actions(self, path, flags) -> None:
        probation = self.drift.probation_length
        margin = self.drift.margin
        for i, (node, _slot) in enumerate(path):
            alt = node.alt
            if alt is not None:
                if alt.routed < probation:
                    continue
                if self._alt_wins(alt, node, margin):
                    self.replacements += 1
                    if i == 0:
                        self.root = alt.root
                    else:
                        parent, pslot = path[i - 1]
                        parent.children[pslot] = alt.root
                    return  # the rest of the route just got detached
                node.alt = None
                self.prunes += 1
            elif flags[i]:
                if not self.drift.freeze_gamma:
                    b, c = node.monitor.deterioration_signals()
                    self.gamma = adapt_gamma(self.gamma, b, c)
                node.alt = AltState(self._new_leaf(), self.gamma,
                                    DriftMonitor(self.drift.window, self.drift.margin))
                self.alternates_created += 1

    @staticmethod
    def _alt_wins(alt: AltState, node: AdaptiveInternalNode, margin: float) -> bool:
        """Promote when strictly better on one windowed metric and not worse
        than the margin on the other."""
        a_acc, m_acc = alt.monitor.window_accuracy, node.monitor.window_accuracy
        a_disc, m_disc = alt.monitor.window_disc, node.monitor.window_disc
        return ((a_acc > m_acc and a_disc <= m_disc + margin)
                or (a_disc < m_disc and a_acc >= m_acc - margin))

    # ------------------------------------------------------------ diagnostics

    def complexity(self) -> tuple[int, int, int]:
        """(node_count, leaf_count, main-tree depth); node and leaf counts
        include alternate subtrees."""
        nodes = leaves = depth = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            nodes += 1
            depth = max(depth, d)
            if isinstance(node, InternalNode):
                stack.extend((c, d + 1) for c in node.children)
                if getattr(node, "alt", None) is not None:
                    stack.append((node.alt.root, d))
            else:
                leaves += 1
        return nodes, leaves, depth

    def statistic_cells(self) -> int:
        """Allocated statistic cells over every node — internal nodes carry
        full statistics here, and alternates count too."""
        total = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            total += node.stats.cell_count()
            if isinstance(node, InternalNode):
                stack.extend(node.children)
                if getattr(node, "alt", None) is not None:
                    stack.append(node.alt.root)
        return total

    def dump(self) -> str:
        lines = [DUMP_HEADER]
        self._dump_adaptive(lines, self.root, "r", "-")
        return "\n".join(lines) + "\n"

    def _dump_adaptive(self, lines, node, path, branch):
        if isinstance(node, InternalNode):
            test = self.schema.attributes[node.attr_index].name
            if node.threshold is not None:
                test = f"{test}<={_fmt(node.threshold)}"
            mon = node.monitor
            extra = ""
            if mon is not None:
                extra = (f"\tmon(n={mon.n},acc={mon.window_accuracy:.4f},"
                         f"disc={mon.window_disc:.4f})")
            if node.alt is not None:
                extra += f"\talt(routed={node.alt.routed},gamma={_fmt(node.alt.gamma)})"
            lines.append(f"{path}\t{branch}\tinternal\tsplit({test})\t"
                         f"{_dump_class(node.class_dist_at_split)}\t"
                         f"{_dump_groups(node.group_counts_at_split)}{extra}")
            for slot, child in enumerate(node.children):
                self._dump_adaptive(lines, child, f"{path}.{slot}",
                                    node.branch_label(slot))
            if node.alt is not None:
                self._dump_adaptive(lines, node.alt.root, f"{path}!alt", "-")
        else:
            st = node.stats
            lines.append(f"{path}\t{branch}\tleaf\tn={st.n}\t"
                         f"{_dump_class(st.class_dist)}\t{_dump_groups(st.group_counts)}")
