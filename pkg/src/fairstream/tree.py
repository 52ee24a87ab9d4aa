"""Incremental fairness-aware Hoeffding tree for stationary streams.

The tree starts as a single statistics-gathering leaf. Every training
instance is routed to a leaf and folded into its sufficient statistics; once
a leaf has seen both classes and ``grace_period`` new instances, candidate
splits are ranked by the configured criterion and the winner is installed
when it beats the runner-up by the Hoeffding radius (or the radius has shrunk
below the tie-break threshold). Children start with zeroed statistics; splits
are never undone.

Criterion kinds map onto the named learners: ``ig`` is a vanilla Hoeffding
tree, ``fig`` the fairness-aware tree, ``afig`` its tunable-gamma variant.
"""

from __future__ import annotations

from .criteria import (ClassDist, CriterionConfig, SplitCandidate,
                       enumerate_candidates, hoeffding_bound, make_observer)
from .errors import ConfigError
from .fairness import GroupCounts
from .stream import Instance, Schema

# Hoeffding-bound range: log2(#classes) = 1 for the binary task, used for
# every criterion kind so split timing is comparable across criteria.
SPLIT_RANGE = 1.0

DUMP_HEADER = "fairstream-tree v1"


class LeafStats:
    """Per-leaf sufficient statistics: class counts, community counts, and
    one observer per predictive attribute."""

    __slots__ = ("n", "class_dist", "group_counts", "observers", "last_split_attempt")

    def __init__(self, schema: Schema):
        self.n = 0
        self.class_dist = ClassDist()
        self.group_counts = GroupCounts()
        self.observers = [
            (i, schema.attributes[i].name, make_observer(schema.attributes[i].is_nominal))
            for i in schema.predictive_indices
        ]
        self.last_split_attempt = 0

    def update(self, inst: Instance) -> None:
        self.n += 1
        positive = inst.class_index == 1
        self.class_dist.add(inst.class_index)
        if inst.deprived is not None:
            self.group_counts.add(inst.deprived, positive)
        values = inst.values
        for attr_index, _name, obs in self.observers:
            v = values[attr_index]
            if v is not None:
                obs.observe(v, inst.class_index, inst.deprived)

    def cell_count(self) -> int:
        """Allocated statistic cells: 2 class + 4 community counters plus
        6 per observed nominal value and 5 per Gaussian estimator."""
        return 2 + 4 + sum(obs.cell_count() for _i, _n, obs in self.observers)


class LeafNode:
    __slots__ = ("stats",)

    def __init__(self, stats: LeafStats):
        self.stats = stats


class InternalNode:
    """A split test plus children; remembers the class distribution at split
    time for empty-leaf prediction fallback."""

    __slots__ = ("attr_index", "attr_name", "threshold", "children", "child_map",
                 "majority", "class_dist_at_split", "group_counts_at_split")

    def __init__(self, attr_index, attr_name, threshold, children, child_map,
                 majority, class_dist_at_split, group_counts_at_split):
        self.attr_index = attr_index
        self.attr_name = attr_name
        self.threshold = threshold          # None for nominal multiway splits
        self.children = children
        self.child_map = child_map          # nominal: value index -> child slot
        self.majority = majority            # heaviest branch at split time
        self.class_dist_at_split = class_dist_at_split
        self.group_counts_at_split = group_counts_at_split

    def child_slot(self, inst: Instance) -> int:
        v = inst.values[self.attr_index]
        if v is None:
            return self.majority
        if self.threshold is None:
            slot = self.child_map.get(v)
            # values unseen at split time carry no routing information either
            return self.majority if slot is None else slot
        return 0 if v <= self.threshold else 1

    def branch_label(self, slot: int) -> str:
        if self.threshold is not None:
            op = "<=" if slot == 0 else ">"
            return f"{self.attr_name}{op}{_fmt(self.threshold)}"
        for value, s in self.child_map.items():
            if s == slot:
                return f"{self.attr_name}={value}"
        return f"{self.attr_name}=?"


def _fmt(x) -> str:
    return f"{x:g}"


class FahtTree:
    """Fairness-aware Hoeffding tree (criterion selected by config.kind)."""

    def __init__(self, schema: Schema, config: CriterionConfig):
        if not isinstance(config, CriterionConfig):
            raise ConfigError("config must be a CriterionConfig")
        self.schema = schema
        self.config = config
        self.root = self._new_leaf()

    # node factories let the drift-adapting subclass substitute richer nodes
    def _new_leaf(self) -> LeafNode:
        return LeafNode(LeafStats(self.schema))

    def _new_internal(self, *args) -> InternalNode:
        return InternalNode(*args)

    def _route(self, node, inst: Instance):
        """Walk to a leaf; returns ([(internal, child_slot), ...], leaf)."""
        path = []
        while isinstance(node, InternalNode):
            slot = node.child_slot(inst)
            path.append((node, slot))
            node = node.children[slot]
        return path, node

    # ------------------------------------------------------------------ API

    def predict(self, inst: Instance) -> tuple[str, float]:
        """Route to a leaf and return (label, positive probability).

        Leaf distributions are Laplace-smoothed (alpha=1); an empty leaf
        borrows its parent's distribution at split time; an empty root
        predicts the negative label at probability 0.5. Ties go negative.
        """
        path, leaf = self._route(self.root, inst)
        dist = leaf.stats.class_dist
        if dist.total <= 0:
            if not path:
                return self.schema.negative_label, 0.5
            dist = path[-1][0].class_dist_at_split
        p_pos = (dist.pos + 1.0) / (dist.total + 2.0)
        label = self.schema.positive_label if p_pos > 0.5 else self.schema.negative_label
        return label, p_pos

    def train(self, inst: Instance) -> None:
        path, leaf = self._route(self.root, inst)
        leaf.stats.update(inst)
        self._maybe_split(self, path, leaf, self.config.gamma)

    def complexity(self) -> tuple[int, int, int]:
        """(node_count, leaf_count, depth) by traversal."""
        nodes = leaves = depth = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            nodes += 1
            depth = max(depth, d)
            if isinstance(node, InternalNode):
                stack.extend((c, d + 1) for c in node.children)
            else:
                leaves += 1
        return nodes, leaves, depth

    def statistic_cells(self) -> int:
        """Total allocated statistic cells across all leaves."""
        total = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, InternalNode):
                stack.extend(node.children)
            else:
                total += node.stats.cell_count()
        return total

    def dump(self) -> str:
        """Versioned textual dump, one node per line:
        path, branch label, kind, detail, class counts, community counts."""
        lines = [DUMP_HEADER]
        self._dump_node(lines, self.root, "r", "-")
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------- internals

    def _dump_node(self, lines, node, path, branch, extra=""):
        if isinstance(node, InternalNode):
            test = self.schema.attributes[node.attr_index].name
            if node.threshold is not None:
                test = f"{test}<={_fmt(node.threshold)}"
            cd, gc = node.class_dist_at_split, node.group_counts_at_split
            lines.append(f"{path}\t{branch}\tinternal\tsplit({test})\t"
                         f"{_dump_class(cd)}\t{_dump_groups(gc)}{extra}")
            for slot, child in enumerate(node.children):
                self._dump_node(lines, child, f"{path}.{slot}",
                                node.branch_label(slot))
        else:
            st = node.stats
            lines.append(f"{path}\t{branch}\tleaf\tn={st.n}\t"
                         f"{_dump_class(st.class_dist)}\t{_dump_groups(st.group_counts)}{extra}")

    def _maybe_split(self, container, path, leaf, gamma) -> None:
        """Attempt a split of ``leaf`` inside ``container`` (anything with a
        ``root`` attribute), using ``gamma`` for afig merits."""
        stats = leaf.stats
        cd = stats.class_dist
        if cd.neg <= 0 or cd.pos <= 0:
            return  # all seen examples carry one class
        if stats.n - stats.last_split_attempt < self.config.grace_period:
            return
        stats.last_split_attempt = stats.n
        candidates = enumerate_candidates(stats.observers, self.config, gamma)
        best = candidates[0]
        if best.attribute is None:
            return
        eps = hoeffding_bound(SPLIT_RANGE, self.config.delta, stats.n)
        second = candidates[1]
        if best.merit - second.merit > eps or eps < self.config.tau:
            node = self._build_internal(best, stats)
            if path:
                parent, slot = path[-1]
                parent.children[slot] = node
            else:
                container.root = node

    def _build_internal(self, cand: SplitCandidate, stats: LeafStats) -> InternalNode:
        if cand.threshold is None:
            child_map = {v: slot for slot, v in enumerate(cand.branch_values)}
            n_children = len(cand.branch_values)
        else:
            child_map = None
            n_children = 2
        children = [self._new_leaf() for _ in range(n_children)]
        weights = [b.weight for b in cand.partition.branches]
        majority = weights.index(max(weights))
        return self._new_internal(cand.attr_index, cand.attribute, cand.threshold,
                                  children, child_map, majority,
                                  stats.class_dist.copy(), stats.group_counts.copy())


def _dump_class(cd: ClassDist) -> str:
    return f"neg={_fmt(cd.neg)},pos={_fmt(cd.pos)}"


def _dump_groups(gc: GroupCounts) -> str:
    return (f"dp={_fmt(gc.deprived_pos)},dn={_fmt(gc.deprived_neg)},"
            f"fp={_fmt(gc.favored_pos)},fn={_fmt(gc.favored_neg)}")
