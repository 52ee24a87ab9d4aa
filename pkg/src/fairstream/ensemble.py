"""Sliding-window ensemble: one base tree per window of the stream, a bounded
FIFO of stored members that keep training on everything arriving after their
creation, and unweighted majority voting."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .criteria import CriterionConfig, KIND_FIG, KIND_IG
from .errors import ConfigError
from .stream import Instance, Schema
from .tree import FahtTree


@dataclass(frozen=True)
class EnsembleConfig:
    window_size: int = 1000
    capacity: int = 10
    base: CriterionConfig = field(default_factory=lambda: CriterionConfig(kind=KIND_FIG))

    def __post_init__(self):
        if self.window_size < 1:
            raise ConfigError("window_size must be >= 1")
        if self.capacity < 1:
            raise ConfigError("capacity must be >= 1")
        if self.base.kind not in (KIND_IG, KIND_FIG):
            raise ConfigError("ensemble base must be an 'ig' or 'fig' tree")


class SlidingWindowEnsemble:
    """Bounded queue of window-trained trees with majority voting.

    Training feeds each stored member incrementally and buffers the window;
    a full buffer trains one new member on the buffered instances (single
    pass, in order), evicting the oldest member when the queue is full.
    """

    def __init__(self, schema: Schema, config: EnsembleConfig = EnsembleConfig()):
        self.schema = schema
        self.config = config
        self.members: deque[tuple[FahtTree, int]] = deque()
        self.buffer: list[Instance] = []
        self.windows_completed = 0

    def predict(self, inst: Instance) -> tuple[str, float]:
        """Unweighted majority vote; ties and an empty queue go negative."""
        if not self.members:
            return self.schema.negative_label, 0.5
        pos_votes = 0
        for model, _created in self.members:
            label, _p = model.predict(inst)
            pos_votes += label == self.schema.positive_label
        n = len(self.members)
        if pos_votes * 2 > n:
            return self.schema.positive_label, pos_votes / n
        return self.schema.negative_label, (n - pos_votes) / n

    def train(self, inst: Instance) -> None:
        for model, _created in self.members:
            model.train(inst)
        self.buffer.append(inst)
        if len(self.buffer) >= self.config.window_size:
            fresh = FahtTree(self.schema, self.config.base)
            for buffered in self.buffer:
                fresh.train(buffered)
            self.members.append((fresh, self.windows_completed))
            self.windows_completed += 1
            if len(self.members) > self.config.capacity:
                self.members.popleft()
            self.buffer.clear()

    def complexity(self) -> tuple[int, int, int]:
        """Summed node/leaf counts and max depth over stored members."""
        nodes = leaves = depth = 0
        for model, _created in self.members:
            n, l, d = model.complexity()
            nodes += n
            leaves += l
            depth = max(depth, d)
        return nodes, leaves, depth

    def statistic_cells(self) -> int:
        return sum(model.statistic_cells() for model, _created in self.members)
