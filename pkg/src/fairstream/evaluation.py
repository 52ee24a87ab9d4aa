"""Prequential (first-test-then-train) evaluation and cross-learner
diagnostics.

``run_prequential`` drives any learner exposing ``predict``/``train`` over a
stream: each instance is predicted first, scored, folded into the cumulative
prediction fairness counters (true sensitive membership crossed with the
predicted label; instances with a missing sensitive value count for accuracy
only), and only then used for training. Rows are emitted every
``report_every`` instances; the full prediction log is retained for McNemar
and correlation comparisons.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import ConfigError, UndefinedStatisticError
from .fairness import (ContingencyPair, GroupCounts, discrimination, mcnemar,
                       phi_correlation)


@dataclass
class ReportRow:
    instance_index: int
    cum_accuracy: float
    cum_disc: float
    node_count: int
    gamma: float | None  # gamma-adaptive learners only


@dataclass
class PrequentialSummary:
    instances: int = 0
    accuracy: float = 0.0
    disc: float = 0.0      # signed statistical-parity gap of the predictions
    abs_disc: float = 0.0
    node_count: int = 0
    peak_cells: int = 0
    runtime_s: float = 0.0


@dataclass
class PrequentialReport:
    rows: list[ReportRow] = field(default_factory=list)
    summary: PrequentialSummary = field(default_factory=PrequentialSummary)
    # per-instance log, aligned with the stream
    predicted: list[int] = field(default_factory=list)   # predicted class index
    actual: list[int] = field(default_factory=list)      # true class index
    deprived: list = field(default_factory=list)         # True/False/None


def run_prequential(learner, stream, report_every: int = 1000,
                    positive_label: str | None = None) -> PrequentialReport:
    """Evaluate ``learner`` over ``stream`` in first-test-then-train order.

    The learner's predict() must return (label, positive_probability); the
    positive label is taken from the learner's schema unless given explicitly.
    """
    if report_every < 1:
        raise ConfigError("report_every must be >= 1")
    if positive_label is None:
        positive_label = learner.schema.positive_label

    report = PrequentialReport()
    groups = GroupCounts()
    correct = 0
    n = 0
    peak_cells = 0
    start = time.perf_counter()

    for inst in stream:
        label, _p = learner.predict(inst)
        pred_idx = 1 if label == positive_label else 0
        correct += pred_idx == inst.class_index
        if inst.deprived is not None:
            groups.add(inst.deprived, pred_idx == 1)
        report.predicted.append(pred_idx)
        report.actual.append(inst.class_index)
        report.deprived.append(inst.deprived)

        learner.train(inst)
        n += 1
        if n % report_every == 0:
            peak_cells = max(peak_cells, _cells(learner))
            report.rows.append(ReportRow(
                instance_index=n,
                cum_accuracy=correct / n,
                cum_disc=discrimination(groups),
                node_count=_nodes(learner),
                gamma=_gamma(learner),
            ))

    runtime = time.perf_counter() - start
    peak_cells = max(peak_cells, _cells(learner))
    disc = discrimination(groups)
    report.summary = PrequentialSummary(
        instances=n,
        accuracy=correct / n if n else 0.0,
        disc=disc,
        abs_disc=abs(disc),
        node_count=_nodes(learner),
        peak_cells=peak_cells,
        runtime_s=runtime,
    )
    return report


def _nodes(learner) -> int:
    fn = getattr(learner, "complexity", None)
    return fn()[0] if fn else 0


def _cells(learner) -> int:
    fn = getattr(learner, "statistic_cells", None)
    return fn() if fn else 0


def _gamma(learner):
    fn = getattr(learner, "effective_gamma", None)
    return fn() if fn else None


def compare_mcnemar(report_a: PrequentialReport, report_b: PrequentialReport,
                    restrict_to_deprived: bool = True):
    """Paired-decision contingency between two prediction logs over the same
    stream, plus the McNemar statistic. Positive predictions count as
    "granted"."""
    if len(report_a.predicted) != len(report_b.predicted):
        raise ValueError("prediction logs cover different stream lengths")
    both_pos = a_only = b_only = both_neg = 0
    for pa, pb, dep in zip(report_a.predicted, report_b.predicted, report_a.deprived):
        if restrict_to_deprived and dep is not True:
            continue
        if pa:
            if pb:
                both_pos += 1
            else:
                a_only += 1
        elif pb:
            b_only += 1
        else:
            both_neg += 1
    pair = ContingencyPair(both_pos, a_only, b_only, both_neg)
    chi2, _df = mcnemar(pair)  # raises UndefinedStatisticError for identical logs
    return pair, chi2


def boundary_correlations(report: PrequentialReport) -> dict[str, float]:
    """Phi coefficients between the sensitive attribute, the predicted
    decision boundary, and the actual decision boundary.

    Pairs involving the sensitive attribute use only instances where it is
    known; predicted-vs-actual uses the whole log. A constant column raises
    UndefinedStatisticError.
    """
    sens, pred_s, act_s = [], [], []
    for p, a, dep in zip(report.predicted, report.actual, report.deprived):
        if dep is not None:
            sens.append(1 if dep else 0)
            pred_s.append(p)
            act_s.append(a)
    return {
        "sensitive_vs_predicted": phi_correlation(sens, pred_s),
        "predicted_vs_actual": phi_correlation(report.predicted, report.actual),
        "sensitive_vs_actual": phi_correlation(sens, act_s),
    }


# ------------------------------------------------------------- file output

REPORT_CSV_HEADER = "instance_index,cum_accuracy,cum_disc,node_count,gamma"


def write_report_csv(report: PrequentialReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(REPORT_CSV_HEADER + "\n")
        for r in report.rows:
            gamma = "" if r.gamma is None else repr(r.gamma)
            fh.write(f"{r.instance_index},{r.cum_accuracy!r},{r.cum_disc!r},"
                     f"{r.node_count},{gamma}\n")


def write_summary_csv(report: PrequentialReport, path) -> None:
    """One-row summary. Wall-clock runtime is deliberately omitted from files
    so identical runs stay byte-identical; it lives on the in-memory summary."""
    s = report.summary
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("instances,accuracy,disc,abs_disc,node_count,peak_cells\n")
        fh.write(f"{s.instances},{s.accuracy!r},{s.disc!r},{s.abs_disc!r},"
                 f"{s.node_count},{s.peak_cells}\n")


def summary_text(report: PrequentialReport, name: str = "learner") -> str:
    s = report.summary
    return (f"{name}: {s.instances} instances | accuracy {s.accuracy:.4f} | "
            f"prediction disc {s.disc:+.4f} (|{s.abs_disc:.4f}|) | "
            f"{s.node_count} nodes | peak cells {s.peak_cells} | "
            f"{s.runtime_s:.1f}s")
