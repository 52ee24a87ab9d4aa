"""Command-line entry point for reproducible experiment runs.

Subcommands
-----------
run          prequential evaluation of one learner; writes report.csv,
             summary.csv, tree.txt (tree learners) and gamma.csv (cfaht)
sweep-gamma  one run per gamma value; writes gamma_sweep.csv
sweep-window one ensemble run per window size; writes window_sweep.csv
compare      two learners on the identical stream; writes mcnemar.csv and
             correlations.csv
dump-tree    train a tree learner over the stream and write tree.txt only

Learners: ht (accuracy-only), faht (fairness-aware), faht-afig (tunable
gamma), cfaht (gamma-adaptive + drift handling), ensemble (sliding-window
committee of ht/faht bases). All learners are deterministic; every file an
invocation writes is byte-identical across repeat runs (wall-clock timings go
to stderr only). FAIRSTREAM_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .adaptive import CfahtTree, DriftConfig
from .criteria import CriterionConfig, KIND_AFIG, KIND_FIG, KIND_IG
from .ensemble import EnsembleConfig, SlidingWindowEnsemble
from .errors import FairstreamError, UndefinedStatisticError
from .evaluation import (boundary_correlations, compare_mcnemar,
                         run_prequential, summary_text, write_report_csv,
                         write_summary_csv)
from .stream import load_dataset, order_by_attribute
from .tree import FahtTree

LEARNERS = ("ht", "faht", "faht-afig", "cfaht", "ensemble")
_KIND_OF = {"ht": KIND_IG, "faht": KIND_FIG, "faht-afig": KIND_AFIG,
            "cfaht": KIND_AFIG}


def _add_common(p):
    p.add_argument("--data", required=True, help="CSV data file (.gz ok)")
    p.add_argument("--schema", required=True, help="sidecar schema file")
    p.add_argument("--order-by", default=None, metavar="ATTR",
                   help="stable-sort the stream by a nominal attribute first")
    p.add_argument("--delta", type=float, default=1e-7, help="Hoeffding confidence")
    p.add_argument("--tau", type=float, default=0.05, help="tie-break threshold")
    p.add_argument("--grace", type=int, default=200, help="instances between split attempts")
    p.add_argument("--split-points", type=int, default=10, help="numeric threshold candidates")
    p.add_argument("--gamma", type=float, default=None,
                   help="fairness weight (faht-afig and cfaht only)")
    p.add_argument("--drift-window", type=int, default=1000, help="cfaht monitor window")
    p.add_argument("--drift-delta", type=float, default=0.05, help="cfaht drift confidence")
    p.add_argument("--probation", type=int, default=None, help="cfaht alternate probation")
    p.add_argument("--freeze-gamma", action="store_true",
                   help="cfaht: keep gamma at its preset (no self-adaptation)")
    p.add_argument("--window-size", "-w", type=int, default=1000, help="ensemble training window")
    p.add_argument("--capacity", "-E", type=int, default=10, help="ensemble member capacity")
    p.add_argument("--base", choices=("ht", "faht"), default="faht", help="ensemble base learner")
    p.add_argument("--report-every", type=int, default=1000)
    p.add_argument("--output", default=".", help="directory for output files")
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; all learners are deterministic")


def build_parser():
    ap = argparse.ArgumentParser(prog="fairstream", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="prequential run of one learner")
    p_run.add_argument("--learner", choices=LEARNERS, required=True)
    _add_common(p_run)

    p_sg = sub.add_parser("sweep-gamma", help="fixed-gamma trade-off sweep")
    p_sg.add_argument("--learner", choices=("faht-afig", "cfaht"), default="faht-afig")
    p_sg.add_argument("--gammas", required=True,
                      help="comma-separated gamma values (at least two)")
    _add_common(p_sg)

    p_sw = sub.add_parser("sweep-window", help="ensemble window-size sweep")
    p_sw.add_argument("--windows", required=True,
                      help="comma-separated window sizes (at least one)")
    _add_common(p_sw)

    p_cmp = sub.add_parser("compare", help="two learners on the identical stream")
    p_cmp.add_argument("--learner-a", choices=LEARNERS, required=True)
    p_cmp.add_argument("--learner-b", choices=LEARNERS, required=True)
    _add_common(p_cmp)

    p_dump = sub.add_parser("dump-tree", help="train and dump the tree structure")
    p_dump.add_argument("--learner", choices=("ht", "faht", "faht-afig", "cfaht"),
                        required=True)
    _add_common(p_dump)
    return ap


def _criterion_config(args, learner: str) -> CriterionConfig:
    gamma = args.gamma
    if gamma is not None and learner not in ("faht-afig", "cfaht"):
        raise FairstreamError(f"--gamma is not valid for learner {learner!r}")
    return CriterionConfig(
        kind=_KIND_OF.get(learner, KIND_FIG),
        gamma=1.0 if gamma is None else gamma,
        delta=args.delta,
        tau=args.tau,
        grace_period=args.grace,
        numeric_split_points=args.split_points,
    )


def build_learner(schema, learner: str, args):
    if learner == "ensemble":
        if args.gamma is not None:
            raise FairstreamError("--gamma is not valid for learner 'ensemble'")
        base = CriterionConfig(kind=_KIND_OF[args.base], delta=args.delta,
                               tau=args.tau, grace_period=args.grace,
                               numeric_split_points=args.split_points)
        return SlidingWindowEnsemble(schema, EnsembleConfig(
            window_size=args.window_size, capacity=args.capacity, base=base))
    config = _criterion_config(args, learner)
    if learner == "cfaht":
        return CfahtTree(schema, config, DriftConfig(
            window=args.drift_window, delta_drift=args.drift_delta,
            probation=args.probation,
            freeze_gamma=getattr(args, "freeze_gamma", False)))
    return FahtTree(schema, config)


def _load_stream(args):
    schema, stream = load_dataset(args.data, args.schema)
    instances = list(stream)
    if args.order_by:
        instances = order_by_attribute(schema, instances, args.order_by)
    return schema, instances


class _Outputs:
    """Tracks written files; leaving the context on an exception removes
    every partial output."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.written: list[Path] = []

    def __enter__(self):
        self.dir.mkdir(parents=True, exist_ok=True)
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for p in self.written:
                try:
                    p.unlink()
                except FileNotFoundError:
                    pass
        return False

    def path(self, name: str) -> Path:
        p = self.dir / name
        self.written.append(p)
        return p


def cmd_run(args) -> int:
    schema, instances = _load_stream(args)
    learner = build_learner(schema, args.learner, args)
    report = run_prequential(learner, instances, args.report_every)
    with _Outputs(args.output) as out:
        write_report_csv(report, out.path("report.csv"))
        write_summary_csv(report, out.path("summary.csv"))
        if hasattr(learner, "dump"):
            out.path("tree.txt").write_text(learner.dump(), encoding="utf-8")
        if hasattr(learner, "effective_gamma"):
            with open(out.path("gamma.csv"), "w", encoding="utf-8") as fh:
                fh.write("instance_index,gamma\n")
                for row in report.rows:
                    fh.write(f"{row.instance_index},{row.gamma!r}\n")
    print(summary_text(report, args.learner))
    print(f"[timing] {report.summary.runtime_s:.1f}s", file=sys.stderr)
    return 0


def _sweep_run(payload):
    """One sweep worker: reload the stream, run, return summary fields."""
    (data, schema_path, order_by, learner, vars_args) = payload
    ns = argparse.Namespace(**vars_args)
    schema, stream = load_dataset(data, schema_path)
    instances = list(stream)
    if order_by:
        instances = order_by_attribute(schema, instances, order_by)
    model = build_learner(schema, learner, ns)
    report = run_prequential(model, instances, ns.report_every)
    s = report.summary
    return s.accuracy, s.disc, s.abs_disc


def _run_many(payloads) -> list:
    workers = int(os.environ.get("FAIRSTREAM_THREADS", "1"))
    if workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(payloads))) as ex:
            return list(ex.map(_sweep_run, payloads))
    return [_sweep_run(p) for p in payloads]


def cmd_sweep_gamma(args) -> int:
    gammas = [float(g) for g in args.gammas.split(",") if g.strip()]
    if len(gammas) < 2:
        raise FairstreamError("sweep-gamma needs at least two gamma values")
    payloads = []
    for g in gammas:
        ns = dict(vars(args))
        ns["gamma"] = g
        payloads.append((args.data, args.schema, args.order_by, args.learner, ns))
    results = _run_many(payloads)
    with _Outputs(args.output) as out:
        with open(out.path("gamma_sweep.csv"), "w", encoding="utf-8") as fh:
            fh.write("gamma,accuracy,disc,abs_disc\n")
            for g, (acc, disc, abs_disc) in zip(gammas, results):
                fh.write(f"{g!r},{acc!r},{disc!r},{abs_disc!r}\n")
                print(f"gamma={g:g}: accuracy {acc:.4f}, disc {disc:+.4f}")
    return 0


def cmd_sweep_window(args) -> int:
    windows = [int(w) for w in args.windows.split(",") if w.strip()]
    if not windows:
        raise FairstreamError("sweep-window needs at least one window size")
    payloads = []
    for w in windows:
        ns = dict(vars(args))
        ns["window_size"] = w
        payloads.append((args.data, args.schema, args.order_by, "ensemble", ns))
    results = _run_many(payloads)
    with _Outputs(args.output) as out:
        with open(out.path("window_sweep.csv"), "w", encoding="utf-8") as fh:
            fh.write("window,accuracy,disc,abs_disc\n")
            for w, (acc, disc, abs_disc) in zip(windows, results):
                fh.write(f"{w},{acc!r},{disc!r},{abs_disc!r}\n")
                print(f"window={w}: accuracy {acc:.4f}, disc {disc:+.4f}")
    return 0


def cmd_compare(args) -> int:
    schema, instances = _load_stream(args)
    learner_a = build_learner(schema, args.learner_a, args)
    learner_b = build_learner(schema, args.learner_b, args)
    report_a = run_prequential(learner_a, instances, args.report_every)
    report_b = run_prequential(learner_b, instances, args.report_every)

    pair, chi2 = compare_mcnemar(report_a, report_b, restrict_to_deprived=True)
    with _Outputs(args.output) as out:
        with open(out.path("mcnemar.csv"), "w", encoding="utf-8") as fh:
            fh.write("learner_a,learner_b,community,both_granted,a_only_granted,"
                     "b_only_granted,both_rejected,chi_squared,df\n")
            fh.write(f"{args.learner_a},{args.learner_b},deprived,{pair.both_pos},"
                     f"{pair.a_pos_b_neg},{pair.a_neg_b_pos},{pair.both_neg},"
                     f"{chi2!r},1\n")
        with open(out.path("correlations.csv"), "w", encoding="utf-8") as fh:
            fh.write("learner,sensitive_vs_predicted,predicted_vs_actual,"
                     "sensitive_vs_actual\n")
            for name, rep in ((args.learner_a, report_a), (args.learner_b, report_b)):
                cors = boundary_correlations(rep)
                fh.write(f"{name},{cors['sensitive_vs_predicted']!r},"
                         f"{cors['predicted_vs_actual']!r},"
                         f"{cors['sensitive_vs_actual']!r}\n")
    print(summary_text(report_a, args.learner_a))
    print(summary_text(report_b, args.learner_b))
    print(f"mcnemar(deprived): b={pair.a_pos_b_neg} c={pair.a_neg_b_pos} "
          f"chi2={chi2:.3f} (df=1)")
    return 0


def cmd_dump_tree(args) -> int:
    schema, instances = _load_stream(args)
    learner = build_learner(schema, args.learner, args)
    for inst in instances:
        learner.train(inst)
    with _Outputs(args.output) as out:
        out.path("tree.txt").write_text(learner.dump(), encoding="utf-8")
    nodes, leaves, depth = learner.complexity()
    print(f"{args.learner}: {nodes} nodes, {leaves} leaves, depth {depth}")
    return 0


_COMMANDS = {
    "run": cmd_run,
    "sweep-gamma": cmd_sweep_gamma,
    "sweep-window": cmd_sweep_window,
    "compare": cmd_compare,
    "dump-tree": cmd_dump_tree,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FairstreamError, UndefinedStatisticError, OSError) as exc:
        print(f"fairstream: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
