"""Accuracy vs. parity on the race-ordered adult stream.

Trains the plain accuracy-driven tree (ht) and the fairness-aware tree (faht)
prequentially on the same stream, then compares final accuracy, the parity
gap of the predictions, tree sizes, the deprived-community McNemar table, and
the boundary correlations.

    python demos/02_fairness_aware_growth.py
"""

from pathlib import Path

from fairstream import (CriterionConfig, FahtTree, boundary_correlations,
                        compare_mcnemar, load_dataset, order_by_attribute,
                        run_prequential, summary_text)

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    schema, stream = load_dataset(DATA / "adult.csv", DATA / "adult.schema")
    instances = order_by_attribute(schema, list(stream), "race")
    print(f"stream: {len(instances)} instances, ordered by 'race'\n")

    reports = {}
    for kind, name in [("ig", "ht"), ("fig", "faht")]:
        model = FahtTree(schema, CriterionConfig(kind=kind))
        reports[name] = run_prequential(model, instances, report_every=1000)
        print(summary_text(reports[name], name))
        nodes, leaves, depth = model.complexity()
        print(f"   tree: {nodes} nodes, {leaves} leaves, depth {depth}")

    ht, faht = reports["ht"].summary, reports["faht"].summary
    rel = (ht.abs_disc - faht.abs_disc) / ht.abs_disc
    print(f"\nparity gap of predictions: {ht.abs_disc:.4f} -> {faht.abs_disc:.4f} "
          f"({rel:+.1%}) at {ht.accuracy - faht.accuracy:+.4f} accuracy cost")

    pair, chi2 = compare_mcnemar(reports["ht"], reports["faht"],
                                 restrict_to_deprived=True)
    print(f"\nmcnemar over deprived instances (granted = positive prediction):")
    print(f"   both granted {pair.both_pos}, ht-only {pair.a_pos_b_neg}, "
          f"faht-only {pair.a_neg_b_pos}, both rejected {pair.both_neg}")
    print(f"   chi-squared = {chi2:.2f} (df=1, significant beyond 3.841)")

    print("\nphi coefficients (sensitive / predicted / actual boundaries):")
    for name in ("ht", "faht"):
        cors = boundary_correlations(reports[name])
        print(f"   {name:4} sens-pred {cors['sensitive_vs_predicted']:+.3f}  "
              f"pred-actual {cors['predicted_vs_actual']:+.3f}  "
              f"sens-actual {cors['sensitive_vs_actual']:+.3f}")


if __name__ == "__main__":
    main()
