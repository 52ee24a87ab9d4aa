"""Audit the shipped income streams: instance counts, attribute inventory,
and the intrinsic statistical-parity gap of each dataset.

Run from the repository root:

    python demos/01_dataset_audit.py
"""

import time
from pathlib import Path

from fairstream import GroupCounts, discrimination, load_dataset

DATA = Path(__file__).resolve().parent.parent / "data"


def audit(name, data_path, schema_path):
    t0 = time.perf_counter()
    schema, stream = load_dataset(data_path, schema_path)
    groups = GroupCounts()
    n = 0
    for inst in stream:
        n += 1
        if inst.deprived is not None:
            groups.add(inst.deprived, inst.class_index == 1)
    elapsed = time.perf_counter() - t0

    nominals = sum(a.is_nominal for a in schema.attributes)
    print(f"== {name}")
    print(f"   {n} instances in {elapsed:.1f}s "
          f"({stream.dropped_lines} blank lines skipped)")
    print(f"   {len(schema.attributes)} predictive attributes "
          f"({nominals} nominal, {len(schema.attributes) - nominals} numeric)")
    print(f"   class {schema.class_name!r}, positive label {schema.positive_label!r}")
    print(f"   sensitive {schema.sensitive_name!r}, deprived value "
          f"{schema.deprived_value!r}")
    dep = groups.deprived_pos + groups.deprived_neg
    fav = groups.favored_pos + groups.favored_neg
    print(f"   deprived {dep:g} ({groups.deprived_pos:g} granted), "
          f"favored {fav:g} ({groups.favored_pos:g} granted)")
    print(f"   statistical-parity gap of the data: {discrimination(groups):+.4f}")
    print()


def main():
    audit("adult", DATA / "adult.csv", DATA / "adult.schema")
    audit("census", DATA / "census.csv.gz", DATA / "census.schema")


if __name__ == "__main__":
    main()
