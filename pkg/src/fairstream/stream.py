"""Stream schema, instances, and dataset ingestion.

A dataset is a headerless UTF-8 CSV file (optionally gzipped) plus a sidecar
schema file describing every column. The schema file is a line-oriented
key=value document:

    # lines starting with '#' are comments
    attribute=age:numeric
    attribute=sex:nominal:Male|Female
    attribute=income:nominal:<=50K|>50K
    class=income
    positive=>50K
    sensitive=sex
    deprived=Female
    exclude=fnlwgt          # optional: parsed but never used as a predictor

``attribute=`` lines appear once per CSV column, in column order. The class
column must be nominal with exactly two values; the sensitive column must be
a nominal, binary, non-class column. Nominal cells whose text is not in the
declared domain, and numeric cells that are empty or unparseable, become
missing values.
"""

from __future__ import annotations

import csv
import gzip
import io
from dataclasses import dataclass

from .errors import DatasetFormatError, SchemaError

NOMINAL = "nominal"
NUMERIC = "numeric"


@dataclass(frozen=True)
class AttributeSpec:
    """One column: a name plus either a nominal domain or a numeric marker."""

    name: str
    values: tuple[str, ...] | None = None  # None means numeric

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    @property
    def is_numeric(self) -> bool:
        return self.values is None

    def validate(self) -> None:
        if not self.name:
            raise SchemaError("attribute with empty name")
        if self.values is not None:
            if len(self.values) == 0:
                raise SchemaError(f"attribute {self.name!r}: empty nominal domain")
            if len(set(self.values)) != len(self.values):
                raise SchemaError(f"attribute {self.name!r}: duplicate nominal values")


class Schema:
    """Immutable description of a labeled binary-class stream.

    ``attributes`` holds the predictive columns in file order (the class
    column is carved out); ``class_column`` remembers where the class sat in
    the raw file so instances can be written back verbatim.
    """

    def __init__(self, columns, class_name, positive_label, sensitive_name,
                 deprived_value, excluded=()):
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate attribute names")
        for c in columns:
            c.validate()
        if class_name not in names:
            raise SchemaError(f"class attribute {class_name!r} not declared")
        self.class_column = names.index(class_name)
        class_spec = columns[self.class_column]
        if not class_spec.is_nominal or len(class_spec.values) != 2:
            raise SchemaError("class attribute must be nominal with exactly 2 values")
        if positive_label not in class_spec.values:
            raise SchemaError(f"positive label {positive_label!r} not a class value")
        self.class_name = class_name
        self.positive_label = positive_label
        self.negative_label = next(v for v in class_spec.values if v != positive_label)

        self.attributes: tuple[AttributeSpec, ...] = tuple(
            c for i, c in enumerate(columns) if i != self.class_column)
        self._index = {a.name: i for i, a in enumerate(self.attributes)}

        if sensitive_name == class_name or sensitive_name not in self._index:
            raise SchemaError(f"sensitive attribute {sensitive_name!r} must be a "
                              "declared non-class attribute")
        self.sensitive_name = sensitive_name
        self.sensitive_index = self._index[sensitive_name]
        sens = self.attributes[self.sensitive_index]
        if not sens.is_nominal or len(sens.values) != 2:
            raise SchemaError("sensitive attribute must be nominal with exactly 2 values")
        if deprived_value not in sens.values:
            raise SchemaError(f"deprived value {deprived_value!r} not in "
                              f"domain of {sensitive_name!r}")
        self.deprived_value = deprived_value
        self.deprived_index = sens.values.index(deprived_value)

        self.excluded = frozenset(excluded)
        for name in self.excluded:
            if name not in self._index:
                raise SchemaError(f"excluded attribute {name!r} not declared")
        # attribute positions a learner may split on
        self.predictive_indices: tuple[int, ...] = tuple(
            i for i, a in enumerate(self.attributes) if a.name not in self.excluded)
        if not self.predictive_indices:
            raise SchemaError("no predictive attributes left after exclusions")

    @property
    def labels(self) -> tuple[str, str]:
        """(negative_label, positive_label)."""
        return (self.negative_label, self.positive_label)

    def label_of(self, class_index: int) -> str:
        return self.positive_label if class_index else self.negative_label

    def attribute_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown attribute {name!r}") from None

    def __repr__(self):
        return (f"Schema({len(self.attributes)} attributes, class={self.class_name!r}, "
                f"sensitive={self.sensitive_name!r})")


class Instance:
    """One labeled stream element.

    ``values`` is aligned with ``schema.attributes``: nominal cells hold the
    domain index, numeric cells a float, missing cells ``None``.
    ``class_index`` is 1 for the positive label. ``deprived`` caches the
    sensitive-attribute membership (None when the sensitive value is missing).
    """

    __slots__ = ("values", "class_index", "arrival_index", "deprived")

    def __init__(self, values, class_index, arrival_index, deprived):
        self.values = values
        self.class_index = class_index
        self.arrival_index = arrival_index
        self.deprived = deprived

    def with_arrival_index(self, t: int) -> "Instance":
        return Instance(self.values, self.class_index, t, self.deprived)

    def __repr__(self):
        return (f"Instance(t={self.arrival_index}, class={self.class_index}, "
                f"values={self.values!r})")


def parse_schema(schema_path) -> Schema:
    """Parse a sidecar schema file. Raises SchemaError on any violation."""
    try:
        with open(schema_path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise SchemaError(f"schema file not found: {schema_path}") from None

    columns: list[AttributeSpec] = []
    fields: dict[str, str] = {}
    excluded: list[str] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SchemaError(f"{schema_path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key == "attribute":
            parts = value.split(":", 2)
            if len(parts) < 2:
                raise SchemaError(f"{schema_path}:{lineno}: attribute needs name:kind")
            name, kind = parts[0].strip(), parts[1].strip()
            if kind == NUMERIC:
                columns.append(AttributeSpec(name))
            elif kind == NOMINAL:
                if len(parts) != 3 or not parts[2]:
                    raise SchemaError(f"{schema_path}:{lineno}: nominal attribute "
                                      "needs a |-separated value list")
                columns.append(AttributeSpec(name, tuple(v.strip() for v in parts[2].split("|"))))
            else:
                raise SchemaError(f"{schema_path}:{lineno}: unknown kind {kind!r}")
        elif key == "exclude":
            excluded.extend(v.strip() for v in value.split("|") if v.strip())
        elif key in ("class", "positive", "sensitive", "deprived"):
            if key in fields:
                raise SchemaError(f"{schema_path}:{lineno}: duplicate {key}=")
            fields[key] = value.strip()
        else:
            raise SchemaError(f"{schema_path}:{lineno}: unknown key {key!r}")

    for req in ("class", "positive", "sensitive", "deprived"):
        if req not in fields:
            raise SchemaError(f"{schema_path}: missing {req}=")
    return Schema(columns, fields["class"], fields["positive"],
                  fields["sensitive"], fields["deprived"], excluded)


def _open_text(path):
    if str(path).endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8", newline="")


class DatasetStream:
    """Single-consumer lazy iterator over a data file.

    After exhaustion, ``yielded`` holds the instance count and
    ``dropped_lines`` the number of blank lines skipped (the only dropping
    policy; malformed rows raise instead).
    """

    def __init__(self, schema: Schema, data_path):
        self.schema = schema
        self.data_path = data_path
        self.yielded = 0
        self.dropped_lines = 0
        self._consumed = False

    def __iter__(self):
        if self._consumed:
            raise RuntimeError("DatasetStream is single-consumer; reload to re-iterate")
        self._consumed = True
        schema = self.schema
        ncols = len(schema.attributes) + 1
        class_col = schema.class_column
        labels = {schema.negative_label: 0, schema.positive_label: 1}
        specs = []  # (raw column -> value parser state)
        for a in schema.attributes:
            if a.is_nominal:
                specs.append({v: i for i, v in enumerate(a.values)})
            else:
                specs.append(None)
        sens_i = schema.sensitive_index
        depr_i = schema.deprived_index

        with _open_text(self.data_path) as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, 1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    self.dropped_lines += 1
                    continue
                if len(row) != ncols:
                    raise DatasetFormatError(
                        f"{self.data_path}:{lineno}: expected {ncols} columns, "
                        f"got {len(row)}")
                label = row[class_col].strip()
                if label not in labels:
                    raise DatasetFormatError(
                        f"{self.data_path}:{lineno}: class label {label!r} is not "
                        f"one of {schema.labels}")
                values = []
                ai = 0
                for col, cell in enumerate(row):
                    if col == class_col:
                        continue
                    cell = cell.strip()
                    domain = specs[ai]
                    if domain is not None:
                        values.append(domain.get(cell))  # unknown text -> missing
                    else:
                        try:
                            values.append(float(cell))
                        except ValueError:
                            values.append(None)  # empty or unparseable -> missing
                    ai += 1
                sv = values[sens_i]
                deprived = None if sv is None else (sv == depr_i)
                yield Instance(tuple(values), labels[label], self.yielded, deprived)
                self.yielded += 1


def load_dataset(data_path, schema_path) -> tuple[Schema, DatasetStream]:
    """Load a CSV + schema pair; instances are yielded lazily in file order
    with arrival_index 0,1,2,..."""
    schema = parse_schema(schema_path)
    return schema, DatasetStream(schema, data_path)


def save_dataset(path, schema: Schema, instances) -> int:
    """Write instances back out in the schema's column order.

    Missing nominal cells are written as "?" (or "" if "?" is a domain value),
    missing numeric cells as "". Reloading yields value-identical instances.
    Returns the number of rows written.
    """
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for inst in instances:
            row = []
            ai = 0
            for col in range(len(schema.attributes) + 1):
                if col == schema.class_column:
                    row.append(schema.label_of(inst.class_index))
                    continue
                spec = schema.attributes[ai]
                v = inst.values[ai]
                if v is None:
                    if spec.is_nominal:
                        row.append("" if "?" in spec.values else "?")
                    else:
                        row.append("")
                elif spec.is_nominal:
                    row.append(spec.values[v])
                else:
                    row.append(repr(v))
                ai += 1
            writer.writerow(row)
            n += 1
    return n


def order_by_attribute(schema: Schema, instances, attribute: str) -> list[Instance]:
    """Stable-sort instances by a nominal attribute's value index.

    Missing values sort last; arrival_index is reassigned to the new order.
    The result is a permutation of the input (same multiset of instances).
    """
    idx = schema.attribute_index(attribute)
    if not schema.attributes[idx].is_nominal:
        raise SchemaError(f"order_by_attribute needs a nominal attribute, "
                          f"{attribute!r} is numeric")
    items = list(instances)
    last = len(schema.attributes[idx].values)  # missing sorts after every value
    items.sort(key=lambda inst: last if inst.values[idx] is None else inst.values[idx])
    return [inst.with_arrival_index(t) for t, inst in enumerate(items)]
