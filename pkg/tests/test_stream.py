import random

import pytest

from fairstream.errors import DatasetFormatError, SchemaError
from fairstream.stream import (AttributeSpec, Instance, Schema, load_dataset,
                               order_by_attribute, parse_schema, save_dataset)

SCHEMA_TEXT = """\
# toy credit stream
attribute=age:numeric
attribute=color:nominal:red|blue|green
attribute=group:nominal:a|b
attribute=label:nominal:rejected|granted
class=label
positive=granted
sensitive=group
deprived=a
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestSchemaParsing:
    def test_roundtrip_fields(self, tmp_path):
        schema = parse_schema(write(tmp_path, "s", SCHEMA_TEXT))
        assert [a.name for a in schema.attributes] == ["age", "color", "group"]
        assert schema.labels == ("rejected", "granted")
        assert schema.sensitive_name == "group"
        assert schema.deprived_value == "a"
        assert schema.attributes[0].is_numeric
        assert schema.attributes[1].values == ("red", "blue", "green")

    def test_missing_schema_file(self, tmp_path):
        with pytest.raises(SchemaError):
            parse_schema(tmp_path / "nope.schema")

    @pytest.mark.parametrize("mutation", [
        ("class=label", "class=age"),                    # class must be nominal binary
        ("positive=granted", "positive=maybe"),          # unknown positive label
        ("sensitive=group", "sensitive=label"),          # sensitive can't be the class
        ("deprived=a", "deprived=c"),                    # deprived outside domain
        ("attribute=color:nominal:red|blue|green",
         "attribute=color:nominal:red|red"),             # duplicate nominal values
        ("class=label", ""),                             # class missing entirely
    ])
    def test_invalid_schemas(self, tmp_path, mutation):
        old, new = mutation
        with pytest.raises(SchemaError):
            parse_schema(write(tmp_path, "bad", SCHEMA_TEXT.replace(old, new)))

    def test_sensitive_must_be_binary(self, tmp_path):
        text = SCHEMA_TEXT.replace("sensitive=group", "sensitive=color") \
                          .replace("deprived=a", "deprived=red")
        with pytest.raises(SchemaError):
            parse_schema(write(tmp_path, "bad", text))

    def test_exclude(self, tmp_path):
        schema = parse_schema(write(tmp_path, "s", SCHEMA_TEXT + "exclude=age\n"))
        names = [schema.attributes[i].name for i in schema.predictive_indices]
        assert names == ["color", "group"]

    def test_duplicate_attribute_names(self, tmp_path):
        text = SCHEMA_TEXT.replace("attribute=age:numeric",
                                   "attribute=age:numeric\nattribute=age:numeric")
        with pytest.raises(SchemaError):
            parse_schema(write(tmp_path, "bad", text))


class TestLoadDataset:
    def test_order_count_and_values(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "31,red,a,granted\n42,blue,b,rejected\n")
        schema, stream = load_dataset(dp, sp)
        insts = list(stream)
        assert [i.arrival_index for i in insts] == [0, 1]
        assert insts[0].values == (31.0, 0, 0)
        assert insts[0].class_index == 1
        assert insts[0].deprived is True
        assert insts[1].values == (42.0, 1, 1)
        assert insts[1].deprived is False
        assert stream.yielded == 2 and stream.dropped_lines == 0

    def test_missing_markers(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", ",purple,?,granted\n")
        _, stream = load_dataset(dp, sp)
        inst = next(iter(stream))
        assert inst.values == (None, None, None)
        assert inst.deprived is None

    def test_empty_file(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "")
        _, stream = load_dataset(dp, sp)
        assert list(stream) == []

    def test_blank_lines_reported_as_dropped(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "31,red,a,granted\n\n\n42,blue,b,rejected\n")
        _, stream = load_dataset(dp, sp)
        assert len(list(stream)) == 2
        assert stream.dropped_lines == 2

    def test_column_count_mismatch(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "31,red,a\n")
        _, stream = load_dataset(dp, sp)
        with pytest.raises(DatasetFormatError):
            list(stream)

    def test_unknown_class_label(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "31,red,a,maybe\n")
        _, stream = load_dataset(dp, sp)
        with pytest.raises(DatasetFormatError):
            list(stream)

    def test_single_consumer(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d", "31,red,a,granted\n")
        _, stream = load_dataset(dp, sp)
        list(stream)
        with pytest.raises(RuntimeError):
            list(stream)

    def test_roundtrip_save_load(self, tmp_path):
        sp = write(tmp_path, "s", SCHEMA_TEXT)
        dp = write(tmp_path, "d",
                   "31,red,a,granted\n,?,b,rejected\n55.5,green,a,rejected\n")
        schema, stream = load_dataset(dp, sp)
        original = list(stream)
        out = tmp_path / "copy.csv"
        save_dataset(out, schema, original)
        _, reloaded = load_dataset(out, sp)
        copies = list(reloaded)
        assert len(copies) == len(original)
        for a, b in zip(original, copies):
            assert a.values == b.values
            assert a.class_index == b.class_index
            assert a.deprived == b.deprived


class TestOrderByAttribute:
    def build(self, values, schema):
        # one nominal attribute of interest at index 1
        return [Instance((float(i), v, i % 2), i % 2, i, (i % 2) == 0)
                for i, v in enumerate(values)]

    def test_stable_grouping(self, nominal_schema):
        insts = [Instance((c, s, 0), 0, t, True)
                 for t, (c, s) in enumerate([(1, 0), (0, 0), (1, 1), (0, 1)])]
        ordered = order_by_attribute(nominal_schema, insts, "color")
        assert [i.values[0] for i in ordered] == [0, 0, 1, 1]
        # stability: original relative order within equal keys
        assert [i.values[1] for i in ordered] == [0, 1, 0, 1]
        assert [i.arrival_index for i in ordered] == [0, 1, 2, 3]

    def test_missing_sorts_last(self, nominal_schema):
        insts = [Instance((None, 0, 0), 0, 0, True),
                 Instance((1, 0, 0), 0, 1, True),
                 Instance((0, 0, 0), 0, 2, True)]
        ordered = order_by_attribute(nominal_schema, insts, "color")
        assert [i.values[0] for i in ordered] == [0, 1, None]

    def test_permutation(self, nominal_schema):
        rng = random.Random(3)
        insts = [Instance((rng.randrange(2), rng.randrange(2), rng.randrange(2)),
                          rng.randrange(2), t, None) for t in range(500)]
        ordered = order_by_attribute(nominal_schema, insts, "shape")
        key = lambda i: (i.values, i.class_index)
        assert sorted(map(key, insts)) == sorted(map(key, ordered))

    def test_singleton_and_idempotence(self, nominal_schema):
        one = [Instance((1, 0, 0), 0, 0, True)]
        assert order_by_attribute(nominal_schema, one, "color")[0].values == (1, 0, 0)
        insts = [Instance((0, i % 2, 0), 0, i, True) for i in range(10)]
        once = order_by_attribute(nominal_schema, insts, "shape")
        twice = order_by_attribute(nominal_schema, once, "shape")
        assert [i.values for i in once] == [i.values for i in twice]

    def test_unknown_attribute(self, nominal_schema):
        with pytest.raises(SchemaError):
            order_by_attribute(nominal_schema, [], "nope")

    def test_numeric_attribute_rejected(self, mixed_schema):
        with pytest.raises(SchemaError):
            order_by_attribute(mixed_schema, [], "size")


class TestRealDatasets:
    def test_adult_loads(self, data_dir):
        schema, stream = load_dataset(data_dir / "adult.csv", data_dir / "adult.schema")
        n = sum(1 for _ in stream)
        assert n == 48_842
        assert len(schema.attributes) == 14

    def test_census_loads(self, data_dir):
        schema, stream = load_dataset(data_dir / "census.csv.gz",
                                      data_dir / "census.schema")
        n = sum(1 for _ in stream)
        assert n == 299_285
        # 40 predictive attributes plus the class column
        assert len(schema.attributes) == 40
