"""Synthetic stream builders shared by the test modules."""

import random

from fairstream.stream import AttributeSpec, Instance, Schema


def single_concept_schema():
    cols = [
        AttributeSpec("signal", ("u", "v")),
        AttributeSpec("noise", ("x", "y")),
        AttributeSpec("group", ("a", "b")),
        AttributeSpec("label", ("rejected", "granted")),
    ]
    return Schema(cols, "label", "granted", "group", "a")


def single_concept_stream(n, seed=13):
    """Deterministic concept: class == signal; noise and group are random."""
    rng = random.Random(seed)
    schema = single_concept_schema()
    out = []
    for t in range(n):
        sig = rng.randrange(2)
        noise = rng.randrange(2)
        grp = rng.randrange(2)
        out.append(Instance((sig, noise, grp), sig, t, grp == 0))
    return schema, out


def random_nominal_schema(rng, n_attrs, n_values):
    cols = [AttributeSpec(f"a{i}", tuple(f"v{j}" for j in range(n_values)))
            for i in range(n_attrs)]
    cols.append(AttributeSpec("group", ("a", "b")))
    cols.append(AttributeSpec("label", ("rejected", "granted")))
    return Schema(cols, "label", "granted", "group", "a")


def random_nominal_stream(rng, n, n_attrs, n_values):
    """Random labeled instances over small nominal attributes."""
    schema = random_nominal_schema(rng, n_attrs, n_values)
    out = []
    for t in range(n):
        values = tuple(rng.randrange(n_values) for _ in range(n_attrs)) + (rng.randrange(2),)
        cls = rng.randrange(2)
        out.append(Instance(values, cls, t, values[-1] == 0))
    return schema, out


def drift_schema():
    six = tuple(f"v{i}" for i in range(6))
    cols = [
        AttributeSpec("f1", six), AttributeSpec("f2", six),
        AttributeSpec("g1", six), AttributeSpec("g2", six),
        AttributeSpec("group", ("a", "b")),
        AttributeSpec("label", ("rejected", "granted")),
    ]
    return Schema(cols, "label", "granted", "group", "a")


def abrupt_drift_stream(n_phase, seed=7):
    """Abrupt concept switch at n_phase: the class threshold moves from the
    (f1, f2) attribute pair to the previously irrelevant (g1, g2) pair.

    The stale tree's leaves keep no useful structure for the new concept,
    while a fresh learner can pick it up from scratch; the sensitive group is
    independent of everything, keeping the stream fairness-neutral.
    """
    rng = random.Random(seed)
    schema = drift_schema()
    out = []
    for t in range(2 * n_phase):
        f1, f2, g1, g2 = (rng.randrange(6) for _ in range(4))
        grp = rng.randrange(2)
        if t < n_phase:
            cls = 1 if f1 + f2 >= 5 else 0
        else:
            cls = 1 if g1 + g2 >= 5 else 0
        out.append(Instance((f1, f2, g1, g2, grp), cls, t, grp == 0))
    return schema, out
