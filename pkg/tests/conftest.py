import pytest
from pathlib import Path

from fairstream.stream import AttributeSpec, Schema

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture
def nominal_schema():
    """Two binary predictive attributes plus a binary sensitive attribute."""
    cols = [
        AttributeSpec("color", ("red", "blue")),
        AttributeSpec("shape", ("square", "round")),
        AttributeSpec("group", ("a", "b")),
        AttributeSpec("label", ("rejected", "granted")),
    ]
    return Schema(cols, "label", "granted", "group", "a")


@pytest.fixture
def mixed_schema():
    """One numeric attribute alongside nominals."""
    cols = [
        AttributeSpec("size"),
        AttributeSpec("color", ("red", "blue")),
        AttributeSpec("group", ("a", "b")),
        AttributeSpec("label", ("rejected", "granted")),
    ]
    return Schema(cols, "label", "granted", "group", "a")
