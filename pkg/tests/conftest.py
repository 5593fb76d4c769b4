import os

import pytest

from autree.config import configure
from autree.core import RankedAnd
from autree.core import RankedAutomaton
from autree.core import RankedNot
from autree.core import RankedPattern
from autree.schema import load_schema
from autree.schema import read_schema
from autree.tree import LEAF
from autree.tree import DataTree
from autree.tree import tree_from_json

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def load_fixture(name: str, **kwargs):
    return read_schema(fixture_path(name), **kwargs)


def read_tree(name: str):
    with open(fixture_path(name), "rb") as f:
        return tree_from_json(f.read())


def leaves(*labels: str) -> DataTree:
    """Flat tree with one leaf child per label"""
    return DataTree([(label, LEAF) for label in labels])


def balanced_schema(first: str, second: str) -> dict:
    """Document of the AUTC accepting arities with as many `first` as `second` edges"""
    p1, p2 = f"p{first}", f"p{second}"
    return {
        "format": 1,
        "class": "autc",
        "states": ["q"],
        "final": ["q"],
        "horizontal": {
            "states": ["p0", p1, p2],
            "initial": "p0",
            "transitions": [
                {"from": "p0", "filter": f'"{first}"', "to": p1},
                {"from": "p0", "filter": f'"{second}"', "to": p2},
                {"from": p1, "filter": f'"{second}"', "to": "p0"},
                {"from": p2, "filter": f'"{first}"', "to": "p0"},
            ],
        },
        "rules": [{"descriptor": ["p0", "p0"], "state": "q"}],
    }


@pytest.fixture(autouse=True)
def default_settings():
    configure()
    yield
    configure()


@pytest.fixture
def latex():
    return load_fixture("latex.autp")


@pytest.fixture
def project():
    return read_tree("project.json")


@pytest.fixture
def contradiction():
    return load_fixture("contradiction.autp")


@pytest.fixture
def balanced():
    return load_fixture("balanced.autc")


@pytest.fixture
def balanced_ac():
    return load_schema(balanced_schema("a", "c"))


@pytest.fixture
def universal_autc():
    return load_fixture("universal.autc")


@pytest.fixture
def a_le2():
    return load_fixture("a_le2.auto")


@pytest.fixture
def a_le3():
    return load_fixture("a_le3.auto")


@pytest.fixture
def ab_auto():
    return load_fixture("ab.auto")


@pytest.fixture
def pairs():
    return load_fixture("pairs.auta")


@pytest.fixture
def flat():
    return load_fixture("flat.auta")


@pytest.fixture
def boolean_validity():
    """Ranked automaton evaluating closed Boolean terms; T is final"""
    rules = [
        (RankedPattern("true"), "T"),
        (RankedPattern("false"), "F"),
        (RankedPattern("not", ("T",)), "F"),
        (RankedPattern("not", ("F",)), "T"),
        (RankedAnd(RankedPattern("and", ("T", "T")), RankedNot(RankedPattern("and", ("F", "F")))), "T"),
        (RankedPattern("and", ("T", "F")), "F"),
        (RankedPattern("and", ("F", "T")), "F"),
        (RankedPattern("and", ("F", "F")), "F"),
        (RankedPattern("or", ("T", "T")), "T"),
        (RankedPattern("or", ("T", "F")), "T"),
        (RankedPattern("or", ("F", "T")), "T"),
        (RankedPattern("or", ("F", "F")), "F"),
    ]
    return RankedAutomaton(frozenset(["T", "F"]), frozenset(["T"]), tuple(rules))
