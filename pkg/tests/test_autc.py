import random

import pytest

from autree.abstracts import EvalStats
from autree.autc import Confluence
from autree.autc import acceptor_table
from autree.autc import autc_disjoint
from autree.autc import autc_empty
from autree.autc import autc_equivalent
from autree.autc import autc_inclusion
from autree.autc import autc_membership
from autree.autc import autc_universal
from autree.autc import check_confluent
from autree.autc import greedy_run
from autree.autc import horizontal_atoms
from autree.autc import minimal_acceptors
from autree.autc import require_confluent
from autree.autc import shared_initial_union
from autree.core import Decision
from autree.core import accepts
from autree.exceptions import NotConfluentError
from autree.exceptions import PreconditionError
from autree.exceptions import SchemaError
from autree.filters import atomize
from autree.oracle import BOTTOM
from autree.oracle import EnumConfig
from autree.oracle import brute_runs
from autree.oracle import corpus_labels
from autree.oracle import enum_multisets
from autree.oracle import enum_trees
from autree.oracle import multiset_of
from autree.oracle import random_confluent_horizontal
from autree.presburger import annotated
from autree.schema import load_schema
from autree.tree import LEAF
from autree.tree import DataTree
from autree.tree import tree_from_json
from conftest import balanced_schema
from conftest import leaves
from conftest import load_fixture


@pytest.fixture
def a_odd():
    document = balanced_schema("a", "b")
    document["rules"] = [{"descriptor": ["p0", "pa"], "state": "q"}]
    return load_schema(document)


STATEFUL = {
    "format": 1,
    "class": "autc",
    "states": ["q", "r"],
    "final": ["q"],
    "horizontal": {
        "states": ["p0", "p1"],
        "initial": "p0",
        "transitions": [
            {"from": "p0", "filter": "q", "to": "p0"},
            {"from": "p0", "filter": "!q & !r", "to": "p1"},
            {"from": "p1", "filter": "*", "to": "p1"},
        ],
    },
    "rules": [{"descriptor": ["p0", "p0"], "state": "q"}, {"descriptor": ["p0", "p1"], "state": "r"}],
}


@pytest.fixture
def stateful():
    """Universal although r is declared: every child is in q, so p1 is never entered"""
    return load_schema(STATEFUL)


def test_balanced_is_confluent(balanced):
    report = require_confluent(balanced)
    assert report.verdict is Confluence.CONFLUENT
    assert str(report) == "confluent"


def test_balanced_membership(balanced):
    assert autc_membership(balanced, leaves("a", "a", "b", "b"))
    assert autc_membership(balanced, LEAF)
    assert not autc_membership(balanced, leaves("a", "a", "b"))
    assert not autc_membership(balanced, leaves("a", "b", "c"))


def test_greedy_run_failure_state(balanced):
    H = balanced.horizontal
    assert greedy_run(H, "p0", annotated([("a", []), ("b", [])])) == "p0"
    assert greedy_run(H, "p0", annotated([("a", []), ("a", [])])) is None
    assert greedy_run(H, "pb", annotated([("a", [])])) == "p0"


def test_union_loses_confluence():
    with pytest.raises(NotConfluentError, match="critical pair at p0"):
        load_fixture("union.autc")
    U = load_fixture("union.autc", trust_confluent=True)
    report = check_confluent(U.horizontal, horizontal_atoms(U))
    assert not report.confluent
    assert report.state == "p0"
    assert set(report.successors) == {"pa", "pa'"}


def test_shared_initial_union(balanced, balanced_ac):
    U = shared_initial_union(balanced, balanced_ac)
    assert U.states == frozenset(["q", "q'"])
    assert set(U.horizontal.hstates) == {"p0", "pa", "pb", "pa'", "pc'"}
    report = check_confluent(U.horizontal, horizontal_atoms(U))
    assert report.state == "p0"
    with pytest.raises(NotConfluentError):
        require_confluent(U)


def test_confluence_needs_an_initial_state(pairs):
    with pytest.raises(PreconditionError):
        require_confluent(pairs)


@pytest.mark.parametrize("seed", range(20))
def test_greedy_run_matches_every_consumption_order(seed):
    H = random_confluent_horizontal(random.Random(seed))
    assert check_confluent(H, atomize(H.filters(), ())).confluent
    for vector in enum_multisets(4, 4):
        M = multiset_of(vector, ["a", "b", "c", "d"])
        outcome = greedy_run(H, H.initial, M)
        assert brute_runs(H, H.initial, M) == {BOTTOM if outcome is None else outcome}


def test_minimal_acceptors(balanced):
    atoms = horizontal_atoms(balanced)
    assert [atom.signs for atom in atoms] == [(True, False), (False, True), (False, False)]
    assert minimal_acceptors(balanced.horizontal, "p0", "p0", atoms) == [(1, 1, 0)]
    assert minimal_acceptors(balanced.horizontal, "p0", "pa", atoms) == [(1, 0, 0)]


def test_evaluation_is_linear_on_flat_trees(universal_autc):
    stats = EvalStats()
    t = DataTree([("x", LEAF)] * 50)
    assert autc_membership(universal_autc, t, stats)
    assert stats.steps == 50
    assert stats.nodes == 51


def test_universality(balanced, universal_autc, a_odd):
    assert autc_universal(universal_autc) == Decision(True)
    assert autc_universal(balanced) == Decision(False, tree_from_json('{"a": {}}'))
    assert autc_universal(a_odd) == Decision(False, LEAF)


def test_declared_but_unreachable_states_keep_universality(stateful):
    assert autc_universal(stateful) == Decision(True)
    labels = tuple(corpus_labels([stateful], ("x",)))
    assert all(accepts(stateful, t) for t in enum_trees(EnumConfig(labels=labels, max_nodes=4)))


def test_universality_budget(balanced):
    assert autc_universal(balanced, budget=1) == Decision(None)


def test_emptiness(balanced, a_odd):
    assert autc_empty(balanced) == Decision(False, LEAF)
    decision = autc_empty(a_odd)
    assert decision.answer is False
    assert decision.witness == tree_from_json('{"a": {}}')


def test_inclusion_witness(balanced, universal_autc):
    assert autc_inclusion(balanced, universal_autc) == Decision(True)
    assert autc_inclusion(universal_autc, balanced) == Decision(False, tree_from_json('{"a": {}}'))


def test_disjointness(balanced, balanced_ac, a_odd):
    assert autc_disjoint(balanced, balanced_ac) == Decision(False, LEAF)
    assert autc_disjoint(balanced, a_odd) == Decision(True)
    assert autc_disjoint(balanced, a_odd, budget=1) == Decision(None)


def test_equivalence(balanced, balanced_ac):
    assert autc_equivalent(balanced, load_fixture("balanced.autc")) == Decision(True)
    decision = autc_equivalent(balanced, balanced_ac)
    assert decision.answer is False
    assert decision.witness == tree_from_json('{"a": {}, "b": {}}')


def sequence_schema(first: str, second: str) -> dict:
    """Document of the AUTC accepting exactly the arity {first, second}, read first then second"""
    return {
        "format": 1,
        "class": "autc",
        "states": ["q"],
        "final": ["q"],
        "horizontal": {
            "states": ["s0", "s1", "s2"],
            "initial": "s0",
            "transitions": [
                {"from": "s0", "filter": f'"{first}"', "to": "s1"},
                {"from": "s1", "filter": f'"{second}"', "to": "s2"},
            ],
        },
        "rules": [{"descriptor": ["s0", "s2"], "state": "q"}],
    }


def test_side_stuck_on_a_prefix_recovers_on_the_whole_arity():
    b_then_a = load_schema(sequence_schema("b", "a"))
    a_then_b = load_schema(sequence_schema("a", "b"))
    assert autc_inclusion(b_then_a, a_then_b) == Decision(True)
    assert autc_equivalent(b_then_a, a_then_b) == Decision(True)
    assert autc_disjoint(b_then_a, a_then_b) == Decision(False, tree_from_json('{"a": {}, "b": {}}'))


def test_rules_read_from_the_initial_state():
    document = balanced_schema("a", "b")
    document["rules"].append({"descriptor": ["pa", "p0"], "state": "q"})
    with pytest.raises(SchemaError, match="initial horizontal state 'p0'"):
        load_schema(document)
    with pytest.raises(SchemaError, match="initial horizontal state 'p0'"):
        load_schema(document, trust_confluent=True)


def test_acceptor_table(balanced):
    atoms = horizontal_atoms(balanced)
    assert acceptor_table(balanced.horizontal, "p0", atoms) == {"p0": [(1, 1, 0)], "pa": [(1, 0, 0)], "pb": [(0, 1, 0)]}
    assert acceptor_table(balanced.horizontal, "pa", atoms) == {"p0": [(0, 1, 0)], "pa": [(1, 1, 0)], "pb": [(0, 2, 0)]}


AGREEMENT_FIXTURES = ["balanced", "balanced_ac", "a_odd", "universal_autc", "stateful"]


@pytest.mark.parametrize("second", AGREEMENT_FIXTURES)
@pytest.mark.parametrize("first", AGREEMENT_FIXTURES)
def test_decisions_agree_with_tree_enumeration(request, first, second):
    A = request.getfixturevalue(first)
    B = request.getfixturevalue(second)
    trees = enum_trees(EnumConfig(labels=tuple(corpus_labels([A, B])), max_nodes=5))
    verdicts = [(accepts(A, t), accepts(B, t)) for t in trees]

    inclusion = autc_inclusion(A, B)
    assert inclusion.answer is (not any(a and not b for a, b in verdicts))
    if inclusion.answer is False:
        assert accepts(A, inclusion.witness)
        assert not accepts(B, inclusion.witness)

    disjoint = autc_disjoint(A, B)
    assert disjoint.answer is (not any(a and b for a, b in verdicts))
    if disjoint.answer is False:
        assert accepts(A, disjoint.witness)
        assert accepts(B, disjoint.witness)
