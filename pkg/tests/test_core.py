from collections import Counter

import pytest

from autree.abstracts import ClassTag
from autree.abstracts import EvalStats
from autree.core import Arity
from autree.core import ArityAnd
from autree.core import ArityNot
from autree.core import Aut
from autree.core import Term
from autree.core import accepts
from autree.core import arity_descriptor_sat
from autree.core import arity_or
from autree.core import encode_ranked
from autree.core import encode_ranked_tree
from autree.core import evaluate
from autree.core import fresh_state
from autree.core import ranked_evaluate
from autree.core import vertical_determinism_counterexample
from autree.exceptions import PreconditionError
from autree.exceptions import ReservedSymbolError
from autree.oracle import EnumConfig
from autree.oracle import brute_membership
from autree.oracle import corpus_labels
from autree.oracle import enum_trees
from autree.presburger import count
from autree.presburger import ge
from autree.filters import StateTest
from autree.tree import LEAF
from autree.tree import DataTree
from autree.tree import tree_from_json

PQ = frozenset(["p", "q"])
ONLY_Q = frozenset(["q"])


def test_arity_matches_states_per_label():
    h = Arity((("a", "q"), ("a", "p")))
    assert arity_descriptor_sat(h, Counter({("a", PQ): 1, ("a", ONLY_Q): 1}))
    assert not arity_descriptor_sat(h, Counter({("a", ONLY_Q): 2}))
    assert not arity_descriptor_sat(h, Counter({("a", PQ): 3}))


def test_arity_leaves_other_labels_free():
    h = Arity((("a", "q"),))
    assert arity_descriptor_sat(h, Counter({("a", ONLY_Q): 1, ("b", frozenset()): 2}))
    assert arity_descriptor_sat(Arity(), Counter({("b", ONLY_Q): 1}))


def test_arity_boolean_combinations():
    a = Arity((("a", "q"),))
    b = Arity((("b", "q"),))
    M = Counter({("a", ONLY_Q): 1})
    assert arity_descriptor_sat(arity_or(a, b), M)
    assert not arity_descriptor_sat(ArityAnd(a, b), M)
    assert arity_descriptor_sat(ArityNot(b), M)


def test_aut_rejects_undeclared_states():
    with pytest.raises(PreconditionError, match="final states"):
        Aut(ClassTag.AUTP, ["q"], ["r"], [])
    with pytest.raises(PreconditionError, match="rule target"):
        Aut(ClassTag.AUTP, ["q"], [], [(ge(count(StateTest("q")), 0), "r")])
    with pytest.raises(PreconditionError, match="unknown states"):
        Aut(ClassTag.AUTP, ["q"], [], [(ge(count(StateTest("r")), 0), "q")])


def test_require_names_both_classes(latex):
    with pytest.raises(PreconditionError, match="needs a auto automaton, got autp"):
        latex.require(ClassTag.AUTO)


def test_latex_accepts_project_tree(latex, project):
    assert evaluate(latex, project) == frozenset(["ok"])
    main = dict(project.edges)["file.tex"]
    assert evaluate(latex, main) == frozenset(["main", "file"])
    assert evaluate(latex, dict(project.edges)["dir"]) == frozenset()


@pytest.mark.parametrize(
    "document",
    [
        '{"file.tex": {"\\\\documentclass{article}": {}}, "x.aux": {}}',
        '{"file.tex": {"\\\\documentclass{article}": {}}, "b.tex": {"\\\\documentclass x": {}}}',
        '{"file.tex": {"\\\\documentclass{article}": {}, "more": {}}}',
    ],
)
def test_latex_rejects_mutants(latex, document):
    assert not accepts(latex, tree_from_json(document))


def test_evaluation_counts_nodes(latex, project):
    stats = EvalStats()
    accepts(latex, project, stats)
    assert stats.nodes == project.size()


def test_vertical_determinism_counterexample(latex):
    corpus = [LEAF, tree_from_json('{"\\\\documentclass": {}}')]
    assert vertical_determinism_counterexample(latex, corpus) == corpus[1]
    assert vertical_determinism_counterexample(latex, corpus[:1]) is None


def test_ranked_tree_encoding():
    term = Term("and", (Term("true"), Term("false")))
    expected = DataTree.of(
        ("and", LEAF),
        ("1", DataTree.of(("true", LEAF))),
        ("2", DataTree.of(("false", LEAF))),
    )
    assert encode_ranked_tree(term) == expected


def test_digit_symbols_are_reserved():
    with pytest.raises(ReservedSymbolError):
        encode_ranked_tree(Term("f", (Term("12"),)))


def test_fresh_state():
    assert fresh_state(["T", "F"]) == "q_leaf"
    assert fresh_state(["q_leaf", "q_leaf'"]) == "q_leaf''"


def boolean_terms(depth):
    if depth == 0:
        return [Term("true"), Term("false")]
    smaller = boolean_terms(depth - 1)
    terms = list(smaller)
    terms.extend(Term("not", (t,)) for t in smaller)
    terms.extend(Term(op, (s, t)) for op in ("and", "or") for s in smaller[:4] for t in smaller[:4])
    return terms


def test_encoding_preserves_ranked_semantics(boolean_validity):
    encoded = encode_ranked(boolean_validity)
    assert encoded.tag is ClassTag.ARITY
    for term in boolean_terms(2):
        states = evaluate(encoded, encode_ranked_tree(term)) - {"q_leaf"}
        assert states == ranked_evaluate(boolean_validity, term)
        assert accepts(encoded, encode_ranked_tree(term)) == ("T" in ranked_evaluate(boolean_validity, term))


def test_encoded_automaton_against_brute_force(boolean_validity):
    encoded = encode_ranked(boolean_validity)
    labels = tuple(corpus_labels([encoded]))
    for t in enum_trees(EnumConfig(labels=labels, max_nodes=4)):
        assert accepts(encoded, t) == brute_membership(encoded, t)
