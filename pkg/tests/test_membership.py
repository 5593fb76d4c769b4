import math

import pytest

from autree.abstracts import EvalStats
from autree.autc import autc_membership
from autree.core import accepts
from autree.oracle import EnumConfig
from autree.oracle import brute_membership
from autree.oracle import corpus_labels
from autree.oracle import enum_labels
from autree.oracle import enum_trees
from autree.ordered import auto_membership
from autree.tree import LEAF
from autree.tree import DataTree

SHORT_WORDS = tuple(enum_labels(EnumConfig(symbols=("a", "b"), max_word_length=2)))


@pytest.mark.parametrize(
    "name,labels",
    [
        ("latex", ()),
        ("balanced", SHORT_WORDS),
        ("ab_auto", SHORT_WORDS),
        ("pairs", SHORT_WORDS),
        ("flat", SHORT_WORDS),
    ],
)
def test_membership_matches_brute_force(request, name, labels):
    A = request.getfixturevalue(name)
    cfg = EnumConfig(labels=tuple(corpus_labels([A], labels)), max_nodes=5, budget=10**6)
    for t in enum_trees(cfg):
        assert accepts(A, t) == brute_membership(A, t), t


def growth_exponent(run, small=10, large=10**4):
    """Slope of log(steps) against log(arity size) between two flat trees"""

    def steps(n):
        stats = EvalStats()
        run(DataTree([("a", LEAF)] * n + [("b", LEAF)]), stats)
        return stats.steps

    return math.log(steps(large) / steps(small)) / math.log(large / small)


def test_confluent_membership_is_linear(universal_autc):
    assert 0.9 <= growth_exponent(lambda t, stats: autc_membership(universal_autc, t, stats)) <= 1.3


def test_ordered_membership_is_linear(ab_auto):
    assert 0.9 <= growth_exponent(lambda t, stats: auto_membership(ab_auto, t, stats)) <= 1.3
