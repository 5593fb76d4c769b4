from collections import Counter

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from autree.exceptions import TreeFormatError
from autree.tree import LEAF
from autree.tree import DataTree
from autree.tree import arity_of
from autree.tree import tree_equal
from autree.tree import tree_from_json
from autree.tree import tree_to_json


def test_project_document(project):
    assert arity_of(project) == Counter({"file.tex": 1, "dir": 1})
    main = dict(project.edges)["file.tex"]
    assert arity_of(main) == Counter({"\\documentclass{article}": 1})
    assert dict(main.edges)["\\documentclass{article}"].is_leaf()
    assert project.size() == 8
    assert project.depth() == 4


def test_array_members_merge_into_one_multiset():
    t = tree_from_json('[{"a": {}}, {"a": {}}, {"b": {}}]')
    assert arity_of(t) == Counter({"a": 2, "b": 1})


def test_duplicate_object_keys_are_repeated_edges():
    t = tree_from_json('{"a": {}, "a": {"x": {}}}')
    assert arity_of(t) == Counter({"a": 2})


def test_string_is_shorthand_for_single_edge():
    assert tree_equal(tree_from_json('"a"'), DataTree.of(("a", LEAF)))
    assert tree_equal(tree_from_json('{"d": "a"}'), DataTree.of(("d", DataTree.of(("a", LEAF)))))


def test_empty_object_is_a_leaf():
    assert tree_from_json("{}") == LEAF
    assert tree_from_json(b"[]") == LEAF


def test_edge_order_does_not_matter():
    assert tree_equal(tree_from_json('{"a": {}, "b": {"c": {}}}'), tree_from_json('{"b": {"c": {}}, "a": {}}'))
    assert not tree_equal(tree_from_json('{"a": {}}'), tree_from_json('[{"a": {}}, {"a": {}}]'))


@pytest.mark.parametrize(
    "document,kind",
    [
        ('{"a": 3}', "number"),
        ('{"a": true}', "boolean"),
        ("null", "null"),
        ('[{"a": {}, "b": {}}]', "array member"),
        ('["a"]', "array member"),
    ],
)
def test_unsupported_values(document, kind):
    with pytest.raises(TreeFormatError) as exc:
        tree_from_json(document)
    assert exc.value.kind == kind


def test_malformed_json():
    with pytest.raises(TreeFormatError, match="malformed JSON"):
        tree_from_json('{"a": ')
    with pytest.raises(TreeFormatError, match="UTF-8"):
        tree_from_json(b"\xff\xfe")


def test_canonical_serialization():
    t = tree_from_json('{"b": {}, "a": {"y": {}, "x": {}}}')
    assert tree_to_json(t) == '{"a":{"x":{},"y":{}},"b":{}}'
    t = tree_from_json('[{"a": {}}, {"a": {}}, {"a": {}}]')
    assert tree_to_json(t) == '[{"a":{}},{"a":{}},{"a":{}}]'
    assert tree_to_json(tree_from_json('{"ü": {}}')) == '{"ü":{}}'


trees = st.recursive(
    st.just(LEAF),
    lambda children: st.lists(st.tuples(st.sampled_from(["", "a", "b", "ab"]), children), max_size=4).map(DataTree),
    max_leaves=12,
)


@settings(max_examples=100)
@given(trees)
def test_serialization_is_canonical(t):
    text = tree_to_json(t)
    assert tree_equal(tree_from_json(text), t)
    assert tree_to_json(DataTree(reversed(t.edges))) == text
