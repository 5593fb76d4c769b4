"""Unordered edge-labelled data trees as nested multisets, with JSON ingestion
and canonical serialization
"""
import json
import logging
from collections import Counter
from typing import Any
from typing import Iterable
from typing import List
from typing import Tuple
from typing import Union

from .exceptions import TreeFormatError

logger = logging.getLogger(__name__)

DataValue = str
Arity = Counter


class DataTree:
    """A finite multiset of (data value, subtree) edges

    Edges are stored sorted by (label, canonical child key), so two trees are
    equal exactly when their nested multisets are.
    """

    __slots__ = ("edges", "key", "_hash", "_size")

    edges: Tuple[Tuple[DataValue, "DataTree"], ...]
    key: Tuple

    def __init__(self, edges: Iterable[Tuple[DataValue, "DataTree"]] = ()):
        ordered = sorted(edges, key=lambda edge: (edge[0], edge[1].key))
        self.edges = tuple(ordered)
        self.key = tuple((label, child.key) for label, child in self.edges)
        self._hash = hash(self.key)
        self._size = 1 + sum(child._size for _, child in self.edges)

    @classmethod
    def of(cls, *edges: Tuple[DataValue, "DataTree"]) -> "DataTree":
        return cls(edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataTree):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "DataTree") -> bool:
        return (self.size(), self.key) < (other.size(), other.key)

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __repr__(self) -> str:
        return f"DataTree({tree_to_json(self)})"

    def is_leaf(self) -> bool:
        return not self.edges

    def size(self) -> int:
        """Number of nodes"""
        return self._size

    def depth(self) -> int:
        return 1 + max((child.depth() for _, child in self.edges), default=0)

    def add(self, label: DataValue, child: "DataTree") -> "DataTree":
        return DataTree(self.edges + ((label, child),))


LEAF = DataTree()


def tree_equal(a: DataTree, b: DataTree) -> bool:
    return a.key == b.key


def arity_of(t: DataTree) -> Arity:
    """Multiset of root edge labels"""
    return Counter(label for label, _ in t.edges)


class _Pairs(list):
    """Key/value pairs of one JSON object, duplicates kept"""


def _value_kind(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    return type(value).__name__


def _edges_of(value: Any) -> List[Tuple[DataValue, DataTree]]:
    if isinstance(value, _Pairs):
        return [(key, _tree_of(item)) for key, item in value]
    if isinstance(value, list):
        edges = []
        for member in value:
            if not isinstance(member, _Pairs) or len(member) != 1:
                raise TreeFormatError("array members must be single-key objects", "array member")
            edges.extend(_edges_of(member))
        return edges
    if isinstance(value, str):
        return [(value, LEAF)]
    kind = _value_kind(value)
    raise TreeFormatError(f"{kind} values cannot describe a tree", kind)


def _tree_of(value: Any) -> DataTree:
    return DataTree(_edges_of(value))


def tree_from_json(text: Union[bytes, str]) -> DataTree:
    """Parse a JSON document into a data tree

    Objects map to edge multisets, a string s stands for the tree {s: {}},
    and an array of single-key objects is the multiset union of its members.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TreeFormatError(f"document is not UTF-8 ({exc})") from exc
    try:
        document = json.loads(text, object_pairs_hook=_Pairs)
    except json.JSONDecodeError as exc:
        raise TreeFormatError(f"malformed JSON ({exc})") from exc
    return _tree_of(document)


def tree_to_obj(t: DataTree) -> Union[dict, list]:
    labels = [label for label, _ in t.edges]
    if len(set(labels)) == len(labels):
        return {label: tree_to_obj(child) for label, child in t.edges}
    return [{label: tree_to_obj(child)} for label, child in t.edges]


def tree_to_json(t: DataTree) -> str:
    """Canonical serialization: sorted edges, array encoding for duplicate labels"""
    return json.dumps(tree_to_obj(t), ensure_ascii=False, separators=(",", ":"))
