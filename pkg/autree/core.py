"""
Generic alternating bottom-up automata over data trees: evaluation,
acceptance, arity-constraint descriptors and the ranked-tree encoding
"""
import logging
from collections import Counter
from collections import defaultdict
from dataclasses import dataclass
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from .abstracts import ClassTag
from .abstracts import DescriptorClass
from .abstracts import EvalStats
from .abstracts import descriptor_class_for
from .abstracts import register_descriptor_class
from .exceptions import PreconditionError
from .exceptions import ReservedSymbolError
from .filters import StateId
from .filters import StateSet
from .tree import DataTree
from .utils import bipartite_matching

logger = logging.getLogger(__name__)


class Rule(NamedTuple):
    descriptor: Any
    target: StateId


class Decision(NamedTuple):
    """Answer of a decision procedure: True, False or None when undecided,
    with a witness tree when the answer has one
    """

    answer: Optional[bool]
    witness: Optional[DataTree] = None


class Aut:
    """Vertical automaton: states, final states and descriptor rules, tagged by
    descriptor class. `horizontal` and `alphabet` carry the class-shared
    machinery of AUTA/AUTC and AUTO automata.
    """

    def __init__(
        self,
        tag: ClassTag,
        states: Iterable[StateId],
        finals: Iterable[StateId],
        rules: Iterable[Tuple[Any, StateId]],
        horizontal: Any = None,
        alphabet: Any = None,
    ):
        self.tag = tag
        self.states: StateSet = frozenset(states)
        self.finals: StateSet = frozenset(finals)
        self.rules: Tuple[Rule, ...] = tuple(Rule(h, q) for h, q in rules)
        self.horizontal = horizontal
        self.alphabet = alphabet
        self.descriptors: DescriptorClass = descriptor_class_for(tag)(self)

        if not self.finals <= self.states:
            raise PreconditionError(f"final states {sorted(self.finals - self.states)} are not states")
        for rule in self.rules:
            if rule.target not in self.states:
                raise PreconditionError(f"rule target {rule.target!r} is not a state")
            extra = self.descriptors.support(rule.descriptor) - self.states
            if extra:
                raise PreconditionError(f"descriptor {rule.descriptor} tests unknown states {sorted(extra)}")

    def __repr__(self) -> str:
        return f"Aut({self.tag.value}, states={len(self.states)}, rules={len(self.rules)})"

    def size(self) -> int:
        """States plus the summed size of all descriptors"""
        return len(self.states) + sum(self.descriptors.size(rule.descriptor) for rule in self.rules)

    def rules_to(self, q: StateId) -> List[Any]:
        return [rule.descriptor for rule in self.rules if rule.target == q]

    def require(self, *tags: ClassTag) -> None:
        if self.tag not in tags:
            wanted = "/".join(tag.value for tag in tags)
            raise PreconditionError(f"operation needs a {wanted} automaton, got {self.tag.value}")


def annotate(A: Aut, t: DataTree, stats: EvalStats) -> Counter:
    """Annotated arity of the root of `t`: labels paired with child evaluations"""
    return Counter((label, _evaluate(A, child, stats)) for label, child in t.edges)


def _evaluate(A: Aut, t: DataTree, stats: EvalStats) -> StateSet:
    stats.nodes += 1
    return A.descriptors.targets(annotate(A, t, stats), stats)


def evaluate(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> StateSet:
    """States reached at the root of `t`, bottom-up"""
    return _evaluate(A, t, stats if stats is not None else EvalStats())


def accepts(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> bool:
    return bool(evaluate(A, t, stats) & A.finals)


def vertical_determinism_counterexample(A: Aut, corpus: Iterable[DataTree]) -> Optional[DataTree]:
    """First corpus tree evaluating to more than one state"""
    for t in corpus:
        if len(evaluate(A, t)) > 1:
            return t
    return None


@dataclass(frozen=True)
class Arity:
    """Arity constraint <d1:q1, ..., dn:qn>"""

    entries: Tuple[Tuple[str, StateId], ...] = ()

    def __str__(self) -> str:
        return "<" + ", ".join(f"{label!r}:{q}" for label, q in self.entries) + ">"


@dataclass(frozen=True)
class ArityAnd:
    left: "ArityDescriptor"
    right: "ArityDescriptor"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class ArityNot:
    inner: "ArityDescriptor"

    def __str__(self) -> str:
        return f"!{self.inner}"


ArityDescriptor = Union[Arity, ArityAnd, ArityNot]


def arity_or(left: ArityDescriptor, right: ArityDescriptor) -> ArityDescriptor:
    return ArityNot(ArityAnd(ArityNot(left), ArityNot(right)))


def arity_descriptor_sat(h: ArityDescriptor, M: Counter) -> bool:
    """Per-label exclusion: the entries consume every element carrying their labels"""
    if isinstance(h, ArityAnd):
        return arity_descriptor_sat(h.left, M) and arity_descriptor_sat(h.right, M)
    if isinstance(h, ArityNot):
        return not arity_descriptor_sat(h.inner, M)

    wanted: Dict[str, List[StateId]] = defaultdict(list)
    for label, q in h.entries:
        wanted[label].append(q)
    for label, states in wanted.items():
        elements = [Q for (d, Q), mult in M.items() if d == label for _ in range(mult)]
        if len(elements) != len(states):
            return False
        adjacency = {i: [j for j, Q in enumerate(elements) if q in Q] for i, q in enumerate(states)}
        if bipartite_matching(range(len(states)), adjacency, len(elements)) != len(states):
            return False
    return True


def arity_support(h: ArityDescriptor) -> StateSet:
    if isinstance(h, ArityAnd):
        return arity_support(h.left) | arity_support(h.right)
    if isinstance(h, ArityNot):
        return arity_support(h.inner)
    return frozenset(q for _, q in h.entries)


@register_descriptor_class(ClassTag.ARITY)
class ArityClass(DescriptorClass):
    def satisfies(self, descriptor: ArityDescriptor, M: Counter, stats: EvalStats) -> bool:
        return arity_descriptor_sat(descriptor, M)

    def support(self, descriptor: ArityDescriptor) -> StateSet:
        return arity_support(descriptor)

    def size(self, descriptor: ArityDescriptor) -> int:
        if isinstance(descriptor, ArityAnd):
            return 1 + self.size(descriptor.left) + self.size(descriptor.right)
        if isinstance(descriptor, ArityNot):
            return 1 + self.size(descriptor.inner)
        return 1 + len(descriptor.entries)


@dataclass(frozen=True)
class Term:
    """Ranked, ordered term f(t1, ..., tn)"""

    symbol: str
    children: Tuple["Term", ...] = ()


@dataclass(frozen=True)
class RankedPattern:
    """f(q1, ..., qn): root symbol f, i-th child in state qi"""

    symbol: str
    states: Tuple[StateId, ...] = ()


@dataclass(frozen=True)
class RankedAnd:
    left: "RankedGuard"
    right: "RankedGuard"


@dataclass(frozen=True)
class RankedNot:
    inner: "RankedGuard"


RankedGuard = Union[RankedPattern, RankedAnd, RankedNot]


@dataclass(frozen=True)
class RankedAutomaton:
    states: FrozenSet[StateId]
    finals: FrozenSet[StateId]
    rules: Tuple[Tuple[RankedGuard, StateId], ...]


def _check_symbol(symbol: str) -> str:
    if symbol and all("0" <= ch <= "9" for ch in symbol):
        raise ReservedSymbolError(symbol)
    return symbol


def encode_ranked_tree(term: Term) -> DataTree:
    """f(t1..tn) becomes <f:<>, "1":[t1], ..., "n":[tn]>"""
    edges = [(_check_symbol(term.symbol), DataTree())]
    edges.extend((str(i), encode_ranked_tree(child)) for i, child in enumerate(term.children, start=1))
    return DataTree(edges)


def fresh_state(taken: Iterable[StateId], base: str = "q_leaf") -> StateId:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def _encode_guard(psi: RankedGuard, leaf: StateId) -> ArityDescriptor:
    if isinstance(psi, RankedAnd):
        return ArityAnd(_encode_guard(psi.left, leaf), _encode_guard(psi.right, leaf))
    if isinstance(psi, RankedNot):
        return ArityNot(_encode_guard(psi.inner, leaf))
    entries = [(_check_symbol(psi.symbol), leaf)]
    entries.extend((str(i), q) for i, q in enumerate(psi.states, start=1))
    return Arity(tuple(entries))


def encode_ranked(B: RankedAutomaton) -> Aut:
    """Arity-constraint automaton accepting the encodings of L(B)"""
    leaf = fresh_state(B.states)
    rules: List[Tuple[ArityDescriptor, StateId]] = [(Arity(), leaf)]
    rules.extend((_encode_guard(psi, leaf), q) for psi, q in B.rules)
    return Aut(ClassTag.ARITY, B.states | {leaf}, B.finals, rules)


def ranked_evaluate(B: RankedAutomaton, term: Term) -> StateSet:
    """States of B reached on `term`, by direct recursion"""
    child_states: Sequence[StateSet] = [ranked_evaluate(B, child) for child in term.children]

    def holds(psi: RankedGuard) -> bool:
        if isinstance(psi, RankedAnd):
            return holds(psi.left) and holds(psi.right)
        if isinstance(psi, RankedNot):
            return not holds(psi.inner)
        return (
            psi.symbol == term.symbol
            and len(psi.states) == len(child_states)
            and all(q in Q for q, Q in zip(psi.states, child_states))
        )

    return frozenset(q for psi, q in B.rules if holds(psi))
