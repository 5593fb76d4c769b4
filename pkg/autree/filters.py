"""Filters over (data value, state set) pairs and their atomization into a
finite alphabet of pairwise disjoint atoms
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from functools import lru_cache
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from .config import setting
from .exceptions import PreconditionError
from .patterns import EMPTY
from .patterns import UNIVERSAL
from .patterns import AnyString
from .patterns import Named
from .patterns import PatternAcceptor
from .patterns import Regex
from .patterns import compile_pattern
from .patterns import pattern_boolean
from .patterns import pattern_empty
from .patterns import shortest_word

logger = logging.getLogger(__name__)

StateId = str
StateSet = FrozenSet[StateId]

NO_STATES: StateSet = frozenset()


@dataclass(frozen=True)
class PatternTest:
    regex: Regex
    acceptor: PatternAcceptor = field(compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, regex: Regex, guard: Optional[int] = None) -> "PatternTest":
        return cls(regex, compile_pattern(regex, guard))

    def __str__(self) -> str:
        return f"pattern({self.regex})"


@dataclass(frozen=True)
class StateTest:
    state: StateId

    def __str__(self) -> str:
        return self.state


@dataclass(frozen=True)
class And:
    left: "Filter"
    right: "Filter"

    def __str__(self) -> str:
        return f"{_operand(self.left)} & {_operand(self.right)}"


@dataclass(frozen=True)
class Not:
    inner: "Filter"

    def __str__(self) -> str:
        if isinstance(self.inner, (PatternTest, StateTest, Not)):
            return f"!{self.inner}"
        return f"!({self.inner})"


Filter = Union[PatternTest, StateTest, And, Not]


def _operand(f: Filter) -> str:
    return str(f) if not isinstance(f, Not) or not isinstance(f.inner, And) else f"({f})"


TRUE = PatternTest(AnyString(), UNIVERSAL)
FALSE = Not(TRUE)


def conj(*fs: Filter) -> Filter:
    if not fs:
        return TRUE
    result = fs[0]
    for f in fs[1:]:
        result = And(result, f)
    return result


def disj(*fs: Filter) -> Filter:
    """Disjunction, expressed with conjunction and negation"""
    if not fs:
        return FALSE
    if len(fs) == 1:
        return fs[0]
    return Not(conj(*(Not(f) for f in fs)))


class FilterWitness(NamedTuple):
    value: str
    states: StateSet


def filter_eval(f: Filter, d: str, Q: Iterable[StateId]) -> bool:
    if isinstance(f, PatternTest):
        return f.acceptor.accepts(d)
    if isinstance(f, StateTest):
        return f.state in Q
    if isinstance(f, And):
        return filter_eval(f.left, d, Q) and filter_eval(f.right, d, Q)
    if isinstance(f, Not):
        return not filter_eval(f.inner, d, Q)
    raise TypeError(f"not a filter: {f!r}")


def filter_support(f: Filter) -> StateSet:
    """State ids occurring in `f`"""
    if isinstance(f, StateTest):
        return frozenset([f.state])
    if isinstance(f, And):
        return filter_support(f.left) | filter_support(f.right)
    if isinstance(f, Not):
        return filter_support(f.inner)
    return NO_STATES


def pattern_parts(f: Filter) -> List[PatternTest]:
    """Pattern tests occurring in `f`, first occurrence order"""
    found: List[PatternTest] = []

    def walk(g: Filter) -> None:
        if isinstance(g, PatternTest):
            if g not in found:
                found.append(g)
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Not):
            walk(g.inner)

    walk(f)
    return found


@lru_cache(maxsize=8192)
def _language(f: Filter, Q: StateSet, guard: int) -> PatternAcceptor:
    if isinstance(f, PatternTest):
        return f.acceptor
    if isinstance(f, StateTest):
        return UNIVERSAL if f.state in Q else EMPTY
    if isinstance(f, And):
        left = _language(f.left, Q, guard)
        if pattern_empty(left):
            return EMPTY
        return pattern_boolean("and", left, _language(f.right, Q, guard), guard=guard)
    if isinstance(f, Not):
        return pattern_boolean("not", _language(f.inner, Q, guard), guard=guard)
    raise TypeError(f"not a filter: {f!r}")


def filter_language(f: Filter, Q: Iterable[StateId], guard: Optional[int] = None) -> PatternAcceptor:
    """Acceptor of the data values d with (d, Q) satisfying `f`"""
    return _language(f, frozenset(Q), setting("pattern_state_guard", guard))


def filter_sat_under(f: Filter, Q: Iterable[StateId], guard: Optional[int] = None) -> Optional[str]:
    """Shortest value d with (d, Q) satisfying `f`, or None"""
    return shortest_word(filter_language(f, Q, guard))


def singleton_choices(states: Iterable[StateId]) -> List[StateSet]:
    """The annotation sets of size at most one: the empty set, then each state"""
    return [NO_STATES] + [frozenset([q]) for q in sorted(states)]


def filter_singleton_sat(f: Filter, states: Iterable[StateId], guard: Optional[int] = None) -> Optional[FilterWitness]:
    """A pair (d, Q) with |Q| <= 1 satisfying `f`, or None when unsatisfiable"""
    states = frozenset(states)
    if not filter_support(f) <= states:
        raise PreconditionError(f"filter {f} mentions states outside {sorted(states)}")
    for Q in singleton_choices(states):
        value = filter_sat_under(f, Q, guard)
        if value is not None:
            return FilterWitness(value, Q)
    return None


class Atom:
    """One satisfiable sign assignment over a list of filters"""

    def __init__(
        self,
        index: int,
        signs: Tuple[bool, ...],
        filters: Tuple[Filter, ...],
        languages: Dict[StateSet, PatternAcceptor],
        witness: FilterWitness,
    ):
        self.index = index
        self.signs = signs
        self.filters = filters
        self.languages = languages
        self.witness = witness

    def __repr__(self) -> str:
        return f"Atom({self.index}, {self})"

    def __str__(self) -> str:
        return str(self.as_filter())

    def holds(self, d: str, Q: Iterable[StateId]) -> bool:
        Q = frozenset(Q)
        return all(filter_eval(f, d, Q) == sign for f, sign in zip(self.filters, self.signs))

    def language(self, Q: StateSet) -> PatternAcceptor:
        return self.languages.get(Q, EMPTY)

    def value_under(self, Q: StateSet) -> Optional[str]:
        language = self.languages.get(Q)
        return None if language is None else shortest_word(language)

    def as_filter(self) -> Filter:
        return conj(*(f if sign else Not(f) for f, sign in zip(self.filters, self.signs)))


def atomize(
    fs: Sequence[Filter],
    states: Iterable[StateId],
    choices: Optional[Sequence[StateSet]] = None,
    guard: Optional[int] = None,
) -> List[Atom]:
    """Refine `fs` into pairwise disjoint, jointly exhaustive atoms

    Only annotation sets from `choices` (default: empty set and singletons over
    `states`) are considered; atoms whose language is empty are dropped.
    """
    states = frozenset(states)
    fs = tuple(fs)
    for f in fs:
        if choices is None and not filter_support(f) <= states:
            raise PreconditionError(f"filter {f} mentions states outside {sorted(states)}")
    choices = list(choices) if choices is not None else singleton_choices(states)

    cells: List[Tuple[Tuple[bool, ...], Dict[StateSet, PatternAcceptor]]] = [((), {Q: UNIVERSAL for Q in choices})]
    for f in fs:
        refined = []
        for signs, languages in cells:
            positive: Dict[StateSet, PatternAcceptor] = {}
            negative: Dict[StateSet, PatternAcceptor] = {}
            for Q, language in languages.items():
                accepted = filter_language(f, Q, guard)
                inside = pattern_boolean("and", language, accepted, guard=guard)
                if not pattern_empty(inside):
                    positive[Q] = inside
                outside = pattern_boolean("and", language, pattern_boolean("not", accepted, guard=guard), guard=guard)
                if not pattern_empty(outside):
                    negative[Q] = outside
            if positive:
                refined.append((signs + (True,), positive))
            if negative:
                refined.append((signs + (False,), negative))
        cells = refined

    cells.sort(key=lambda cell: tuple(0 if sign else 1 for sign in cell[0]))
    atoms = []
    for index, (signs, languages) in enumerate(cells):
        Q = next(Q for Q in choices if Q in languages)
        atoms.append(Atom(index, signs, fs, languages, FilterWitness(shortest_word(languages[Q]), Q)))
    logger.debug("atomized %d filters into %d atoms over %d choices", len(fs), len(atoms), len(choices))
    return atoms


class AtomTable:
    """Classifies (d, Q) pairs into the atoms of one atomization"""

    def __init__(self, atoms: Sequence[Atom]):
        self.atoms = list(atoms)
        self.filters: Tuple[Filter, ...] = self.atoms[0].filters if self.atoms else ()
        self._by_signs = {atom.signs: atom for atom in self.atoms}

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __getitem__(self, index: int) -> Atom:
        return self.atoms[index]

    def classify(self, d: str, Q: Iterable[StateId]) -> Optional[Atom]:
        Q = frozenset(Q)
        signs = tuple(filter_eval(f, d, Q) for f in self.filters)
        return self._by_signs.get(signs)

    def covering(self, f: Filter) -> List[int]:
        """Indices of the atoms on which `f` holds"""
        return [atom.index for atom in self.atoms if filter_eval(f, atom.witness.value, atom.witness.states)]


def map_states(f: Filter, fn) -> Filter:
    """Replace every state test q by the filter fn(q)"""
    if isinstance(f, StateTest):
        return fn(f.state)
    if isinstance(f, And):
        return And(map_states(f.left, fn), map_states(f.right, fn))
    if isinstance(f, Not):
        return Not(map_states(f.inner, fn))
    return f
