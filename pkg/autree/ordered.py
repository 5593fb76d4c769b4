"""Ordered descriptors: DFAs over an alphabet of atoms, run on the arity
sorted by a fixed atom order

Holds the DFA algebra, ordered membership, the counting-constraint compiler,
reordering to another atom order, and the decision procedures.
"""
import logging
from collections import Counter
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from .abstracts import ClassTag
from .abstracts import DescriptorClass
from .abstracts import EvalStats
from .abstracts import register_descriptor_class
from .config import setting
from .core import Aut
from .core import Decision
from .core import accepts
from .exceptions import PreconditionError
from .exceptions import ResourceGuardExceeded
from .filters import NO_STATES
from .filters import Atom
from .filters import AtomTable
from .filters import Filter
from .filters import StateSet
from .filters import StateTest
from .filters import atomize
from .filters import filter_eval
from .filters import filter_support
from .filters import map_states
from .filters import singleton_choices
from .presburger import Both
from .presburger import Congruent
from .presburger import Le
from .presburger import Negation
from .presburger import PresburgerFormula
from .presburger import linear_form
from .tree import DataTree

logger = logging.getLogger(__name__)

Letter = int
Word = List[Letter]


@dataclass(frozen=True)
class OrderedDfa:
    """Complete DFA over the letters 0..letters-1"""

    letters: int
    delta: Tuple[Tuple[int, ...], ...]
    initial: int
    finals: FrozenSet[int]

    def __post_init__(self):
        for row in self.delta:
            if len(row) != self.letters or any(not 0 <= s < len(self.delta) for s in row):
                raise PreconditionError("DFA transition table is not total")
        if not 0 <= self.initial < len(self.delta):
            raise PreconditionError("DFA initial state out of range")

    def __str__(self) -> str:
        return f"OrderedDfa(states={self.states}, letters={self.letters}, finals={sorted(self.finals)})"

    @property
    def states(self) -> int:
        return len(self.delta)

    def run(self, word: Iterable[Letter]) -> int:
        s = self.initial
        for a in word:
            s = self.delta[s][a]
        return s

    def accepts(self, word: Iterable[Letter]) -> bool:
        return self.run(word) in self.finals


def dfa_from_edges(
    letters: int,
    states: int,
    initial: int,
    finals: Iterable[int],
    edges: Mapping[Tuple[int, Letter], int],
) -> OrderedDfa:
    """Complete a partial transition table with a rejecting sink"""
    sink = states
    needs_sink = any((s, a) not in edges for s in range(states) for a in range(letters))
    delta = [tuple(edges.get((s, a), sink) for a in range(letters)) for s in range(states)]
    if needs_sink:
        delta.append(tuple([sink] * letters))
    return OrderedDfa(letters, tuple(delta), initial, frozenset(finals))


def universal_dfa(letters: int) -> OrderedDfa:
    return OrderedDfa(letters, ((0,) * letters,), 0, frozenset([0]))


def empty_dfa(letters: int) -> OrderedDfa:
    return OrderedDfa(letters, ((0,) * letters,), 0, frozenset())


def _positions(letters: int, order: Optional[Sequence[Letter]]) -> List[int]:
    order = list(order) if order is not None else list(range(letters))
    position = [0] * letters
    for i, a in enumerate(order):
        position[a] = i
    return position


def chain_dfa(letters: int, order: Optional[Sequence[Letter]] = None) -> OrderedDfa:
    """Acceptor of the words sorted by `order` (default: letter index order)"""
    position = _positions(letters, order)
    sink = max(letters, 1)
    delta = []
    for level in range(sink):
        delta.append(tuple(position[a] if position[a] >= level else sink for a in range(letters)))
    delta.append(tuple([sink] * letters))
    return OrderedDfa(letters, tuple(delta), 0, frozenset(range(sink)))


def dfa_product(x: OrderedDfa, y: OrderedDfa, op: str) -> OrderedDfa:
    """Reachable product for op in {"and", "or"}"""
    if x.letters != y.letters:
        raise PreconditionError("DFA product over different alphabets")
    combine: Callable[[bool, bool], bool] = (lambda a, b: a and b) if op == "and" else (lambda a, b: a or b)
    start = (x.initial, y.initial)
    index = {start: 0}
    pairs = [start]
    delta: List[Tuple[int, ...]] = []
    i = 0
    while i < len(pairs):
        s, t = pairs[i]
        row = []
        for a in range(x.letters):
            nxt = (x.delta[s][a], y.delta[t][a])
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
        i += 1
    finals = frozenset(k for k, (s, t) in enumerate(pairs) if combine(s in x.finals, t in y.finals))
    return OrderedDfa(x.letters, tuple(delta), 0, finals)


def dfa_complement(x: OrderedDfa) -> OrderedDfa:
    return OrderedDfa(x.letters, x.delta, x.initial, frozenset(range(x.states)) - x.finals)


def dfa_relabel(x: OrderedDfa, letter_map: Sequence[Optional[Letter]]) -> OrderedDfa:
    """DFA over len(letter_map) letters reading letter j as x's letter_map[j]; None rejects"""
    sink = x.states
    delta = [tuple(sink if a is None else row[a] for a in letter_map) for row in x.delta]
    delta.append(tuple([sink] * len(letter_map)))
    return OrderedDfa(len(letter_map), tuple(delta), x.initial, x.finals)


def dfa_minimize(x: OrderedDfa) -> OrderedDfa:
    """Canonical minimal DFA: equivalent DFAs minimize to equal values"""
    reachable = [x.initial]
    seen = {x.initial}
    for s in reachable:
        for t in x.delta[s]:
            if t not in seen:
                seen.add(t)
                reachable.append(t)

    block = {s: int(s in x.finals) for s in reachable}
    count = len(set(block.values()))
    while True:
        signatures: Dict[Tuple, int] = {}
        refined = {}
        for s in reachable:
            signature = (block[s],) + tuple(block[t] for t in x.delta[s])
            refined[s] = signatures.setdefault(signature, len(signatures))
        block = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    number = {block[x.initial]: 0}
    order = [x.initial]
    for s in order:
        for t in x.delta[s]:
            if block[t] not in number:
                number[block[t]] = len(number)
                order.append(t)
    delta = tuple(tuple(number[block[t]] for t in x.delta[s]) for s in order)
    finals = frozenset(number[block[s]] for s in order if s in x.finals)
    return OrderedDfa(x.letters, delta, 0, finals)


def dfa_empty(x: OrderedDfa) -> bool:
    return dfa_shortest_word(x) is None


def dfa_shortest_word(x: OrderedDfa, allowed: Optional[Iterable[Letter]] = None) -> Optional[Word]:
    """Shortest accepted word over the allowed letters, lexicographically least among those"""
    letters = sorted(allowed) if allowed is not None else list(range(x.letters))
    parent: Dict[int, Optional[Tuple[int, Letter]]] = {x.initial: None}
    queue = deque([x.initial])
    while queue:
        s = queue.popleft()
        if s in x.finals:
            word: Word = []
            while parent[s] is not None:
                s, a = parent[s]
                word.append(a)
            return word[::-1]
        for a in letters:
            t = x.delta[s][a]
            if t not in parent:
                parent[t] = (s, a)
                queue.append(t)
    return None


def dfa_equivalent(x: OrderedDfa, y: OrderedDfa) -> bool:
    return dfa_minimize(x) == dfa_minimize(y)


def ordered_language_dfa(d: OrderedDfa, order: Optional[Sequence[Letter]] = None) -> OrderedDfa:
    """Minimal DFA of the words d accepts that are sorted by `order`"""
    return dfa_minimize(dfa_product(d, chain_dfa(d.letters, order), "and"))


def parikh_transfer(
    d: OrderedDfa,
    source_order: Sequence[Letter],
    letter_map: Sequence[Letter],
    target_order: Sequence[Letter],
    guard: Optional[int] = None,
) -> OrderedDfa:
    """DFA over len(letter_map) letters accepting a word sorted by `target_order`
    exactly when d accepts the image of its letters sorted by `source_order`

    Reading tracks, per source letter, the state function of the power of that
    letter read so far; the sorted image is accepted when the composition of
    those functions in source order maps d's initial state to a final one.
    """
    guard = setting("reorder_guard", guard)
    position = _positions(len(letter_map), target_order)
    identity = tuple(range(d.states))
    step = [tuple(d.delta[s][a] for s in range(d.states)) for a in range(d.letters)]

    def accepting(slots: Tuple[Tuple[int, ...], ...]) -> bool:
        s = d.initial
        for a in source_order:
            s = slots[a][s]
        return s in d.finals

    start = (0, (identity,) * d.letters)
    index = {start: 0}
    configs = [start]
    rows: List[List[int]] = []
    i = 0
    while i < len(configs):
        config = configs[i]
        i += 1
        if config is None:
            rows.append([index[None]] * len(letter_map))
            continue
        level, slots = config
        row = []
        for j, a in enumerate(letter_map):
            if position[j] < level:
                nxt = None
            else:
                updated = list(slots)
                updated[a] = tuple(step[a][s] for s in slots[a])
                nxt = (position[j], tuple(updated))
            if nxt not in index:
                index[nxt] = len(configs)
                configs.append(nxt)
                if len(configs) > guard:
                    raise ResourceGuardExceeded("reordered DFA states", guard, len(configs))
            row.append(index[nxt])
        rows.append(row)
    sink = index.get(None)
    finals = frozenset(k for k, config in enumerate(configs) if k != sink and accepting(config[1]))
    logger.debug("parikh transfer built %d states from %d", len(configs), d.states)
    return dfa_minimize(OrderedDfa(len(letter_map), tuple(tuple(row) for row in rows), 0, finals))


class OrderedAlphabet:
    """Atoms of the named order filters, read in `order`

    Atoms are indexed by sign vector over the declared filters, positive
    signs first. `order` lists atom indices from least to greatest and
    `display` is the filter order shown when the schema is written back.
    """

    def __init__(
        self,
        named: Sequence[Tuple[str, Filter]],
        states: Iterable[str],
        order: Optional[Sequence[Letter]] = None,
        display: Optional[Sequence[str]] = None,
        atoms: Optional[Sequence[Atom]] = None,
        guard: Optional[int] = None,
    ):
        self.named = tuple(named)
        self.names = tuple(name for name, _ in self.named)
        if len(set(self.names)) != len(self.names):
            raise PreconditionError("order filter names must be distinct")
        self.filters = tuple(f for _, f in self.named)
        self.states = frozenset(states)
        self.atoms = list(atoms) if atoms is not None else atomize(self.filters, self.states, guard=guard)
        self.table = AtomTable(self.atoms)
        self.order = tuple(order) if order is not None else tuple(range(len(self.atoms)))
        if sorted(self.order) != list(range(len(self.atoms))):
            raise PreconditionError(f"order {list(self.order)} is not a permutation of {len(self.atoms)} atoms")
        self.position = _positions(len(self.atoms), self.order)
        self.display = tuple(display) if display is not None else self.names

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"OrderedAlphabet({list(self.display)}, atoms={len(self.atoms)})"

    def classify(self, d: str, Q: Iterable[str]) -> Optional[Letter]:
        atom = self.table.classify(d, Q)
        return None if atom is None else atom.index

    def sort_word(self, counts: Mapping[Letter, int]) -> Word:
        word: Word = []
        for a in self.order:
            word.extend([a] * counts.get(a, 0))
        return word

    def truth(self, a: Letter) -> FrozenSet[str]:
        """Names of the order filters holding on atom a"""
        return frozenset(name for name, sign in zip(self.names, self.atoms[a].signs) if sign)

    def covering(self, expression: Filter) -> List[Letter]:
        """Atoms on which an expression over the filter names holds"""
        unknown = filter_support(expression) - set(self.names)
        if unknown:
            raise PreconditionError(f"unknown order filters {sorted(unknown)}")
        return [a for a in range(len(self.atoms)) if filter_eval(expression, "", self.truth(a))]

    def expression(self, a: Letter) -> str:
        truth = self.truth(a)
        return " & ".join(name if name in truth else f"!{name}" for name in self.display) or "*"

    def with_order(self, order: Sequence[Letter], display: Optional[Sequence[str]] = None) -> "OrderedAlphabet":
        return OrderedAlphabet(self.named, self.states, order, display or self.display, atoms=self.atoms)


@dataclass(frozen=True)
class OrderedDescriptor:
    """A DFA over the atoms; `source` keeps the counting constraint text it was compiled from"""

    dfa: OrderedDfa
    source: Optional[str] = None

    def __str__(self) -> str:
        return self.source if self.source is not None else str(self.dfa)


def sorted_arity(alphabet: OrderedAlphabet, M: Counter, stats: EvalStats) -> Optional[Word]:
    """The arity as a sorted word of atoms; None when some element fits no atom"""
    counts: Dict[Letter, int] = {}
    for (d, Q), n in M.items():
        stats.filter_evals += 1
        a = alphabet.classify(d, Q)
        if a is None:
            return None
        counts[a] = counts.get(a, 0) + n
    return alphabet.sort_word(counts)


@register_descriptor_class(ClassTag.AUTO)
class OrderedClass(DescriptorClass):
    def satisfies(self, descriptor: OrderedDescriptor, M: Counter, stats: EvalStats) -> bool:
        word = sorted_arity(self.aut.alphabet, M, stats)
        if word is None:
            return False
        stats.steps += len(word)
        return descriptor.dfa.accepts(word)

    def support(self, descriptor: OrderedDescriptor) -> StateSet:
        return frozenset().union(*(filter_support(f) for f in self.aut.alphabet.filters))

    def size(self, descriptor: OrderedDescriptor) -> int:
        return descriptor.dfa.states

    def targets(self, M: Counter, stats: EvalStats) -> StateSet:
        word = sorted_arity(self.aut.alphabet, M, stats)
        if word is None:
            return frozenset()
        reached = set()
        for rule in self.aut.rules:
            stats.steps += len(word)
            if rule.descriptor.dfa.accepts(word):
                reached.add(rule.target)
        return frozenset(reached)


def auto_membership(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> bool:
    A.require(ClassTag.AUTO)
    return accepts(A, t, stats)


def _counter_dfa(phi: PresburgerFormula, alphabet: OrderedAlphabet) -> OrderedDfa:
    letters = len(alphabet)
    c1, left = linear_form(phi.left, alphabet.atoms)
    c2, right = linear_form(phi.right, alphabet.atoms)
    constant = c1 - c2
    weights = [a - b for a, b in zip(left, right)]

    if isinstance(phi, Congruent):
        m = phi.modulus
        delta = tuple(tuple((s + w) % m for w in weights) for s in range(m))
        return OrderedDfa(letters, delta, 0, frozenset(s for s in range(m) if (constant + s) % m == 0))

    if all(w >= 0 for w in weights):
        # constant + sum <= 0
        limit = -constant
        if limit < 0:
            return empty_dfa(letters)
        delta = tuple(tuple(min(s + w, limit + 1) for w in weights) for s in range(limit + 2))
        return OrderedDfa(letters, delta, 0, frozenset(range(limit + 1)))
    if all(w <= 0 for w in weights):
        # sum of |w| x >= constant
        need = constant
        if need <= 0:
            return universal_dfa(letters)
        delta = tuple(tuple(min(s - w, need) for w in weights) for s in range(need + 1))
        return OrderedDfa(letters, delta, 0, frozenset([need]))
    raise PreconditionError(f"{phi} compares counters against each other; only counts against constants compile")


def _compile(phi: PresburgerFormula, alphabet: OrderedAlphabet) -> OrderedDfa:
    if isinstance(phi, (Le, Congruent)):
        return _counter_dfa(phi, alphabet)
    if isinstance(phi, Both):
        return dfa_product(_compile(phi.left, alphabet), _compile(phi.right, alphabet), "and")
    if isinstance(phi, Negation):
        return dfa_complement(_compile(phi.inner, alphabet))
    raise TypeError(f"not a counting constraint: {phi!r}")


def compile_counting(phi: PresburgerFormula, alphabet: OrderedAlphabet) -> OrderedDfa:
    """Ordered-language DFA accepting a sorted word iff its letter counts satisfy phi"""
    return ordered_language_dfa(dfa_minimize(_compile(phi, alphabet)), alphabet.order)


def reorder(A: Aut, order: Sequence[Letter], display: Optional[Sequence[str]] = None, guard: Optional[int] = None) -> Aut:
    """Equivalent AUTO reading the atoms in `order`"""
    A.require(ClassTag.AUTO)
    alphabet = A.alphabet.with_order(order, display)
    identity = list(range(len(A.alphabet)))
    rules = []
    for rule in A.rules:
        dfa = parikh_transfer(rule.descriptor.dfa, A.alphabet.order, identity, alphabet.order, guard)
        logger.info("reordered rule to %s: %d -> %d states", rule.target, rule.descriptor.dfa.states, dfa.states)
        rules.append((OrderedDescriptor(dfa), rule.target))
    return Aut(ClassTag.AUTO, A.states, A.finals, rules, alphabet=alphabet)


def reorder_filters(A: Aut, names: Sequence[str], guard: Optional[int] = None) -> Aut:
    """Reorder so that atoms compare by sign vector over the filters in `names`"""
    A.require(ClassTag.AUTO)
    alphabet = A.alphabet
    if sorted(names) != sorted(alphabet.names):
        raise PreconditionError(f"{list(names)} is not a permutation of {list(alphabet.names)}")
    slot = {name: i for i, name in enumerate(alphabet.names)}

    def key(a: Letter) -> Tuple[int, ...]:
        signs = alphabet.atoms[a].signs
        return tuple(0 if signs[slot[name]] else 1 for name in names)

    return reorder(A, sorted(range(len(alphabet)), key=key), names, guard)


PROBLEMS = ("empty", "universal", "disjoint", "included", "equivalent")


def rule_languages(A: Aut) -> List[Tuple[str, OrderedDfa]]:
    return [(rule.target, ordered_language_dfa(rule.descriptor.dfa, A.alphabet.order)) for rule in A.rules]


def check_vertical_determinism(A: Aut) -> None:
    """Rules with different targets must accept disjoint ordered languages"""
    languages = rule_languages(A)
    for i, (q1, d1) in enumerate(languages):
        for q2, d2 in languages[i + 1 :]:
            if q1 == q2:
                continue
            word = dfa_shortest_word(dfa_product(d1, d2, "and"))
            if word is not None:
                raise PreconditionError(f"rules to {q1} and {q2} both accept the sorted arity {word}")


class _Side:
    def __init__(self, A: Aut, prefix: str):
        A.require(ClassTag.AUTO)
        self.aut = A
        self.prefix = prefix
        self.filters = [map_states(f, lambda q: StateTest(prefix + q)) for f in A.alphabet.filters]
        self.outcomes = singleton_choices(A.states)
        self.by_signs = {atom.signs: atom.index for atom in A.alphabet.atoms}

    def choice(self, outcome: StateSet) -> StateSet:
        return frozenset(self.prefix + q for q in outcome)

    def outcome_of(self, choice: StateSet) -> StateSet:
        return frozenset(q[len(self.prefix) :] for q in choice if q.startswith(self.prefix))


class _JointAlphabet:
    """Atoms of the filters of several automata, annotated by one outcome each"""

    def __init__(self, automata: Sequence[Aut], guard: Optional[int] = None):
        self.sides = [_Side(A, f"{i}:") for i, A in enumerate(automata)]
        filters = [f for side in self.sides for f in side.filters]
        self.tuples = list(product(*(side.outcomes for side in self.sides)))
        choices = [self.choice(outcome) for outcome in self.tuples]
        self.atoms = atomize(filters, (), choices=choices, guard=guard)
        self.projections: List[List[Letter]] = []
        offset = 0
        for side in self.sides:
            width = len(side.filters)
            self.projections.append([side.by_signs[atom.signs[offset : offset + width]] for atom in self.atoms])
            offset += width
        self.order = sorted(
            range(len(self.atoms)),
            key=lambda j: tuple(side.aut.alphabet.position[proj[j]] for side, proj in zip(self.sides, self.projections)),
        )
        self.position = _positions(len(self.atoms), self.order)

    def choice(self, outcome: Tuple[StateSet, ...]) -> StateSet:
        return frozenset().union(*(side.choice(o) for side, o in zip(self.sides, outcome)))

    def outcome_of(self, choice: StateSet) -> Tuple[StateSet, ...]:
        return tuple(side.outcome_of(choice) for side in self.sides)

    def lift(self, k: int, d: OrderedDfa, guard: Optional[int] = None) -> OrderedDfa:
        """d, a DFA of side k, as an ordered-language DFA over the joint atoms"""
        side = self.sides[k]
        projection = self.projections[k]
        position = side.aut.alphabet.position
        monotone = all(
            position[projection[a]] <= position[projection[b]] for a, b in zip(self.order, self.order[1:])
        )
        if monotone:
            relabelled = dfa_relabel(ordered_language_dfa(d, side.aut.alphabet.order), projection)
            return ordered_language_dfa(relabelled, self.order)
        return parikh_transfer(d, side.aut.alphabet.order, projection, self.order, guard)


def _outcome_dfas(joint: _JointAlphabet, k: int, guard: Optional[int]) -> Dict[StateSet, OrderedDfa]:
    A = joint.sides[k].aut
    letters = len(joint.atoms)
    lifted = [(rule.target, joint.lift(k, rule.descriptor.dfa, guard)) for rule in A.rules]
    outcomes: Dict[StateSet, OrderedDfa] = {}
    anything = empty_dfa(letters)
    for q in sorted(A.states):
        union = empty_dfa(letters)
        for target, d in lifted:
            if target == q:
                union = dfa_product(union, d, "or")
        outcomes[frozenset([q])] = dfa_minimize(union)
        anything = dfa_product(anything, union, "or")
    chain = chain_dfa(letters, joint.order)
    outcomes[NO_STATES] = dfa_minimize(dfa_product(chain, dfa_complement(anything), "and"))
    return outcomes


def reachable_outcomes(automata: Sequence[Aut], guard: Optional[int] = None) -> Dict[Tuple[StateSet, ...], DataTree]:
    """Tuples of vertical outcomes some tree reaches, each with a smallest-word witness

    Exact for vertically deterministic automata.
    """
    joint = _JointAlphabet(automata, guard)
    dfas = [_outcome_dfas(joint, k, guard) for k in range(len(joint.sides))]
    reached: Dict[Tuple[StateSet, ...], DataTree] = {}
    iterations = 0
    while True:
        iterations += 1
        usable: Dict[Letter, StateSet] = {}
        for atom in joint.atoms:
            for Q in atom.languages:
                if joint.outcome_of(Q) in reached:
                    usable[atom.index] = Q
                    break
        added = {}
        for outcome in joint.tuples:
            if outcome in reached:
                continue
            d = dfas[0][outcome[0]]
            for k in range(1, len(outcome)):
                d = dfa_product(d, dfas[k][outcome[k]], "and")
            word = dfa_shortest_word(d, usable)
            if word is not None:
                edges = []
                for a in word:
                    Q = usable[a]
                    edges.append((joint.atoms[a].value_under(Q), reached[joint.outcome_of(Q)]))
                added[outcome] = DataTree(edges)
        logger.debug("ordered accessibility iteration %d: %d new outcomes", iterations, len(added))
        if not added:
            return reached
        reached.update(added)


def auto_decide(
    problem: str,
    A: Aut,
    B: Optional[Aut] = None,
    assume_vdet: bool = False,
    guard: Optional[int] = None,
) -> Decision:
    """Exact answer to `problem` for vertically deterministic AUTOs, with a
    witness tree when the answer is refuted
    """
    if problem not in PROBLEMS:
        raise PreconditionError(f"unknown problem {problem!r}")
    automata = [A] if problem in ("empty", "universal") else [A, B]
    if any(X is None for X in automata):
        raise PreconditionError(f"{problem} needs two automata")
    if not assume_vdet:
        for X in automata:
            check_vertical_determinism(X)
    reached = reachable_outcomes(automata, guard)

    def accepted(k: int, outcome: Tuple[StateSet, ...]) -> bool:
        return bool(outcome[k] & automata[k].finals)

    if problem == "empty":
        refutes = lambda o: accepted(0, o)  # noqa: E731
    elif problem == "universal":
        refutes = lambda o: not accepted(0, o)  # noqa: E731
    elif problem == "disjoint":
        refutes = lambda o: accepted(0, o) and accepted(1, o)  # noqa: E731
    elif problem == "included":
        refutes = lambda o: accepted(0, o) and not accepted(1, o)  # noqa: E731
    else:
        refutes = lambda o: accepted(0, o) != accepted(1, o)  # noqa: E731

    witnesses = [tree for outcome, tree in reached.items() if refutes(outcome)]
    if witnesses:
        return Decision(False, min(witnesses))
    return Decision(True)
