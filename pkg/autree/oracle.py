"""Brute-force reference semantics, exhaustive enumerators and random
generators, used to cross-check the fast decision procedures
"""
import logging
import random
from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Dict
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple
from typing import Union

from .abstracts import ClassTag
from .auta import HorizontalAutomaton
from .auta import HState
from .auta import HTransition
from .config import setting
from .core import Arity
from .core import ArityAnd
from .core import ArityNot
from .core import Aut
from .core import Decision
from .core import accepts
from .exceptions import BudgetExceeded
from .exceptions import PreconditionError
from .filters import Filter
from .filters import Not
from .filters import PatternTest
from .filters import StateSet
from .filters import StateTest
from .filters import atomize
from .filters import conj
from .filters import filter_eval
from .filters import pattern_parts
from .patterns import AnyString
from .patterns import Alternation
from .patterns import Concat
from .patterns import Literal
from .patterns import Named
from .patterns import Regex
from .patterns import Star
from .ordered import OrderedDfa
from .presburger import Both
from .presburger import Negation
from .presburger import PresburgerFormula
from .presburger import congruent
from .presburger import count
from .presburger import formula_counters
from .presburger import ge
from .presburger import le
from .presburger import presburger_holds
from .tree import LEAF
from .tree import DataTree

logger = logging.getLogger(__name__)

BOTTOM = "⊥"


@dataclass(frozen=True)
class EnumConfig:
    """Bounds of an exhaustive tree enumeration

    Labels are the words over `symbols` up to `max_word_length`, unless
    `labels` lists them explicitly.
    """

    symbols: Tuple[str, ...] = ("a", "b")
    max_word_length: int = 1
    max_nodes: int = 3
    max_branching: Optional[int] = None
    labels: Optional[Tuple[str, ...]] = None
    budget: int = 200000

    def __post_init__(self):
        bounds = [self.max_word_length, self.max_nodes, self.budget]
        if self.max_branching is not None:
            bounds.append(self.max_branching)
        if any(bound < 0 for bound in bounds):
            raise PreconditionError("enumeration bounds must be non-negative")


def enum_labels(cfg: EnumConfig) -> List[str]:
    if cfg.labels is not None:
        return sorted(set(cfg.labels))
    words = [""]
    layer = [""]
    for _ in range(cfg.max_word_length):
        layer = [w + s for w in layer for s in sorted(set(cfg.symbols))]
        words.extend(layer)
    return sorted(words)


def enum_trees(cfg: EnumConfig) -> List[DataTree]:
    """Every tree within the bounds once, ordered by size then canonical key"""
    if cfg.max_nodes < 1:
        return []
    labels = enum_labels(cfg)
    by_size: Dict[int, List[DataTree]] = {1: [LEAF]}
    total = 1

    for n in range(2, cfg.max_nodes + 1):
        candidates = [(label, child) for size in range(1, n) for child in by_size[size] for label in labels]
        found: List[DataTree] = []

        def extend(start: int, weight: int, edges: List[Tuple[str, DataTree]]) -> None:
            nonlocal total
            if weight == 0:
                total += 1
                if total > cfg.budget:
                    raise BudgetExceeded("enumerating trees", cfg.budget)
                found.append(DataTree(edges))
                return
            if cfg.max_branching is not None and len(edges) >= cfg.max_branching:
                return
            for i in range(start, len(candidates)):
                label, child = candidates[i]
                if child.size() <= weight:
                    edges.append((label, child))
                    extend(i, weight - child.size(), edges)
                    edges.pop()

        extend(0, n - 1, [])
        by_size[n] = sorted(found)

    trees = [t for n in sorted(by_size) for t in by_size[n]]
    logger.debug("enumerated %d trees over %d labels", len(trees), len(labels))
    return trees


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enum_multisets(atoms: Union[int, Sequence], max_size: int) -> List[Tuple[int, ...]]:
    """Count vectors with sum <= max_size, by total then first coordinate largest first"""
    n = atoms if isinstance(atoms, int) else len(atoms)
    return [vector for total in range(max_size + 1) for vector in _compositions(total, n)]


class _Budget:
    def __init__(self, limit: int, what: str):
        self.limit = limit
        self.what = what
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit)


def _elements(M: Counter) -> List[Tuple[str, StateSet]]:
    return [element for element, n in sorted(M.items(), key=lambda e: (e[0][0], sorted(e[0][1]))) for _ in range(n)]


def _any_run(H: HorizontalAutomaton, p: HState, target: HState, elements: List, budget: _Budget) -> bool:
    budget.spend()
    if not elements:
        return p == target
    for i, (d, Q) in enumerate(elements):
        rest = elements[:i] + elements[i + 1 :]
        for transition in H.outgoing(p):
            if filter_eval(transition.filter, d, Q) and _any_run(H, transition.target, target, rest, budget):
                return True
    return False


def brute_runs(H: HorizontalAutomaton, p: HState, M: Counter, budget: int = 10**6) -> Set[str]:
    """Outcomes of every maximal failure-extended run from (p, M): the state
    reached when M is consumed, or BOTTOM when a run gets stuck
    """
    spent = _Budget(budget, "enumerating consumption orders")

    def runs(state: HState, elements: List) -> Set[str]:
        spent.spend()
        if not elements:
            return {state}
        outcomes: Set[str] = set()
        for i, (d, Q) in enumerate(elements):
            rest = elements[:i] + elements[i + 1 :]
            for transition in H.outgoing(state):
                if filter_eval(transition.filter, d, Q):
                    outcomes |= runs(transition.target, rest)
        return outcomes or {BOTTOM}

    return runs(p, _elements(M))


def _arity_sat(h, M: Counter, budget: _Budget) -> bool:
    if isinstance(h, ArityAnd):
        return _arity_sat(h.left, M, budget) and _arity_sat(h.right, M, budget)
    if isinstance(h, ArityNot):
        return not _arity_sat(h.inner, M, budget)
    assert isinstance(h, Arity)
    for label in {label for label, _ in h.entries}:
        wanted = [q for d, q in h.entries if d == label]
        elements = [Q for (d, Q) in _elements(M) if d == label]
        if len(elements) != len(wanted):
            return False
        found = False
        for perm in permutations(range(len(elements))):
            budget.spend()
            if all(q in elements[j] for q, j in zip(wanted, perm)):
                found = True
                break
        if not found:
            return False
    return True


def _ordered_sat(A: Aut, descriptor, M: Counter) -> bool:
    alphabet = A.alphabet
    word = []
    for d, Q in _elements(M):
        signs = tuple(filter_eval(f, d, Q) for f in alphabet.filters)
        matches = [atom.index for atom in alphabet.atoms if atom.signs == signs]
        if not matches:
            return False
        word.append(matches[0])
    word.sort(key=lambda a: alphabet.position[a])
    return descriptor.dfa.accepts(word)


def _brute_sat(A: Aut, descriptor, M: Counter, budget: _Budget) -> bool:
    if A.tag is ClassTag.AUTP:
        return presburger_holds(descriptor, M)
    if A.tag is ClassTag.ARITY:
        return _arity_sat(descriptor, M, budget)
    if A.tag is ClassTag.AUTO:
        return _ordered_sat(A, descriptor, M)
    p, target = descriptor
    return _any_run(A.horizontal, p, target, _elements(M), budget)


def brute_evaluate(A: Aut, t: DataTree, budget: int = 10**6) -> StateSet:
    """Definitional evaluation with naive descriptor checks"""
    spent = _Budget(budget, "enumerating consumption orders")

    def evaluate(node: DataTree) -> StateSet:
        M = Counter((label, evaluate(child)) for label, child in node.edges)
        return frozenset(rule.target for rule in A.rules if _brute_sat(A, rule.descriptor, M, spent))

    return evaluate(t)


def brute_membership(A: Aut, t: DataTree, budget: int = 10**6) -> bool:
    return bool(brute_evaluate(A, t, budget) & A.finals)


def regex_matches(r: Regex, word: str) -> bool:
    """Reference regex semantics by end-position sets"""

    def ends(r: Regex, start: int) -> Set[int]:
        if isinstance(r, Literal):
            return {start + len(r.text)} if word.startswith(r.text, start) else set()
        if isinstance(r, AnyString):
            return set(range(start, len(word) + 1))
        if isinstance(r, Named):
            return ends(r.regex, start)
        if isinstance(r, Concat):
            current = {start}
            for part in r.parts:
                current = {e for s in current for e in ends(part, s)}
            return current
        if isinstance(r, Alternation):
            return {e for option in r.options for e in ends(option, start)}
        if isinstance(r, Star):
            found = {start}
            frontier = {start}
            while frontier:
                frontier = {e for s in frontier for e in ends(r.inner, s)} - found
                found |= frontier
            return found
        raise TypeError(f"not a regex: {r!r}")

    return len(word) in ends(r, 0)


def _automaton_filters(A: Aut) -> List[Filter]:
    if A.tag is ClassTag.AUTP:
        return [f for rule in A.rules for f in formula_counters(rule.descriptor)]
    if A.tag is ClassTag.AUTO:
        return list(A.alphabet.filters)
    if A.horizontal is not None:
        return A.horizontal.filters()
    return []


def corpus_labels(automata: Sequence[Aut], extra: Sequence[str] = ()) -> List[str]:
    """One value per pattern atom of the automata's filters, plus `extra`"""
    patterns: List[PatternTest] = []
    for A in automata:
        for f in _automaton_filters(A):
            for p in pattern_parts(f):
                if p not in patterns:
                    patterns.append(p)
    labels = {atom.witness.value for atom in atomize(patterns, ())}
    if any(A.tag is ClassTag.ARITY for A in automata):
        for A in automata:
            for rule in A.rules:
                labels |= _arity_labels(rule.descriptor)
    return sorted(labels | set(extra))


def _arity_labels(h) -> Set[str]:
    if hasattr(h, "entries"):
        return {label for label, _ in h.entries}
    if hasattr(h, "inner"):
        return _arity_labels(h.inner)
    return _arity_labels(h.left) | _arity_labels(h.right)


def vdet_corpus(A: Aut) -> List[DataTree]:
    """Small trees over representative labels, for the vertical-determinism check"""
    cfg = setting("vdet_corpus")
    small = enum_labels(EnumConfig(symbols=("a",), max_word_length=cfg["max_word_length"]))
    labels = corpus_labels([A], small)
    return enum_trees(EnumConfig(labels=tuple(labels), max_nodes=cfg["max_nodes"], budget=10**6))


def bounded_decide(problem: str, A: Aut, B: Optional[Aut], cfg: EnumConfig) -> Decision:
    """Search the enumerated trees for a refutation; None when none is found"""
    for t in enum_trees(cfg):
        in_a = accepts(A, t)
        in_b = accepts(B, t) if B is not None else False
        refuted = {
            "empty": in_a,
            "universal": not in_a,
            "disjoint": in_a and in_b,
            "included": in_a and not in_b,
            "equivalent": in_a != in_b,
        }[problem]
        if refuted:
            return Decision(False, t)
    return Decision(None)


def bounded_search(problem: str, A: Aut, B: Optional[Aut], budget: int) -> Decision:
    """Refute `problem` on trees of growing size until `budget` trees per size bound are exceeded

    Labels are one representative per pattern atom of the automata's filters.
    Returns Decision(False, witness) or Decision(None); never a positive answer.
    """
    automata = [X for X in (A, B) if X is not None]
    labels = tuple(corpus_labels(automata, ("",)))
    nodes = 1
    while True:
        try:
            decision = bounded_decide(problem, A, B, EnumConfig(labels=labels, max_nodes=nodes, budget=budget))
        except BudgetExceeded:
            logger.info("bounded search gave up after trees of %d nodes", nodes - 1)
            return Decision(None)
        if decision.answer is False:
            return decision
        nodes += 1


def _random_filter(rng: random.Random, states: Sequence[str]) -> Filter:
    choice = rng.randrange(5)
    if choice == 0:
        return PatternTest.of(Literal("a"))
    if choice == 1:
        return PatternTest.of(Literal("b"))
    if choice == 2:
        return PatternTest.of(AnyString())
    if choice == 3:
        return StateTest(rng.choice(states))
    return conj(PatternTest.of(Literal(rng.choice("ab"))), StateTest(rng.choice(states)))


def random_autp(rng: random.Random, n_states: int = 3) -> Aut:
    """Small random AUTP over the labels "a" and "b" """
    states = [f"q{i}" for i in range(n_states)]
    rules = []
    for q in states:
        for _ in range(rng.randint(1, 2)):
            f = _random_filter(rng, states)
            if rng.random() < 0.3:
                f = Not(f)
            k = rng.randint(0, 2)
            phi = ge(count(f), k) if rng.random() < 0.5 else le(count(f), k)
            rules.append((phi, q))
    finals = [q for q in states if rng.random() < 0.5] or [states[0]]
    return Aut(ClassTag.AUTP, states, finals, rules)


def random_confluent_horizontal(
    rng: random.Random,
    labels: Sequence[str] = ("a", "b", "c"),
    max_states: int = 4,
) -> HorizontalAutomaton:
    """Product of independent per-label counters, which always passes the diamond check"""
    kinds = {"loop": 1, "mod2": 2, "cap1": 2, "cap2": 3, "absent": 1}
    while True:
        chosen = [rng.choice(sorted(kinds)) for _ in labels]
        size = 1
        for kind in chosen:
            size *= kinds[kind]
        if size <= max_states:
            break

    def advance(kind: str, c: int) -> Optional[int]:
        if kind == "loop":
            return c
        if kind == "mod2":
            return (c + 1) % 2
        if kind == "cap1":
            return c + 1 if c < 1 else None
        if kind == "cap2":
            return c + 1 if c < 2 else None
        return None

    vectors: List[Tuple[int, ...]] = [()]
    for kind in chosen:
        vectors = [v + (c,) for v in vectors for c in range(kinds[kind])]

    def name(v: Tuple[int, ...]) -> str:
        return "p" + "".join(str(c) for c in v)

    transitions = []
    for v in vectors:
        for i, (label, kind) in enumerate(zip(labels, chosen)):
            c = advance(kind, v[i])
            if c is not None:
                target = v[:i] + (c,) + v[i + 1 :]
                transitions.append(HTransition(name(v), PatternTest.of(Literal(label)), name(target)))
    return HorizontalAutomaton([name(v) for v in vectors], transitions, initial=name(vectors[0]))


def random_ordered_dfa(rng: random.Random, letters: int = 3, max_states: int = 5):
    n = rng.randint(1, max_states)
    delta = tuple(tuple(rng.randrange(n) for _ in range(letters)) for _ in range(n))
    finals = frozenset(s for s in range(n) if rng.random() < 0.5)
    return OrderedDfa(letters, delta, 0, finals)


def random_counting(
    rng: random.Random,
    filters: Sequence[Filter],
    max_constant: int = 3,
    max_modulus: int = 3,
    depth: int = 2,
) -> PresburgerFormula:
    """Random Boolean combination of count(f) <= k, count(f) >= k and count(f) == r mod m"""
    if depth == 0 or rng.random() < 0.4:
        f = rng.choice(list(filters))
        kind = rng.randrange(3)
        if kind == 0:
            return le(count(f), rng.randint(0, max_constant))
        if kind == 1:
            return ge(count(f), rng.randint(0, max_constant))
        m = rng.randint(1, max_modulus)
        return congruent(count(f), rng.randrange(m), m)
    if rng.random() < 0.3:
        return Negation(random_counting(rng, filters, max_constant, max_modulus, depth - 1))
    return Both(
        random_counting(rng, filters, max_constant, max_modulus, depth - 1),
        random_counting(rng, filters, max_constant, max_modulus, depth - 1),
    )


def multiset_of(vector: Sequence[int], values: Sequence[str]) -> Counter:
    """Annotated multiset with vector[i] unannotated copies of values[i]"""
    return Counter({(values[i], frozenset()): n for i, n in enumerate(vector) if n})

