"""Horizontal automata with filter-guarded transitions, and the automata whose
descriptors are pairs (p, p') of horizontal states satisfied by multiset rewriting
"""
import logging
from collections import Counter
from collections import deque
from dataclasses import dataclass
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple

from .abstracts import ClassTag
from .abstracts import DescriptorClass
from .abstracts import EvalStats
from .abstracts import register_descriptor_class
from .config import setting
from .core import Aut
from .core import accepts
from .core import vertical_determinism_counterexample
from .exceptions import BudgetExceeded
from .exceptions import PreconditionError
from .filters import NO_STATES
from .filters import Filter
from .filters import StateSet
from .filters import filter_eval
from .filters import filter_sat_under
from .filters import filter_support
from .tree import DataTree
from .tree import tree_to_json

logger = logging.getLogger(__name__)

HState = str


@dataclass(frozen=True)
class HTransition:
    source: HState
    filter: Filter
    target: HState

    def __str__(self) -> str:
        return f"{self.source} --[{self.filter}]--> {self.target}"


class HorizontalAutomaton:
    """Horizontal states and guarded transitions shared by all rules of one automaton

    `initial` is the designated start state of confluent automata, None otherwise.
    """

    def __init__(
        self,
        hstates: Iterable[HState],
        transitions: Iterable[HTransition],
        initial: Optional[HState] = None,
    ):
        self.hstates: Tuple[HState, ...] = tuple(dict.fromkeys(hstates))
        self.transitions: Tuple[HTransition, ...] = tuple(transitions)
        self.initial = initial
        known = set(self.hstates)
        for transition in self.transitions:
            for p in (transition.source, transition.target):
                if p not in known:
                    raise PreconditionError(f"transition {transition} uses unknown horizontal state {p!r}")
        if initial is not None and initial not in known:
            raise PreconditionError(f"initial horizontal state {initial!r} is not declared")

    def __repr__(self) -> str:
        return f"HorizontalAutomaton(hstates={len(self.hstates)}, transitions={len(self.transitions)})"

    def outgoing(self, p: HState) -> List[HTransition]:
        return [transition for transition in self.transitions if transition.source == p]

    def filters(self) -> List[Filter]:
        """Distinct transition filters, declaration order"""
        return list(dict.fromkeys(transition.filter for transition in self.transitions))

    def support(self) -> StateSet:
        return frozenset().union(*(filter_support(t.filter) for t in self.transitions))


def canonical_elements(M: Counter) -> Tuple[List[Tuple[str, StateSet]], Tuple[int, ...]]:
    """Distinct elements of M in canonical order, with their multiplicities"""
    elements = sorted((element for element, count in M.items() if count > 0), key=lambda e: (e[0], sorted(e[1])))
    return elements, tuple(M[element] for element in elements)


def h_descriptor_sat(
    H: HorizontalAutomaton,
    p: HState,
    target: HState,
    M: Counter,
    budget: Optional[int] = None,
    stats: Optional[EvalStats] = None,
) -> bool:
    """True when (p, M) rewrites to (target, <>) consuming one element per step

    Memoized backtracking over (horizontal state, remaining counts). Raises
    BudgetExceeded once more than `budget` configurations have been visited.
    """
    budget = setting("auta_node_budget", budget)
    stats = stats if stats is not None else EvalStats()
    elements, counts = canonical_elements(M)
    enabled: Dict[Tuple[int, int], bool] = {}
    memo: Dict[Tuple[HState, Tuple[int, ...]], bool] = {}
    indexed = list(enumerate(H.transitions))

    def holds(t: int, i: int) -> bool:
        if (t, i) not in enabled:
            stats.filter_evals += 1
            d, Q = elements[i]
            enabled[(t, i)] = filter_eval(H.transitions[t].filter, d, Q)
        return enabled[(t, i)]

    def search(state: HState, remaining: Tuple[int, ...]) -> bool:
        key = (state, remaining)
        if key in memo:
            return memo[key]
        stats.search_nodes += 1
        if len(memo) >= budget:
            raise BudgetExceeded("searching horizontal runs", budget)
        memo[key] = False
        if not any(remaining):
            memo[key] = state == target
            return memo[key]
        for i, left in enumerate(remaining):
            if not left:
                continue
            rest = remaining[:i] + (left - 1,) + remaining[i + 1 :]
            for t, transition in indexed:
                if transition.source == state and holds(t, i):
                    stats.steps += 1
                    if search(transition.target, rest):
                        memo[key] = True
                        return True
        return False

    return search(p, counts)


@register_descriptor_class(ClassTag.AUTA)
class RewritingClass(DescriptorClass):
    def satisfies(self, descriptor: Tuple[HState, HState], M: Counter, stats: EvalStats) -> bool:
        p, target = descriptor
        return h_descriptor_sat(self.aut.horizontal, p, target, M, stats=stats)

    def support(self, descriptor: Tuple[HState, HState]) -> StateSet:
        return self.aut.horizontal.support()


def check_descriptors(A: Aut) -> None:
    """Every rule descriptor is a pair of declared horizontal states"""
    known = set(A.horizontal.hstates)
    for rule in A.rules:
        for p in rule.descriptor:
            if p not in known:
                raise PreconditionError(f"rule to {rule.target!r} uses unknown horizontal state {p!r}")


def auta_membership(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> bool:
    A.require(ClassTag.AUTA)
    return accepts(A, t, stats)


def require_vertical_determinism(A: Aut, corpus: Optional[Iterable[DataTree]] = None) -> None:
    """Check |evaluate| <= 1 on a corpus of small trees; raises PreconditionError"""
    if corpus is None:
        from .oracle import vdet_corpus

        corpus = vdet_corpus(A)
    tree = vertical_determinism_counterexample(A, corpus)
    if tree is not None:
        raise PreconditionError(f"automaton is not vertically deterministic: {tree_to_json(tree)} reaches several states")


def horizontal_reach(H: HorizontalAutomaton, starts: Iterable[HState], enabled: Sequence[bool]) -> Dict[HState, Set[HState]]:
    """Horizontal states reachable from each start along enabled transitions"""
    reach: Dict[HState, Set[HState]] = {}
    for start in starts:
        seen = {start}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for transition, usable in zip(H.transitions, enabled):
                if usable and transition.source == p and transition.target not in seen:
                    seen.add(transition.target)
                    queue.append(transition.target)
        reach[start] = seen
    return reach


def auta_reachable_states(A: Aut, stats: Optional[EvalStats] = None) -> List[str]:
    """Vertical states some tree evaluates to, in discovery order

    A transition is usable once its filter is satisfiable by a value annotated
    with no state or with a single state already found; every (transition,
    annotation) pair is tested once per call.
    """
    A.require(ClassTag.AUTA, ClassTag.AUTC)
    H = A.horizontal
    stats = stats if stats is not None else EvalStats()
    tested: Dict[Tuple[int, FrozenSet[str]], bool] = {}
    found: List[str] = []
    choices: List[StateSet] = [NO_STATES]
    iterations = 0
    while True:
        iterations += 1
        enabled = []
        for index, transition in enumerate(H.transitions):
            usable = False
            for Q in choices:
                if (index, Q) not in tested:
                    stats.filter_evals += 1
                    tested[(index, Q)] = filter_sat_under(transition.filter, Q) is not None
                if tested[(index, Q)]:
                    usable = True
                    break
            enabled.append(usable)
        reach = horizontal_reach(H, {rule.descriptor[0] for rule in A.rules}, enabled)
        added = []
        for rule in A.rules:
            p, target = rule.descriptor
            if rule.target not in found and rule.target not in added and target in reach[p]:
                added.append(rule.target)
        logger.debug("vertical accessibility iteration %d: %s", iterations, added)
        if not added:
            return found
        found.extend(added)
        choices.extend(frozenset([q]) for q in added)


def auta_empty(
    A: Aut,
    assume_vdet: bool = False,
    corpus: Optional[Iterable[DataTree]] = None,
    stats: Optional[EvalStats] = None,
) -> bool:
    """True when no tree is accepted; needs a vertically deterministic automaton"""
    A.require(ClassTag.AUTA)
    if not assume_vdet:
        require_vertical_determinism(A, corpus)
    reachable = auta_reachable_states(A, stats)
    return not (set(reachable) & A.finals)
