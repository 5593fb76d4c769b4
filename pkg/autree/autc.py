"""Confluent horizontal automata: the diamond check, greedy membership,
minimal acceptors, and the joint accessibility search behind emptiness,
universality, disjointness and inclusion
"""
import heapq
import logging
from collections import Counter
from enum import Enum
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

from .abstracts import ClassTag
from .abstracts import DescriptorClass
from .abstracts import EvalStats
from .abstracts import register_descriptor_class
from .auta import HorizontalAutomaton
from .auta import HTransition
from .auta import HState
from .config import setting
from .core import Aut
from .core import Decision
from .core import accepts
from .exceptions import NotConfluentError
from .exceptions import PreconditionError
from .filters import NO_STATES
from .filters import Atom
from .filters import StateSet
from .filters import StateTest
from .filters import atomize
from .filters import filter_eval
from .filters import map_states
from .oracle import BOTTOM
from .oracle import enum_multisets
from .tree import DataTree

logger = logging.getLogger(__name__)


class Confluence(Enum):
    CONFLUENT = "confluent"
    NOT_PROVABLY_CONFLUENT = "not provably confluent"


class ConfluenceReport(NamedTuple):
    verdict: Confluence
    state: Optional[HState] = None
    atoms: Optional[Tuple[int, int]] = None
    successors: Tuple[Optional[HState], ...] = ()

    def __str__(self) -> str:
        if self.verdict is Confluence.CONFLUENT:
            return "confluent"
        first, second = self.atoms
        reached = ", ".join(BOTTOM if s is None else s for s in self.successors)
        return f"critical pair at {self.state} on atoms {first} and {second}: {reached}"

    @property
    def confluent(self) -> bool:
        return self.verdict is Confluence.CONFLUENT


def horizontal_atoms(A: Aut) -> List[Atom]:
    """Atoms of A's transition filters over values annotated by at most one state"""
    return atomize(A.horizontal.filters(), A.states)


def atom_successors(H: HorizontalAutomaton, atoms: Sequence[Atom]) -> Dict[Tuple[HState, int], List[HState]]:
    successors: Dict[Tuple[HState, int], List[HState]] = {}
    for atom in atoms:
        d, Q = atom.witness
        for transition in H.transitions:
            if filter_eval(transition.filter, d, Q):
                targets = successors.setdefault((transition.source, atom.index), [])
                if transition.target not in targets:
                    targets.append(transition.target)
    return successors


def check_confluent(H: HorizontalAutomaton, atoms: Sequence[Atom]) -> ConfluenceReport:
    """Per-atom determinism plus the diamond on every pair of atoms enabled together

    A Confluent verdict is a proof; the converse does not hold.
    """
    successors = atom_successors(H, atoms)

    def step(p: Optional[HState], a: int) -> Optional[HState]:
        targets = successors.get((p, a), [])
        return targets[0] if targets else None

    for p in H.hstates:
        for a in atoms:
            for b in atoms:
                if b.index < a.index:
                    continue
                if a.index == b.index:
                    targets = successors.get((p, a.index), [])
                    if len(targets) > 1:
                        return ConfluenceReport(Confluence.NOT_PROVABLY_CONFLUENT, p, (a.index, a.index), tuple(targets))
                    continue
                first, second = step(p, a.index), step(p, b.index)
                if first is None or second is None:
                    continue
                joined = (step(first, b.index), step(second, a.index))
                if joined[0] is None or joined[0] != joined[1]:
                    return ConfluenceReport(Confluence.NOT_PROVABLY_CONFLUENT, p, (a.index, b.index), joined)
    return ConfluenceReport(Confluence.CONFLUENT)


def require_initial_descriptors(A: Aut) -> None:
    """Every rule descriptor starts at the one initial horizontal state"""
    A.require(ClassTag.AUTC)
    initial = A.horizontal.initial
    if initial is None:
        raise PreconditionError("confluent automata need a designated initial horizontal state")
    for rule in A.rules:
        p, target = rule.descriptor
        if p != initial:
            raise PreconditionError(
                f"rule to {rule.target!r} reads from {p!r} to {target!r}; confluent automata read from the initial horizontal state {initial!r}"
            )


def require_confluent(A: Aut, atoms: Optional[Sequence[Atom]] = None) -> ConfluenceReport:
    require_initial_descriptors(A)
    report = check_confluent(A.horizontal, atoms if atoms is not None else horizontal_atoms(A))
    if not report.confluent:
        raise NotConfluentError(report)
    return report


def greedy_run(H: HorizontalAutomaton, p: HState, M: Counter, stats: Optional[EvalStats] = None) -> Optional[HState]:
    """Outcome of consuming M from p, first enabled transition first; None is the failure state"""
    stats = stats if stats is not None else EvalStats()
    filters = H.filters()
    slot = {f: i for i, f in enumerate(filters)}
    classes: Dict[Tuple[bool, ...], int] = {}
    for (d, Q), count in sorted(M.items(), key=lambda item: (item[0][0], sorted(item[0][1]))):
        if count:
            stats.filter_evals += len(filters)
            signs = tuple(filter_eval(f, d, Q) for f in filters)
            classes[signs] = classes.get(signs, 0) + count

    state = p
    left = sum(classes.values())
    while left:
        moved = False
        for transition in H.outgoing(state):
            i = slot[transition.filter]
            signs = next((signs for signs, count in classes.items() if count and signs[i]), None)
            if signs is not None:
                classes[signs] -= 1
                left -= 1
                state = transition.target
                stats.steps += 1
                moved = True
                break
        if not moved:
            return None
    return state


@register_descriptor_class(ClassTag.AUTC)
class ConfluentClass(DescriptorClass):
    def satisfies(self, descriptor: Tuple[HState, HState], M: Counter, stats: EvalStats) -> bool:
        p, target = descriptor
        return greedy_run(self.aut.horizontal, p, M, stats) == target

    def support(self, descriptor: Tuple[HState, HState]) -> StateSet:
        return self.aut.horizontal.support()

    def targets(self, M: Counter, stats: EvalStats) -> StateSet:
        runs: Dict[HState, Optional[HState]] = {}
        reached = set()
        for rule in self.aut.rules:
            p, target = rule.descriptor
            if p not in runs:
                runs[p] = greedy_run(self.aut.horizontal, p, M, stats)
            if runs[p] == target:
                reached.add(rule.target)
        return frozenset(reached)


def autc_membership(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> bool:
    A.require(ClassTag.AUTC)
    return accepts(A, t, stats)


def acceptor_table(H: HorizontalAutomaton, p: HState, atoms: Sequence[Atom]) -> Dict[HState, List[Tuple[int, ...]]]:
    """Minimal nonempty atom-count vectors moving p to each horizontal state, at most |hstates| elements each"""
    successors = atom_successors(H, atoms)

    def run(vector: Sequence[int]) -> Optional[HState]:
        remaining = list(vector)
        state = p
        while any(remaining):
            a = next((i for i, n in enumerate(remaining) if n and (state, atoms[i].index) in successors), None)
            if a is None:
                return None
            remaining[a] -= 1
            state = successors[(state, atoms[a].index)][0]
        return state

    table: Dict[HState, List[Tuple[int, ...]]] = {}
    for vector in enum_multisets(len(atoms), len(H.hstates)):
        if not any(vector):
            continue
        target = run(vector)
        if target is None:
            continue
        found = table.setdefault(target, [])
        if not any(all(x <= y for x, y in zip(smaller, vector)) for smaller in found):
            found.append(tuple(vector))
    return table


def minimal_acceptors(
    H: HorizontalAutomaton,
    p: HState,
    target: HState,
    atoms: Sequence[Atom],
) -> List[Tuple[int, ...]]:
    return acceptor_table(H, p, atoms).get(target, [])


class _Side:
    """One automaton of a joint search, its states and filters namespaced by `prefix`"""

    def __init__(self, A: Aut, prefix: str):
        require_initial_descriptors(A)
        self.aut = A
        self.prefix = prefix
        H = A.horizontal
        self.horizontal = HorizontalAutomaton(
            H.hstates,
            [HTransition(t.source, map_states(t.filter, lambda q: StateTest(prefix + q)), t.target) for t in H.transitions],
            initial=H.initial,
        )
        self.filters = self.horizontal.filters()
        self.slot = {f: i for i, f in enumerate(H.filters())}

    def choice(self, outcome: StateSet) -> StateSet:
        return frozenset(self.prefix + q for q in outcome)

    def step(self, p: Optional[HState], signs: Sequence[bool], offset: int) -> Optional[HState]:
        if p is None:
            return None
        for transition in self.aut.horizontal.outgoing(p):
            if signs[offset + self.slot[transition.filter]]:
                return transition.target
        return None

    def consume(self, p: Optional[HState], vector: Sequence[int], atoms: Sequence[Atom], offset: int) -> Optional[HState]:
        """Greedy run on the multiset `vector` of atoms; None once stuck"""
        remaining = list(vector)
        while p is not None and any(remaining):
            for i, n in enumerate(remaining):
                if n:
                    nxt = self.step(p, atoms[i].signs, offset)
                    if nxt is not None:
                        remaining[i] -= 1
                        p = nxt
                        break
            else:
                return None
        return p

    def evaluate(self, children: Sequence[Tuple[str, StateSet]]) -> StateSet:
        """Vertical outcome of a node whose children carry this automaton's states"""
        H = self.aut.horizontal
        return self.outcome(greedy_run(H, H.initial, Counter(children)))

    def outcome(self, p: Optional[HState]) -> StateSet:
        if p is None:
            return NO_STATES
        initial = self.aut.horizontal.initial
        return frozenset(rule.target for rule in self.aut.rules if rule.descriptor == (initial, p))


class _JointSearch:
    """Reachable tuples of vertical outcomes of confluent automata read in parallel

    Children are annotated with one outcome per automaton. The first automaton
    leads: from each of its horizontal states the walk moves by the minimal
    acceptors leaving that state, which the other automata replay, and by
    single children on which it fails. A side stuck along the walk stays stuck
    in the configuration, but a later child may unblock it on the whole arity,
    so the recorded outcome comes from a greedy run over the children actually
    collected and every tuple belongs to a real tree. Configurations are
    settled fewest children first, so each outcome keeps a smallest witness
    arity.
    """

    def __init__(self, automata: Sequence[Aut], budget: Optional[int] = None):
        self.sides = [_Side(A, f"{i}:") for i, A in enumerate(automata)]
        self.budget = setting("autc_budget", budget)
        self.filters = [f for side in self.sides for f in side.filters]
        self.offsets = []
        offset = 0
        for side in self.sides:
            self.offsets.append(offset)
            offset += len(side.filters)
        self.explored = 0
        self.complete = True

    def _choice(self, outcome: Tuple[StateSet, ...]) -> StateSet:
        return frozenset().union(*(side.choice(o) for side, o in zip(self.sides, outcome)))

    def _atoms(self, outcomes: Sequence[Tuple[StateSet, ...]]) -> List[Atom]:
        if not outcomes:
            return []
        return atomize(self.filters, (), choices=[self._choice(outcome) for outcome in outcomes])

    def _moves(self, p: Optional[HState], atoms: Sequence[Atom], acceptors: Dict) -> List[Tuple[int, ...]]:
        singles = [tuple(int(i == a) for i in range(len(atoms))) for a in range(len(atoms))]
        if p is None:
            return singles
        if p not in acceptors:
            table = acceptor_table(self.sides[0].horizontal, p, atoms)
            acceptors[p] = sorted((v for vectors in table.values() for v in vectors if sum(v) > 1), key=lambda v: (sum(v), v))
        return singles + acceptors[p]

    def _replay(self, config: Tuple, vector: Sequence[int], atoms: Sequence[Atom]) -> Tuple:
        return tuple(side.consume(p, vector, atoms, off) for side, p, off in zip(self.sides, config, self.offsets))

    def run(self) -> Dict[Tuple[StateSet, ...], DataTree]:
        witnesses: Dict[Tuple[StateSet, ...], DataTree] = {}
        iterations = 0
        while True:
            iterations += 1
            known = list(witnesses)
            by_choice = {self._choice(outcome): outcome for outcome in known}
            atoms = self._atoms(known)
            acceptors: Dict[HState, List[Tuple[int, ...]]] = {}
            start = tuple(side.aut.horizontal.initial for side in self.sides)
            settled = set()
            queue = [(0, 0, start, [])]
            pushed = 1
            added = 0
            while queue:
                size, _, config, children = heapq.heappop(queue)
                if config in settled:
                    continue
                settled.add(config)
                self.explored += 1
                if self.explored > self.budget:
                    logger.info("joint search budget %d exhausted", self.budget)
                    self.complete = False
                    return witnesses
                outcome = tuple(side.evaluate([(label, o[i]) for label, o in children]) for i, side in enumerate(self.sides))
                if outcome not in witnesses:
                    witnesses[outcome] = DataTree([(label, witnesses[o]) for label, o in children])
                    added += 1
                for vector in self._moves(config[0], atoms, acceptors):
                    nxt = self._replay(config, vector, atoms)
                    if nxt in settled:
                        continue
                    fresh = []
                    for atom, n in zip(atoms, vector):
                        if n:
                            Q = next(Q for Q in atom.languages if Q in by_choice)
                            fresh.extend([(atom.value_under(Q), by_choice[Q])] * n)
                    heapq.heappush(queue, (size + sum(vector), pushed, nxt, children + fresh))
                    pushed += 1
            logger.debug("joint search iteration %d: %d outcome tuples", iterations, len(witnesses))
            if not added:
                return witnesses


def _first(witnesses: Dict[Tuple[StateSet, ...], DataTree], wanted) -> Optional[DataTree]:
    found = [tree for outcome, tree in witnesses.items() if wanted(outcome)]
    return min(found) if found else None


def autc_universal(A: Aut, budget: Optional[int] = None) -> Decision:
    """Decision(True) when A accepts every tree; a rejected tree otherwise

    The accessible annotations are the outcomes the joint search reaches. The
    empty one is among them only when some tree gets stuck or ends outside
    every rule. A is universal when each accessible annotation holds a final state.
    """
    search = _JointSearch([A], budget)
    witnesses = search.run()
    accessible = frozenset().union(*(outcome[0] for outcome in witnesses))
    logger.debug("accessible vertical states: %s", sorted(accessible))
    counterexample = _first(witnesses, lambda o: not o[0] & A.finals)
    if counterexample is not None:
        return Decision(False, counterexample)
    return Decision(True if search.complete else None)


def autc_empty(A: Aut, budget: Optional[int] = None) -> Decision:
    """Decision(True) when A accepts nothing, else a witness; None when undecided"""
    search = _JointSearch([A], budget)
    witnesses = search.run()
    witness = _first(witnesses, lambda o: bool(o[0] & A.finals))
    if witness is not None:
        return Decision(False, witness)
    return Decision(True if search.complete else None)


def autc_disjoint(A: Aut, B: Aut, budget: Optional[int] = None) -> Decision:
    """Decision(True) when no tree is accepted by both; an overlap witness otherwise"""
    search = _JointSearch([A, B], budget)
    witnesses = search.run()
    witness = _first(witnesses, lambda o: bool(o[0] & A.finals) and bool(o[1] & B.finals))
    if witness is not None:
        return Decision(False, witness)
    return Decision(True if search.complete else None)


def autc_inclusion(A: Aut, B: Aut, budget: Optional[int] = None) -> Decision:
    """Decision(True) when L(A) is included in L(B); a tree of L(A) minus L(B) otherwise"""
    search = _JointSearch([A, B], budget)
    witnesses = search.run()
    witness = _first(witnesses, lambda o: bool(o[0] & A.finals) and not o[1] & B.finals)
    if witness is not None:
        return Decision(False, witness)
    return Decision(True if search.complete else None)


def autc_equivalent(A: Aut, B: Aut, budget: Optional[int] = None) -> Decision:
    forward = autc_inclusion(A, B, budget)
    if forward.answer is False:
        return forward
    backward = autc_inclusion(B, A, budget)
    if backward.answer is False:
        return backward
    if forward.answer is None or backward.answer is None:
        return Decision(None)
    return Decision(True)


def shared_initial_union(A: Aut, B: Aut) -> Aut:
    """AUTC joining A and B at A's initial horizontal state; may lose confluence"""
    A.require(ClassTag.AUTC)
    B.require(ClassTag.AUTC)

    def rename(p: HState) -> HState:
        return A.horizontal.initial if p == B.horizontal.initial else f"{p}'"

    def rename_state(q: str) -> str:
        return f"{q}'"

    H = HorizontalAutomaton(
        list(A.horizontal.hstates) + [rename(p) for p in B.horizontal.hstates],
        list(A.horizontal.transitions)
        + [
            HTransition(rename(t.source), map_states(t.filter, lambda q: StateTest(rename_state(q))), rename(t.target))
            for t in B.horizontal.transitions
        ],
        initial=A.horizontal.initial,
    )
    rules = [(rule.descriptor, rule.target) for rule in A.rules]
    rules.extend(((rename(p), rename(target)), rename_state(q)) for (p, target), q in B.rules)
    states = set(A.states) | {rename_state(q) for q in B.states}
    finals = set(A.finals) | {rename_state(q) for q in B.finals}
    return Aut(ClassTag.AUTC, states, finals, rules, horizontal=H)

