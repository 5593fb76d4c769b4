"""Presburger automata: membership, vertical determinization and the
emptiness fixpoint over reachable annotation sets
"""
import logging
from collections import Counter
from enum import Enum
from itertools import combinations
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
from .config import setting
from .core import Aut
from .core import accepts
from .exceptions import ResourceGuardExceeded
from .filters import Atom
from .filters import FilterWitness
from .filters import StateSet
from .filters import StateTest
from .filters import atomize
from .filters import disj as filter_disj
from .filters import filter_support
from .filters import map_states
from .filters import pattern_parts
from .presburger import Both
from .presburger import Congruent
from .presburger import Le
from .presburger import Negation
from .presburger import PresburgerFormula
from .presburger import SatStatus
from .presburger import conj as formula_conj
from .presburger import disj as formula_disj
from .presburger import formula_counters
from .presburger import map_counters
from .presburger import presburger_holds
from .presburger import presburger_sat
from .tree import DataTree
from .utils import state_set_name

logger = logging.getLogger(__name__)


def _formula_size(phi: PresburgerFormula) -> int:
    if isinstance(phi, (Le, Congruent)):
        return 1 + len(formula_counters(phi))
    if isinstance(phi, Both):
        return 1 + _formula_size(phi.left) + _formula_size(phi.right)
    return 1 + _formula_size(phi.inner)


@register_descriptor_class(ClassTag.AUTP)
class PresburgerClass(DescriptorClass):
    def satisfies(self, descriptor: PresburgerFormula, M: Counter, stats: EvalStats) -> bool:
        return presburger_holds(descriptor, M)

    def support(self, descriptor: PresburgerFormula) -> StateSet:
        return frozenset().union(*(filter_support(f) for f in formula_counters(descriptor)))

    def size(self, descriptor: PresburgerFormula) -> int:
        return _formula_size(descriptor)


def autp_membership(A: Aut, t: DataTree, stats: Optional[EvalStats] = None) -> bool:
    A.require(ClassTag.AUTP)
    return accepts(A, t, stats)


def exact_formula(A: Aut, P: StateSet) -> Optional[PresburgerFormula]:
    """Formula of the multisets whose evaluation is exactly P; None if P is impossible"""
    parts: List[PresburgerFormula] = []
    for q in sorted(A.states):
        formulas = A.rules_to(q)
        if q in P:
            if not formulas:
                return None
            parts.append(formula_disj(*formulas))
        else:
            parts.extend(Negation(phi) for phi in formulas)
    return formula_conj(*parts)


def _subsets(A: Aut, guard: int) -> List[StateSet]:
    count = 2 ** len(A.states)
    if count > guard:
        raise ResourceGuardExceeded("annotation sets", guard, count)
    ordered = sorted(A.states)
    return [frozenset(c) for k in range(len(ordered) + 1) for c in combinations(ordered, k)]


class EmptinessStatus(Enum):
    EMPTY = "empty"
    NONEMPTY = "nonempty"
    UNKNOWN = "unknown"


class EmptinessResult(NamedTuple):
    status: EmptinessStatus
    witness: Optional[DataTree] = None
    reachable: Tuple[StateSet, ...] = ()
    iterations: int = 0
    complete: bool = True


def _annotated_atoms(pattern_atoms: Sequence[Atom], sets: Sequence[StateSet]) -> List[Atom]:
    """Pattern atoms paired with every reachable annotation set"""
    atoms = []
    for Q in sets:
        for p in pattern_atoms:
            atoms.append(Atom(len(atoms), p.signs, p.filters, {}, FilterWitness(p.witness.value, Q)))
    return atoms


def reachable_annotations(
    A: Aut,
    bound: Optional[int] = None,
    budget: Optional[int] = None,
    guard: Optional[int] = None,
    stop_early: bool = True,
) -> EmptinessResult:
    """Fixpoint over the annotation sets S that some tree evaluates to exactly

    A set P joins S when the multisets over values annotated with sets already
    in S can satisfy exactly the rules leading to P.
    """
    A.require(ClassTag.AUTP)
    guard = setting("determinize_guard", guard)
    candidates = _subsets(A, guard)
    formulas: Dict[StateSet, Optional[PresburgerFormula]] = {P: exact_formula(A, P) for P in candidates}

    patterns = []
    for rule in A.rules:
        for f in formula_counters(rule.descriptor):
            for p in pattern_parts(f):
                if p not in patterns:
                    patterns.append(p)
    pattern_atoms = atomize(patterns, ())

    reachable: List[StateSet] = []
    witnesses: Dict[StateSet, DataTree] = {}
    undecided: List[StateSet] = []
    iterations = 0
    while True:
        iterations += 1
        atoms = _annotated_atoms(pattern_atoms, reachable)
        added: List[StateSet] = []
        undecided = []
        for P in candidates:
            if P in witnesses or formulas[P] is None:
                continue
            result = presburger_sat(formulas[P], atoms, bound, budget)
            if result.status is SatStatus.SAT:
                edges = []
                for atom, amount in zip(atoms, result.vector):
                    edges.extend([(atom.witness.value, witnesses[atom.witness.states])] * amount)
                witnesses[P] = DataTree(edges)
                added.append(P)
            elif result.status is SatStatus.UNKNOWN:
                undecided.append(P)
        logger.debug("emptiness iteration %d: %d new annotation sets", iterations, len(added))
        if not added:
            break
        reachable.extend(added)
        if stop_early and any(P & A.finals for P in added):
            break

    accepted = [P for P in reachable if P & A.finals]
    complete = not undecided
    if accepted:
        status = EmptinessStatus.NONEMPTY
        witness = min((witnesses[P] for P in accepted), key=lambda t: (t.size(), t.key))
    else:
        status = EmptinessStatus.EMPTY if complete else EmptinessStatus.UNKNOWN
        witness = None
    return EmptinessResult(status, witness, tuple(reachable), iterations, complete)


def autp_empty(
    A: Aut,
    bound: Optional[int] = None,
    budget: Optional[int] = None,
) -> EmptinessResult:
    """Empty, NonEmpty with a witness tree, or Unknown"""
    return reachable_annotations(A, bound, budget)


def autp_determinize(A: Aut, guard: Optional[int] = None, prune: bool = False) -> Aut:
    """Vertically deterministic AUTP over sets of A's states

    The state P is reached exactly by the trees A evaluates to P. With `prune`,
    only annotation sets found reachable are kept (when that search is complete).
    """
    A.require(ClassTag.AUTP)
    guard = setting("determinize_guard", guard)
    subsets = _subsets(A, guard)
    if prune:
        result = reachable_annotations(A, guard=guard, stop_early=False)
        if result.complete:
            subsets = sorted(result.reachable, key=lambda P: (len(P), sorted(P)))
        else:
            logger.info("reachability undecided for some sets, keeping the full power set")

    names = {P: state_set_name(P) for P in subsets}

    def rename(q: str):
        return filter_disj(*(StateTest(names[P]) for P in subsets if q in P))

    rules = []
    for P in subsets:
        phi = exact_formula(A, P)
        if phi is not None:
            rules.append((map_counters(phi, lambda f: map_states(f, rename)), names[P]))
    finals = [names[P] for P in subsets if P & A.finals]
    logger.info("determinized %d states into %d", len(A.states), len(subsets))
    return Aut(ClassTag.AUTP, names.values(), finals, rules)
