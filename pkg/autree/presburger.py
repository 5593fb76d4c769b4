"""Propositional Presburger formulae over filter counters

Formulae are evaluated on annotated multisets (Counters of (value, state set)
pairs). Satisfiability goes through z3 over atom-count vectors boxed by a
bound, and is three-valued: Unsat is claimed only where the box provably
holds a small model.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable
from typing import Iterable
from typing import List
from typing import Mapping
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import z3

from .config import setting
from .filters import Atom
from .filters import Filter
from .filters import StateId
from .filters import StateSet
from .filters import filter_eval
from .utils import lcm

logger = logging.getLogger(__name__)

# conj, disj, TRUE and FALSE stay module-qualified: filters exports its own
__all__ = [
    "AnnotatedMultiset",
    "Const",
    "Count",
    "Sum",
    "CountingExpr",
    "Le",
    "Congruent",
    "Both",
    "Negation",
    "PresburgerFormula",
    "count",
    "plus",
    "as_expr",
    "le",
    "ge",
    "lt",
    "gt",
    "eq",
    "congruent",
    "annotated",
    "eval_counting",
    "presburger_holds",
    "map_counters",
    "formula_counters",
    "formula_constants",
    "formula_moduli",
    "in_counting_fragment",
    "holds_on_atom",
    "linear_form",
    "SatStatus",
    "SatResult",
    "small_model_cap",
    "default_bound",
    "presburger_sat",
]

AnnotatedMultiset = Mapping[Tuple[str, StateSet], int]


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Count:
    filter: Filter

    def __str__(self) -> str:
        return f"count({self.filter})"


@dataclass(frozen=True)
class Sum:
    left: "CountingExpr"
    right: "CountingExpr"

    def __str__(self) -> str:
        return f"{self.left} + {self.right}"


CountingExpr = Union[Const, Count, Sum]


@dataclass(frozen=True)
class Le:
    left: CountingExpr
    right: CountingExpr

    def __str__(self) -> str:
        return f"{self.left} <= {self.right}"


@dataclass(frozen=True)
class Congruent:
    left: CountingExpr
    right: CountingExpr
    modulus: int

    def __post_init__(self):
        assert self.modulus >= 1, "modulus must be >= 1"

    def __str__(self) -> str:
        return f"{self.left} == {self.right} mod {self.modulus}"


@dataclass(frozen=True)
class Both:
    left: "PresburgerFormula"
    right: "PresburgerFormula"

    def __str__(self) -> str:
        return f"{_group(self.left)} & {_group(self.right)}"


@dataclass(frozen=True)
class Negation:
    inner: "PresburgerFormula"

    def __str__(self) -> str:
        return f"!({self.inner})"


PresburgerFormula = Union[Le, Congruent, Both, Negation]


def _group(phi: "PresburgerFormula") -> str:
    return str(phi) if isinstance(phi, Negation) else f"({phi})"


def count(f: Filter) -> Count:
    return Count(f)


def plus(*terms: CountingExpr) -> CountingExpr:
    result = terms[0]
    for term in terms[1:]:
        result = Sum(result, term)
    return result


def as_expr(x: Union[int, CountingExpr]) -> CountingExpr:
    return Const(x) if isinstance(x, int) else x


def le(a, b) -> PresburgerFormula:
    return Le(as_expr(a), as_expr(b))


def ge(a, b) -> PresburgerFormula:
    return Le(as_expr(b), as_expr(a))


def lt(a, b) -> PresburgerFormula:
    return Le(Sum(as_expr(a), Const(1)), as_expr(b))


def gt(a, b) -> PresburgerFormula:
    return lt(b, a)


def eq(a, b) -> PresburgerFormula:
    return Both(le(a, b), ge(a, b))


def congruent(a, b, modulus: int) -> PresburgerFormula:
    return Congruent(as_expr(a), as_expr(b), modulus)


def conj(*phis: PresburgerFormula) -> PresburgerFormula:
    if not phis:
        return TRUE
    result = phis[0]
    for phi in phis[1:]:
        result = Both(result, phi)
    return result


def disj(*phis: PresburgerFormula) -> PresburgerFormula:
    if not phis:
        return FALSE
    if len(phis) == 1:
        return phis[0]
    return Negation(conj(*(Negation(phi) for phi in phis)))


TRUE: PresburgerFormula = Le(Const(0), Const(0))
FALSE: PresburgerFormula = Negation(TRUE)


def annotated(pairs: Iterable[Tuple[str, Iterable[StateId]]]) -> Counter:
    """Build an annotated multiset from (value, states) pairs"""
    return Counter((d, frozenset(Q)) for d, Q in pairs)


def eval_counting(nu: CountingExpr, M: AnnotatedMultiset) -> int:
    if isinstance(nu, Const):
        return nu.value
    if isinstance(nu, Count):
        return sum(mult for (d, Q), mult in M.items() if filter_eval(nu.filter, d, Q))
    if isinstance(nu, Sum):
        return eval_counting(nu.left, M) + eval_counting(nu.right, M)
    raise TypeError(f"not a counting expression: {nu!r}")


def presburger_holds(phi: PresburgerFormula, M: AnnotatedMultiset) -> bool:
    if isinstance(phi, Le):
        return eval_counting(phi.left, M) <= eval_counting(phi.right, M)
    if isinstance(phi, Congruent):
        return (eval_counting(phi.left, M) - eval_counting(phi.right, M)) % phi.modulus == 0
    if isinstance(phi, Both):
        return presburger_holds(phi.left, M) and presburger_holds(phi.right, M)
    if isinstance(phi, Negation):
        return not presburger_holds(phi.inner, M)
    raise TypeError(f"not a Presburger formula: {phi!r}")


def map_counters(phi: PresburgerFormula, fn: Callable[[Filter], Filter]) -> PresburgerFormula:
    """Rewrite every counter's filter with `fn`"""

    def expr(nu: CountingExpr) -> CountingExpr:
        if isinstance(nu, Count):
            return Count(fn(nu.filter))
        if isinstance(nu, Sum):
            return Sum(expr(nu.left), expr(nu.right))
        return nu

    if isinstance(phi, Le):
        return Le(expr(phi.left), expr(phi.right))
    if isinstance(phi, Congruent):
        return Congruent(expr(phi.left), expr(phi.right), phi.modulus)
    if isinstance(phi, Both):
        return Both(map_counters(phi.left, fn), map_counters(phi.right, fn))
    return Negation(map_counters(phi.inner, fn))


def _exprs(phi: PresburgerFormula) -> List[CountingExpr]:
    if isinstance(phi, (Le, Congruent)):
        return [phi.left, phi.right]
    if isinstance(phi, Both):
        return _exprs(phi.left) + _exprs(phi.right)
    return _exprs(phi.inner)


def _terms(nu: CountingExpr) -> List[Union[Const, Count]]:
    if isinstance(nu, Sum):
        return _terms(nu.left) + _terms(nu.right)
    return [nu]


def formula_counters(phi: PresburgerFormula) -> List[Filter]:
    """Filters under a counter, first occurrence order"""
    found: List[Filter] = []
    for nu in _exprs(phi):
        for term in _terms(nu):
            if isinstance(term, Count) and term.filter not in found:
                found.append(term.filter)
    return found


def formula_constants(phi: PresburgerFormula) -> List[int]:
    found = []
    for nu in _exprs(phi):
        found.extend(term.value for term in _terms(nu) if isinstance(term, Const))
    return found


def formula_moduli(phi: PresburgerFormula) -> List[int]:
    if isinstance(phi, Congruent):
        return [phi.modulus]
    if isinstance(phi, Both):
        return formula_moduli(phi.left) + formula_moduli(phi.right)
    if isinstance(phi, Negation):
        return formula_moduli(phi.inner)
    return []


def in_counting_fragment(phi: PresburgerFormula) -> bool:
    """Every comparison has a counter-free side; congruences are unrestricted"""
    if isinstance(phi, Le):
        return not any(isinstance(t, Count) for t in _terms(phi.left)) or not any(
            isinstance(t, Count) for t in _terms(phi.right)
        )
    if isinstance(phi, Congruent):
        return True
    if isinstance(phi, Both):
        return in_counting_fragment(phi.left) and in_counting_fragment(phi.right)
    return in_counting_fragment(phi.inner)


def holds_on_atom(f: Filter, atom: Atom) -> bool:
    return filter_eval(f, atom.witness.value, atom.witness.states)


def linear_form(nu: CountingExpr, atoms: Sequence[Atom]) -> Tuple[int, Tuple[int, ...]]:
    """(constant, per-atom coefficients) of `nu` over atom counts"""
    constant = 0
    coefficients = [0] * len(atoms)
    for term in _terms(nu):
        if isinstance(term, Const):
            constant += term.value
        else:
            for i, atom in enumerate(atoms):
                if holds_on_atom(term.filter, atom):
                    coefficients[i] += 1
    return constant, tuple(coefficients)


class SatStatus(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


class SatResult(NamedTuple):
    status: SatStatus
    vector: Optional[Tuple[int, ...]] = None


class _Exhausted(Exception):
    pass


def small_model_cap(phi: PresburgerFormula) -> int:
    """Per-atom count below which a counting-fragment formula always has its least model

    Past the sum of all constants every comparison is settled by whether the
    atom is counted at all, and congruences only see the count modulo the lcm
    of the moduli, so a larger count can drop by that lcm and stay a model.
    """
    return sum(abs(c) for c in formula_constants(phi)) + lcm(formula_moduli(phi))


def default_bound(phi: PresburgerFormula, atoms: Sequence[Atom]) -> int:
    largest = max((abs(c) for c in formula_constants(phi)), default=0)
    return max(len(atoms) * (largest + lcm(formula_moduli(phi)) + 1), small_model_cap(phi))


def _compile(phi: PresburgerFormula, atoms: Sequence[Atom]) -> tuple:
    """Formula tree whose comparisons are linear forms `diff <= 0` / `diff = 0 mod m`"""
    if isinstance(phi, (Le, Congruent)):
        c1, left = linear_form(phi.left, atoms)
        c2, right = linear_form(phi.right, atoms)
        diff = (c1 - c2, tuple(a - b for a, b in zip(left, right)))
        if isinstance(phi, Le):
            return ("le", diff)
        return ("mod", diff, phi.modulus)
    if isinstance(phi, Both):
        return ("and", _compile(phi.left, atoms), _compile(phi.right, atoms))
    return ("not", _compile(phi.inner, atoms))


def _used_atoms(node: tuple, used: List[bool]) -> List[bool]:
    if node[0] in ("and", "not"):
        for child in node[1:]:
            _used_atoms(child, used)
    else:
        for i, c in enumerate(node[1][1]):
            if c:
                used[i] = True
    return used


def _encode(node: tuple, counts: Sequence[z3.ArithRef]) -> z3.BoolRef:
    kind = node[0]
    if kind == "and":
        return z3.And(_encode(node[1], counts), _encode(node[2], counts))
    if kind == "not":
        return z3.Not(_encode(node[1], counts))
    constant, coefficients = node[1]
    total = z3.IntVal(constant)
    for c, n in zip(coefficients, counts):
        if c:
            total = total + c * n
    if kind == "le":
        return total <= 0
    return total % node[2] == 0


def _check(solver: z3.Solver) -> bool:
    result = solver.check()
    if result == z3.unknown:
        raise _Exhausted(solver.reason_unknown())
    return result == z3.sat


def _least_model(solver: z3.Solver, counts: Sequence[z3.ArithRef], caps: Sequence[int]) -> Tuple[int, ...]:
    """Pin the counts one at a time to their least value that keeps the solver satisfiable"""
    vector = []
    for n, cap in zip(counts, caps):
        low, high = 0, cap
        while low < high:
            middle = (low + high) // 2
            solver.push()
            solver.add(n <= middle)
            fits = _check(solver)
            solver.pop()
            if fits:
                high = middle
            else:
                low = middle + 1
        solver.add(n == low)
        vector.append(low)
    return tuple(vector)


def presburger_sat(
    phi: PresburgerFormula,
    atoms: Sequence[Atom],
    bound: Optional[int] = None,
    budget: Optional[int] = None,
) -> SatResult:
    """Search atom-count vectors (each count <= bound) for a model of `phi`

    The counts are z3 integers boxed by `bound`; `budget` is the z3 resource
    limit of each solver call. Returns the lexicographically least model in the
    box, Unsat when the box holds a model of every satisfiable formula of this
    shape (no counted atoms, or the counting fragment with `bound` at least the
    small-model cap), and Unknown otherwise or when a call runs out of budget.
    """
    budget = setting("presburger_search_budget", budget)
    if bound is None:
        bound = default_bound(phi, atoms)

    tree = _compile(phi, atoms)
    used = _used_atoms(tree, [False] * len(atoms))
    caps = [bound if u else 0 for u in used]
    counts = [z3.Int(f"n{i}") for i in range(len(atoms))]

    solver = z3.Solver()
    solver.set("rlimit", budget)
    for n, cap in zip(counts, caps):
        solver.add(n >= 0, n <= cap)
    solver.add(_encode(tree, counts))

    try:
        vector = _least_model(solver, counts, caps) if _check(solver) else None
    except _Exhausted as exc:
        logger.debug("z3 gave up on %d atoms under resource limit %d: %s", len(atoms), budget, exc)
        return SatResult(SatStatus.UNKNOWN)

    if vector is not None:
        return SatResult(SatStatus.SAT, vector)
    exact = not any(used) or (in_counting_fragment(phi) and bound >= small_model_cap(phi))
    return SatResult(SatStatus.UNSAT if exact else SatStatus.UNKNOWN)
