from collections import Counter

import itertools

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from autree.filters import TRUE
from autree.filters import Not
from autree.filters import PatternTest
from autree.filters import StateTest
from autree.filters import atomize
from autree.patterns import Literal
from autree.presburger import Congruent
from autree.presburger import Const
from autree.presburger import Le
from autree.presburger import Negation
from autree.presburger import SatResult
from autree.presburger import SatStatus
from autree.presburger import Sum
from autree.presburger import annotated
from autree.presburger import conj
from autree.presburger import congruent
from autree.presburger import count
from autree.presburger import disj
from autree.presburger import eq
from autree.presburger import eval_counting
from autree.presburger import formula_constants
from autree.presburger import formula_counters
from autree.presburger import formula_moduli
from autree.presburger import ge
from autree.presburger import gt
from autree.presburger import in_counting_fragment
from autree.presburger import le
from autree.presburger import linear_form
from autree.presburger import lt
from autree.presburger import plus
from autree.presburger import presburger_holds
from autree.presburger import presburger_sat
from autree.presburger import small_model_cap

A = PatternTest.of(Literal("a"))
Q = StateTest("q")

M = annotated([("a", ["q"]), ("a", []), ("b", ["q"]), ("b", ["q"])])


def test_annotated_multiset():
    assert M == Counter({("a", frozenset(["q"])): 1, ("a", frozenset()): 1, ("b", frozenset(["q"])): 2})


@pytest.mark.parametrize(
    "expr,value",
    [
        (count(TRUE), 4),
        (count(A), 2),
        (count(Q), 3),
        (count(Not(Q)), 1),
        (plus(count(A), count(Q), count(TRUE)), 9),
    ],
)
def test_eval_counting(expr, value):
    assert eval_counting(expr, M) == value


@pytest.mark.parametrize(
    "phi,holds",
    [
        (eq(count(A), 2), True),
        (lt(count(A), 2), False),
        (gt(count(Q), count(A)), True),
        (ge(count(TRUE), 5), False),
        (congruent(count(Q), 1, 2), True),
        (congruent(count(Q), 0, 3), True),
        (conj(le(count(A), 2), congruent(count(TRUE), 1, 2)), False),
        (disj(le(count(A), 1), ge(count(Q), 3)), True),
    ],
)
def test_presburger_holds(phi, holds):
    assert presburger_holds(phi, M) is holds


def test_empty_multiset():
    assert presburger_holds(eq(count(TRUE), 0), Counter())
    assert presburger_holds(conj(), Counter())
    assert not presburger_holds(disj(), Counter())


def test_modulus_must_be_positive():
    with pytest.raises(AssertionError):
        Congruent(count(A), count(Q), 0)


def test_formula_inventory():
    phi = conj(le(count(A), 2), congruent(count(Q), 1, 3), ge(count(A), 1))
    assert formula_counters(phi) == [A, Q]
    assert sorted(formula_constants(phi)) == [1, 1, 2]
    assert formula_moduli(phi) == [3]
    assert in_counting_fragment(phi)
    assert not in_counting_fragment(le(count(A), count(Q)))


def pattern_atoms():
    return atomize([A], ())


def test_linear_form():
    atoms = pattern_atoms()
    assert linear_form(plus(count(A), count(TRUE), 3), atoms) == (3, (2, 1))


def test_sat_returns_least_model():
    atoms = pattern_atoms()
    result = presburger_sat(conj(ge(count(A), 2), eq(count(Not(A)), 1)), atoms)
    assert result.status is SatStatus.SAT
    assert result.vector == (2, 1)


def test_sat_with_congruence():
    atoms = pattern_atoms()
    result = presburger_sat(conj(congruent(count(A), 1, 2), ge(count(A), 2)), atoms)
    assert result.vector == (3, 0)


def test_unsat_in_counting_fragment():
    atoms = pattern_atoms()
    result = presburger_sat(conj(ge(count(A), 1), le(count(A), 0)), atoms)
    assert result.status is SatStatus.UNSAT
    assert result.vector is None


def test_unsat_without_atoms():
    assert presburger_sat(ge(count(TRUE), 1), []).status is SatStatus.UNSAT
    assert presburger_sat(le(count(TRUE), 1), []).vector == ()


def test_counter_comparisons_stay_unknown():
    atoms = pattern_atoms()
    phi = conj(lt(count(A), count(Not(A))), le(count(Not(A)), count(A)))
    assert presburger_sat(phi, atoms).status is SatStatus.UNKNOWN


def test_budget_exhaustion_is_unknown():
    atoms = pattern_atoms()
    result = presburger_sat(ge(count(A), 2), atoms, budget=1)
    assert result.status is SatStatus.UNKNOWN


def expand(atoms, vector):
    """Multiset holding each atom's witness as many times as the vector counts it"""
    return Counter({(atom.witness.value, atom.witness.states): n for atom, n in zip(atoms, vector) if n})


def test_constants_add_up_on_the_counter_free_side():
    atoms = atomize([], ())
    phi = Le(Sum(Const(3), Const(3)), count(TRUE))
    assert small_model_cap(phi) == 7
    assert presburger_sat(phi, atoms, bound=20) == SatResult(SatStatus.SAT, (6,))
    assert presburger_sat(phi, atoms) == SatResult(SatStatus.SAT, (6,))
    assert presburger_holds(phi, expand(atoms, (6,)))
    assert presburger_sat(phi, atoms, bound=5).status is SatStatus.UNKNOWN


def test_sum_with_congruences_is_unsat():
    atoms = pattern_atoms()
    phi = conj(eq(plus(count(A), count(Not(A))), 1), congruent(count(A), 1, 2), congruent(count(Not(A)), 1, 2))
    assert presburger_sat(phi, atoms).status is SatStatus.UNSAT


COUNTERS = st.sampled_from([count(A), count(Not(A)), count(TRUE)])
CONSTANTS = st.integers(min_value=0, max_value=3)

COMPARISONS = st.one_of(
    st.builds(le, COUNTERS, CONSTANTS),
    st.builds(ge, COUNTERS, CONSTANTS),
    st.builds(lambda f, g, c: ge(plus(f, g), c), COUNTERS, COUNTERS, CONSTANTS),
    st.builds(congruent, COUNTERS, CONSTANTS, st.integers(min_value=1, max_value=3)),
    st.builds(lambda f, g, c: le(f, plus(g, Const(c))), COUNTERS, COUNTERS, CONSTANTS),
)

FORMULAS = st.recursive(
    COMPARISONS,
    lambda inner: st.one_of(st.builds(conj, inner, inner), st.builds(Negation, inner)),
    max_leaves=4,
)


@settings(max_examples=100, deadline=None)
@given(FORMULAS)
def test_sat_agrees_with_enumeration(phi):
    atoms = pattern_atoms()
    bound = small_model_cap(phi)
    models = [v for v in itertools.product(range(bound + 1), repeat=len(atoms)) if presburger_holds(phi, expand(atoms, v))]
    result = presburger_sat(phi, atoms, bound=bound)
    if models:
        assert result == SatResult(SatStatus.SAT, min(models))
        assert presburger_holds(phi, expand(atoms, result.vector))
    elif in_counting_fragment(phi):
        assert result.status is SatStatus.UNSAT
    else:
        assert result.status in (SatStatus.UNSAT, SatStatus.UNKNOWN)


@settings(max_examples=50, deadline=None)
@given(FORMULAS)
def test_default_bound_keeps_the_least_model(phi):
    atoms = pattern_atoms()
    boxed = presburger_sat(phi, atoms, bound=small_model_cap(phi))
    if in_counting_fragment(phi):
        assert presburger_sat(phi, atoms) == boxed


MULTISETS = st.lists(
    st.tuples(st.sampled_from(["a", "b", ""]), st.sampled_from([(), ("q",)])),
    max_size=6,
).map(annotated)

CLOSURE_COUNTERS = st.sampled_from([count(A), count(Q), count(Not(Q)), count(TRUE)])
CLOSURE_FORMULAS = st.recursive(
    st.one_of(
        st.builds(le, CLOSURE_COUNTERS, CONSTANTS),
        st.builds(le, CLOSURE_COUNTERS, CLOSURE_COUNTERS),
        st.builds(congruent, CLOSURE_COUNTERS, CONSTANTS, st.integers(min_value=1, max_value=3)),
    ),
    lambda inner: st.one_of(st.builds(conj, inner, inner), st.builds(Negation, inner)),
    max_leaves=4,
)


@settings(max_examples=200)
@given(CLOSURE_FORMULAS, CLOSURE_FORMULAS, MULTISETS)
def test_boolean_closure(phi, psi, M):
    assert presburger_holds(Negation(phi), M) is not presburger_holds(phi, M)
    assert presburger_holds(conj(phi, psi), M) == (presburger_holds(phi, M) and presburger_holds(psi, M))
    assert presburger_holds(disj(phi, psi), M) == (presburger_holds(phi, M) or presburger_holds(psi, M))
