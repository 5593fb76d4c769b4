import pytest

from autree.exceptions import SchemaError
from autree.filters import And
from autree.filters import Not
from autree.filters import PatternTest
from autree.filters import StateTest
from autree.filters import filter_eval
from autree.patterns import AnyString
from autree.patterns import Concat
from autree.patterns import Literal
from autree.patterns import Named
from autree.patterns import Star
from autree.patterns import suffix
from autree.presburger import Both
from autree.presburger import Congruent
from autree.presburger import Const
from autree.presburger import Count
from autree.presburger import Le
from autree.presburger import Sum
from autree.presburger import annotated
from autree.presburger import presburger_holds
from autree.syntax import parse_filter
from autree.syntax import parse_formula
from autree.syntax import parse_regex
from autree.syntax import tokenize


def test_tokenize():
    tokens = tokenize('count({file,main}) <= 2 mod "x\\"y"')
    assert [(t.kind, t.text) for t in tokens] == [
        ("name", "count"),
        ("op", "("),
        ("name", "{file,main}"),
        ("op", ")"),
        ("op", "<="),
        ("number", "2"),
        ("name", "mod"),
        ("string", 'x"y'),
        ("end", ""),
    ]
    assert tokens[4].spaced
    assert not tokens[1].spaced


def test_tokenize_rejects_unknown_characters():
    with pytest.raises(SchemaError) as exc:
        tokenize("count(q) ~ 1")
    assert exc.value.position == 9


def test_regex_structure():
    assert parse_regex('"\\documentclass" *') == Concat((Literal("\\documentclass"), AnyString()))
    assert parse_regex('"a"* "b"') == Concat((Star(Literal("a")), Literal("b")))
    assert parse_regex('("a" "b")*') == Star(Concat((Literal("a"), Literal("b"))))
    assert parse_regex('* ".tex"') == suffix(".tex")


def test_named_patterns():
    tex = suffix(".tex")
    assert parse_regex("tex + *", {"tex": tex}).options[0] == Named("tex", tex)
    f = parse_filter("pattern(tex) & !main", {"tex": tex})
    assert filter_eval(f, "a.tex", [])
    assert not filter_eval(f, "a.tex", ["main"])


def test_unknown_pattern_name():
    with pytest.raises(SchemaError, match="unknown pattern 'tex'") as exc:
        parse_regex('tex "x"')
    assert exc.value.position == 0


def test_filter_structure():
    assert parse_filter("q") == StateTest("q")
    assert parse_filter('"a" & !q') == And(PatternTest.of(Literal("a")), Not(StateTest("q")))
    assert parse_filter("!(p & q)") == Not(And(StateTest("p"), StateTest("q")))
    assert parse_filter("{file,main}") == StateTest("{file,main}")


def test_filter_disjunction_is_sugar():
    f = parse_filter('"a" | q')
    assert filter_eval(f, "a", [])
    assert filter_eval(f, "b", ["q"])
    assert not filter_eval(f, "b", [])


def test_filter_resolver():
    named = {"tex": PatternTest.of(suffix(".tex"))}
    f = parse_filter("tex & !leaf", resolve=lambda name: named.get(name, StateTest(name)))
    assert f == And(named["tex"], Not(StateTest("leaf")))


@pytest.mark.parametrize(
    "text,phi",
    [
        ("count(q) <= 2", Le(Count(StateTest("q")), Const(2))),
        ("1 <= count(q) + count(p)", Le(Const(1), Sum(Count(StateTest("q")), Count(StateTest("p"))))),
        ("count(q) == 1 mod 2", Congruent(Count(StateTest("q")), Const(1), 2)),
        ("count(q) == 3", Both(Le(Count(StateTest("q")), Const(3)), Le(Const(3), Count(StateTest("q"))))),
    ],
)
def test_formula_structure(text, phi):
    assert parse_formula(text) == phi


@pytest.mark.parametrize(
    "text,counts",
    [
        ("count(q) < 2", {0: True, 1: True, 2: False}),
        ("count(q) > 1", {0: False, 1: False, 2: True}),
        ("count(q) >= 1 & count(q) <= 1", {0: False, 1: True, 2: False}),
        ("count(q) <= 0 | count(q) >= 2", {0: True, 1: False, 2: True}),
        ("!(count(q) == 0 mod 2)", {0: False, 1: True, 2: False}),
        ("(count(pattern(*)) == 1) & count(q) >= 1", {0: False, 1: True, 2: False}),
    ],
)
def test_formula_semantics(text, counts):
    phi = parse_formula(text)
    for n, holds in counts.items():
        assert presburger_holds(phi, annotated([("x", ["q"])] * n)) is holds


@pytest.mark.parametrize(
    "text,message",
    [
        ("count(q) < 2 mod 3", "only == takes a modulus"),
        ("count(q) == 1 mod 0", "modulus must be at least 1"),
        ("count(q) <", "expected a number or count"),
        ("count(q)", "expected a comparison"),
        ("count(q <= 1", "expected '\\)'"),
        ("count(q) <= 1 )", "unexpected '\\)'"),
    ],
)
def test_formula_errors(text, message):
    with pytest.raises(SchemaError, match=message):
        parse_formula(text)


@pytest.mark.parametrize(
    "text",
    [
        '"a"* * ("b" + "c")',
        '("ab" + "c")* "\\\\x"',
        '* ".dvi" + * ".pdf"',
    ],
)
def test_regex_printing_parses_back(text):
    r = parse_regex(text)
    assert parse_regex(str(r)) == r


@pytest.mark.parametrize(
    "text",
    [
        '"a" & !q',
        '!(p & q) & pattern("x"*)',
        '"a" | q | !p',
        '!!q',
    ],
)
def test_filter_printing_parses_back(text):
    f = parse_filter(text)
    assert str(parse_filter(str(f))) == str(f)


@pytest.mark.parametrize(
    "text",
    [
        "count(q) <= 2 & !(count(pattern(*)) == 1 mod 3)",
        "count(q) + 1 < count(!q) | count(\"a\" & q) >= 2",
        "!(!(count(q) <= 0))",
    ],
)
def test_formula_printing_parses_back(text):
    phi = parse_formula(text)
    assert parse_formula(str(phi)) == phi
