import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from autree.exceptions import ResourceGuardExceeded
from autree.oracle import regex_matches
from autree.patterns import EMPTY
from autree.patterns import UNIVERSAL
from autree.patterns import AnyString
from autree.patterns import Literal
from autree.patterns import compile_pattern
from autree.patterns import pattern_accepts
from autree.patterns import pattern_boolean
from autree.patterns import pattern_empty
from autree.patterns import pattern_equivalent
from autree.patterns import shortest_word
from autree.patterns import suffix
from autree.patterns import suffix_set
from autree.syntax import parse_regex


def acceptor(text, **patterns):
    named = {name: parse_regex(body) for name, body in patterns.items()}
    return compile_pattern(parse_regex(text, named))


def test_latex_main_file_pattern():
    main = acceptor('"\\documentclass" *')
    assert pattern_accepts(main, "\\documentclass{article}")
    assert pattern_accepts(main, "\\documentclass")
    assert not pattern_accepts(main, " \\documentclass")


def test_suffix_patterns():
    derived = acceptor('* ".dvi" + * ".pdf" + * ".aux"')
    assert derived.suffixes == frozenset([".dvi", ".pdf", ".aux"])
    assert pattern_accepts(derived, "report.pdf")
    assert pattern_accepts(derived, ".aux")
    assert not pattern_accepts(derived, "report.tex")
    assert pattern_equivalent(derived, compile_pattern(parse_regex('* (".dvi" + ".pdf" + ".aux")')))


def test_suffix_fast_path_products():
    tex = compile_pattern(suffix(".tex"))
    x = compile_pattern(suffix("x"))
    assert pattern_equivalent(pattern_boolean("and", tex, x), tex)
    assert pattern_empty(pattern_boolean("and", tex, compile_pattern(suffix(".pdf"))))
    assert suffix_set(parse_regex('"a" *')) is None


def test_star_attaches_only_when_written_adjacent():
    star = acceptor('"a"*')
    assert pattern_accepts(star, "")
    assert pattern_accepts(star, "aaa")
    assert not pattern_accepts(star, "ab")
    anything_after = acceptor('"a" *')
    assert pattern_accepts(anything_after, "ab")
    assert not pattern_accepts(anything_after, "")


def test_named_patterns_and_groups():
    ab = acceptor('(pair)* "c"', pair='"a" "b"')
    assert pattern_accepts(ab, "ababc")
    assert pattern_accepts(ab, "c")
    assert not pattern_accepts(ab, "abac")


def test_boolean_operations():
    a = compile_pattern(Literal("a"))
    b = compile_pattern(Literal("b"))
    a_or_b = pattern_boolean("or", a, b)
    assert pattern_accepts(a_or_b, "b")
    assert pattern_empty(pattern_boolean("and", a, b))
    not_a = pattern_boolean("not", a)
    assert pattern_accepts(not_a, "")
    assert pattern_accepts(not_a, "aa")
    assert not pattern_accepts(not_a, "a")
    assert pattern_equivalent(pattern_boolean("not", not_a), a)
    assert pattern_equivalent(pattern_boolean("or", a, not_a), UNIVERSAL)
    assert pattern_equivalent(compile_pattern(AnyString()), UNIVERSAL)
    assert pattern_empty(EMPTY)


def test_equivalence_ignores_how_a_pattern_is_written():
    assert pattern_equivalent(acceptor('"a" + "b"'), acceptor('"b" + "a"'))
    assert pattern_equivalent(acceptor('("a"*)*'), acceptor('"a"*'))
    assert not pattern_equivalent(acceptor('"a"*'), acceptor('"a" "a"*'))


@pytest.mark.parametrize(
    "text,word",
    [
        ('* ".tex"', ".tex"),
        ('"\\documentclass" *', "\\documentclass"),
        ('"b" + "a" "a"', "b"),
        ('"a"*', ""),
        ('"ba" + "ab"', "ab"),
    ],
)
def test_shortest_word(text, word):
    assert shortest_word(acceptor(text)) == word


def test_shortest_word_of_empty_language():
    assert shortest_word(EMPTY) is None


def test_guard_stops_large_products():
    with pytest.raises(ResourceGuardExceeded) as exc:
        compile_pattern(parse_regex('* "a" * "b" * "c" * "d"'), guard=3)
    assert exc.value.limit == 3


REGEXES = ['"a"*', '* "ab"', '("a" "b")* + "c"', '"a" ("b" + "c")* "a"', '(* "a" *)', '"ab" + "a" "b" "c"*']


@settings(max_examples=200)
@given(st.sampled_from(REGEXES), st.text(alphabet="abcd", max_size=7))
def test_acceptor_agrees_with_reference_semantics(text, word):
    r = parse_regex(text)
    assert pattern_accepts(compile_pattern(r), word) == regex_matches(r, word)


@settings(max_examples=200)
@given(st.sampled_from(REGEXES), st.sampled_from(REGEXES), st.text(alphabet="abc", max_size=6))
def test_products_agree_pointwise(left, right, word):
    x, y = acceptor(left), acceptor(right)
    assert pattern_accepts(pattern_boolean("and", x, y), word) == (pattern_accepts(x, word) and pattern_accepts(y, word))
    assert pattern_accepts(pattern_boolean("or", x, y), word) == (pattern_accepts(x, word) or pattern_accepts(y, word))
    assert pattern_accepts(pattern_boolean("not", x), word) != pattern_accepts(x, word)
