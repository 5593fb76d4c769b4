"""Surface syntax of patterns, filters and Presburger formulae

Printing is the `str()` of the syntax trees; the parsers here accept what
those print, plus `|` as sugar for disjunction.

    regex    := alt
    alt      := cat ("+" cat)*
    cat      := post post*
    post     := primary ("*")*          star written right after a literal, name or ")"
    primary  := STRING | "*" | NAME | "(" alt ")"
    filter   := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "!" unary | "pattern" "(" regex ")" | STRING-regex | "(" filter ")" | NAME
    formula  := conj ("|" conj)*
    conj     := neg ("&" neg)*
    neg      := "!" neg | "(" formula ")" | sum OP sum ["mod" NUMBER]
    sum      := term ("+" term)*
    term     := NUMBER | "count" "(" filter ")"
"""
import logging
import re
from typing import Callable
from typing import List
from typing import Mapping
from typing import NamedTuple
from typing import Optional

from .config import setting
from .exceptions import SchemaError
from .filters import And
from .filters import Filter
from .filters import Not
from .filters import PatternTest
from .filters import StateTest
from .filters import disj as filter_disj
from .patterns import AnyString
from .patterns import Literal
from .patterns import Named
from .patterns import Regex
from .patterns import Star
from .patterns import alternation
from .patterns import concat
from .presburger import Congruent
from .presburger import Const
from .presburger import Count
from .presburger import CountingExpr
from .presburger import Negation
from .presburger import PresburgerFormula
from .presburger import Sum
from .presburger import conj as formula_conj
from .presburger import disj as formula_disj
from .presburger import eq
from .presburger import ge
from .presburger import gt
from .presburger import le
from .presburger import lt

logger = logging.getLogger(__name__)

Resolver = Callable[[str], Filter]


class Token(NamedTuple):
    kind: str
    text: str
    position: int
    spaced: bool


_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<set>\{[^{}]*\})
  | (?P<number>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.'-]*)
  | (?P<op><=|>=|==|[()*+&|!<>])
    """,
    re.VERBOSE | re.DOTALL,
)


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body) and body[i + 1] in '"\\':
            out.append(body[i + 1])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    spaced = False
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise SchemaError(f"unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        if kind == "space":
            spaced = True
        else:
            value = match.group()
            if kind == "string":
                value = _unescape(value[1:-1])
            elif kind == "set":
                kind = "name"
            tokens.append(Token(kind, value, position, spaced))
            spaced = False
        position = match.end()
    tokens.append(Token("end", "", len(text), spaced))
    return tokens


class _Parser:
    def __init__(self, text: str, patterns: Mapping[str, Regex], resolve: Optional[Resolver]):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.patterns = patterns
        self.resolve = resolve or StateTest
        self.guard = setting("pattern_state_guard")

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.current
        return token.kind == kind and (text is None or token.text == text)

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            wanted = text or kind
            found = self.current.text or "end of input"
            raise SchemaError(f"expected {wanted!r}, found {found!r} in {self.text!r}", self.current.position)
        return self.advance()

    def finish(self) -> None:
        if not self.at("end"):
            raise SchemaError(f"unexpected {self.current.text!r} in {self.text!r}", self.current.position)

    # patterns

    def regex(self, names: bool = True) -> Regex:
        options = [self.cat(names)]
        while self.at("op", "+"):
            self.advance()
            options.append(self.cat(names))
        return alternation(*options)

    def starts_regex(self, names: bool) -> bool:
        token = self.current
        if token.kind == "string" or (token.kind == "op" and token.text == "*"):
            return True
        return names and (token.kind == "name" or (token.kind == "op" and token.text == "("))

    def cat(self, names: bool) -> Regex:
        parts = [self.post(names)]
        while self.starts_regex(names):
            parts.append(self.post(names))
        return concat(*parts)

    def post(self, names: bool) -> Regex:
        token = self.current
        if token.kind == "string":
            self.advance()
            r: Regex = Literal(token.text)
            starrable = True
        elif token.kind == "op" and token.text == "*":
            self.advance()
            return AnyString()
        elif names and token.kind == "name":
            self.advance()
            if token.text not in self.patterns:
                raise SchemaError(f"unknown pattern {token.text!r}", token.position)
            r = Named(token.text, self.patterns[token.text])
            starrable = True
        elif names and token.kind == "op" and token.text == "(":
            self.advance()
            r = self.regex(names)
            self.expect("op", ")")
            starrable = True
        else:
            raise SchemaError(f"expected a pattern, found {token.text or 'end of input'!r}", token.position)
        while starrable and self.at("op", "*") and not self.current.spaced:
            self.advance()
            r = Star(r)
        return r

    # filters

    def filter(self) -> Filter:
        options = [self.filter_and()]
        while self.at("op", "|"):
            self.advance()
            options.append(self.filter_and())
        return filter_disj(*options)

    def filter_and(self) -> Filter:
        f = self.filter_unary()
        while self.at("op", "&"):
            self.advance()
            f = And(f, self.filter_unary())
        return f

    def filter_unary(self) -> Filter:
        token = self.current
        if token.kind == "op" and token.text == "!":
            self.advance()
            return Not(self.filter_unary())
        if token.kind == "name" and token.text == "pattern" and self.peek().text == "(":
            self.advance()
            self.advance()
            r = self.regex()
            self.expect("op", ")")
            return PatternTest.of(r, self.guard)
        if token.kind == "string" or (token.kind == "op" and token.text == "*"):
            return PatternTest.of(self.regex(names=False), self.guard)
        if token.kind == "op" and token.text == "(":
            self.advance()
            f = self.filter()
            self.expect("op", ")")
            return f
        if token.kind == "name":
            self.advance()
            return self.resolve(token.text)
        raise SchemaError(f"expected a filter, found {token.text or 'end of input'!r}", token.position)

    # formulae

    def formula(self) -> PresburgerFormula:
        options = [self.formula_and()]
        while self.at("op", "|"):
            self.advance()
            options.append(self.formula_and())
        return formula_disj(*options)

    def formula_and(self) -> PresburgerFormula:
        parts = [self.formula_unary()]
        while self.at("op", "&"):
            self.advance()
            parts.append(self.formula_unary())
        return formula_conj(*parts)

    def formula_unary(self) -> PresburgerFormula:
        if self.at("op", "!"):
            self.advance()
            return Negation(self.formula_unary())
        if self.at("op", "("):
            self.advance()
            phi = self.formula()
            self.expect("op", ")")
            return phi
        return self.comparison()

    def comparison(self) -> PresburgerFormula:
        left = self.sum()
        token = self.current
        if token.kind != "op" or token.text not in ("<=", ">=", "==", "<", ">"):
            raise SchemaError(f"expected a comparison, found {token.text or 'end of input'!r}", token.position)
        self.advance()
        right = self.sum()
        if self.at("name", "mod"):
            self.advance()
            modulus = int(self.expect("number").text)
            if token.text != "==":
                raise SchemaError("only == takes a modulus", token.position)
            if modulus < 1:
                raise SchemaError("modulus must be at least 1", token.position)
            return Congruent(left, right, modulus)
        build = {"<=": le, ">=": ge, "==": eq, "<": lt, ">": gt}[token.text]
        return build(left, right)

    def sum(self) -> CountingExpr:
        expr = self.term()
        while self.at("op", "+"):
            self.advance()
            expr = Sum(expr, self.term())
        return expr

    def term(self) -> CountingExpr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Const(int(token.text))
        if token.kind == "name" and token.text == "count":
            self.advance()
            self.expect("op", "(")
            f = self.filter()
            self.expect("op", ")")
            return Count(f)
        raise SchemaError(f"expected a number or count(...), found {token.text or 'end of input'!r}", token.position)


def parse_regex(text: str, patterns: Optional[Mapping[str, Regex]] = None) -> Regex:
    parser = _Parser(text, patterns or {}, None)
    r = parser.regex()
    parser.finish()
    return r


def parse_filter(text: str, patterns: Optional[Mapping[str, Regex]] = None, resolve: Optional[Resolver] = None) -> Filter:
    """Parse a filter; bare names are state tests unless `resolve` says otherwise"""
    parser = _Parser(text, patterns or {}, resolve)
    f = parser.filter()
    parser.finish()
    return f


def parse_formula(
    text: str,
    patterns: Optional[Mapping[str, Regex]] = None,
    resolve: Optional[Resolver] = None,
) -> PresburgerFormula:
    parser = _Parser(text, patterns or {}, resolve)
    phi = parser.formula()
    parser.finish()
    return phi
