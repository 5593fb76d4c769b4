"""Regular-expression patterns over data values, compiled to minimal complete
DFAs whose alphabet is partitioned into contiguous code-point classes
"""
import logging
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from typing import Callable
from typing import Dict
from typing import FrozenSet
from typing import Hashable
from typing import Iterable
from typing import List
from typing import Optional
from typing import Set
from typing import Tuple
from typing import Union

from .config import setting
from .exceptions import ResourceGuardExceeded

logger = logging.getLogger(__name__)

MAX_SYMBOL = 0x10FFFF


@dataclass(frozen=True)
class Literal:
    text: str

    def __str__(self) -> str:
        escaped = self.text.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'


@dataclass(frozen=True)
class AnyString:
    """Every data value (Δ*)"""

    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class Concat:
    parts: Tuple["Regex", ...]

    def __str__(self) -> str:
        if not self.parts:
            return '""'
        return " ".join(f"({part})" if isinstance(part, Alternation) else str(part) for part in self.parts)


@dataclass(frozen=True)
class Alternation:
    options: Tuple["Regex", ...]

    def __str__(self) -> str:
        return " + ".join(f"({option})" if isinstance(option, Alternation) else str(option) for option in self.options)


@dataclass(frozen=True)
class Star:
    inner: "Regex"

    def __str__(self) -> str:
        if isinstance(self.inner, (Literal, Named)):
            return f"{self.inner}*"
        return f"({self.inner})*"


@dataclass(frozen=True)
class Named:
    """A reference to a pattern declared by name in a schema"""

    name: str
    regex: "Regex"

    def __str__(self) -> str:
        return self.name


Regex = Union[Literal, AnyString, Concat, Alternation, Star, Named]


def concat(*parts: Regex) -> Regex:
    flat: List[Regex] = []
    for part in parts:
        flat.extend(part.parts if isinstance(part, Concat) else (part,))
    return flat[0] if len(flat) == 1 else Concat(tuple(flat))


def alternation(*options: Regex) -> Regex:
    return options[0] if len(options) == 1 else Alternation(tuple(options))


def suffix(text: str) -> Regex:
    """The pattern *"text" of values ending in `text`"""
    return Concat((AnyString(), Literal(text)))


def _unwrap(r: Regex) -> Regex:
    while isinstance(r, Named):
        r = r.regex
    return r


def suffix_set(r: Regex) -> Optional[FrozenSet[str]]:
    """Suffixes of a suffix-only pattern (*"d" or a union of those), else None"""
    r = _unwrap(r)
    if isinstance(r, Alternation):
        found: Set[str] = set()
        for option in r.options:
            part = suffix_set(option)
            if part is None:
                return None
            found |= part
        return frozenset(found)
    if isinstance(r, Concat) and len(r.parts) == 2:
        head, tail = (_unwrap(part) for part in r.parts)
        if isinstance(head, AnyString) and isinstance(tail, Literal):
            return frozenset([tail.text])
    return None


class PatternAcceptor:
    """Minimal complete DFA over code-point classes

    `boundaries[i]` is the smallest code point of class i; the last class runs
    up to MAX_SYMBOL. State 0 is initial. Acceptors are kept canonical, so two
    acceptors of the same language compare equal.
    """

    __slots__ = ("boundaries", "delta", "finals", "suffixes")

    def __init__(
        self,
        boundaries: Tuple[int, ...],
        delta: Tuple[Tuple[int, ...], ...],
        finals: FrozenSet[int],
        suffixes: Optional[FrozenSet[str]] = None,
    ):
        self.boundaries = boundaries
        self.delta = delta
        self.finals = finals
        self.suffixes = suffixes

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PatternAcceptor):
            return NotImplemented
        return (self.boundaries, self.delta, self.finals) == (other.boundaries, other.delta, other.finals)

    def __hash__(self) -> int:
        return hash((self.boundaries, self.delta, self.finals))

    def __repr__(self) -> str:
        return f"PatternAcceptor(states={self.num_states}, classes={len(self.boundaries)}, finals={sorted(self.finals)})"

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def classify(self, symbol: int) -> int:
        return bisect_right(self.boundaries, symbol) - 1

    def step(self, state: int, symbol: int) -> int:
        return self.delta[state][self.classify(symbol)]

    def accepts(self, word: str) -> bool:
        state = 0
        for char in word:
            state = self.step(state, ord(char))
        return state in self.finals


def _crawl(
    boundaries: Tuple[int, ...],
    initial: Hashable,
    follow: Callable[[Hashable, int], Hashable],
    final: Callable[[Hashable], bool],
    guard: int,
    suffixes: Optional[FrozenSet[str]] = None,
) -> PatternAcceptor:
    """Explore the reachable part of an implicitly given DFA, then canonicalize"""
    index: Dict[Hashable, int] = {initial: 0}
    keys: List[Hashable] = [initial]
    delta: List[List[int]] = []
    i = 0
    while i < len(keys):
        row = []
        for cls in range(len(boundaries)):
            nxt = follow(keys[i], cls)
            if nxt not in index:
                index[nxt] = len(keys)
                keys.append(nxt)
                if len(keys) > guard:
                    raise ResourceGuardExceeded("pattern acceptor states", guard, len(keys))
            row.append(index[nxt])
        delta.append(row)
        i += 1
    finals = frozenset(n for n, key in enumerate(keys) if final(key))
    return _canonical(boundaries, delta, finals, suffixes)


def _canonical(
    boundaries: Tuple[int, ...],
    delta: List[List[int]],
    finals: FrozenSet[int],
    suffixes: Optional[FrozenSet[str]],
) -> PatternAcceptor:
    n = len(delta)
    classes = len(boundaries)

    # Moore refinement
    block = [1 if s in finals else 0 for s in range(n)]
    count = len(set(block))
    while True:
        signatures = [(block[s],) + tuple(block[delta[s][c]] for c in range(classes)) for s in range(n)]
        ids: Dict[Tuple[int, ...], int] = {}
        refined = [ids.setdefault(sig, len(ids)) for sig in signatures]
        block = refined
        if len(ids) == count:
            break
        count = len(ids)

    rep: Dict[int, int] = {}
    for s in range(n):
        rep.setdefault(block[s], s)
    quotient = {b: [block[delta[s][c]] for c in range(classes)] for b, s in rep.items()}
    quotient_finals = {block[s] for s in finals}

    # merge neighbouring classes that behave alike everywhere
    keep = [0] + [c for c in range(1, classes) if any(row[c] != row[c - 1] for row in quotient.values())]
    merged_boundaries = tuple(boundaries[c] for c in keep)

    order = {block[0]: 0}
    queue = deque([block[0]])
    rows: List[Tuple[int, ...]] = []
    while queue:
        b = queue.popleft()
        for c in keep:
            target = quotient[b][c]
            if target not in order:
                order[target] = len(order)
                queue.append(target)
        rows.append(tuple(order[quotient[b][c]] for c in keep))
    new_finals = frozenset(order[b] for b in quotient_finals if b in order)
    return PatternAcceptor(merged_boundaries, tuple(rows), new_finals, suffixes)


def _boundaries_for(chars: Iterable[str]) -> Tuple[int, ...]:
    points = {0}
    for char in chars:
        code = ord(char)
        points.add(code)
        if code < MAX_SYMBOL:
            points.add(code + 1)
    return tuple(sorted(points))


def _literal_chars(r: Regex) -> Set[str]:
    r = _unwrap(r)
    if isinstance(r, Literal):
        return set(r.text)
    if isinstance(r, Concat):
        return set().union(*(_literal_chars(part) for part in r.parts))
    if isinstance(r, Alternation):
        return set().union(*(_literal_chars(option) for option in r.options))
    if isinstance(r, Star):
        return _literal_chars(r.inner)
    return set()


_ANY = -1


class _Nfa:
    """Thompson construction; edge labels are class indices, _ANY, or None for epsilon"""

    def __init__(self, boundaries: Tuple[int, ...]):
        self.boundaries = boundaries
        self.edges: List[List[Tuple[Optional[int], int]]] = []

    def new_state(self) -> int:
        self.edges.append([])
        return len(self.edges) - 1

    def build(self, r: Regex) -> Tuple[int, int]:
        r = _unwrap(r)
        start = self.new_state()
        if isinstance(r, Literal):
            current = start
            for char in r.text:
                nxt = self.new_state()
                self.edges[current].append((bisect_right(self.boundaries, ord(char)) - 1, nxt))
                current = nxt
            return start, current
        if isinstance(r, AnyString):
            self.edges[start].append((_ANY, start))
            return start, start
        if isinstance(r, Concat):
            current = start
            for part in r.parts:
                s, e = self.build(part)
                self.edges[current].append((None, s))
                current = e
            return start, current
        if isinstance(r, Alternation):
            end = self.new_state()
            for option in r.options:
                s, e = self.build(option)
                self.edges[start].append((None, s))
                self.edges[e].append((None, end))
            return start, end
        if isinstance(r, Star):
            s, e = self.build(r.inner)
            self.edges[start].append((None, s))
            self.edges[e].append((None, start))
            return start, start
        raise TypeError(f"not a regex: {r!r}")

    def closure(self, states: Iterable[int]) -> FrozenSet[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            s = stack.pop()
            for label, t in self.edges[s]:
                if label is None and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def follow(self, key: FrozenSet[int], cls: int) -> FrozenSet[int]:
        return self.closure(t for s in key for label, t in self.edges[s] if label == cls or label == _ANY)


def _suffix_acceptor(suffixes: FrozenSet[str], guard: int) -> PatternAcceptor:
    """Acceptor of values ending in one of `suffixes`; polynomial in their total length"""
    boundaries = _boundaries_for("".join(suffixes))
    prefixes = {word[:i] for word in suffixes for i in range(len(word) + 1)}

    def follow(state: str, cls: int) -> str:
        candidate = state + chr(boundaries[cls])
        for i in range(len(candidate) + 1):
            if candidate[i:] in prefixes:
                return candidate[i:]
        return ""

    def final(state: str) -> bool:
        return any(state.endswith(word) for word in suffixes)

    return _crawl(boundaries, "", follow, final, guard, suffixes)


def compile_pattern(r: Regex, guard: Optional[int] = None) -> PatternAcceptor:
    """Compile a regex into its canonical minimal acceptor"""
    guard = setting("pattern_state_guard", guard)
    suffixes = suffix_set(r)
    if suffixes is not None:
        return _suffix_acceptor(suffixes, guard)

    boundaries = _boundaries_for(_literal_chars(r))
    nfa = _Nfa(boundaries)
    start, end = nfa.build(r)
    return _crawl(boundaries, nfa.closure([start]), nfa.follow, lambda key: end in key, guard)


def pattern_boolean(
    op: str,
    x: PatternAcceptor,
    y: Optional[PatternAcceptor] = None,
    guard: Optional[int] = None,
) -> PatternAcceptor:
    """`and`/`or` product or `not` complement of acceptors"""
    guard = setting("pattern_state_guard", guard)
    if op == "not":
        assert y is None, "complement takes a single operand"
        finals = frozenset(range(x.num_states)) - x.finals
        return _canonical(x.boundaries, [list(row) for row in x.delta], finals, None)

    assert y is not None, f"{op} needs two operands"
    if x.suffixes is not None and y.suffixes is not None:
        if op == "or":
            return _suffix_acceptor(x.suffixes | y.suffixes, guard)
        if op == "and":
            both = set()
            for u in x.suffixes:
                for v in y.suffixes:
                    if u.endswith(v):
                        both.add(u)
                    elif v.endswith(u):
                        both.add(v)
            return _suffix_acceptor(frozenset(both), guard)

    if op == "and":
        combine = lambda a, b: a and b  # noqa: E731
    elif op == "or":
        combine = lambda a, b: a or b  # noqa: E731
    else:
        raise ValueError(f"unknown pattern operation {op!r}")

    boundaries = tuple(sorted(set(x.boundaries) | set(y.boundaries)))

    def follow(key: Tuple[int, int], cls: int) -> Tuple[int, int]:
        symbol = boundaries[cls]
        return x.step(key[0], symbol), y.step(key[1], symbol)

    def final(key: Tuple[int, int]) -> bool:
        return combine(key[0] in x.finals, key[1] in y.finals)

    return _crawl(boundaries, (0, 0), follow, final, guard)


def pattern_empty(x: PatternAcceptor) -> bool:
    # canonical acceptors hold reachable states only
    return not x.finals


def pattern_accepts(x: PatternAcceptor, word: str) -> bool:
    return x.accepts(word)


def pattern_equivalent(x: PatternAcceptor, y: PatternAcceptor) -> bool:
    return x == y


def shortest_word(x: PatternAcceptor) -> Optional[str]:
    """Shortest accepted word, ties broken by smallest code point; None if empty"""
    if 0 in x.finals:
        return ""
    parent: Dict[int, Tuple[int, int]] = {0: (-1, -1)}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for cls, target in enumerate(x.delta[s]):
            if target in parent:
                continue
            parent[target] = (s, x.boundaries[cls])
            if target in x.finals:
                chars = []
                node = target
                while node != 0:
                    node, symbol = parent[node]
                    chars.append(chr(symbol))
                return "".join(reversed(chars))
            queue.append(target)
    return None


UNIVERSAL = _canonical((0,), [[0]], frozenset([0]), frozenset([""]))
EMPTY = _canonical((0,), [[0]], frozenset(), frozenset())
