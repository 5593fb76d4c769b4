"""Schema files: versioned JSON documents describing one automaton

Structure is checked with jsonschema first; names, surface syntax and class
well-formedness are checked while the automaton is built.
"""
import json
import logging
from collections import deque
from typing import Any
from typing import Dict
from typing import List
from typing import Mapping
from typing import Set
from typing import Tuple
from typing import Union

from jsonschema import validate
from jsonschema.exceptions import ValidationError

from .abstracts import ClassTag
from .auta import HorizontalAutomaton
from .auta import HTransition
from .auta import check_descriptors
from .autc import require_confluent
from .autc import require_initial_descriptors
from .core import Aut
from .exceptions import PreconditionError
from .exceptions import SchemaError
from .filters import And
from .filters import Filter
from .filters import Not
from .filters import PatternTest
from .ordered import OrderedAlphabet
from .ordered import OrderedDescriptor
from .ordered import OrderedDfa
from .ordered import compile_counting
from .ordered import dfa_from_edges
from .patterns import Alternation
from .patterns import Concat
from .patterns import Named
from .patterns import Regex
from .patterns import Star
from .presburger import formula_counters
from .syntax import parse_filter
from .syntax import parse_formula
from .syntax import parse_regex

logger = logging.getLogger(__name__)

__all__ = ["FORMAT_VERSION", "SCHEMA_DOCUMENT", "load_schema", "read_schema", "dump_schema", "schema_to_json"]

FORMAT_VERSION = 1

NAME_PATTERN = r"^[A-Za-z_][A-Za-z0-9_.'-]*$"

_NAMES = {"type": "array", "items": {"type": "string"}, "uniqueItems": True}

_DFA = {
    "type": "object",
    "required": ["states", "initial", "final", "edges"],
    "additionalProperties": False,
    "properties": {
        "states": {**_NAMES, "minItems": 1},
        "initial": {"type": "string"},
        "final": _NAMES,
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "on", "to"],
                "additionalProperties": False,
                "properties": {"from": {"type": "string"}, "on": {"type": "string"}, "to": {"type": "string"}},
            },
        },
    },
}


def _rules(descriptor: Dict[str, Any]) -> Dict[str, Any]:
    return {"properties": {"rules": {"items": {"properties": {"descriptor": descriptor}}}}}


def _when(*classes: str) -> Dict[str, Any]:
    return {"properties": {"class": {"enum": list(classes)}}}


SCHEMA_DOCUMENT = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "autree schema",
    "type": "object",
    "required": ["format", "class", "states", "final", "rules"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT_VERSION},
        "class": {"enum": ["autp", "auta", "autc", "auto"]},
        "patterns": {
            "type": "object",
            "propertyNames": {"pattern": NAME_PATTERN},
            "additionalProperties": {"type": "string"},
        },
        "states": {**_NAMES, "minItems": 1},
        "final": _NAMES,
        "rules": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["descriptor", "state"],
                "additionalProperties": False,
                "properties": {"descriptor": {}, "state": {"type": "string"}},
            },
        },
        "horizontal": {
            "type": "object",
            "required": ["states", "transitions"],
            "additionalProperties": False,
            "properties": {
                "states": {**_NAMES, "minItems": 1},
                "initial": {"type": "string"},
                "transitions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["from", "filter", "to"],
                        "additionalProperties": False,
                        "properties": {
                            "from": {"type": "string"},
                            "filter": {"type": "string"},
                            "to": {"type": "string"},
                        },
                    },
                },
            },
        },
        "order": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "filter"],
                "additionalProperties": False,
                "properties": {"name": {"type": "string", "pattern": NAME_PATTERN}, "filter": {"type": "string"}},
            },
        },
        "atoms": {"type": "array", "items": {"type": "string"}},
    },
    "allOf": [
        {"if": _when("autp"), "then": _rules({"type": "string"})},
        {
            "if": _when("auta", "autc"),
            "then": {
                "required": ["horizontal"],
                **_rules({"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}),
            },
        },
        {"if": _when("autc"), "then": {"properties": {"horizontal": {"required": ["initial"]}}}},
        {
            "if": _when("auto"),
            "then": {
                "required": ["order"],
                **_rules(
                    {
                        "oneOf": [
                            {
                                "type": "object",
                                "required": ["count"],
                                "additionalProperties": False,
                                "properties": {"count": {"type": "string"}},
                            },
                            {
                                "type": "object",
                                "required": ["dfa"],
                                "additionalProperties": False,
                                "properties": {"dfa": _DFA},
                            },
                        ]
                    }
                ),
            },
            "else": {"not": {"anyOf": [{"required": ["order"]}, {"required": ["atoms"]}]}},
        },
    ],
}

_TAGS = {"autp": ClassTag.AUTP, "auta": ClassTag.AUTA, "autc": ClassTag.AUTC, "auto": ClassTag.AUTO}


def _document(source: Union[str, bytes, Mapping[str, Any]]) -> Dict[str, Any]:
    if isinstance(source, Mapping):
        document = dict(source)
    else:
        if isinstance(source, bytes):
            source = source.decode("utf-8", errors="replace")
        try:
            document = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON: {exc.msg}", exc.pos) from exc
    try:
        validate(document, SCHEMA_DOCUMENT)
    except ValidationError as exc:
        where = "/".join(str(part) for part in exc.absolute_path) or "document"
        raise SchemaError(f"{where}: {exc.message}") from exc
    return document


def _patterns(document: Dict[str, Any]) -> Dict[str, Regex]:
    patterns: Dict[str, Regex] = {}
    for name, text in document.get("patterns", {}).items():
        patterns[name] = parse_regex(text, patterns)
    return patterns


def _horizontal(document: Dict[str, Any], patterns: Dict[str, Regex]) -> HorizontalAutomaton:
    section = document["horizontal"]
    transitions = [HTransition(t["from"], parse_filter(t["filter"], patterns), t["to"]) for t in section["transitions"]]
    return HorizontalAutomaton(section["states"], transitions, section.get("initial"))


def _alphabet(document: Dict[str, Any], patterns: Dict[str, Regex]) -> OrderedAlphabet:
    named = [(entry["name"], parse_filter(entry["filter"], patterns)) for entry in document["order"]]
    alphabet = OrderedAlphabet(named, document["states"])
    if "atoms" in document:
        order = [_single_atom(alphabet, text) for text in document["atoms"]]
        alphabet = alphabet.with_order(order)
    return alphabet


def _single_atom(alphabet: OrderedAlphabet, text: str) -> int:
    covered = alphabet.covering(parse_filter(text))
    if len(covered) != 1:
        raise SchemaError(f"atom {text!r} covers {len(covered)} atoms, expected exactly one")
    return covered[0]


def _dfa(section: Dict[str, Any], alphabet: OrderedAlphabet) -> OrderedDfa:
    names = section["states"]
    index = {name: i for i, name in enumerate(names)}
    for name in [section["initial"], *section["final"]]:
        if name not in index:
            raise SchemaError(f"DFA state {name!r} is not declared")
    edges: Dict[Tuple[int, int], int] = {}
    for edge in section["edges"]:
        for name in (edge["from"], edge["to"]):
            if name not in index:
                raise SchemaError(f"DFA state {name!r} is not declared")
        source, target = index[edge["from"]], index[edge["to"]]
        for a in alphabet.covering(parse_filter(edge["on"])):
            if edges.setdefault((source, a), target) != target:
                raise SchemaError(f"DFA state {edge['from']!r} has two targets on atom {alphabet.expression(a)!r}")
    return dfa_from_edges(len(alphabet), len(names), index[section["initial"]], [index[q] for q in section["final"]], edges)


def _ordered_descriptor(descriptor: Dict[str, Any], alphabet: OrderedAlphabet, patterns: Dict[str, Regex]) -> OrderedDescriptor:
    if "dfa" in descriptor:
        return OrderedDescriptor(_dfa(descriptor["dfa"], alphabet))
    named = dict(alphabet.named)

    def resolve(name: str) -> Filter:
        if name not in named:
            raise SchemaError(f"unknown order filter {name!r} in counting constraint")
        return named[name]

    text = descriptor["count"]
    phi = parse_formula(text, patterns, resolve)
    return OrderedDescriptor(compile_counting(phi, alphabet), source=text)


def load_schema(source: Union[str, bytes, Mapping[str, Any]], trust_confluent: bool = False) -> Aut:
    """Build the automaton a schema document describes

    Args:
        source: JSON text or an already decoded document.
        trust_confluent: Skip the confluence check of autc schemas.

    Raises:
        SchemaError: The document is malformed or references unknown names.
        NotConfluentError: An autc horizontal automaton fails the confluence check.
    """
    document = _document(source)
    tag = _TAGS[document["class"]]
    try:
        patterns = _patterns(document)
        states, finals = document["states"], document["final"]
        if tag is ClassTag.AUTP:
            rules = [(parse_formula(rule["descriptor"], patterns), rule["state"]) for rule in document["rules"]]
            A = Aut(tag, states, finals, rules)
        elif tag is ClassTag.AUTO:
            alphabet = _alphabet(document, patterns)
            rules = [(_ordered_descriptor(rule["descriptor"], alphabet, patterns), rule["state"]) for rule in document["rules"]]
            A = Aut(tag, states, finals, rules, alphabet=alphabet)
        else:
            rules = [(tuple(rule["descriptor"]), rule["state"]) for rule in document["rules"]]
            A = Aut(tag, states, finals, rules, horizontal=_horizontal(document, patterns))
            check_descriptors(A)
            if tag is ClassTag.AUTC:
                require_initial_descriptors(A)
    except SchemaError:
        raise
    except PreconditionError as exc:
        raise SchemaError(str(exc)) from exc
    if tag is ClassTag.AUTC and not trust_confluent:
        require_confluent(A)
    logger.info("loaded %s schema: %d states, %d rules", document["class"], len(A.states), len(A.rules))
    return A


def read_schema(path: str, trust_confluent: bool = False) -> Aut:
    try:
        with open(path, "rb") as f:
            content = f.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    return load_schema(content, trust_confluent)


def _regex_names(r: Regex, found: Dict[str, Regex]) -> None:
    if isinstance(r, Named):
        _regex_names(r.regex, found)
        found.setdefault(r.name, r.regex)
    elif isinstance(r, Concat):
        for part in r.parts:
            _regex_names(part, found)
    elif isinstance(r, Alternation):
        for option in r.options:
            _regex_names(option, found)
    elif isinstance(r, Star):
        _regex_names(r.inner, found)


def _filter_names(f: Filter, found: Dict[str, Regex]) -> None:
    if isinstance(f, PatternTest):
        _regex_names(f.regex, found)
    elif isinstance(f, And):
        _filter_names(f.left, found)
        _filter_names(f.right, found)
    elif isinstance(f, Not):
        _filter_names(f.inner, found)


def _live_states(dfa: OrderedDfa) -> Tuple[List[int], Set[int]]:
    """Reachable states worth writing out, and the states that can reach a final one"""
    reachable = {dfa.initial}
    queue = deque([dfa.initial])
    while queue:
        s = queue.popleft()
        for t in dfa.delta[s]:
            if t not in reachable:
                reachable.add(t)
                queue.append(t)
    alive = set(dfa.finals)
    changed = True
    while changed:
        changed = False
        for s in range(dfa.states):
            if s not in alive and any(t in alive for t in dfa.delta[s]):
                alive.add(s)
                changed = True
    return [s for s in sorted(reachable) if s in alive or s == dfa.initial], alive


def _dump_dfa(dfa: OrderedDfa, alphabet: OrderedAlphabet) -> Dict[str, Any]:
    """Edges into dead states are left out; loading completes them with a sink"""
    live, alive = _live_states(dfa)
    names = {s: f"s{i}" for i, s in enumerate(live)}
    edges = []
    for s in live:
        grouped: Dict[int, List[int]] = {}
        for a in alphabet.order:
            t = dfa.delta[s][a]
            if t in alive:
                grouped.setdefault(t, []).append(a)
        for t, letters in grouped.items():
            expressions = [alphabet.expression(a) for a in letters]
            on = expressions[0] if len(expressions) == 1 else " | ".join(f"({e})" for e in expressions)
            edges.append({"from": names[s], "on": on, "to": names[t]})
    return {
        "states": [names[s] for s in live],
        "initial": names[dfa.initial],
        "final": [names[s] for s in live if s in dfa.finals],
        "edges": edges,
    }


def _default_order(alphabet: OrderedAlphabet) -> List[int]:
    slot = {name: i for i, name in enumerate(alphabet.names)}
    return sorted(
        range(len(alphabet)),
        key=lambda a: tuple(0 if alphabet.atoms[a].signs[slot[name]] else 1 for name in alphabet.display),
    )


def dump_schema(A: Aut) -> Dict[str, Any]:
    """The schema document of an automaton; load_schema reads it back"""
    tag = {value: key for key, value in _TAGS.items()}.get(A.tag)
    if tag is None:
        raise PreconditionError(f"{A.tag.value} automata have no schema form")
    named: Dict[str, Regex] = {}
    document: Dict[str, Any] = {"format": FORMAT_VERSION, "class": tag}
    body: Dict[str, Any] = {"states": sorted(A.states), "final": sorted(A.finals)}

    if A.tag is ClassTag.AUTP:
        for rule in A.rules:
            for f in formula_counters(rule.descriptor):
                _filter_names(f, named)
        body["rules"] = [{"descriptor": str(rule.descriptor), "state": rule.target} for rule in A.rules]
    elif A.tag is ClassTag.AUTO:
        alphabet = A.alphabet
        filters = dict(alphabet.named)
        for f in alphabet.filters:
            _filter_names(f, named)
        body["order"] = [{"name": name, "filter": str(filters[name])} for name in alphabet.display]
        if list(alphabet.order) != _default_order(alphabet):
            body["atoms"] = [alphabet.expression(a) for a in alphabet.order]
        rules = []
        for rule in A.rules:
            descriptor = rule.descriptor
            if descriptor.source is not None:
                rules.append({"descriptor": {"count": descriptor.source}, "state": rule.target})
            else:
                rules.append({"descriptor": {"dfa": _dump_dfa(descriptor.dfa, alphabet)}, "state": rule.target})
        body["rules"] = rules
    else:
        H = A.horizontal
        for f in H.filters():
            _filter_names(f, named)
        horizontal: Dict[str, Any] = {"states": list(H.hstates)}
        if H.initial is not None:
            horizontal["initial"] = H.initial
        horizontal["transitions"] = [
            {"from": t.source, "filter": str(t.filter), "to": t.target} for t in H.transitions
        ]
        body["horizontal"] = horizontal
        body["rules"] = [{"descriptor": list(rule.descriptor), "state": rule.target} for rule in A.rules]

    if named:
        document["patterns"] = {name: str(regex) for name, regex in named.items()}
    document.update(body)
    return document


def schema_to_json(A: Aut) -> str:
    return json.dumps(dump_schema(A), indent=2, ensure_ascii=False)
