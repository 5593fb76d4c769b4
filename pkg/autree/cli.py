"""Command-line front end

Exit status is the machine contract: 0 yes/accept, 1 no/reject, 2 error,
3 unknown.
"""
import functools
import logging
import sys
from typing import Optional

import click

from .abstracts import ClassTag
from .auta import auta_empty
from .auta import require_vertical_determinism
from .autc import autc_disjoint
from .autc import autc_empty
from .autc import autc_equivalent
from .autc import autc_inclusion
from .autc import autc_universal
from .autc import check_confluent
from .autc import horizontal_atoms
from .autp import EmptinessStatus
from .autp import autp_determinize
from .autp import autp_empty
from .config import configure
from .config import load_config
from .core import Aut
from .core import Decision
from .core import accepts
from .exceptions import AutreeError
from .exceptions import PreconditionError
from .oracle import EnumConfig
from .oracle import bounded_decide
from .oracle import bounded_search
from .oracle import brute_membership
from .oracle import corpus_labels
from .ordered import PROBLEMS
from .ordered import auto_decide
from .ordered import check_vertical_determinism
from .ordered import reorder_filters
from .schema import read_schema
from .schema import schema_to_json
from .tree import tree_from_json
from .tree import tree_to_json

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3

HARDNESS = {
    (ClassTag.AUTP, "universal"): "PSPACE-hard",
    (ClassTag.AUTP, "disjoint"): "PSPACE-hard",
    (ClassTag.AUTP, "included"): "PSPACE-hard",
    (ClassTag.AUTP, "equivalent"): "PSPACE-hard",
    (ClassTag.AUTA, "universal"): "PSPACE-hard",
    (ClassTag.AUTA, "disjoint"): "coNP-complete",
    (ClassTag.AUTA, "included"): "PSPACE-hard",
    (ClassTag.AUTA, "equivalent"): "PSPACE-hard",
}

# trees up to this many nodes back the --oracle cross-check of exact answers
ORACLE_NODES = 4


def reports_errors(func):
    """Turn library errors into exit status 2 with the message on stderr"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AutreeError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)

    return wrapper


def _exit(answer: Optional[bool]) -> None:
    sys.exit(EXIT_UNKNOWN if answer is None else EXIT_YES if answer else EXIT_NO)


@click.group()
@click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None, help="JSON settings file (# comments allowed)")
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level")
def main(config_file: Optional[str], verbose: bool):
    """Validate data trees against automata schemas and decide questions about schemas"""
    config = load_config(config_file) if config_file else configure()
    level = "DEBUG" if verbose else config["logging"]["level"]
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.WARNING), format=config["logging"]["format"])


@main.command()
@click.argument("schema", type=click.Path(exists=True, dir_okay=False))
@click.argument("tree", type=click.Path(exists=True, dir_okay=False))
@click.option("--oracle", is_flag=True, help="Cross-check against brute-force evaluation")
@click.option("--trust-confluent", is_flag=True, help="Skip the confluence check of autc schemas")
@reports_errors
def validate(schema: str, tree: str, oracle: bool, trust_confluent: bool):
    """Check whether TREE (JSON) is accepted by SCHEMA"""
    A = read_schema(schema, trust_confluent)
    with open(tree, "rb") as f:
        t = tree_from_json(f.read())
    accepted = accepts(A, t)
    if oracle and brute_membership(A, t) != accepted:
        click.echo("error: brute-force evaluation disagrees", err=True)
        sys.exit(EXIT_ERROR)
    click.echo("accepted" if accepted else "rejected")
    _exit(accepted)


def _exact(problem: str, A: Aut, B: Optional[Aut], budget: Optional[int], assume_vdet: bool) -> Decision:
    if A.tag is ClassTag.AUTP:
        result = autp_empty(A)
        answer = {EmptinessStatus.EMPTY: True, EmptinessStatus.NONEMPTY: False}.get(result.status)
        return Decision(answer, result.witness)
    if A.tag is ClassTag.AUTA:
        return Decision(auta_empty(A, assume_vdet=assume_vdet))
    if A.tag is ClassTag.AUTO:
        return auto_decide(problem, A, B, assume_vdet=assume_vdet)
    if problem == "empty":
        return autc_empty(A, budget)
    if problem == "universal":
        return autc_universal(A, budget)
    if problem == "disjoint":
        return autc_disjoint(A, B, budget)
    if problem == "included":
        return autc_inclusion(A, B, budget)
    return autc_equivalent(A, B, budget)


def _cross_check(problem: str, A: Aut, B: Optional[Aut], decision: Decision) -> bool:
    """False when brute force contradicts an exact answer"""
    if decision.witness is not None:
        in_a = accepts(A, decision.witness)
        in_b = accepts(B, decision.witness) if B is not None else False
        return {
            "empty": in_a,
            "universal": not in_a,
            "disjoint": in_a and in_b,
            "included": in_a and not in_b,
            "equivalent": in_a != in_b,
        }[problem]
    if decision.answer is not True:
        return True
    labels = tuple(corpus_labels([X for X in (A, B) if X is not None], ("",)))
    refuted = bounded_decide(problem, A, B, EnumConfig(labels=labels, max_nodes=ORACLE_NODES, budget=10**6))
    return refuted.answer is not False


@main.command()
@click.argument("problem", type=click.Choice(PROBLEMS))
@click.argument("schema", type=click.Path(exists=True, dir_okay=False))
@click.argument("schema2", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--oracle", is_flag=True, help="Cross-check exact answers; run gated problems by bounded enumeration")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Bound for searches and enumerations")
@click.option("--trust-confluent", is_flag=True, help="Skip the confluence check of autc schemas")
@click.option("--assume-vdet", is_flag=True, help="Skip the vertical-determinism check")
@reports_errors
def decide(problem: str, schema: str, schema2: Optional[str], oracle: bool, budget: Optional[int], trust_confluent: bool, assume_vdet: bool):
    """Decide PROBLEM (empty, universal, disjoint, included, equivalent) for SCHEMA [SCHEMA2]"""
    binary = problem in ("disjoint", "included", "equivalent")
    if binary != (schema2 is not None):
        raise PreconditionError(f"{problem} takes {'two schemas' if binary else 'one schema'}")
    A = read_schema(schema, trust_confluent)
    B = read_schema(schema2, trust_confluent) if schema2 is not None else None
    if B is not None and B.tag is not A.tag:
        raise PreconditionError(f"cannot compare a {A.tag.value} schema with a {B.tag.value} schema")

    hardness = HARDNESS.get((A.tag, problem))
    if hardness is not None:
        if not (oracle and budget):
            raise PreconditionError(
                f"{problem} for {A.tag.value} automata is {hardness}; "
                "run it as a bounded search with --oracle --budget N"
            )
        decision = bounded_search(problem, A, B, budget)
    else:
        decision = _exact(problem, A, B, budget, assume_vdet)
        if oracle and not _cross_check(problem, A, B, decision):
            click.echo("error: brute-force enumeration disagrees", err=True)
            sys.exit(EXIT_ERROR)

    verdict = {True: "yes", False: "no", None: "unknown"}[decision.answer]
    click.echo(f"{problem}: {verdict}")
    if decision.witness is not None:
        click.echo(tree_to_json(decision.witness))
    _exit(decision.answer)


@main.command()
@click.argument("schema", type=click.Path(exists=True, dir_okay=False))
@click.option("--prune", is_flag=True, help="Keep only state sets found reachable")
@reports_errors
def determinize(schema: str, prune: bool):
    """Print a vertically deterministic schema equivalent to an autp SCHEMA"""
    A = read_schema(schema)
    click.echo(schema_to_json(autp_determinize(A, prune=prune)))


@main.command()
@click.argument("schema", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order", required=True, help="Comma-separated order filter names, least first")
@reports_errors
def reorder(schema: str, order: str):
    """Print an auto SCHEMA rewritten to read its atoms in another order"""
    A = read_schema(schema)
    names = [name.strip() for name in order.split(",") if name.strip()]
    click.echo(schema_to_json(reorder_filters(A, names)))


@main.command()
@click.argument("schema", type=click.Path(exists=True, dir_okay=False))
@click.option("--trust-confluent", is_flag=True, help="Skip the confluence check of autc schemas")
@reports_errors
def check(schema: str, trust_confluent: bool):
    """Report the well-formedness of SCHEMA"""
    A = read_schema(schema, trust_confluent=True)
    click.echo(f"class: {A.tag.value}")
    click.echo(f"states: {len(A.states)}")
    click.echo(f"rules: {len(A.rules)}")
    click.echo(f"size: {A.size()}")
    ok = True
    if A.tag is ClassTag.AUTC and not trust_confluent:
        report = check_confluent(A.horizontal, horizontal_atoms(A))
        click.echo(f"confluence: {report}")
        ok = report.confluent
    elif A.tag is ClassTag.AUTO:
        click.echo(f"atoms: {len(A.alphabet)}")
        try:
            check_vertical_determinism(A)
            click.echo("vertical determinism: ok")
        except PreconditionError as exc:
            click.echo(f"vertical determinism: {exc}")
            ok = False
    elif A.tag is ClassTag.AUTA:
        try:
            require_vertical_determinism(A)
            click.echo("vertical determinism (small trees): ok")
        except PreconditionError as exc:
            click.echo(f"vertical determinism (small trees): {exc}")
            ok = False
    _exit(ok)
