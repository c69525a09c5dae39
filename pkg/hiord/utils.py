"""Utility methods shared by the hiord management commands."""

import dataclasses
import itertools
from pathlib import Path

from django.core.management import CommandError

from hiord.assertions import ConditionSet
from hiord.conf import settings
from hiord.domains.base import positional_key
from hiord.exceptions import HiordError, ParseError, ParseErrorList
from hiord.lang.parser import parse_entry, parse_program
from hiord.lang.printer import format_literal
from hiord.lang.terms import Atom, Variable

__all__ = (
    "CORPUS_DIR",
    "USAGE_ERROR",
    "corpus_path",
    "load_program",
    "with_entries",
    "concrete_queries",
    "run_checks",
)

CORPUS_DIR = Path(__file__).resolve().parent / "corpus"

USAGE_ERROR = 3


def corpus_path(name):
    """
    Path of a program, looked up in the bundled corpus if not found as given.

    Raises
    ------
        CommandError: If the file exists in neither place.

    """
    path = Path(name)
    if path.exists():
        return path
    bundled = CORPUS_DIR / path.name
    if bundled.exists():
        return bundled
    raise CommandError(f"No such file: {name}", returncode=USAGE_ERROR)


def load_program(name):
    """
    Read and parse a program file.

    Raises
    ------
        CommandError: With exit code ``3`` on read or syntax errors.

    """
    path = corpus_path(name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CommandError(f"Cannot read {path}: {e}", returncode=USAGE_ERROR) from e
    try:
        return parse_program(text, name=path.name)
    except (ParseError, ParseErrorList) as e:
        raise CommandError(f"{path.name}: {e}", returncode=USAGE_ERROR) from e


def with_entries(program, entries):
    """Replace the entries of ``program`` by the ``--entry`` arguments."""
    if not entries:
        return program
    try:
        parsed = tuple(parse_entry(text) for text in entries)
    except HiordError as e:
        raise CommandError(f"Invalid entry: {e}", returncode=USAGE_ERROR) from e
    return dataclasses.replace(program, entries=parsed)


def concrete_queries(query, domain, depth, limit):
    """
    Concrete queries in the concretization of an abstract query.

    Arguments that are not variables are kept; a variable argument ranges
    over the terms of its leaf up to ``depth``, or stays unbound when its
    leaf is ``⊤``.
    """
    options = []
    for i, arg in enumerate(query.atom.args, 1):
        leaf = query.value.get(positional_key(i))
        if not isinstance(arg, Variable):
            options.append([arg])
        elif leaf == domain.top:
            options.append([arg])
        else:
            options.append(domain.enumerate(leaf, depth))
    queries = (Atom(query.atom.pred, args) for args in itertools.product(*options))
    return list(itertools.islice(queries, limit))


def run_checks(verdict, depth=None):
    """
    Run the entries of a verified program under the semantics with assertions.

    Returns
    -------
        list: ``(query, label)`` for every violated assertion condition.

    """
    from hiord.engine.semantics import derive
    from hiord.verifier import entry_queries

    program = verdict.program
    domain = verdict.analysis.domain
    conditions = ConditionSet.from_assertions(program.assertions)
    budget = settings.HIORD_MAX_DEPTH if depth is None else depth
    violations = []
    for query in entry_queries(program, domain, conditions, True):
        for goal in concrete_queries(
            query, domain, settings.HIORD_WITNESS_DEPTH, settings.HIORD_WITNESS_LIMIT
        ):
            result = derive(goal, program, budget=budget, conditions=conditions)
            for label in dict.fromkeys(result.errors):
                violations.append((format_literal(goal), label))
    return violations
