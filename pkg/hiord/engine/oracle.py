"""
Bounded redundance oracle.

A predicate property is redundant for a predicate when adding its checks to
the predicate's own conditions raises no error that the original conditions
would not raise on the same derivation. The oracle explores both semantics in
lockstep over enumerated queries: the two derivations share every clause
choice and differ only in their check literals and calls checks.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum, unique
from typing import Optional

from hiord.assertions import (
    TRUE,
    AssertionCondition,
    ConditionKind,
    instantiate_condition,
    positional_head,
    property_conditions,
)
from hiord.conf import settings
from hiord.engine.semantics import (
    State,
    _reduce_common,
    calls_violation,
    check_violation,
    success_checks,
)
from hiord.engine.store import EMPTY
from hiord.lang.printer import format_literal, format_term
from hiord.lang.program import defn
from hiord.lang.terms import (
    Atom,
    CheckLiteral,
    Variable,
    format_indicator,
    term_size,
)

__all__ = (
    "Redundance",
    "Witness",
    "OracleResult",
    "Replay",
    "extended_conditions",
    "enumerate_queries",
    "typed_queries",
    "find_witness",
    "redundance_oracle",
    "replay_witness",
)

logger = logging.getLogger(__name__)


@unique
class Redundance(str, Enum):
    REDUNDANT = "redundant"
    NOT_REDUNDANT = "not redundant"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Witness:
    """
    A query on which the extended conditions raise an error the original do not.

    ``steps`` lists the shared reductions leading to the error: the index of
    the chosen clause for atoms, ``None`` for constraints and higher-order
    atoms. ``at_call`` tells whether the error is raised by the calls check of
    the next atom rather than by a check literal.
    """

    query: Atom
    steps: tuple
    label: str
    at_call: bool = False

    def __str__(self):
        return f"{format_literal(self.query)} violates {self.label}"


@dataclass(frozen=True)
class OracleResult:
    verdict: Redundance
    witness: Optional[Witness] = None
    queries: int = 0


@dataclass(frozen=True)
class Replay:
    """Errors raised when replaying a witness under both condition sets."""

    extended_error: Optional[str]
    original_error: Optional[str]

    @property
    def confirmed(self):
        return self.extended_error is not None and self.original_error is None


def extended_conditions(pred, prop, conditions):
    """
    Conditions of ``pred`` strengthened by ``prop``.

    The calls condition of ``pred`` gets the conjunction of its pre-condition
    with the anonymous calls pre-condition; the anonymous success conditions
    are added, instantiated with ``pred``. Other conditions are kept.
    """
    pred = tuple(pred)
    calls = conditions.calls(pred)
    anonymous = property_conditions(prop)
    head = calls.head if calls else positional_head(*pred)
    (pre_a, _) = anonymous[0].instantiate(head.args)
    label = calls.label if calls else f"{format_indicator(pred)}#calls"
    strengthened = AssertionCondition(
        label,
        ConditionKind.CALLS,
        head,
        (calls.pre if calls else TRUE).conjoin(pre_a),
    )
    added = [instantiate_condition(c, pred) for c in anonymous[1:]]
    return conditions.replace((calls,) if calls else (), [strengthened, *added])


def typed_queries(pred, options, limit=None):
    """
    Queries ``p(t1, ..., tn)`` with ``ti`` drawn from ``options[i]``.

    ``None`` in an option list stands for an unbound argument. Queries come
    ordered by total term size, then lexicographically, so the first witness
    found is deterministic; ``limit`` keeps the smallest ones.
    """
    name, _ = pred
    queries = []
    for args in itertools.product(*options):
        args = tuple(
            Variable(f"_Q{i}") if a is None else a for i, a in enumerate(args, 1)
        )
        size = sum(term_size(a) for a in args)
        queries.append((size, tuple(map(format_term, args)), Atom(name, args)))
    queries.sort(key=lambda q: q[:2])
    queries = [q[2] for q in queries]
    return queries if limit is None else queries[:limit]


def enumerate_queries(pred, universe, max_size=None):
    """Queries over ``universe`` plus an unbound argument, smallest first."""
    ordered = sorted(set(universe), key=lambda t: (term_size(t), format_term(t)))
    options = [None, *ordered]
    queries = typed_queries(pred, [options] * pred[1])
    if max_size is None:
        return queries
    return [q for q in queries if sum(term_size(a) for a in q.args) <= max_size]


def _leading_checks(goal, store, program, conditions, budget):
    while goal and isinstance(goal[0], CheckLiteral):
        label = check_violation(goal[0], store, program, conditions, budget)
        if label is not None:
            return goal, label
        goal = goal[1:]
    return goal, None


def _explore(query, program, original, extended, budget):
    """Return ``(witness, exhausted)`` for one query."""
    exhausted = False
    stack = [((query,), (query,), EMPTY, ())]
    while stack:
        goal_a, goal_b, store, steps = stack.pop()
        goal_a, error_a = _leading_checks(goal_a, store, program, original, budget)
        goal_b, error_b = _leading_checks(goal_b, store, program, extended, budget)
        if error_b is not None:
            if error_a is None:
                return Witness(query, steps, error_b), exhausted
            continue
        if error_a is not None or not goal_a:
            continue
        if len(steps) >= budget:
            exhausted = True
            continue
        literal = goal_a[0]
        if not isinstance(literal, Atom):
            successors = _reduce_common(State(goal_a, store), program)
            for successor in successors:
                shared = successor.goal[: len(successor.goal) - len(goal_a) + 1]
                stack.append(
                    (
                        successor.goal,
                        shared + goal_b[1:],
                        successor.store,
                        steps + (None,),
                    )
                )
            continue
        error_a = calls_violation(literal, store, program, original, budget)
        error_b = calls_violation(literal, store, program, extended, budget)
        if error_b is not None:
            if error_a is None:
                return Witness(query, steps, error_b, at_call=True), exhausted
            continue
        if error_a is not None:
            continue
        checks_a = success_checks(literal, store, program, original, budget)
        checks_b = success_checks(literal, store, program, extended, budget)
        successors = []
        for index, rule in enumerate(defn(literal, program)):
            bound = store.unify_all(zip(rule.head.args, literal.args))
            if bound is not None:
                successors.append(
                    (
                        rule.body + checks_a + goal_a[1:],
                        rule.body + checks_b + goal_b[1:],
                        bound,
                        steps + (index,),
                    )
                )
        stack.extend(reversed(successors))
    return None, exhausted


def find_witness(pred, prop, program, conditions, queries, budget=None):
    """
    Search ``queries`` for a witness of non-redundance of ``prop`` for ``pred``.

    Returns
    -------
        tuple: ``(witness, exhausted, tried)``; ``witness`` is ``None`` when no
        query yields one and ``exhausted`` tells whether some derivation hit
        the budget.

    """
    budget = settings.HIORD_MAX_DEPTH if budget is None else budget
    extended = extended_conditions(pred, prop, conditions)
    exhausted, tried = False, 0
    for query in queries:
        tried += 1
        witness, hit = _explore(query, program, conditions, extended, budget)
        exhausted = exhausted or hit
        if witness is not None:
            logger.debug("witness for %s against %s: %s", pred, prop.name, witness)
            return witness, exhausted, tried
    return None, exhausted, tried


def redundance_oracle(
    pred, prop, program, conditions, universe, budget=None, max_size=None
):
    """
    Decide redundance of ``prop`` for ``pred`` on enumerated queries.

    Args:
    ----
        pred (tuple): Predicate indicator.
        prop (hiord.assertions.PredicateProperty): The predicate property.
        program (hiord.lang.program.Program): The program.
        conditions (hiord.assertions.ConditionSet): The conditions ``A``.
        universe (Iterable): Ground terms queries are built from.
        budget (int): Depth budget per derivation.
        max_size (int): Bound on the total size of query arguments.

    Returns:
    -------
        OracleResult: ``NOT_REDUNDANT`` with the first witness, ``UNKNOWN`` when
        the budget was hit without one, ``REDUNDANT`` otherwise.

    """
    queries = enumerate_queries(pred, universe, max_size)
    witness, exhausted, tried = find_witness(
        pred, prop, program, conditions, queries, budget
    )
    if witness is not None:
        return OracleResult(Redundance.NOT_REDUNDANT, witness, tried)
    if exhausted:
        return OracleResult(Redundance.UNKNOWN, None, tried)
    return OracleResult(Redundance.REDUNDANT, None, tried)


def _replay_side(witness, program, conditions, budget):
    goal, store = (witness.query,), EMPTY
    for step in witness.steps:
        goal, error = _leading_checks(goal, store, program, conditions, budget)
        if error is not None:
            return error
        literal = goal[0]
        if not isinstance(literal, Atom):
            (successor,) = _reduce_common(State(goal, store), program)
            goal, store = successor.goal, successor.store
            continue
        error = calls_violation(literal, store, program, conditions, budget)
        if error is not None:
            return error
        checks = success_checks(literal, store, program, conditions, budget)
        rule = defn(literal, program)[step]
        store = store.unify_all(zip(rule.head.args, literal.args))
        goal = rule.body + checks + goal[1:]
    goal, error = _leading_checks(goal, store, program, conditions, budget)
    if error is None and witness.at_call and goal:
        error = calls_violation(goal[0], store, program, conditions, budget)
    return error


def replay_witness(witness, pred, prop, program, conditions, budget=None):
    """Re-run a witness under the extended and the original conditions."""
    budget = settings.HIORD_MAX_DEPTH if budget is None else budget
    extended = extended_conditions(pred, prop, conditions)
    return Replay(
        _replay_side(witness, program, extended, budget),
        _replay_side(witness, program, conditions, budget),
    )
