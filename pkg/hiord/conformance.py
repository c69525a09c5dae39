"""
Three-valued conformance of predicates to predicate properties.

A predicate strongly conforms to a property (``Yes``) when the property's
assertions are redundant for it, does not conform (``No``) when they are not
and a witness shows it, and weakly conforms (``Maybe``) otherwise. The
decision compares abstract bounds of the trivial success sets of both sets
of conditions, aligned by argument position.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Optional

from hiord.analysis import AbstractQuery, analyze
from hiord.assertions import (
    TRUE,
    AssertionCondition,
    ConditionKind,
    PredAssertion,
    Provenance,
    positional_head,
    property_conditions,
)
from hiord.conf import settings
from hiord.domains.base import AbsVal, positional_key
from hiord.domains.trivial import triv_sub, triv_sup
from hiord.engine.oracle import find_witness, typed_queries
from hiord.exceptions import ArityMismatch, NameCollision
from hiord.lang.parser import normalize_rule
from hiord.lang.terms import Atom, Rule, Span, atom, format_indicator

__all__ = (
    "TriState",
    "ConditionVerdict",
    "Conformance",
    "ConformanceTable",
    "candidates",
    "conf_calls",
    "conf_success",
    "conf_property",
    "conformance_table",
    "make_wrapper",
    "carrier_names",
    "regtype_repr",
    "with_carriers",
)

logger = logging.getLogger(__name__)


@unique
class TriState(str, Enum):
    YES = "yes"
    NO = "no"
    MAYBE = "maybe"


@dataclass(frozen=True)
class ConditionVerdict:
    """Verdict on one anonymous condition, with the bounds it was decided on."""

    label: str
    verdict: TriState
    basis: tuple = ()
    witness: Optional[object] = None


@dataclass(frozen=True)
class Conformance:
    pred: tuple
    prop: str
    verdict: TriState
    calls: ConditionVerdict
    successes: tuple = ()
    witness: Optional[object] = None
    culprits: tuple = ()
    provenance: Provenance = Provenance.USER


@dataclass(frozen=True)
class ConformanceTable:
    prop: str
    rows: tuple = field(default=())

    def of(self, pred):
        for row in self.rows:
            if row.pred == tuple(pred):
                return row
        return None

    @property
    def minus(self):
        """Predicates that strongly conform."""
        return tuple(r.pred for r in self.rows if r.verdict is TriState.YES)

    @property
    def plus(self):
        """Predicates that weakly or strongly conform."""
        return tuple(r.pred for r in self.rows if r.verdict is not TriState.NO)


def candidates(program, arity):
    """
    User predicates of ``arity`` that may be passed where a property is expected.

    Properties, regular types and library predicates are left out.
    """
    preds = list(program.predicates())
    preds += [p for p in program.assertions if p not in preds]
    return [
        p
        for p in preds
        if p[1] == arity and not program.is_property(p) and not program.is_library(p)
    ]


def _bounds(formula, head, domain, approximate):
    return (
        triv_sub(formula, domain, head.args, approximate),
        triv_sup(formula, domain, head.args, approximate),
    )


def _calls_condition(pred, conditions):
    calls = conditions.calls(pred)
    if calls is None:
        head = positional_head(*pred)
        calls = AssertionCondition(
            f"{format_indicator(pred)}#calls", ConditionKind.CALLS, head, TRUE
        )
    return calls


def _success_conditions(pred, conditions):
    successes = conditions.successes(pred)
    if not successes:
        head = positional_head(*pred)
        successes = (
            AssertionCondition(
                f"{format_indicator(pred)}#success1",
                ConditionKind.SUCCESS,
                head,
                TRUE,
            ),
        )
    return successes


def _witness(pred, prop, program, domain, conditions, value):
    if value.is_bottom:
        return None
    options = []
    for i in range(1, pred[1] + 1):
        leaf = value.get(positional_key(i))
        if leaf == domain.top:
            options.append([None])
        else:
            options.append(domain.enumerate(leaf, settings.HIORD_WITNESS_DEPTH))
    queries = typed_queries(pred, options, settings.HIORD_WITNESS_LIMIT)
    witness, _, tried = find_witness(pred, prop, program, conditions, queries)
    logger.debug(
        "%d queries tried for a witness of %s against %s",
        tried,
        format_indicator(pred),
        prop.name,
    )
    return witness


def conf_calls(pred, prop, program, domain, conditions, approximate=False):
    """
    Conformance of the calls condition of ``pred`` to that of ``prop``.

    ``Yes`` when both calls pre-conditions bound each other, ``No`` when
    their over-approximations are disjoint and a query shows the extra calls
    check failing, ``Maybe`` otherwise.

    Raises
    ------
        UnresolvedProperty: If a formula of ``prop`` uses a predicate property
            without carriers and ``approximate`` is not set.

    """
    calls = _calls_condition(pred, conditions)
    anonymous = property_conditions(prop)[0]
    sub_p, sup_p = _bounds(calls.pre, calls.head, domain, True)
    sub_a, sup_a = _bounds(anonymous.pre, anonymous.head, domain, approximate)
    basis = (
        f"sup(pre) = {sup_p.render()}",
        f"sub(pre) = {sub_p.render()}",
        f"sup(pre@{prop.name}) = {sup_a.render()}",
        f"sub(pre@{prop.name}) = {sub_a.render()}",
    )
    if sup_p.leq(sub_a) and sup_a.leq(sub_p):
        return ConditionVerdict(anonymous.label, TriState.YES, basis)
    if sup_p.meet(sup_a).is_bottom:
        witness = _witness(pred, prop, program, domain, conditions, sub_p)
        if witness is not None:
            return ConditionVerdict(anonymous.label, TriState.NO, basis, witness)
    return ConditionVerdict(anonymous.label, TriState.MAYBE, basis)


def conf_success(pred, prop, anonymous, program, domain, conditions, approximate=False):
    """
    Conformance of the success conditions of ``pred`` to ``anonymous``.

    ``Yes`` when some non-empty set of success conditions of ``pred`` covers
    the anonymous pre-condition and stays within its post-condition. ``No``
    when a success condition applies under the anonymous pre-condition, its
    post-condition is disjoint from the anonymous one and a query shows the
    extra success check failing.
    """
    successes = _success_conditions(pred, conditions)
    sub_pre_a, sup_pre_a = _bounds(anonymous.pre, anonymous.head, domain, approximate)
    sub_post_a, sup_post_a = _bounds(
        anonymous.post, anonymous.head, domain, approximate
    )
    bounds = []
    for condition in successes:
        sub_pre, sup_pre = _bounds(condition.pre, condition.head, domain, True)
        _, sup_post = _bounds(condition.post, condition.head, domain, True)
        bounds.append((sub_pre, sup_pre, sup_post))
    basis = (
        f"sup(pre@{prop.name}) = {sup_pre_a.render()}",
        f"sub(post@{prop.name}) = {sub_post_a.render()}",
        *(
            f"{c.label}: sub(pre) = {b[0].render()}, sup(post) = {b[2].render()}"
            for c, b in zip(successes, bounds)
        ),
    )
    for size in range(1, len(bounds) + 1):
        for subset in itertools.combinations(bounds, size):
            pre = AbsVal.bottom(domain)
            post = AbsVal.bottom(domain)
            for sub_pre, _, sup_post in subset:
                pre, post = pre.join(sub_pre), post.join(sup_post)
            if sup_pre_a.leq(pre) and post.leq(sub_post_a):
                return ConditionVerdict(anonymous.label, TriState.YES, basis)
    for sub_pre, sup_pre, sup_post in bounds:
        if sup_pre.leq(sub_pre_a) and sup_post.meet(sup_post_a).is_bottom:
            witness = _witness(pred, prop, program, domain, conditions, sub_pre)
            if witness is not None:
                return ConditionVerdict(anonymous.label, TriState.NO, basis, witness)
    return ConditionVerdict(anonymous.label, TriState.MAYBE, basis)


def _culprits(pred, prop, program, domain, conditions, anonymous, approximate):
    calls = _calls_condition(pred, conditions)
    _, sup_p = _bounds(calls.pre, calls.head, domain, True)
    sub_post_a, _ = _bounds(anonymous.post, anonymous.head, domain, approximate)
    if sup_p.is_bottom:
        return ()
    result = analyze(
        program, [AbstractQuery(positional_head(*pred), sup_p)], domain
    )
    return tuple(
        rule
        for rule, success in result.clause_successes(pred)
        if not success.is_bottom and not success.leq(sub_post_a)
    )


def conf_property(pred, prop, program, domain, conditions, approximate=False):
    """
    Conformance of ``pred`` to the predicate property ``prop``.

    Args:
    ----
        pred (tuple): Predicate indicator, of the arity of ``prop``.
        prop (hiord.assertions.PredicateProperty): The property.
        program (hiord.lang.program.Program): The program, with the carriers
            known so far.
        domain (hiord.domains.base.Domain): Domain bound to ``program``.
        conditions (hiord.assertions.ConditionSet): Conditions of the program.
        approximate (bool): Read predicate properties without carriers inside
            ``prop`` as relational instead of raising.

    Returns:
    -------
        Conformance: ``Yes`` if every anonymous condition is ``Yes``, ``No``
        if one is ``No``, ``Maybe`` otherwise. Weak verdicts on success
        conditions cite the clauses whose success escapes the anonymous
        post-condition.

    Raises:
    ------
        ArityMismatch: If the arities differ.

    """
    pred = tuple(pred)
    if pred[1] != prop.arity:
        raise ArityMismatch(
            f"{format_indicator(pred)} cannot be checked against "
            f"{prop.name}/{prop.arity}"
        )
    anonymous = property_conditions(prop)
    calls = conf_calls(pred, prop, program, domain, conditions, approximate)
    successes = tuple(
        conf_success(pred, prop, a, program, domain, conditions, approximate)
        for a in anonymous[1:]
    )
    verdicts = [calls.verdict] + [s.verdict for s in successes]
    if all(v is TriState.YES for v in verdicts):
        verdict = TriState.YES
    elif TriState.NO in verdicts:
        verdict = TriState.NO
    else:
        verdict = TriState.MAYBE
    witness = next(
        (c.witness for c in (calls, *successes) if c.witness is not None), None
    )
    culprits = []
    for anon, result in zip(anonymous[1:], successes):
        if result.verdict is not TriState.YES:
            for rule in _culprits(
                pred, prop, program, domain, conditions, anon, approximate
            ):
                if rule not in culprits:
                    culprits.append(rule)
    asserts = program.assertions.get(pred, ())
    provenance = asserts[0].provenance if asserts else Provenance.USER
    return Conformance(
        pred,
        prop.name,
        verdict,
        calls,
        successes,
        witness,
        tuple(culprits),
        provenance,
    )


def conformance_table(prop, program, domain, conditions, approximate=False):
    """Conformance of every candidate predicate to ``prop``."""
    rows = tuple(
        conf_property(pred, prop, program, domain, conditions, approximate)
        for pred in candidates(program, prop.arity)
    )
    return ConformanceTable(prop.name, rows)


def make_wrapper(pred, prop, name, program, span=Span()):
    """
    Wrap ``pred`` into ``name``, asserted with the calls pre-condition of ``prop``.

    Returns
    -------
        tuple: The rule ``name(X1, ..., Xn) :- pred(X1, ..., Xn).`` and its
        assertion.

    Raises
    ------
        ArityMismatch: If ``pred`` and ``prop`` differ in arity.
        NameCollision: If ``name`` is already a predicate of the program.

    """
    pred = tuple(pred)
    if pred[1] != prop.arity:
        raise ArityMismatch(
            f"cannot wrap {format_indicator(pred)} with {prop.name}/{prop.arity}"
        )
    wrapped = (name, pred[1])
    if program.defines(wrapped) or wrapped in program.assertions:
        raise NameCollision(f"{format_indicator(wrapped)} is already defined")
    head = positional_head(*wrapped)
    rule = Rule(head, (Atom(pred[0], head.args),), span)
    assertion = PredAssertion(head, prop.calls_pre, TRUE, span, Provenance.WRAPPER)
    return rule, assertion


def carrier_names(prop_name, program):
    """
    Names of the regular types carrying the conforming predicates of a property.

    Raises
    ------
        NameCollision: If the program defines one of them itself.

    """
    names = (f"{prop_name}_minus", f"{prop_name}_plus")
    for name in names:
        if any(r.indicator == (name, 1) for r in program.rules):
            raise NameCollision(
                f"{name}/1 is reserved for the conforming predicates of {prop_name}"
            )
    return names


def regtype_repr(table, program):
    """
    Regular-type facts listing the strongly and weakly conforming predicates.

    Returns
    -------
        tuple: ``(minus, plus, rules)``.

    """
    minus, plus = carrier_names(table.prop, program)
    rules = [normalize_rule(Atom(minus, (atom(p[0]),)), ()) for p in table.minus]
    rules += [normalize_rule(Atom(plus, (atom(p[0]),)), ()) for p in table.plus]
    return minus, plus, tuple(rules)


def with_carriers(program, tables):
    """Extend ``program`` with the carriers of ``tables``."""
    rules, regtypes, carriers = [], [], {}
    for table in tables:
        minus, plus, facts = regtype_repr(table, program)
        rules.extend(facts)
        regtypes.extend([(minus, 1), (plus, 1)])
        carriers[table.prop] = (minus, plus)
    return program.extend(rules=rules, regtypes=regtypes, carriers=carriers)
