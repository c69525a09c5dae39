"""
Assertions, assertion conditions and predicate properties.

A ``pred`` assertion ``:- pred H : Pre => Post.`` yields *assertion
conditions*: a single calls condition per predicate, whose pre-condition is
the disjunction of the pre-conditions of all its assertions, and one success
condition per assertion. Predicate properties are named sets of anonymous
assertions (head ``_(X1, ..., Xn)``) that get instantiated with the predicate
passed as a higher-order argument.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum, unique

from hiord.exceptions import ArityMismatch, MixedPredicateError
from hiord.lang.terms import (
    Atom,
    Span,
    Variable,
    format_indicator,
    fresh_variable,
    substitute,
    term_variables,
)

__all__ = (
    "PropFormula",
    "TRUE",
    "PredAssertion",
    "AnonAssertion",
    "PredicateProperty",
    "ConditionKind",
    "AssertionCondition",
    "ConditionSet",
    "Provenance",
    "assertion_conditions",
    "instantiate_anonymous",
    "instantiate_property",
    "property_conditions",
    "instantiate_condition",
    "positional_head",
    "PLACEHOLDER",
)

PLACEHOLDER = "_"


@dataclass(frozen=True)
class PropFormula:
    """Property formula in disjunctive normal form."""

    disjuncts: tuple[tuple[Atom, ...], ...] = ((),)

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("a property formula has at least one conjunct")

    @property
    def is_true(self):
        return any(not conjunct for conjunct in self.disjuncts)

    def literals(self):
        for conjunct in self.disjuncts:
            yield from conjunct

    def variables(self):
        acc = []
        for literal in self.literals():
            for arg in literal.args:
                term_variables(arg, acc)
        return acc

    def substitute(self, mapping):
        return PropFormula(
            tuple(
                tuple(
                    Atom(lit.pred, tuple(substitute(a, mapping) for a in lit.args))
                    for lit in conjunct
                )
                for conjunct in self.disjuncts
            )
        )

    def conjoin(self, other):
        """Distribute ``self ∧ other`` back into DNF."""
        return PropFormula(
            tuple(a + b for a, b in itertools.product(self.disjuncts, other.disjuncts))
        )

    def disjoin(self, other):
        return PropFormula(self.disjuncts + other.disjuncts)


TRUE = PropFormula()


@unique
class Provenance(str, Enum):
    USER = "user"
    INFERRED = "inferred"
    WRAPPER = "wrapper"


def positional_head(name, arity):
    """Head ``name($1, ..., $n)`` used to line up assertions by argument position."""
    return Atom(name, tuple(Variable(f"${i}") for i in range(1, arity + 1)))


def _rename_onto(head, formulas, args):
    mapping = dict(zip(head.args, args))
    locals_ = []
    for formula in formulas:
        for v in formula.variables():
            if v not in mapping and v not in locals_:
                locals_.append(v)
    mapping.update({v: fresh_variable("_L") for v in locals_})
    return tuple(f.substitute(mapping) for f in formulas)


@dataclass(frozen=True)
class PredAssertion:
    """``:- pred Head : Pre => Post.`` with a head of distinct variables."""

    head: Atom
    pre: PropFormula = TRUE
    post: PropFormula = TRUE
    span: Span = field(default=Span(), compare=False)
    provenance: Provenance = field(default=Provenance.USER, compare=False)

    @property
    def indicator(self):
        return self.head.indicator

    def instantiate(self, args):
        """Return ``(pre, post)`` with the head variables replaced by ``args``."""
        return _rename_onto(self.head, (self.pre, self.post), args)

    def positional(self):
        """The same assertion over the head ``p($1, ..., $n)``."""
        head = positional_head(self.head.pred, self.head.arity)
        pre, post = self.instantiate(head.args)
        return PredAssertion(head, pre, post, self.span, self.provenance)


@dataclass(frozen=True)
class AnonAssertion:
    """Anonymous assertion ``:- pred _(X1, ..., Xn) : Pre => Post.``."""

    params: tuple[Variable, ...]
    pre: PropFormula = TRUE
    post: PropFormula = TRUE

    @property
    def arity(self):
        return len(self.params)

    @property
    def head(self):
        return Atom(PLACEHOLDER, self.params)


@dataclass(frozen=True)
class PredicateProperty:
    name: str
    members: tuple[AnonAssertion, ...]
    span: Span = field(default=Span(), compare=False)

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"predicate property {self.name} has no assertions")
        arities = {m.arity for m in self.members}
        if len(arities) != 1:
            raise ArityMismatch(
                f"predicate property {self.name} mixes arities {sorted(arities)}"
            )

    @property
    def arity(self):
        return self.members[0].arity

    @property
    def calls_pre(self):
        """Pre-condition of the anonymous calls condition, over ``$1..$n``."""
        head = positional_head(PLACEHOLDER, self.arity)
        formula = None
        for member in self.members:
            (pre,) = _rename_onto(member.head, (member.pre,), head.args)
            formula = pre if formula is None else formula.disjoin(pre)
        return formula

    def nested(self, names):
        """Predicate-property names from ``names`` used inside this property."""
        found = set()
        for member in self.members:
            for formula in (member.pre, member.post):
                found.update(
                    lit.pred for lit in formula.literals() if lit.pred in names
                )
        return found


def instantiate_anonymous(anon, pred):
    """
    Replace the placeholder of an anonymous assertion by ``pred``.

    Args:
    ----
        anon (AnonAssertion): The anonymous assertion.
        pred (tuple): Predicate indicator ``(name, arity)``.

    Returns:
    -------
        PredAssertion: The assertion ``a[p]``.

    Raises:
    ------
        ArityMismatch: If the arities differ.

    """
    name, arity = pred
    if arity != anon.arity:
        raise ArityMismatch(
            f"cannot instantiate a {anon.arity}-ary anonymous assertion "
            f"with {format_indicator(pred)}"
        )
    return PredAssertion(Atom(name, anon.params), anon.pre, anon.post)


def instantiate_property(prop, pred):
    """Return ``Π[p]``, one assertion per member, order preserved."""
    if pred[1] != prop.arity:
        raise ArityMismatch(
            f"{format_indicator(pred)} cannot be checked against "
            f"{prop.name}/{prop.arity}"
        )
    return tuple(instantiate_anonymous(member, pred) for member in prop.members)


@unique
class ConditionKind(str, Enum):
    CALLS = "calls"
    SUCCESS = "success"


@dataclass(frozen=True)
class AssertionCondition:
    label: str
    kind: ConditionKind
    head: Atom
    pre: PropFormula
    post: PropFormula = TRUE
    source: PredAssertion = field(default=None, compare=False)

    @property
    def indicator(self):
        return self.head.indicator

    def instantiate(self, args):
        """Return ``(pre, post)`` for a call with arguments ``args``."""
        return _rename_onto(self.head, (self.pre, self.post), args)


def assertion_conditions(pred, asserts, namespace=""):
    """
    Build the assertion conditions of one predicate.

    Args:
    ----
        pred (tuple): Predicate indicator ``(name, arity)``.
        asserts (Sequence[PredAssertion]): Non-empty assertions of ``pred``.
        namespace (str): Label suffix keeping labels injective when the
            conditions of a predicate property are added next to the
            predicate's own.

    Returns:
    -------
        tuple: The calls condition followed by one success condition per
        assertion.

    Raises:
    ------
        MixedPredicateError: If an assertion belongs to another predicate.

    """
    asserts = tuple(asserts)
    if not asserts:
        raise ValueError(f"no assertions for {format_indicator(pred)}")
    for a in asserts:
        if a.indicator != tuple(pred):
            raise MixedPredicateError(
                f"assertion for {format_indicator(a.indicator)} grouped under "
                f"{format_indicator(pred)}"
            )
    prefix = format_indicator(pred) + namespace
    head = asserts[0].head
    calls_pre = None
    successes = []
    for i, a in enumerate(asserts, start=1):
        pre, post = a.instantiate(head.args)
        calls_pre = pre if calls_pre is None else calls_pre.disjoin(pre)
        successes.append(
            AssertionCondition(
                f"{prefix}#success{i}", ConditionKind.SUCCESS, head, pre, post, a
            )
        )
    calls = AssertionCondition(
        f"{prefix}#calls", ConditionKind.CALLS, head, calls_pre, TRUE, asserts[0]
    )
    return (calls, *successes)


def property_conditions(prop):
    """Anonymous assertion conditions of ``prop`` over the placeholder head."""
    asserts = [
        PredAssertion(member.head, member.pre, member.post) for member in prop.members
    ]
    return assertion_conditions((PLACEHOLDER, prop.arity), asserts, f"@{prop.name}")


def instantiate_condition(condition, pred):
    """Replace the placeholder of an anonymous condition by ``pred``."""
    name, arity = pred
    if arity != condition.head.arity:
        raise ArityMismatch(
            f"cannot instantiate {condition.label} with {format_indicator(pred)}"
        )
    anonymous = format_indicator((PLACEHOLDER, arity))
    label = format_indicator(pred) + condition.label[len(anonymous) :]
    return AssertionCondition(
        label,
        condition.kind,
        Atom(name, condition.head.args),
        condition.pre,
        condition.post,
        condition.source,
    )


class ConditionSet:
    """
    Assertion conditions of a program, indexed by predicate and by label.

    Instances are treated as immutable; :meth:`replace` returns a copy.
    """

    def __init__(self, conditions=()):
        self._conditions = tuple(conditions)
        self._by_label = {}
        self._calls = {}
        self._successes = {}
        for c in self._conditions:
            if c.label in self._by_label:
                raise ValueError(f"duplicate assertion label {c.label}")
            self._by_label[c.label] = c
            if c.kind is ConditionKind.CALLS:
                self._calls[c.indicator] = c
            else:
                self._successes.setdefault(c.indicator, []).append(c)

    @classmethod
    def from_assertions(cls, assertions):
        conditions = []
        for pred, asserts in assertions.items():
            if asserts:
                conditions.extend(assertion_conditions(pred, asserts))
        return cls(conditions)

    def __iter__(self):
        return iter(self._conditions)

    def __len__(self):
        return len(self._conditions)

    def __contains__(self, label):
        return label in self._by_label

    def calls(self, pred):
        return self._calls.get(tuple(pred))

    def successes(self, pred):
        return tuple(self._successes.get(tuple(pred), ()))

    def of(self, pred):
        calls = self.calls(pred)
        return ((calls,) if calls else ()) + self.successes(pred)

    def by_label(self, label):
        return self._by_label[label]

    def labels_of(self, pred):
        return {c.label for c in self.of(pred)}

    def replace(self, remove=(), add=()):
        removed = {c.label for c in remove}
        kept = [c for c in self._conditions if c.label not in removed]
        return ConditionSet(kept + list(add))
