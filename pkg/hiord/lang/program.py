"""Programs and the renamed-apart definition of an atom."""

from __future__ import annotations

import dataclasses
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from hiord.assertions import PredAssertion, PredicateProperty, PropFormula
from hiord.lang.terms import Atom, Rule, Span, rename_rule

__all__ = ("Entry", "WrapDirective", "Program", "defn")


@dataclass(frozen=True)
class Entry:
    """``:- entry Goal : Pre.``; ``pre`` is ``None`` when omitted."""

    goal: Atom
    pre: Optional[PropFormula] = None
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class WrapDirective:
    """``:- wrap p/N with Π as name.``"""

    pred: tuple[str, int]
    prop: str
    name: str
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class Program:
    """
    A parsed program.

    ``rules`` are the user's rules in source order; ``library`` holds the
    prelude properties (``int/1``, ``list/2``, ...) the program does not
    define itself. ``carriers`` maps a predicate property to the names of the
    regular types encoding its strongly and weakly conforming predicates, once
    the conformance fixpoint has produced them.
    """

    rules: tuple[Rule, ...] = ()
    props: frozenset = frozenset()
    regtypes: frozenset = frozenset()
    properties: Mapping[str, PredicateProperty] = field(default_factory=dict)
    assertions: Mapping[tuple[str, int], tuple[PredAssertion, ...]] = field(
        default_factory=dict
    )
    entries: tuple[Entry, ...] = ()
    wraps: tuple[WrapDirective, ...] = ()
    library: tuple[Rule, ...] = ()
    library_regtypes: frozenset = frozenset()
    diagnostics: tuple = ()
    carriers: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    name: str = ""

    @cached_property
    def _index(self):
        index = {}
        for rule in self.rules + self.library:
            index.setdefault(rule.indicator, []).append(rule)
        return {k: tuple(v) for k, v in index.items()}

    def clauses(self, pred):
        return self._index.get(tuple(pred), ())

    def defines(self, pred):
        return tuple(pred) in self._index

    def predicates(self):
        """User-defined predicates in order of first definition."""
        seen = []
        for rule in self.rules:
            if rule.indicator not in seen:
                seen.append(rule.indicator)
        return seen

    def predicate_names(self, arity):
        return sorted({name for name, n in self._index if n == arity})

    def is_regtype(self, pred):
        pred = tuple(pred)
        return pred in self.regtypes or pred in self.library_regtypes

    def is_property(self, pred):
        return tuple(pred) in self.props or self.is_regtype(pred)

    def is_library(self, pred):
        return any(r.indicator == tuple(pred) for r in self.library)

    def extend(self, rules=(), regtypes=(), assertions=None, carriers=None, **kw):
        """Copy with extra rules, regtypes, assertions or property carriers."""
        merged = dict(self.assertions)
        for pred, asserts in (assertions or {}).items():
            merged[pred] = tuple(merged.get(pred, ())) + tuple(asserts)
        return dataclasses.replace(
            self,
            rules=self.rules + tuple(rules),
            regtypes=self.regtypes | frozenset(regtypes),
            assertions=merged,
            carriers={**self.carriers, **(carriers or {})},
            **kw,
        )


def defn(literal, program):
    """
    Renamed-apart rules defining the predicate of ``literal``.

    Every call returns fresh variables, disjoint from those of ``literal`` and
    of any earlier call. Undefined predicates have no rules.
    """
    return tuple(rename_rule(rule) for rule in program.clauses(literal.indicator))
