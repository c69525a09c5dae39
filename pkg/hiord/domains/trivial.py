"""
Abstract bounds of trivial success sets.

``triv_sub(F)`` describes only stores for which ``F`` succeeds trivially and
``triv_sup(F)`` every such store. Formulas are read over the variables of a
head; a literal over a local variable, or a property the domain cannot
describe, is relational: it empties its conjunct in ``triv_sub`` and is
ignored by ``triv_sup``.
"""

from __future__ import annotations

from hiord.domains.base import AbsVal, position, positional_key
from hiord.exceptions import UnresolvedProperty
from hiord.lang.terms import Variable

__all__ = (
    "triv_sub",
    "triv_sup",
    "literal_leaf",
    "gamma_contains",
    "enumerate_terms",
)

SUB, SUP = "sub", "sup"


def _key(term, variables):
    if not isinstance(term, Variable):
        return None
    if variables is None:
        return term.name if position(term.name) is not None else None
    for i, var in enumerate(variables, start=1):
        if var == term:
            return positional_key(i)
    return None


def literal_leaf(literal, domain, variables=None, side=SUB, approximate=False):
    """
    ``(key, leaf)`` described by a property literal, ``None`` if relational.

    A predicate-property literal is read through the regular type carrying
    its strongly (``sub``) or weakly (``sup``) conforming predicates.

    Raises
    ------
        UnresolvedProperty: If the predicate property has no carrier yet and
            ``approximate`` is not set.

    """
    program = domain.program
    if literal.pred in program.properties and literal.arity == 1:
        carrier = program.carriers.get(literal.pred)
        if carrier is None:
            if approximate:
                return None
            raise UnresolvedProperty([literal.pred])
        leaf = domain.from_property(carrier[0] if side == SUB else carrier[1])
    elif not literal.args:
        return None
    else:
        leaf = domain.from_property(literal.pred, literal.args[:-1])
    key = _key(literal.args[-1], variables)
    if leaf is None or key is None:
        return None
    return key, leaf


def _conjunct(conjunct, domain, variables, side, approximate):
    value = AbsVal.top(domain)
    for literal in conjunct:
        found = literal_leaf(literal, domain, variables, side, approximate)
        if found is None:
            if side == SUB:
                return AbsVal.bottom(domain)
            continue
        key, leaf = found
        value = value.meet(AbsVal(domain, {key: leaf}))
    return value


def triv_sub(formula, domain, variables=None, approximate=False):
    """
    Under-approximation of the trivial success set of ``formula``.

    Args:
    ----
        formula (hiord.assertions.PropFormula): The formula.
        domain (hiord.domains.base.Domain): Domain bound to the program.
        variables (Sequence): Head variables, read as ``$1..$n``; by default
            the formula is over ``$1..$n`` already.
        approximate (bool): Read unresolved predicate properties as
            relational instead of raising.

    Returns:
    -------
        AbsVal: The bound. Disjuncts are joined only while the join is exact.
        A disjunct whose bound is ``⊥`` (a relational conjunct), or whose join
        with the disjuncts kept so far would be inexact, is left out rather
        than emptying the whole bound. Every kept disjunct lies inside the
        trivial success set and so does their exact join.

    """
    result = None
    for conjunct in formula.disjuncts:
        value = _conjunct(conjunct, domain, variables, SUB, approximate)
        if value.is_bottom:
            continue
        if result is None:
            result = value
        elif result.join_is_exact(value):
            result = result.join(value)
    return AbsVal.bottom(domain) if result is None else result


def triv_sup(formula, domain, variables=None, approximate=False):
    """Over-approximation of the trivial success set of ``formula``."""
    result = AbsVal.bottom(domain)
    for conjunct in formula.disjuncts:
        result = result.join(_conjunct(conjunct, domain, variables, SUP, approximate))
    return result


def gamma_contains(value, store, variables):
    """
    Whether ``store`` projected on ``variables`` lies in ``γ(value)``.

    Keys ``$i`` are read as ``variables[i - 1]``; non-ground values are only
    in ``⊤``.
    """
    if value.is_bottom:
        return False
    for key, leaf in value.env.items():
        pos = position(key)
        if pos is None or pos > len(variables):
            return False
        if not value.domain.contains(leaf, store.resolve(variables[pos - 1])):
            return False
    return True


def enumerate_terms(leaf, depth, domain):
    return domain.enumerate(leaf, depth)
