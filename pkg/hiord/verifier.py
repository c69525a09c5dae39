"""
Verification of programs with predicate properties.

:func:`hiord_verify` runs the whole pipeline: wrappers are added, assertions
are inferred for unannotated predicates that may be passed as arguments, the
conformance tables of all predicate properties are iterated to a fixpoint,
and the program extended with the resulting carriers is analyzed to give a
status to every assertion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum, unique
from pathlib import Path

from django.core.checks import Warning

from hiord.analysis import (
    AbstractQuery,
    TypeNamer,
    analyze,
    infer_pred_assertion,
)
from hiord.assertions import ConditionSet, PropFormula, Provenance, positional_head
from hiord.conf import settings
from hiord.conformance import (
    TriState,
    candidates,
    conformance_table,
    make_wrapper,
    with_carriers,
)
from hiord.domains import make_domain
from hiord.domains.base import AbsVal, positional_key
from hiord.domains.finite import FiniteLattice, load_lattice
from hiord.domains.trivial import triv_sub, triv_sup
from hiord.exceptions import UnknownPropertyError, UnresolvedProperty
from hiord.lang.terms import Variable, format_indicator

__all__ = (
    "Status",
    "AssertionStatus",
    "Membership",
    "Verdict",
    "hiord_verify",
    "check_assertions",
    "entry_queries",
)

logger = logging.getLogger(__name__)


@unique
class Status(str, Enum):
    CHECKED = "checked"
    FALSE = "false"
    CHECK = "check"


@dataclass(frozen=True)
class AssertionStatus:
    label: str
    pred: tuple
    status: Status
    reason: str
    span: object = None
    provenance: Provenance = Provenance.USER


@dataclass(frozen=True)
class Membership:
    """First iteration ``pred`` entered a conformance set of ``prop``."""

    prop: str
    pred: tuple
    strong: bool
    iteration: int


@dataclass
class Verdict:
    program: object
    statuses: tuple = ()
    tables: dict = field(default_factory=dict)
    memberships: tuple = ()
    iterations: int = 0
    inferred: dict = field(default_factory=dict)
    generated: tuple = ()
    diagnostics: tuple = ()
    analysis: object = None

    @property
    def exit_code(self):
        """``1`` if some assertion is false, ``2`` if one stays a check, else ``0``."""
        if any(s.status is Status.FALSE for s in self.statuses):
            return 1
        if any(s.status is Status.CHECK for s in self.statuses):
            return 2
        return 0


def _data_part(formula, program):
    return PropFormula(
        tuple(
            tuple(lit for lit in conjunct if lit.pred not in program.properties)
            for conjunct in formula.disjuncts
        )
    )


def entry_queries(program, domain, conditions, approximate=False):
    """
    Abstract queries the analysis starts from.

    Declared entries are used when the program has some: their pre-condition,
    or by default the first-order part of the callee's calls pre-condition,
    describes the arguments. Otherwise every asserted predicate is an entry,
    called as its calls pre-condition allows.
    """
    queries = []
    if program.entries:
        for entry in program.entries:
            goal = entry.goal
            if entry.pre is not None:
                value = triv_sup(entry.pre, domain, goal.args, approximate)
            else:
                calls = conditions.calls(goal.indicator)
                value = AbsVal.top(domain)
                if calls is not None:
                    value = triv_sup(
                        _data_part(calls.pre, program), domain, calls.head.args, True
                    )
                    value = value.restrict(
                        positional_key(i)
                        for i, a in enumerate(goal.args, 1)
                        if isinstance(a, Variable)
                    )
            queries.append(AbstractQuery(goal, value, entry.span))
        return queries
    for pred, asserts in program.assertions.items():
        if not asserts or asserts[0].provenance is Provenance.INFERRED:
            continue
        calls = conditions.calls(pred)
        value = triv_sup(calls.pre, domain, calls.head.args, approximate)
        queries.append(AbstractQuery(positional_head(*pred), value, asserts[0].span))
    return queries


def _add_wrappers(program):
    for wrap in program.wraps:
        prop = program.properties.get(wrap.prop)
        if prop is None:
            raise UnknownPropertyError(
                f"{wrap.prop} is not a predicate property (wrap at {wrap.span})"
            )
        rule, assertion = make_wrapper(wrap.pred, prop, wrap.name, program, wrap.span)
        program = program.extend(
            rules=[rule], assertions={assertion.indicator: (assertion,)}
        )
    return program


def _infer(program, domain, conditions):
    arities = {prop.arity for prop in program.properties.values()}
    if not arities:
        return program, {}, ()
    entries = entry_queries(program, domain, conditions, True)
    analysis = analyze(program, entries, domain)
    namer = TypeNamer(program, domain)
    inferred = {}
    for arity in sorted(arities):
        for pred in candidates(program, arity):
            if program.assertions.get(pred) or pred in inferred:
                continue
            inference = infer_pred_assertion(pred, program, domain, analysis, namer)
            if inference is not None:
                inferred[pred] = inference.assertion
    extended = program.extend(
        rules=namer.rules,
        regtypes=namer.regtypes,
        assertions={pred: (a,) for pred, a in inferred.items()},
    )
    return extended, inferred, tuple(namer.rules)


def _resolved(prop, program):
    nested = prop.nested(set(program.properties)) - set(program.carriers)
    return not nested


def _fixpoint(base, lattice, diagnostics):
    limit = max(settings.HIORD_FIXPOINT_LIMIT, 1)
    tables, previous, memberships = {}, None, {}
    iteration = 0
    for iteration in range(1, limit + 1):
        program = with_carriers(base, tables.values())
        domain = make_domain(program, lattice)
        conditions = ConditionSet.from_assertions(program.assertions)
        approximate = iteration == limit
        current = {}
        for name, prop in program.properties.items():
            if not approximate and not _resolved(prop, program):
                continue
            try:
                current[name] = conformance_table(
                    prop, program, domain, conditions, approximate
                )
            except UnresolvedProperty as e:
                logger.debug("%s unresolved in iteration %d: %s", name, iteration, e)
        for table in current.values():
            for row in table.rows:
                if row.verdict is TriState.NO:
                    continue
                memberships.setdefault(
                    (table.prop, row.pred, False),
                    Membership(table.prop, row.pred, False, iteration),
                )
                if row.verdict is TriState.YES:
                    memberships.setdefault(
                        (table.prop, row.pred, True),
                        Membership(table.prop, row.pred, True, iteration),
                    )
        key = {n: (t.minus, t.plus) for n, t in current.items()}
        tables = current
        logger.info(
            "conformance iteration %d: %d of %d properties resolved",
            iteration,
            len(current),
            len(program.properties),
        )
        if key == previous and len(current) == len(program.properties):
            return tables, iteration, tuple(memberships.values())
        previous = key
    if base.properties:
        diagnostics.append(
            Warning(
                f"conformance fixpoint stopped after {limit} iterations.",
                hint="Increase HIORD_FIXPOINT_LIMIT; unresolved properties "
                "were approximated.",
                id="hiord.W202",
            )
        )
    return tables, iteration, tuple(memberships.values())


def _bounds(formula, head, domain, approximate):
    return (
        triv_sub(formula, domain, head.args, approximate),
        triv_sup(formula, domain, head.args, approximate),
    )


def _weak_sites(pred, calls, analysis, program, domain, diagnostics):
    for literal in calls.pre.literals():
        carrier = program.carriers.get(literal.pred)
        if carrier is None or literal.arity != 1:
            continue
        if literal.args[0] not in calls.head.args:
            continue
        key = positional_key(calls.head.args.index(literal.args[0]) + 1)
        minus = domain.from_property(carrier[0])
        plus = domain.from_property(carrier[1])
        for site in analysis.sites_of(pred):
            leaf = site.call.get(key)
            if domain.leq(leaf, plus) and not domain.leq(leaf, minus):
                diagnostics.append(
                    Warning(
                        f"{site.literal} passes {domain.render(leaf)}, which only "
                        f"weakly conforms to {literal.pred}.",
                        hint=f"{format_indicator(pred)} at {site.span}",
                        id="hiord.W204",
                    )
                )


def check_assertions(program, domain, conditions, analysis, approximate=False):
    """
    Give a status to the calls and success conditions of asserted predicates.

    A calls condition is ``checked`` when the joined call patterns lie in the
    under-approximation of its pre-condition and ``false`` when a reachable
    call pattern is disjoint from its over-approximation. A success condition
    is ``checked`` when every success pattern whose call may satisfy the
    pre-condition lies in the under-approximation of the post-condition, and
    ``false`` when a call certainly satisfying the pre-condition succeeds only
    outside the post-condition. Unreached conditions are ``checked``.

    Returns
    -------
        tuple: :class:`AssertionStatus` items, inferred assertions excluded.

    """
    statuses = []
    for pred, asserts in program.assertions.items():
        if not asserts or asserts[0].provenance is Provenance.INFERRED:
            continue
        provenance = asserts[0].provenance
        calls = conditions.calls(pred)
        sub, sup = _bounds(calls.pre, calls.head, domain, approximate)
        sites = analysis.sites_of(pred)
        joined = analysis.calls(pred)
        if not sites:
            status, reason = Status.CHECKED, "not reached"
        elif joined.leq(sub):
            status, reason = Status.CHECKED, f"{joined.render()} ⊑ {sub.render()}"
        else:
            status, reason = Status.CHECK, f"{joined.render()} ⋢ {sub.render()}"
            for site in sites:
                if site.call.meet(sup).is_bottom:
                    status = Status.FALSE
                    reason = (
                        f"{site.literal} at {site.span}: "
                        f"{site.call.render()} ⊓ {sup.render()} = ⊥"
                    )
                    break
        statuses.append(
            AssertionStatus(
                calls.label, pred, status, reason, asserts[0].span, provenance
            )
        )
        for condition in conditions.successes(pred):
            sub_pre, sup_pre = _bounds(
                condition.pre, condition.head, domain, approximate
            )
            sub_post, sup_post = _bounds(
                condition.post, condition.head, domain, approximate
            )
            relevant = [
                v
                for v in analysis.variants(pred)
                if not v.call.meet(sup_pre).is_bottom
            ]
            success = AbsVal.bottom(domain)
            for variant in relevant:
                success = success.join(variant.success)
            if not relevant:
                status, reason = Status.CHECKED, "no applicable call"
            elif success.leq(sub_post):
                status = Status.CHECKED
                reason = f"{success.render()} ⊑ {sub_post.render()}"
            else:
                status = Status.CHECK
                reason = f"{success.render()} ⋢ {sub_post.render()}"
                for variant in relevant:
                    if (
                        variant.call.leq(sub_pre)
                        and not variant.success.is_bottom
                        and variant.success.meet(sup_post).is_bottom
                    ):
                        status = Status.FALSE
                        reason = (
                            f"called as {variant.call.render()}, succeeds as "
                            f"{variant.success.render()} ⊓ {sup_post.render()} = ⊥"
                        )
                        break
            span = condition.source.span if condition.source else None
            statuses.append(
                AssertionStatus(condition.label, pred, status, reason, span, provenance)
            )
    return tuple(statuses)


def hiord_verify(program, lattice=None):
    """
    Verify ``program``.

    Args:
    ----
        program (hiord.lang.program.Program): The parsed program.
        lattice: A :class:`~hiord.domains.finite.FiniteLattice` or the path of a
            lattice file; regular types are used by default.

    Returns:
    -------
        Verdict: Assertion statuses, conformance tables and diagnostics.

    Raises:
    ------
        UnknownPropertyError: If a wrap directive names no predicate property.
        NameCollision: If a wrapper or carrier name is taken.
        LatticeError: If the lattice file is invalid.

    """
    lattice = lattice or settings.HIORD_LATTICE_FILE or None
    if lattice is not None and not isinstance(lattice, FiniteLattice):
        lattice = load_lattice(Path(lattice))
    diagnostics = list(program.diagnostics)
    base = _add_wrappers(program)
    domain = make_domain(base, lattice)
    conditions = ConditionSet.from_assertions(base.assertions)
    base, inferred, generated = _infer(base, domain, conditions)
    tables, iterations, memberships = _fixpoint(base, lattice, diagnostics)
    final = with_carriers(base, tables.values())
    domain = make_domain(final, lattice)
    conditions = ConditionSet.from_assertions(final.assertions)
    approximate = len(tables) < len(final.properties)
    analysis = analyze(
        final, entry_queries(final, domain, conditions, approximate), domain
    )
    statuses = check_assertions(final, domain, conditions, analysis, approximate)
    for pred in final.assertions:
        calls = conditions.calls(pred)
        if calls is not None:
            _weak_sites(pred, calls, analysis, final, domain, diagnostics)
    diagnostics.extend(analysis.diagnostics)
    diagnostics.extend(domain.diagnostics)
    unique = []
    for message in diagnostics:
        if all(m.id != message.id or m.msg != message.msg for m in unique):
            unique.append(message)
    verdict = Verdict(
        final,
        statuses,
        tables,
        memberships,
        iterations,
        inferred,
        generated,
        tuple(unique),
        analysis,
    )
    logger.info(
        "verified %s: %d assertions, exit code %d",
        program.name or "program",
        len(statuses),
        verdict.exit_code,
    )
    return verdict
