"""
Goal-dependent abstract interpretation of programs.

The analyzer keeps, for every predicate, a table of *variants*: a call
pattern ``λᶜ`` over the positional variables ``$1..$n`` and the success
pattern ``λˢ`` computed for it. Clause bodies are executed over an abstract
state: the Herbrand structure built by unifications is kept concretely, and
every unbound variable carries a domain leaf. The table is iterated globally
until no success pattern grows; successive success patterns are combined by
widening.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from django.core.checks import Warning

from hiord.assertions import PredAssertion, PropFormula, Provenance, positional_head
from hiord.conf import settings
from hiord.domains import make_domain
from hiord.domains.base import AbsVal, position, positional_key
from hiord.engine.semantics import solve_constraint
from hiord.engine.store import EMPTY, evaluate
from hiord.lang.printer import format_literal
from hiord.lang.terms import (
    ArithCmp,
    ArithIs,
    Atom,
    Compound,
    Eq,
    HigherOrderAtom,
    Span,
    Test,
    Variable,
    atom,
    format_indicator,
    integer,
    is_constant,
    term_variables,
)

__all__ = (
    "AbstractQuery",
    "Variant",
    "CallSite",
    "AnalysisResult",
    "Inference",
    "TypeNamer",
    "analyze",
    "resolve_higher_order",
    "head_shape",
    "infer_pred_assertion",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbstractQuery:
    """An entry: ``atom`` called with its arguments described by ``value``."""

    atom: Atom
    value: AbsVal
    span: Span = field(default=Span(), compare=False)


@dataclass(eq=False)
class Variant:
    pred: tuple
    call: AbsVal
    success: AbsVal
    clauses: tuple = ()
    merged: bool = False


@dataclass(frozen=True)
class CallSite:
    """
    A reachable call of ``pred`` with call pattern ``call``.

    ``caller`` is ``None`` for an entry.
    """

    pred: tuple
    call: AbsVal
    caller: Optional[tuple] = None
    span: Span = field(default=Span(), compare=False)
    literal: str = ""
    higher_order: bool = False


class _AState:
    """Concrete store plus a leaf per unbound variable."""

    __slots__ = ("domain", "store", "leaves")

    def __init__(self, domain, store=EMPTY, leaves=None):
        self.domain = domain
        self.store = store
        self.leaves = leaves or {}

    def abstract(self, term):
        term = self.store.walk(term)
        if isinstance(term, Variable):
            return self.leaves.get(term, self.domain.top)
        if is_constant(term):
            return self.domain.constant(term)
        return self.domain.construct(
            term.functor, [self.abstract(a) for a in term.args]
        )

    def pattern(self, args):
        return AbsVal(
            self.domain,
            {positional_key(i): self.abstract(a) for i, a in enumerate(args, 1)},
        )

    def restrict(self, term, leaf):
        """Meet the value of ``term`` with ``leaf``; ``None`` when empty."""
        domain = self.domain
        leaves = dict(self.leaves)
        stack = [(term, leaf)]
        while stack:
            term, leaf = stack.pop()
            if leaf == domain.top:
                continue
            term = self.store.walk(term)
            if isinstance(term, Variable):
                value = domain.meet(leaves.get(term, domain.top), leaf)
                if value == domain.bottom:
                    return None
                leaves[term] = value
            elif is_constant(term):
                if domain.meet(domain.constant(term), leaf) == domain.bottom:
                    return None
            else:
                kids = domain.deconstruct(leaf, term.functor, term.arity)
                if kids is None:
                    return None
                stack.extend(zip(term.args, kids))
        return _AState(domain, self.store, leaves)

    def unify(self, left, right):
        store = self.store.unify(left, right)
        if store is None:
            return None
        state = _AState(self.domain, store)
        pending = []
        for var, leaf in self.leaves.items():
            if store.walk(var) == var:
                state.leaves[var] = leaf
            else:
                pending.append((var, leaf))
        for var, leaf in pending:
            state = state.restrict(var, leaf)
            if state is None:
                return None
        return state

    def apply(self, args, value):
        """Restrict ``args`` by a value over their positions."""
        if value.is_bottom:
            return None
        state = self
        for key, leaf in value.env.items():
            pos = position(key)
            if pos is None or pos > len(args):
                continue
            state = state.restrict(args[pos - 1], leaf)
            if state is None:
                return None
        return state

    def is_ground(self, term):
        return not term_variables(self.store.resolve(term))


def resolve_higher_order(literal, value, program, domain):
    """
    Predicates a higher-order atom may call.

    Args:
    ----
        literal (HigherOrderAtom): The atom ``X(t1, ..., tn)``.
        value (AbsVal): Value keyed by variable names giving the leaf of ``X``.
        program (hiord.lang.program.Program): The program.
        domain (hiord.domains.base.Domain): The domain of ``value``.

    Returns:
    -------
        set: Names of the ``n``-ary predicates of the program ``X`` may be
        bound to, or ``None`` when the leaf of ``X`` does not limit it to
        predicate names.

    """
    names = domain.predicate_names(value.get(literal.var.name))
    if names is None:
        return None
    return {n for n in names if program.defines((n, len(literal.args)))}


def _builtin_leaf(domain, *names):
    for name in names:
        leaf = domain.from_property(name)
        if leaf is not None:
            return leaf
    return domain.top


class _Analyzer:
    def __init__(self, program, domain):
        self.program = program
        self.domain = domain
        self.table = {}
        self.sites = {}
        self.diagnostics = []
        self.changed = False
        self.int_leaf = _builtin_leaf(domain, "integer", "int")
        self.atom_leaf = _builtin_leaf(domain, "atom", "atm")

    def warn(self, message):
        if all(m.id != message.id or m.msg != message.msg for m in self.diagnostics):
            self.diagnostics.append(message)

    def run(self, entries):
        passes = 0
        while True:
            passes += 1
            self.changed = False
            self.sites = {}
            for entry in entries:
                self._entry(entry)
            for variants in list(self.table.values()):
                for variant in list(variants):
                    self._solve(variant)
            if not self.changed:
                break
        logger.debug(
            "analysis of %s stable after %d passes, %d variants",
            self.program.name or "program",
            passes,
            sum(len(v) for v in self.table.values()),
        )

    def _entry(self, entry):
        state = _AState(self.domain).apply(entry.atom.args, entry.value)
        if state is None:
            # an unsatisfiable entry still gets its triple, with ⊥ success
            variants = self.table.setdefault(entry.atom.indicator, [])
            if not variants:
                bottom = AbsVal.bottom(self.domain)
                variants.append(Variant(entry.atom.indicator, bottom, bottom))
            return
        self._call(state, entry.atom, None, entry.span, False)

    def _variant(self, pred, call):
        variants = self.table.setdefault(pred, [])
        for variant in variants:
            if variant.call == call:
                return variant
        for variant in variants:
            if variant.merged and call.leq(variant.call):
                return variant
        if len(variants) >= settings.HIORD_MAX_VARIANTS:
            target = variants[-1]
            widened = target.call.widen(target.call.join(call))
            target.call, target.merged = widened, True
            self.changed = True
            return target
        variant = Variant(pred, call, AbsVal.bottom(self.domain))
        variants.append(variant)
        self.changed = True
        return variant

    def _solve(self, variant):
        successes = []
        for rule in self.program.clauses(variant.pred):
            successes.append(self._clause(rule, variant.call))
        new = AbsVal.bottom(self.domain)
        for success in successes:
            new = new.join(success)
        variant.clauses = tuple(successes)
        if new.leq(variant.success):
            return
        joined = variant.success.join(new)
        widened = variant.success.widen(joined)
        if widened != joined:
            self.warn(
                Warning(
                    f"widening applied to the success of "
                    f"{format_indicator(variant.pred)}.",
                    id="hiord.W205",
                )
            )
        variant.success = widened
        self.changed = True

    def _clause(self, rule, call):
        state = _AState(self.domain).apply(rule.head.args, call)
        for literal in rule.body:
            if state is None:
                break
            state = self._literal(state, literal, rule)
        if state is None:
            return AbsVal.bottom(self.domain)
        return state.pattern(rule.head.args)

    def _literal(self, state, literal, rule):
        if isinstance(literal, Atom):
            leaf = self._property_leaf(state, literal)
            if leaf is not None:
                return state.restrict(literal.args[-1], leaf)
            return self._call(state, literal, rule.indicator, rule.span, False)
        if isinstance(literal, HigherOrderAtom):
            return self._higher_order(state, literal, rule)
        return self._constraint(state, literal)

    def _property_leaf(self, state, literal):
        program, pred = self.program, literal.indicator
        if not literal.args:
            return None
        if pred[0] in program.properties and pred[1] == 1:
            carrier = program.carriers.get(pred[0])
            if carrier is None:
                return self.domain.top
            return self.domain.from_property(carrier[1])
        if not program.is_property(pred):
            return None
        params = tuple(state.store.resolve(a) for a in literal.args[:-1])
        return self.domain.from_property(literal.pred, params)

    def _call(self, state, literal, caller, span, higher_order):
        call = state.pattern(literal.args)
        site = CallSite(
            literal.indicator,
            call,
            caller,
            span,
            format_literal(literal),
            higher_order,
        )
        self.sites.setdefault((site, span), site)
        variant = self._variant(literal.indicator, call)
        return state.apply(literal.args, variant.success)

    def _higher_order(self, state, literal, rule):
        callee = state.store.walk(literal.var)
        if isinstance(callee, Compound):
            if not isinstance(callee.functor, str):
                return None
            target = Atom(callee.functor, callee.args + literal.args)
            if not self.program.defines(target.indicator):
                return None
            return self._call(state, target, rule.indicator, rule.span, True)
        value = AbsVal(self.domain, {callee.name: state.abstract(callee)})
        names = resolve_higher_order(
            HigherOrderAtom(callee, literal.args), value, self.program, self.domain
        )
        if names is None:
            self.warn(
                Warning(
                    f"{format_literal(literal)} in "
                    f"{format_indicator(rule.indicator)} cannot be resolved.",
                    hint="Its success is not constrained.",
                    id="hiord.W203",
                )
            )
            return state
        success = AbsVal.bottom(self.domain)
        for name in sorted(names):
            bound = state.restrict(callee, self.domain.constant(atom(name)))
            if bound is None:
                continue
            target = Atom(name, literal.args)
            after = self._call(bound, target, rule.indicator, rule.span, True)
            if after is not None:
                success = success.join(after.pattern(literal.args))
        return state.apply(literal.args, success)

    def _constraint(self, state, literal):
        if isinstance(literal, Eq):
            return state.unify(literal.left, literal.right)
        if isinstance(literal, ArithIs):
            value = evaluate(literal.expr, state.store)
            if value is not None:
                return state.unify(literal.target, integer(value))
            for var in term_variables(state.store.resolve(literal.expr)):
                state = state.restrict(var, self.int_leaf)
                if state is None:
                    return None
            return state.restrict(literal.target, self.int_leaf)
        if isinstance(literal, ArithCmp):
            if state.is_ground(literal.left) and state.is_ground(literal.right):
                store = solve_constraint(literal, state.store)
                return None if store is None else state
            for side in (literal.left, literal.right):
                for var in term_variables(state.store.resolve(side)):
                    state = state.restrict(var, self.int_leaf)
                    if state is None:
                        return None
            return state
        if isinstance(literal, Test):
            if literal.name in ("fail", "false"):
                return None
            if all(state.is_ground(a) for a in literal.args):
                store = solve_constraint(literal, state.store)
                return None if store is None else state
            if literal.name in ("integer", "number"):
                return state.restrict(literal.args[0], self.int_leaf)
            if literal.name == "atom":
                return state.restrict(literal.args[0], self.atom_leaf)
            return state
        raise TypeError(f"not a literal: {literal!r}")


class AnalysisResult:
    """Variants and call sites of a stable analysis."""

    def __init__(self, program, domain, table, sites, diagnostics):
        self.program = program
        self.domain = domain
        self.table = {pred: tuple(v) for pred, v in table.items()}
        self.sites = tuple(sites)
        self.diagnostics = tuple(diagnostics)

    def variants(self, pred):
        return self.table.get(tuple(pred), ())

    def reached(self, pred):
        return bool(self.variants(pred))

    def sites_of(self, pred):
        return tuple(s for s in self.sites if s.pred == tuple(pred))

    def calls(self, pred):
        """Join of the call patterns of ``pred``, ``None`` if never called."""
        sites = self.sites_of(pred)
        if not sites:
            return None
        value = AbsVal.bottom(self.domain)
        for site in sites:
            value = value.join(site.call)
        return value

    def success(self, pred):
        value = AbsVal.bottom(self.domain)
        for variant in self.variants(pred):
            value = value.join(variant.success)
        return value

    def clause_successes(self, pred):
        """Per-clause join of the success patterns over all variants."""
        rules = self.program.clauses(pred)
        joined = [AbsVal.bottom(self.domain) for _ in rules]
        for variant in self.variants(pred):
            for i, success in enumerate(variant.clauses):
                joined[i] = joined[i].join(success)
        return tuple(zip(rules, joined))

    def dump(self):
        lines = []
        for pred in sorted(self.table, key=lambda p: (p[0], p[1])):
            for variant in self.table[pred]:
                lines.append(
                    f"{format_indicator(pred)}  call {variant.call.render()}  "
                    f"success {variant.success.render()}"
                )
        return "\n".join(lines)


def analyze(program, entries, domain=None):
    """
    Analyze ``program`` for the abstract queries ``entries``.

    Args:
    ----
        program (hiord.lang.program.Program): The program.
        entries (Sequence[AbstractQuery]): Entry points.
        domain (hiord.domains.base.Domain): Domain bound to ``program``; by
            default the one given by the settings.

    Returns:
    -------
        AnalysisResult: The stable table of variants.

    """
    domain = make_domain(program) if domain is None else domain
    analyzer = _Analyzer(program, domain)
    analyzer.run(tuple(entries))
    return AnalysisResult(
        program,
        domain,
        analyzer.table,
        analyzer.sites.values(),
        analyzer.diagnostics,
    )


def head_shape(rule, domain):
    """
    Value of the head arguments of a normalized rule.

    Only the head unifications the parser moved into the body are applied.
    """
    state = _AState(domain)
    for literal in rule.body:
        if not (
            isinstance(literal, Eq)
            and isinstance(literal.left, Variable)
            and literal.left.name.startswith("_N")
            and literal.left in rule.head.args
        ):
            break
        state = state.unify(literal.left, literal.right)
        if state is None:
            return AbsVal.bottom(domain)
    return state.pattern(rule.head.args)


@dataclass(frozen=True)
class Inference:
    assertion: PredAssertion
    rules: tuple = ()
    regtypes: tuple = ()


class TypeNamer:
    """
    Names the leaves of inferred assertions.

    Leaves with the language of a declared property take its name; the others
    get fresh regular types ``rt1``, ``rt2``, ... whose rules are collected in
    :attr:`rules`.
    """

    def __init__(self, program, domain):
        self.program = program
        self.domain = domain
        self.named = []
        self.rules = []
        self.regtypes = []
        self._counter = 0

    def _fresh(self):
        while True:
            self._counter += 1
            name = f"rt{self._counter}"
            if not any(n == name for n, _ in self.program.predicates()):
                if not self.program.defines((name, 1)):
                    return name

    def name(self, leaf):
        declared = getattr(self.domain, "declared_name", None)
        if declared is None:
            return leaf
        found = declared(leaf)
        if found is not None:
            return found
        for known, name in self.named:
            if known == leaf:
                return name
        name = self._fresh()
        generated, rules = self.domain.rules(leaf, name)
        self.named.append((leaf, name))
        self.rules.extend(rules)
        self.regtypes.extend((n, 1) for n in generated)
        return name


def _formula(value, head, namer):
    literals = []
    for key in sorted(value.env, key=lambda k: position(k) or 0):
        pos = position(key)
        name = namer.name(value.env[key])
        literals.append(Atom(name, (head.args[pos - 1],)))
    return PropFormula((tuple(literals),)) if literals else PropFormula()


def infer_pred_assertion(pred, program, domain, result, namer=None):
    """
    Infer a ``pred`` assertion for a predicate without one.

    Input positions are those called with a non-trivial value; the
    pre-condition describes their head shapes and the post-condition the
    success of the other positions under that pre-condition. A predicate the
    analysis never reached gets a pre-condition on every position and a
    post-condition on every position.

    Returns
    -------
        Inference: The assertion, tagged as inferred, and the regular types
        generated to express it; ``None`` for predicates without clauses.

    """
    rules = program.clauses(pred)
    if not rules:
        return None
    namer = TypeNamer(program, domain) if namer is None else namer
    before_rules, before_types = len(namer.rules), len(namer.regtypes)
    head = positional_head(*pred)
    keys = [positional_key(i) for i in range(1, pred[1] + 1)]
    calls = result.calls(pred)
    if calls is None:
        inputs, outputs = keys, keys
    else:
        inputs = [k for k in keys if calls.get(k) != domain.top]
        outputs = [k for k in keys if k not in inputs]
    shape = AbsVal.bottom(domain)
    for rule in rules:
        shape = shape.join(head_shape(rule, domain))
    pre = shape.restrict(inputs)
    local = analyze(program, [AbstractQuery(head, pre)], domain)
    post = local.success(pred).restrict(outputs)
    assertion = PredAssertion(
        head,
        _formula(pre, head, namer) if not pre.is_bottom else PropFormula(),
        _formula(post, head, namer) if not post.is_bottom else PropFormula(),
        provenance=Provenance.INFERRED,
    )
    logger.debug("inferred for %s: pre %s, post %s", pred, pre.render(), post.render())
    return Inference(
        assertion,
        tuple(namer.rules[before_rules:]),
        tuple(namer.regtypes[before_types:]),
    )
