"""
Operational semantics, plain and with assertions.

Both semantics reduce the leftmost literal of a state. The semantics with
assertions checks the calls condition of a predicate when an atom is reduced
and pushes a check literal per applicable success condition after the body;
a state with an error label is final.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Optional

from hiord.conf import settings
from hiord.engine.store import (
    EMPTY,
    Store,
    compare_terms,
    evaluate,
    variant_mapping,
)
from hiord.lang.program import defn
from hiord.lang.terms import (
    TEST_BUILTINS,
    ArithCmp,
    ArithIs,
    Atom,
    CheckLiteral,
    Compound,
    Eq,
    ExitMarker,
    HigherOrderAtom,
    Test,
    Variable,
    format_indicator,
    integer,
    is_atom,
    is_constant,
    is_integer,
    literal_variables,
    substitute,
    term_variables,
)

__all__ = (
    "State",
    "Outcome",
    "Derivation",
    "Derivations",
    "SuccessContext",
    "solve_constraint",
    "call_target",
    "reduce",
    "reduce_with_assertions",
    "calls_violation",
    "success_checks",
    "check_violation",
    "derive",
    "trivially_succeeds",
    "success_context",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class State:
    """
    A goal and a store; ``err`` holds the label of a violated condition.

    States with an error label are final.
    """

    goal: tuple = ()
    store: Store = field(default=EMPTY, compare=False)
    err: Optional[str] = None

    @property
    def is_final(self):
        return not self.goal or self.err is not None


@unique
class Outcome(str, Enum):
    SUCCESSFUL = "successful"
    FAILED = "failed"
    ERRONEOUS = "erroneous"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class _Node:
    state: State
    depth: int
    parent: Optional["_Node"] = None


@dataclass(frozen=True)
class Derivation:
    """A root-to-leaf path of the derivation tree."""

    node: _Node
    outcome: Outcome

    @property
    def last(self):
        return self.node.state

    @property
    def length(self):
        return self.node.depth

    def states(self):
        states, node = [], self.node
        while node is not None:
            states.append(node.state)
            node = node.parent
        return tuple(reversed(states))


@dataclass(frozen=True)
class Derivations:
    """Leaves of an explored derivation tree and the answers they yield."""

    derivations: tuple[Derivation, ...]
    answers: tuple[tuple, ...]

    @property
    def exhausted(self):
        return any(d.outcome is Outcome.EXHAUSTED for d in self.derivations)

    @property
    def errors(self):
        return tuple(
            d.last.err for d in self.derivations if d.outcome is Outcome.ERRONEOUS
        )

    def of(self, outcome):
        return tuple(d for d in self.derivations if d.outcome is outcome)


def _arith_compare(op, x, y):
    return {
        "<": x < y,
        ">": x > y,
        "=<": x <= y,
        ">=": x >= y,
        "=:=": x == y,
        "=\\=": x != y,
    }[op]


def _test(literal, store):
    name = literal.name
    args = [store.resolve(a) for a in literal.args]
    if name == "true":
        return True
    if name in ("fail", "false"):
        return False
    if name == "\\=":
        return store.unify(*literal.args) is None
    if name in ("==", "\\=="):
        return (args[0] == args[1]) == (name == "==")
    if name in ("@<", "@>", "@=<", "@>="):
        c = compare_terms(*args)
        return {"@<": c < 0, "@>": c > 0, "@=<": c <= 0, "@>=": c >= 0}[name]
    (arg,) = args
    if name in ("integer", "number"):
        return is_integer(arg)
    if name == "atom":
        return is_atom(arg)
    if name == "atomic":
        return is_constant(arg)
    if name == "var":
        return isinstance(arg, Variable)
    if name == "nonvar":
        return not isinstance(arg, Variable)
    if name == "ground":
        return not term_variables(arg)
    raise ValueError(f"unknown builtin {name}/{len(args)}")


def solve_constraint(literal, store):
    """Conjoin a constraint with ``store``; ``None`` if unsatisfiable."""
    if isinstance(literal, Eq):
        return store.unify(literal.left, literal.right)
    if isinstance(literal, ArithIs):
        value = evaluate(literal.expr, store)
        return None if value is None else store.unify(literal.target, integer(value))
    if isinstance(literal, ArithCmp):
        x, y = evaluate(literal.left, store), evaluate(literal.right, store)
        if x is None or y is None or not _arith_compare(literal.op, x, y):
            return None
        return store
    if isinstance(literal, Test):
        return store if _test(literal, store) else None
    raise TypeError(f"not a constraint: {literal!r}")


def call_target(literal, store, program):
    """
    The atom a higher-order atom reduces to, or ``None``.

    ``X(t1, ..., tn)`` reduces to ``p(t1, ..., tn)`` when the store binds
    ``X`` to the name of a predicate ``p/n`` of the program.
    """
    callee = store.walk(literal.var)
    if isinstance(callee, Compound) and isinstance(callee.functor, str):
        args = callee.args + literal.args
        if program.defines((callee.functor, len(args))):
            return Atom(callee.functor, args)
    return None


def _push(literals, rest):
    return tuple(literals) + rest


def _reduce_common(state, program):
    """Rule 1 and rule 3; ``None`` when the leftmost literal is an atom."""
    literal, rest = state.goal[0], state.goal[1:]
    if isinstance(literal, (Eq, ArithIs, ArithCmp, Test)):
        store = solve_constraint(literal, state.store)
        return [] if store is None else [State(rest, store)]
    if isinstance(literal, HigherOrderAtom):
        target = call_target(literal, state.store, program)
        return [] if target is None else [State((target,) + rest, state.store)]
    if isinstance(literal, ExitMarker):
        return [State(rest, state.store)]
    return None


def _unfold(literal, rest, store, program, tail=()):
    successors = []
    for rule in defn(literal, program):
        bound = store.unify_all(zip(rule.head.args, literal.args))
        if bound is not None:
            successors.append(State(_push(rule.body + tuple(tail), rest), bound))
    return successors


def reduce(state, program):
    """
    Successor states under the plain semantics.

    Args:
    ----
        state (State): A state with a non-empty goal.
        program (hiord.lang.program.Program): The program.

    Returns:
    -------
        list: Successor states; empty when the leftmost literal fails.

    """
    successors = _reduce_common(state, program)
    if successors is not None:
        return successors
    literal, rest = state.goal[0], state.goal[1:]
    if isinstance(literal, CheckLiteral):
        return [State(rest, state.store)]
    return _unfold(literal, rest, state.store, program)


def _condition_holds(condition, args, store, program, budget, part="pre"):
    pre, post = condition.instantiate(args)
    formula = pre if part == "pre" else post
    return trivially_succeeds(formula, store, program, budget)


def calls_violation(literal, store, program, conditions, budget=None):
    """Label of the calls condition ``literal`` violates, or ``None``."""
    calls = conditions.calls(literal.indicator)
    if calls is None:
        return None
    if _condition_holds(calls, literal.args, store, program, budget):
        return None
    return calls.label


def success_checks(literal, store, program, conditions, budget=None):
    """Check literals of the success conditions whose pre holds at call time."""
    return tuple(
        CheckLiteral(literal, c.label)
        for c in conditions.successes(literal.indicator)
        if _condition_holds(c, literal.args, store, program, budget)
    )


def check_violation(literal, store, program, conditions, budget=None):
    condition = conditions.by_label(literal.label)
    if _condition_holds(condition, literal.inner.args, store, program, budget, "post"):
        return None
    return literal.label


def reduce_with_assertions(state, program, conditions, budget=None):
    """
    Successor states under the semantics with assertions.

    Args:
    ----
        state (State): A state without error label and with a non-empty goal.
        program (hiord.lang.program.Program): The program.
        conditions (hiord.assertions.ConditionSet): Assertion conditions.
        budget (int): Depth budget of the nested trivial-success checks.

    Returns:
    -------
        list: Successor states. A violated condition yields a single
        successor carrying its label.

    """
    if state.err is not None:
        return []
    successors = _reduce_common(state, program)
    if successors is not None:
        return successors
    literal, rest = state.goal[0], state.goal[1:]
    store = state.store
    if isinstance(literal, CheckLiteral):
        label = check_violation(literal, store, program, conditions, budget)
        return [State(rest if label is None else state.goal, store, label)]
    label = calls_violation(literal, store, program, conditions, budget)
    if label is not None:
        return [State(state.goal, store, label)]
    checks = success_checks(literal, store, program, conditions, budget)
    return _unfold(literal, rest, store, program, checks)


def derive(
    goal,
    program,
    store=EMPTY,
    budget=None,
    conditions=None,
    observer=None,
    variables=None,
):
    """
    Explore the derivation tree of a query depth-first.

    Args:
    ----
        goal: A literal or a sequence of literals.
        program (hiord.lang.program.Program): The program.
        store (Store): Initial store.
        budget (int): Maximal number of reductions per derivation, defaults to
            ``HIORD_MAX_DEPTH``.
        conditions (hiord.assertions.ConditionSet): Use the semantics with
            assertions with these conditions; ``None`` for the plain semantics.
        observer (callable): Called as ``observer(event, call, store, call_id)``
            with ``event`` in ``("call", "exit")`` for every atom reduction and
            every return from one.
        variables (list): Variables answers are projected on, by default those
            of the query.

    Returns:
    -------
        Derivations: The leaves, in depth-first order, and the distinct answers.

    """
    budget = settings.HIORD_MAX_DEPTH if budget is None else budget
    literals = (goal,) if not isinstance(goal, (tuple, list)) else tuple(goal)
    if variables is None:
        variables = []
        for literal in literals:
            literal_variables(literal, variables)
    call_ids = itertools.count(1)
    leaves, answers, seen = [], [], set()
    stack = [_Node(State(literals, store), 0)]
    while stack:
        node = stack.pop()
        state = node.state
        if state.err is not None:
            leaves.append(Derivation(node, Outcome.ERRONEOUS))
            continue
        while state.goal and isinstance(state.goal[0], ExitMarker):
            marker = state.goal[0]
            if observer is not None:
                observer("exit", marker.call, state.store, marker.call_id)
            state = State(state.goal[1:], state.store)
        if not state.goal:
            leaf = _Node(state, node.depth, node)
            leaves.append(Derivation(leaf, Outcome.SUCCESSFUL))
            answer = state.store.project(variables)
            if answer not in seen:
                seen.add(answer)
                answers.append(answer)
            continue
        if node.depth >= budget:
            leaves.append(Derivation(node, Outcome.EXHAUSTED))
            continue
        head = state.goal[0]
        if observer is not None and isinstance(head, Atom):
            call_id = next(call_ids)
            observer("call", head, state.store, call_id)
            state = State(
                (head, ExitMarker(head, call_id)) + state.goal[1:], state.store
            )
        if conditions is None:
            successors = reduce(state, program)
        else:
            successors = reduce_with_assertions(state, program, conditions, budget)
        if not successors:
            leaves.append(Derivation(node, Outcome.FAILED))
            continue
        stack.extend(_Node(s, node.depth + 1, node) for s in reversed(successors))
    return Derivations(tuple(leaves), tuple(answers))


def _watched(literal, store):
    watched = []
    for arg in literal.args:
        term_variables(store.resolve(arg), watched)
    return watched


def _constrains(watched, store):
    targets = set()
    for var in watched:
        value = store.walk(var)
        if not isinstance(value, Variable) or value in targets:
            return True
        targets.add(value)
    return False


def _literal_succeeds(literal, store, program, budget):
    prop = program.properties.get(literal.pred)
    if prop is not None and literal.arity == 1:
        carrier = program.carriers.get(literal.pred)
        if carrier is not None:
            literal = Atom(carrier[1], literal.args)
        else:
            callee = store.resolve(literal.args[0])
            return is_atom(callee) and program.defines((callee.functor, prop.arity))
    if TEST_BUILTINS.get(literal.pred) == literal.arity:
        return solve_constraint(Test(literal.pred, literal.args), store) is not None
    watched = _watched(literal, store)
    stack = [(State((literal,), store), 0)]
    exhausted = False
    while stack:
        state, depth = stack.pop()
        if _constrains(watched, state.store):
            continue
        if not state.goal:
            return True
        if depth >= budget:
            exhausted = True
            continue
        stack.extend((s, depth + 1) for s in reversed(reduce(state, program)))
    if exhausted:
        logger.warning(
            "budget of %d exhausted deciding %s; assuming it does not "
            "succeed trivially",
            budget,
            format_indicator(literal.indicator),
        )
    return False


def trivially_succeeds(formula, store, program, budget=None):
    """
    Whether ``formula`` succeeds for ``store`` without constraining it.

    A conjunct succeeds trivially when each of its literals has an answer
    entailed by the store; the formula when some conjunct does. A literal
    whose every derivation exhausts the budget is taken not to succeed.
    """
    budget = settings.HIORD_MAX_DEPTH if budget is None else budget
    return any(
        all(_literal_succeeds(lit, store, program, budget) for lit in conjunct)
        for conjunct in formula.disjuncts
    )


@dataclass(frozen=True)
class SuccessContext:
    """Projected success stores of an atom; ``complete`` unless the budget hit."""

    stores: tuple[tuple, ...]
    complete: bool = True

    def __bool__(self):
        return bool(self.stores)

    def __len__(self):
        return len(self.stores)


def success_context(atom, store, program, conditions, queries=None, budget=None):
    """
    Success stores of ``atom`` under the semantics with assertions.

    Args:
    ----
        atom (Atom): The call ``L``.
        store (Store): The call store ``θ``.
        program (hiord.lang.program.Program): The program.
        conditions (hiord.assertions.ConditionSet): Assertion conditions.
        queries (Iterable): ``(goal, store)`` pairs; only calls variant to
            ``(atom, store)`` reached from them count. By default the query is
            ``(atom, store)`` itself.
        budget (int): Depth budget.

    Returns:
    -------
        SuccessContext: The projections of the success stores onto the
        variables of ``atom``.

    """
    variables = []
    literal_variables(atom, variables)
    if queries is None:
        result = derive(atom, program, store, budget, conditions, variables=variables)
        return SuccessContext(result.answers, not result.exhausted)

    target = store.resolve(Compound(atom.pred, atom.args))
    found, seen, complete = [], set(), True
    for goal, query_store in queries:
        pending = {}

        def observe(event, call, at, call_id, pending=pending):
            if call.indicator != atom.indicator:
                return
            if event == "call":
                called = at.resolve(Compound(call.pred, call.args))
                renaming = variant_mapping(called, target)
                if renaming is not None:
                    pending[call_id] = (call, renaming)
            elif call_id in pending:
                call, renaming = pending.pop(call_id)
                exited = at.resolve(Compound(call.pred, call.args))
                exit_term = substitute(exited, renaming)
                answer = store.unify(Compound(atom.pred, atom.args), exit_term)
                projection = answer.project(variables)
                if projection not in seen:
                    seen.add(projection)
                    found.append(projection)

        result = derive(goal, program, query_store, budget, conditions, observe)
        complete = complete and not result.exhausted
    return SuccessContext(tuple(found), complete)
