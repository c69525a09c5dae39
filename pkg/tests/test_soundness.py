import random

import pytest

from hiord.analysis import AbstractQuery, analyze
from hiord.assertions import ConditionSet, Provenance, positional_head
from hiord.conformance import TriState, candidates, conf_property
from hiord.domains import make_domain
from hiord.domains.base import AbsVal
from hiord.domains.trivial import gamma_contains
from hiord.engine.oracle import (
    Redundance,
    redundance_oracle,
    replay_witness,
    typed_queries,
)
from hiord.engine.semantics import derive, trivially_succeeds
from hiord.engine.store import EMPTY
from hiord.lang.parser import parse_query, parse_term
from hiord.lang.terms import Atom, Variable, atom
from hiord.test.utils import program_from_text, small_budgets
from hiord.verifier import Status, hiord_verify

CONSTANTS = ["a", "b", "0", "1", "-1"]
TYPES = ["nat", "int", "atm"]
PREDICATES = 4
FIRST_ORDER = [(f"q{i}", 2) for i in range(1, PREDICATES + 1)]

X, Y = Variable("X"), Variable("Y")


def program_text(rng):
    """
    A small program over ``q1/2 .. q4/2`` with a predicate property ``conv``.

    ``qi`` only calls ``qj`` for ``j < i``, so every derivation is finite.
    """
    members = " ".join(
        f":- pred _(X,Y) : {rng.choice(TYPES)}(X) => {rng.choice(TYPES)}(Y)."
        for _ in range(rng.randint(1, 2))
    )
    lines = [f"conv := {{ {members} }}."]
    for i in range(1, PREDICATES + 1):
        for _ in range(rng.choice([0, 1, 1, 2])):
            lines.append(
                f":- pred q{i}(X,Y) : {rng.choice(TYPES)}(X) => "
                f"{rng.choice(TYPES)}(Y)."
            )
        for _ in range(rng.randint(1, 3)):
            lines.append(f"q{i}({rng.choice(CONSTANTS)}, {rng.choice(CONSTANTS)}).")
        if i > 1 and rng.random() < 0.5:
            j, k = rng.randrange(1, i), rng.randrange(1, i)
            if rng.random() < 0.5:
                lines.append(f"q{i}(X, Y) :- q{j}(X, Y).")
            else:
                lines.append(f"q{i}(X, Y) :- q{j}(X, Z), q{k}(Z, Y).")
    lines.append(
        f":- pred app(P,X,Y) : (conv(P), {rng.choice(TYPES)}(X)) => "
        f"{rng.choice(TYPES)}(Y)."
    )
    lines.append("app(P, X, Y) :- P(X, Y).")
    return "\n".join(lines) + "\n"


@pytest.fixture(params=range(20))
def generated(request):
    return program_from_text(program_text(random.Random(20240601 + request.param)))


def run_time_queries(program):
    arguments = [None, *(parse_term(c) for c in CONSTANTS)]
    names = [atom(name) for name, _ in FIRST_ORDER]
    for pred, asserts in program.assertions.items():
        if not asserts or asserts[0].provenance is Provenance.INFERRED:
            continue
        if pred == ("app", 3):
            options = [names, arguments, [None]]
        else:
            options = [arguments] * pred[1]
        yield from typed_queries(pred, options)


def test_conformance_agrees_with_oracle(generated):
    prop = generated.properties["conv"]
    domain = make_domain(generated)
    conditions = ConditionSet.from_assertions(generated.assertions)
    universe = [parse_term(c) for c in CONSTANTS]
    with small_budgets(depth=60):
        for pred in candidates(generated, 2):
            row = conf_property(pred, prop, generated, domain, conditions)
            if row.verdict is TriState.YES:
                result = redundance_oracle(pred, prop, generated, conditions, universe)
                assert result.verdict is not Redundance.NOT_REDUNDANT
            elif row.verdict is TriState.NO:
                assert row.witness is not None
                replay = replay_witness(row.witness, pred, prop, generated, conditions)
                assert replay.confirmed


def test_analysis_covers_answers(generated):
    domain = make_domain(generated)
    conditions = ConditionSet.from_assertions(generated.assertions)
    entries = [
        AbstractQuery(positional_head(*p), AbsVal.top(domain)) for p in FIRST_ORDER
    ]
    with small_budgets(depth=60):
        result = analyze(generated, entries, domain)
        for pred in FIRST_ORDER:
            success = result.success(pred)
            for constant in CONSTANTS:
                store = EMPTY.unify(X, parse_term(constant))
                answers = derive(
                    (Atom(pred[0], (X, Y)),),
                    generated,
                    store=store,
                    conditions=conditions,
                ).answers
                for answer in answers:
                    bound = store
                    for var, term in answer:
                        bound = bound.unify(var, term)
                    assert gamma_contains(success, bound, (X, Y))


def test_checked_statuses_hold_at_run_time(generated):
    with small_budgets(depth=60):
        verdict = hiord_verify(generated)
        final = verdict.program
        conditions = ConditionSet.from_assertions(final.assertions)
        checked = {s.label for s in verdict.statuses if s.status is Status.CHECKED}
        for query in run_time_queries(final):
            calls = conditions.calls(query.indicator)
            store = EMPTY.unify_all(zip(calls.head.args, query.args))
            if store is None or not trivially_succeeds(calls.pre, store, final):
                continue
            errors = derive((query,), final, conditions=conditions).errors
            assert not checked.intersection(errors)


def test_strong_conformance_implies_weak(generated):
    with small_budgets(depth=60):
        verdict = hiord_verify(generated)
    final = verdict.program
    for table in verdict.tables.values():
        assert set(table.minus) <= set(table.plus)
        minus, plus = final.carriers[table.prop]
        for name, _ in candidates(final, 2):
            if derive(parse_query(f"{minus}({name})"), final).answers:
                assert derive(parse_query(f"{plus}({name})"), final).answers
