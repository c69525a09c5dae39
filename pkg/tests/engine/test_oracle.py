from hiord.assertions import ConditionSet
from hiord.engine.oracle import (
    Redundance,
    enumerate_queries,
    extended_conditions,
    find_witness,
    redundance_oracle,
    replay_witness,
    typed_queries,
)
from hiord.lang.parser import parse_term
from hiord.lang.terms import Atom, Variable, atom, integer
from hiord.test.utils import corpus_program


def conditions_of(program):
    return ConditionSet.from_assertions(program.assertions)


class TestQueries:
    def test_typed_queries(self):
        queries = typed_queries(("p", 2), [[atom("a")], [None, integer(1)]])
        assert queries == [
            Atom("p", (atom("a"), Variable("_Q2"))),
            Atom("p", (atom("a"), integer(1))),
        ]

    def test_typed_queries_limit(self):
        options = [[None, atom("a"), atom("b")]] * 2
        assert len(typed_queries(("p", 2), options)) == 9
        assert len(typed_queries(("p", 2), options, limit=4)) == 4

    def test_enumerate_queries_smallest_first(self):
        queries = enumerate_queries(("p", 1), [parse_term("f(a)"), atom("a")])
        assert [q.args[0] for q in queries] == [
            Variable("_Q1"),
            atom("a"),
            parse_term("f(a)"),
        ]

    def test_enumerate_queries_max_size(self):
        queries = enumerate_queries(
            ("p", 1), [parse_term("f(a)"), atom("a")], max_size=1
        )
        assert len(queries) == 2


def test_extended_conditions():
    program = corpus_program("fig1.pl")
    prop = program.properties["p_nat_nat"]
    extended = extended_conditions(("n2n", 2), prop, conditions_of(program))
    assert extended.labels_of(("n2n", 2)) == {
        "n2n/2#calls",
        "n2n/2#success1",
        "n2n/2@p_nat_nat#success1",
    }
    calls = extended.calls(("n2n", 2))
    assert [lit.pred for lit in calls.pre.literals()] == ["nat", "nat"]


def test_redundant():
    program = corpus_program("fig1.pl")
    prop = program.properties["p_nat_nat"]
    universe = [integer(0), integer(1), integer(2)]
    result = redundance_oracle(
        ("n2n", 2), prop, program, conditions_of(program), universe
    )
    assert result.verdict is Redundance.REDUNDANT
    assert result.witness is None
    assert result.queries == 16


def test_not_redundant_at_call():
    program = corpus_program("fig1.pl")
    prop = program.properties["p_nat_nat"]
    conditions = conditions_of(program)
    result = redundance_oracle(
        ("a2n", 2), prop, program, conditions, [atom("a"), integer(0)]
    )
    assert result.verdict is Redundance.NOT_REDUNDANT
    witness = result.witness
    assert witness.query.args[0] == atom("a")
    assert witness.label == "a2n/2#calls"
    assert witness.at_call
    assert replay_witness(witness, ("a2n", 2), prop, program, conditions).confirmed


def test_not_redundant_on_success():
    program = corpus_program("synthetic.pl")
    prop = program.properties["p_nat_nat"]
    conditions = conditions_of(program)
    queries = typed_queries(("zero2atm", 2), [[integer(0)], [None, integer(0)]])
    witness, exhausted, tried = find_witness(
        ("zero2atm", 2), prop, program, conditions, queries
    )
    assert witness.query == Atom("zero2atm", (integer(0), Variable("_Q2")))
    assert witness.label == "zero2atm/2@p_nat_nat#success1"
    assert not witness.at_call
    assert not exhausted
    assert tried == 1
    replay = replay_witness(witness, ("zero2atm", 2), prop, program, conditions)
    assert replay.confirmed


def test_unknown_when_budget_runs_out():
    program = corpus_program("even.pl")
    prop = program.properties["p_nat"]
    result = redundance_oracle(
        ("even", 1),
        prop,
        program,
        conditions_of(program),
        [integer(4)],
        budget=3,
    )
    assert result.verdict is Redundance.UNKNOWN
