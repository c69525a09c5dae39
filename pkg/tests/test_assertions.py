import pytest

from hiord.assertions import (
    TRUE,
    AnonAssertion,
    ConditionKind,
    ConditionSet,
    PredAssertion,
    PredicateProperty,
    PropFormula,
    assertion_conditions,
    instantiate_anonymous,
    instantiate_condition,
    instantiate_property,
    property_conditions,
)
from hiord.exceptions import ArityMismatch, MixedPredicateError
from hiord.lang.parser import parse_query
from hiord.lang.printer import format_formula
from hiord.lang.terms import Atom, Variable
from hiord.test.utils import program_from_text

X, Y = Variable("X"), Variable("Y")


def formula(text):
    return PropFormula((tuple(parse_query(text)),))


@pytest.fixture
def program():
    return program_from_text(
        """
        p_nat_nat := { :- pred _(X, Y) : nat(X) => nat(Y). }.
        two := {
            :- pred _(X, Y) : int(X) => int(Y).
            :- pred _(X, Y) : atm(X) => atm(Y).
        }.
        :- pred p(X, Y) : int(X) => int(Y).
        :- pred p(A, B) : atm(A) => atm(B).
        p(X, X).
        """
    )


class TestPropFormula:
    def test_true(self):
        assert TRUE.is_true
        assert not formula("nat(X)").is_true
        assert formula("nat(X)").disjoin(TRUE).is_true

    def test_conjoin_distributes(self):
        left = formula("nat(X)").disjoin(formula("atm(X)"))
        both = left.conjoin(formula("int(Y)"))
        assert format_formula(both) == "(nat(X), int(Y) ; atm(X), int(Y))"

    def test_variables(self):
        assert formula("nat(X), list(int, Y)").variables() == [X, Y]

    def test_substitute(self):
        renamed = formula("nat(X)").substitute({X: Y})
        assert renamed == formula("nat(Y)")

    def test_at_least_one_conjunct(self):
        with pytest.raises(ValueError):
            PropFormula(())


class TestConditions:
    def test_labels(self, program):
        calls, first, second = assertion_conditions(
            ("p", 2), program.assertions[("p", 2)]
        )
        assert calls.label == "p/2#calls"
        assert calls.kind is ConditionKind.CALLS
        assert [first.label, second.label] == ["p/2#success1", "p/2#success2"]
        assert second.kind is ConditionKind.SUCCESS

    def test_calls_is_disjunction_over_one_head(self, program):
        calls, _, second = assertion_conditions(
            ("p", 2), program.assertions[("p", 2)]
        )
        assert format_formula(calls.pre) == "(int(X) ; atm(X))"
        assert format_formula(second.post) == "atm(Y)"

    def test_instantiate(self, program):
        calls = ConditionSet.from_assertions(program.assertions).calls(("p", 2))
        pre, post = calls.instantiate((Variable("A"), Variable("B")))
        assert format_formula(pre) == "(int(A) ; atm(A))"
        assert post.is_true

    def test_mixed_predicates(self, program):
        (other,) = program_from_text(
            ":- pred q(X, Y) : int(X).\nq(_, _)."
        ).assertions[("q", 2)]
        with pytest.raises(MixedPredicateError):
            assertion_conditions(("p", 2), program.assertions[("p", 2)] + (other,))

    def test_no_assertions(self):
        with pytest.raises(ValueError):
            assertion_conditions(("p", 2), ())

    def test_condition_set(self, program):
        conditions = ConditionSet.from_assertions(program.assertions)
        assert len(conditions) == 3
        assert "p/2#success2" in conditions
        assert conditions.labels_of(("p", 2)) == {
            "p/2#calls",
            "p/2#success1",
            "p/2#success2",
        }
        assert conditions.calls(("q", 1)) is None
        assert conditions.of(("q", 1)) == ()

    def test_replace(self, program):
        conditions = ConditionSet.from_assertions(program.assertions)
        calls = conditions.calls(("p", 2))
        smaller = conditions.replace(remove=[calls])
        assert len(smaller) == 2
        assert len(conditions) == 3
        assert smaller.replace(add=[calls]).calls(("p", 2)) == calls

    def test_duplicate_labels(self, program):
        (calls, *_) = ConditionSet.from_assertions(program.assertions)
        with pytest.raises(ValueError, match="duplicate assertion label"):
            ConditionSet([calls, calls])


class TestPredicateProperties:
    def test_instantiate_anonymous(self, program):
        (member,) = program.properties["p_nat_nat"].members
        assertion = instantiate_anonymous(member, ("n2n", 2))
        assert assertion.head.pred == "n2n"
        assert assertion.pre == member.pre
        with pytest.raises(ArityMismatch):
            instantiate_anonymous(member, ("n2n", 3))

    def test_instantiate_property_keeps_order(self, program):
        assertions = instantiate_property(program.properties["two"], ("p", 2))
        assert [format_formula(a.pre) for a in assertions] == ["int(X)", "atm(X)"]
        with pytest.raises(ArityMismatch):
            instantiate_property(program.properties["two"], ("p", 1))

    def test_calls_pre(self, program):
        pre = program.properties["two"].calls_pre
        assert format_formula(pre) == "(int(X1) ; atm(X1))"

    def test_property_conditions(self, program):
        labels = [c.label for c in property_conditions(program.properties["two"])]
        assert labels == ["_/2@two#calls", "_/2@two#success1", "_/2@two#success2"]

    def test_instantiate_condition(self, program):
        (_, success) = property_conditions(program.properties["p_nat_nat"])
        condition = instantiate_condition(success, ("n2n", 2))
        assert condition.label == "n2n/2@p_nat_nat#success1"
        assert condition.head.pred == "n2n"
        with pytest.raises(ArityMismatch):
            instantiate_condition(success, ("n2n", 1))

    def test_nested(self):
        outer = PredicateProperty(
            "outer",
            (AnonAssertion((X,), formula("inner(X)")),),
        )
        assert outer.nested({"inner", "other"}) == {"inner"}

    def test_mixed_arities(self):
        with pytest.raises(ArityMismatch):
            PredicateProperty(
                "bad", (AnonAssertion((X,)), AnonAssertion((X, Y)))
            )

    def test_positional(self):
        assertion = PredAssertion(Atom("p", (X, Y)), formula("nat(X)"))
        positional = assertion.positional()
        assert [a.name for a in positional.head.args] == ["$1", "$2"]
        assert format_formula(positional.pre) == "nat(X1)"
