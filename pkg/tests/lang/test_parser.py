import pytest

from hiord.assertions import TRUE, PropFormula
from hiord.engine.semantics import derive
from hiord.exceptions import ParseError, ParseErrorList
from hiord.lang.parser import parse_entry, parse_program, parse_query, parse_term
from hiord.lang.program import WrapDirective
from hiord.lang.terms import (
    ArithCmp,
    ArithIs,
    Atom,
    Compound,
    Eq,
    HigherOrderAtom,
    Test as BuiltinTest,
    Variable,
    atom,
    integer,
    make_list,
)
from hiord.test.utils import corpus_program, program_from_text


class TestClauses:
    def test_fresh_head_variables_avoid_body_variables(self):
        program = program_from_text("p(a) :- _N1 = b.\n")
        (rule,) = program.rules
        assert rule.head.args[0] != Variable("_N1")
        result = derive(parse_query("p(X)"), program)
        assert result.answers == (((Variable("X"), atom("a")),),)

    def test_head_arguments_are_normalized(self):
        program = parse_program("p(a, X, X).")
        (rule,) = program.rules
        assert rule.head == Atom("p", (Variable("_N1"), Variable("X"), Variable("_N2")))
        assert rule.body == (
            Eq(Variable("_N1"), atom("a")),
            Eq(Variable("_N2"), Variable("X")),
        )

    def test_body_literals(self):
        program = program_from_text(
            """
            p(X, Y, P) :-
                X = f(Y),
                Z is Y + 1,
                Z > 0,
                integer(Y),
                P(Z),
                q(Z).
            """
        )
        kinds = [type(literal) for literal in program.rules[0].body]
        assert kinds == [Eq, ArithIs, ArithCmp, BuiltinTest, HigherOrderAtom, Atom]

    def test_call_with_variable(self):
        (literal,) = parse_query("call(P, X, 1)")
        assert literal == HigherOrderAtom(Variable("P"), (Variable("X"), integer(1)))

    def test_call_with_atom(self):
        (literal,) = parse_query("call(f(a), X)")
        assert literal == Atom("f", (atom("a"), Variable("X")))

    def test_anonymous_variables_are_distinct(self):
        term = parse_term("f(_, _)")
        assert term.args[0] != term.args[1]

    def test_negative_integer(self):
        assert parse_term("-1") == integer(-1)

    def test_lists(self):
        assert parse_term("[a, b|T]") == make_list(
            [atom("a"), atom("b")], Variable("T")
        )

    def test_quoted_atoms(self):
        assert parse_term("'GET'") == atom("GET")

    def test_operator_atoms_as_arguments(self):
        term = parse_term("cmp(r, <, b)")
        assert term.args[1] == atom("<")

    def test_comments(self):
        program = program_from_text(
            """
            % line comment
            p(a). /* block
            comment */ p(b).
            """
        )
        assert len(program.rules) == 2


class TestDirectives:
    def test_regtype_definition(self):
        program = parse_program("rwb := r | w | b.")
        assert ("rwb", 1) in program.regtypes
        assert len(program.clauses(("rwb", 1))) == 3

    def test_pred_assertion(self):
        program = parse_program(":- pred p(X, Y) : int(X) => nat(Y).\np(X, X).")
        (assertion,) = program.assertions[("p", 2)]
        assert assertion.pre == PropFormula(((Atom("int", (Variable("X"),)),),))
        assert assertion.post == PropFormula(((Atom("nat", (Variable("Y"),)),),))

    def test_pred_assertion_without_conditions(self):
        program = parse_program(":- pred p(X).\np(a).")
        (assertion,) = program.assertions[("p", 1)]
        assert assertion.pre == TRUE
        assert assertion.post == TRUE

    def test_disjunctive_precondition(self):
        program = parse_program(":- pred p(X) : (int(X) ; atm(X)).\np(a).")
        (assertion,) = program.assertions[("p", 1)]
        assert len(assertion.pre.disjuncts) == 2

    def test_predicate_property(self):
        program = corpus_program("fig1.pl")
        prop = program.properties["p_nat_nat"]
        assert prop.arity == 2
        (member,) = prop.members
        assert [lit.pred for lit in member.pre.literals()] == ["nat"]
        assert [lit.pred for lit in member.post.literals()] == ["nat"]

    def test_predicate_property_with_several_members(self):
        program = program_from_text(
            """
            either := {
                :- pred _(X) : int(X).
                :- pred _(X) : atm(X).
            }.
            """
        )
        prop = program.properties["either"]
        assert len(prop.members) == 2
        assert len(prop.calls_pre.disjuncts) == 2

    def test_entry(self):
        program = corpus_program("qsort_lex.pl")
        (entry,) = program.entries
        assert entry.goal == Atom(
            "qsort", (Variable("Xs"), atom("lex"), Variable("Ys"))
        )
        assert entry.pre is None

    def test_parse_entry_with_precondition(self):
        entry = parse_entry("qsort(Xs, P, Ys) : (list(t, Xs), t_cmp(P))")
        assert entry.goal.pred == "qsort"
        assert [lit.pred for lit in entry.pre.literals()] == ["list", "t_cmp"]

    def test_wrap(self):
        program = corpus_program("even.pl")
        assert program.wraps == (WrapDirective(("even", 1), "p_nat", "nat_even"),)

    def test_prop_declaration(self):
        program = corpus_program("fig1.pl")
        assert {("zero", 1), ("negz", 1)} <= program.props
        assert program.is_property(("zero", 1))

    def test_library_is_kept_apart(self):
        program = corpus_program("take.pl")
        assert program.predicates() == [("take", 3)]
        assert program.is_library(("list", 1))
        assert program.defines(("nat", 1))

    def test_user_definition_shadows_library(self):
        program = parse_program("nat(z).\nnat(s(X)) :- nat(X).")
        assert not program.is_library(("nat", 1))
        assert len(program.clauses(("nat", 1))) == 2


class TestDiagnostics:
    def test_undefined_predicate(self):
        program = parse_program("p(X) :- q(X).")
        assert [m.id for m in program.diagnostics] == ["hiord.W101"]

    def test_undeclared_property(self):
        program = parse_program(":- pred p(X) : even(X).\np(0).\neven(0).")
        assert "hiord.W102" in {m.id for m in program.diagnostics}

    def test_property_with_assertions(self):
        program = parse_program(":- prop t/1.\n:- pred t(X) : int(X).\nt(0).")
        assert "hiord.E101" in {m.id for m in program.diagnostics}
        assert ("t", 1) not in program.assertions

    def test_parametric_regtype(self):
        program = parse_program(":- regtype pair/2.\npair(X, p(X, X)).")
        assert "hiord.E102" in {m.id for m in program.diagnostics}
        assert ("pair", 2) not in program.regtypes

    def test_corpus_is_clean(self):
        for name in ("qsort_lex.pl", "http.pl", "dutch_final.pl", "take.pl"):
            assert corpus_program(name).diagnostics == ()


class TestErrors:
    def test_all_errors_are_reported(self):
        with pytest.raises(ParseErrorList) as exc_info:
            parse_program("p(a.\nq(b).\nr(c :- .\n")
        assert len(exc_info.value.errors) == 2
        assert all(isinstance(e, ParseError) for e in exc_info.value.errors)

    def test_error_position(self):
        with pytest.raises(ParseErrorList) as exc_info:
            parse_program("p(a).\n\nq(")
        (error,) = exc_info.value.errors
        assert error.line == 3

    def test_unknown_directive(self):
        with pytest.raises(ParseErrorList, match="unknown directive"):
            parse_program(":- module(foo, []).")

    def test_placeholder_outside_property(self):
        with pytest.raises(ParseErrorList, match="placeholder"):
            parse_program("p(X) :- _(X).")

    def test_anonymous_assertion_outside_property(self):
        with pytest.raises(ParseErrorList, match="anonymous assertions"):
            parse_program(":- pred _(X) : int(X).")

    def test_assertion_head_variables(self):
        with pytest.raises(ParseErrorList, match="distinct variables"):
            parse_program(":- pred p(X, X).")

    def test_unsupported_control(self):
        with pytest.raises(ParseErrorList, match="unsupported control"):
            parse_program("p(X) :- (X = a ; X = b).")

    def test_malformed_wrap(self):
        with pytest.raises(ParseErrorList, match="wrap"):
            parse_program(":- wrap even/1 as nat_even.")

    def test_duplicate_property(self):
        with pytest.raises(ParseErrorList, match="duplicate"):
            parse_program(
                "q := { :- pred _(X) : int(X). }.\nq := { :- pred _(X). }."
            )

    def test_unterminated_quote(self):
        with pytest.raises(ParseError, match="unterminated"):
            parse_term("'abc")

    def test_compound_constant(self):
        assert parse_term("f(a)") == Compound("f", (atom("a"),))
