from hiord.assertions import positional_head
from hiord.lang.parser import parse_program, parse_query, parse_term
from hiord.lang.printer import (
    format_assertion,
    format_atom,
    format_goal,
    format_literal,
    format_program,
    format_rule,
    format_term,
)
from hiord.test.utils import corpus_program


def test_format_atom():
    assert format_atom("abc") == "abc"
    assert format_atom("GET") == "'GET'"
    assert format_atom("<") == "<"
    assert format_atom("[]") == "[]"
    assert format_atom("it's") == "'it\\'s'"


def test_format_term_lists():
    assert format_term(parse_term("[a, b|T]")) == "[a, b|T]"
    assert format_term(parse_term("[]")) == "[]"


def test_format_term_operators():
    assert format_term(parse_term("X - 1")) == "X - 1"
    assert format_term(parse_term("(a, b)")) == "(a, b)"
    assert format_term(parse_term("f(-1)")) == "f(-1)"


def test_format_higher_order_literal():
    (literal,) = parse_query("P(X, a)")
    assert format_literal(literal) == "P(X, a)"


def test_format_goal():
    assert format_goal(parse_query("X = a, X @< b")) == "X = a, X @< b"
    assert format_goal(()) == "true"


def test_format_rule():
    (rule,) = parse_program("p(a).").rules
    assert format_rule(rule) == "p(_N1) :-\n    _N1 = a."


def test_format_assertion():
    program = corpus_program("take.pl")
    (assertion,) = program.assertions[("take", 3)]
    assert format_assertion(assertion) == (
        ":- pred take(N, Xs, Ys) : (nat(N), list(Xs)) => list(Ys)."
    )


def test_format_positional_assertion():
    program = corpus_program("take.pl")
    (assertion,) = program.assertions[("take", 3)]
    positional = assertion.positional()
    assert positional.head == positional_head("take", 3)
    assert format_assertion(positional).startswith(":- pred take(X1, X2, X3)")


def test_format_program_reads_back():
    for name in ("take.pl", "http.pl"):
        program = corpus_program(name)
        again = parse_program(format_program(program))
        assert again.rules == program.rules
        assert again.assertions == program.assertions
        assert again.properties == program.properties
        assert again.entries == program.entries
        assert again.regtypes == program.regtypes
