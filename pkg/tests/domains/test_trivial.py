import itertools
import random

import pytest

from hiord.assertions import PropFormula, instantiate_anonymous
from hiord.domains import make_domain
from hiord.domains.base import AbsVal
from hiord.domains.regtypes import list_of, type_of_class
from hiord.domains.trivial import gamma_contains, literal_leaf, triv_sub, triv_sup
from hiord.engine.semantics import trivially_succeeds
from hiord.engine.store import EMPTY
from hiord.exceptions import UnresolvedProperty
from hiord.lang.parser import parse_query, parse_term
from hiord.lang.terms import Variable
from hiord.test.utils import corpus_program

X, Y = Variable("X"), Variable("Y")


def formula(text):
    return PropFormula((tuple(parse_query(text)),))


@pytest.fixture
def program():
    return corpus_program("properties.pl")


@pytest.fixture
def domain(program):
    return make_domain(program)


class TestBounds:
    def test_conjunction(self, domain):
        value = triv_sub(formula("nat(X), atm(Y)"), domain, (X, Y))
        assert value.get("$1") == type_of_class("nat")
        assert value.get("$2") == type_of_class("atm")
        assert triv_sup(formula("nat(X), atm(Y)"), domain, (X, Y)) == value

    def test_relational_literal(self, domain):
        value = formula("nat(X), small(X)")
        assert triv_sub(value, domain, (X,)).is_bottom
        assert triv_sup(value, domain, (X,)) == AbsVal(
            domain, {"$1": type_of_class("nat")}
        )

    def test_local_variable(self, domain):
        value = formula("prefix(X, Y)")
        assert triv_sub(value, domain, (X,)).is_bottom
        assert triv_sup(value, domain, (X,)).is_top

    def test_parametric_property(self, domain):
        value = triv_sub(formula("list(color, X)"), domain, (X,))
        assert value.get("$1") == list_of(domain.types["color"])

    def test_disjunction_kept_while_exact(self, domain):
        either = formula("color(X)").disjoin(formula("nat(X)"))
        value = triv_sub(either, domain, (X,))
        assert gamma_contains(value, EMPTY.unify(X, parse_term("red")), (X,))
        assert gamma_contains(value, EMPTY.unify(X, parse_term("2")), (X,))

    def test_relational_disjunct_is_left_out(self, domain):
        either = formula("color(X)").disjoin(formula("nat(X), small(X)"))
        value = triv_sub(either, domain, (X,))
        assert value == AbsVal(domain, {"$1": domain.types["color"]})
        assert gamma_contains(value, EMPTY.unify(X, parse_term("red")), (X,))
        assert not gamma_contains(value, EMPTY.unify(X, parse_term("2")), (X,))

    def test_inexact_disjunct_is_left_out(self, fig1, fig1_domain):
        either = formula("nat(X)").disjoin(formula("atm(X)"))
        value = triv_sub(either, fig1_domain, (X,))
        assert value == AbsVal(fig1_domain, {"$1": "nat"})
        assert triv_sup(either, fig1_domain, (X,)).get("$1") == fig1_domain.join(
            "nat", "atm"
        )

    def test_true(self, domain):
        assert triv_sub(PropFormula(), domain, (X,)).is_top
        assert triv_sup(PropFormula(), domain, (X,)).is_top

    def test_positional_variables(self, fig1, fig1_domain):
        (assertion,) = fig1.assertions[("n2n", 2)]
        value = triv_sub(assertion.positional().pre, fig1_domain)
        assert value == AbsVal(fig1_domain, {"$1": "nat"})

    def test_unresolved_predicate_property(self, fig1, fig1_domain):
        (literal,) = formula("p_nat_nat(X)").disjuncts[0]
        with pytest.raises(UnresolvedProperty):
            literal_leaf(literal, fig1_domain, (X,))
        assert literal_leaf(literal, fig1_domain, (X,), approximate=True) is None


LITERALS = [
    "nat(X)",
    "int(X)",
    "atm(X)",
    "color(X)",
    "colors(X)",
    "pair(X)",
    "small(X)",
    "list(X)",
    "term(X)",
    "list(color, X)",
    "prefix(X, [red])",
]

VALUES = [
    "0",
    "2",
    "5",
    "-1",
    "a",
    "red",
    "[]",
    "[red]",
    "[red, T]",
    "[1, 2]",
    "p(1, a)",
    "p(a, 1)",
    "f(T)",
    "T",
]


def test_bounds_are_sound(program, domain):
    rng = random.Random(20240601)
    stores = [EMPTY.unify(X, parse_term(v)) for v in VALUES]
    for _ in range(200):
        disjuncts = [
            formula(", ".join(rng.sample(LITERALS, rng.randint(1, 2))))
            for _ in range(rng.randint(1, 2))
        ]
        value = disjuncts[0]
        for other in disjuncts[1:]:
            value = value.disjoin(other)
        lower = triv_sub(value, domain, (X,))
        upper = triv_sup(value, domain, (X,))
        assert lower.leq(upper)
        for store in stores:
            holds = trivially_succeeds(value, store, program)
            if gamma_contains(lower, store, (X,)):
                assert holds
            if holds:
                assert gamma_contains(upper, store, (X,))


def test_lattice_bounds_are_sound(fig1, fig1_domain):
    stores = [
        EMPTY.unify(X, parse_term(v)) for v in ("0", "3", "-2", "a", "f(1)", "T")
    ]
    names = ["zero", "negz", "nat", "int", "atm"]
    for first, second in itertools.product(names, repeat=2):
        value = formula(f"{first}(X)").disjoin(formula(f"{second}(X)"))
        lower = triv_sub(value, fig1_domain, (X,))
        upper = triv_sup(value, fig1_domain, (X,))
        for store in stores:
            holds = trivially_succeeds(value, store, fig1)
            if gamma_contains(lower, store, (X,)):
                assert holds
            if holds:
                assert gamma_contains(upper, store, (X,))


CORPUS = [
    "fig1.pl",
    "synthetic.pl",
    "qsort_lex.pl",
    "qsort_lex_t.pl",
    "t_sort.pl",
    "http.pl",
    "dutch_v1.pl",
    "dutch_final.pl",
    "take.pl",
    "even.pl",
    "properties.pl",
]

ARGUMENTS = ["0", "2", "-1", "a", "lex", "red", "[]", "[1, 2]", "[a]", "f(T)"]


def property_formulas(program):
    """Every pre- and post-condition of ``program`` over ``$1..$n``."""
    for assertions in program.assertions.values():
        for assertion in assertions:
            positional = assertion.positional()
            yield positional.head.arity, positional.pre
            yield positional.head.arity, positional.post
    for prop in program.properties.values():
        yield prop.arity, prop.calls_pre
        for member in prop.members:
            anon = instantiate_anonymous(member, ("_", member.arity)).positional()
            yield member.arity, anon.pre
            yield member.arity, anon.post


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_bounds_are_sound(name, fig1_lattice):
    program = corpus_program(name)
    domain = make_domain(program, fig1_lattice if name == "fig1.pl" else None)
    rng = random.Random(20240601)
    for arity, value in property_formulas(program):
        variables = tuple(Variable(f"${i}") for i in range(1, arity + 1))
        lower = triv_sub(value, domain, approximate=True)
        upper = triv_sup(value, domain, approximate=True)
        assert lower.leq(upper)
        for _ in range(12):
            store = EMPTY
            for var in variables:
                store = store.unify(var, parse_term(rng.choice(ARGUMENTS)))
            holds = trivially_succeeds(value, store, program)
            if gamma_contains(lower, store, variables):
                assert holds
            if holds:
                assert gamma_contains(upper, store, variables)
