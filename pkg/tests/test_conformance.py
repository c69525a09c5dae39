import pytest

from hiord.assertions import ConditionSet, Provenance, property_conditions
from hiord.conformance import (
    TriState,
    candidates,
    carrier_names,
    conf_calls,
    conf_property,
    conf_success,
    conformance_table,
    make_wrapper,
    regtype_repr,
    with_carriers,
)
from hiord.domains import make_domain
from hiord.domains.regtypes import RegTypeDomain, type_of_constants
from hiord.exceptions import ArityMismatch, NameCollision
from hiord.lang.printer import format_assertion, format_rule
from hiord.lang.terms import atom
from hiord.test.utils import corpus_program, program_from_text

YES, NO, MAYBE = TriState.YES, TriState.NO, TriState.MAYBE


@pytest.fixture
def conditions(fig1):
    return ConditionSet.from_assertions(fig1.assertions)


@pytest.fixture
def prop(fig1):
    return fig1.properties["p_nat_nat"]


@pytest.fixture
def table(fig1, fig1_domain, conditions, prop):
    return conformance_table(prop, fig1, fig1_domain, conditions)


class TestConditions:
    @pytest.mark.parametrize(
        "pred, verdict",
        [
            (("n2n", 2), YES),
            (("a2n", 2), NO),
            (("i2z", 2), MAYBE),
            (("z2i", 2), MAYBE),
            (("nz2n", 2), MAYBE),
        ],
    )
    def test_calls(self, fig1, fig1_domain, conditions, prop, pred, verdict):
        result = conf_calls(pred, prop, fig1, fig1_domain, conditions)
        assert result.label == "_/2@p_nat_nat#calls"
        assert result.verdict is verdict

    @pytest.mark.parametrize(
        "pred, verdict",
        [
            (("n2n", 2), YES),
            (("i2z", 2), YES),
            (("z2i", 2), MAYBE),
            (("nz2n", 2), MAYBE),
        ],
    )
    def test_success(self, fig1, fig1_domain, conditions, prop, pred, verdict):
        anonymous = property_conditions(prop)[1]
        result = conf_success(pred, prop, anonymous, fig1, fig1_domain, conditions)
        assert result.label == "_/2@p_nat_nat#success1"
        assert result.verdict is verdict

    def test_calls_witness(self, fig1, fig1_domain, conditions, prop):
        result = conf_calls(("a2n", 2), prop, fig1, fig1_domain, conditions)
        assert result.witness is not None
        assert result.basis[0] == "sup(pre) = {X1: atm}"


class TestTable:
    def test_candidates(self, fig1):
        assert candidates(fig1, 2) == [
            ("n2n", 2),
            ("a2n", 2),
            ("i2z", 2),
            ("z2i", 2),
            ("nz2n", 2),
        ]
        assert candidates(fig1, 1) == []

    def test_rows(self, table):
        assert table.prop == "p_nat_nat"
        assert [row.verdict for row in table.rows] == [YES, NO, MAYBE, MAYBE, MAYBE]
        assert table.of(("a2n", 2)).witness is not None
        assert table.of(("missing", 2)) is None

    def test_conforming_sets(self, table):
        assert table.minus == (("n2n", 2),)
        assert table.plus == (("n2n", 2), ("i2z", 2), ("z2i", 2), ("nz2n", 2))

    def test_synthetic_grid(self, fig1_lattice):
        program = corpus_program("synthetic.pl")
        domain = make_domain(program, fig1_lattice)
        conditions = ConditionSet.from_assertions(program.assertions)
        table = conformance_table(
            program.properties["p_nat_nat"], program, domain, conditions
        )
        assert len(table.rows) == 25
        verdicts = {row.pred[0]: row.verdict for row in table.rows}
        assert sorted(p for p, v in verdicts.items() if v is YES) == [
            "nat2nat",
            "nat2zero",
        ]
        assert sorted(p for p, v in verdicts.items() if v is NO) == [
            "atm2atm",
            "atm2int",
            "atm2nat",
            "atm2negz",
            "atm2zero",
            "nat2atm",
            "zero2atm",
        ]
        assert list(verdicts.values()).count(MAYBE) == 16

    def test_culprits(self, fig1_lattice):
        program = corpus_program("synthetic.pl")
        domain = make_domain(program, fig1_lattice)
        conditions = ConditionSet.from_assertions(program.assertions)
        row = conf_property(
            ("nat2int", 2),
            program.properties["p_nat_nat"],
            program,
            domain,
            conditions,
        )
        assert row.verdict is MAYBE
        assert row.culprits == program.clauses(("nat2int", 2))

    def test_arity_mismatch(self, fig1, fig1_domain, conditions, prop):
        with pytest.raises(ArityMismatch):
            conf_property(("zero", 1), prop, fig1, fig1_domain, conditions)


class TestWrappers:
    def test_make_wrapper(self, fig1, prop):
        rule, assertion = make_wrapper(("n2n", 2), prop, "safe_n2n", fig1)
        assert format_rule(rule) == "safe_n2n(X1, X2) :-\n    n2n(X1, X2)."
        assert format_assertion(assertion) == ":- pred safe_n2n(X1, X2) : nat(X1)."
        assert assertion.provenance is Provenance.WRAPPER

    def test_wrapper_errors(self, fig1, prop):
        with pytest.raises(ArityMismatch):
            make_wrapper(("zero", 1), prop, "safe_zero", fig1)
        with pytest.raises(NameCollision):
            make_wrapper(("a2n", 2), prop, "n2n", fig1)


class TestCarriers:
    def test_names(self, fig1):
        assert carrier_names("p_nat_nat", fig1) == (
            "p_nat_nat_minus",
            "p_nat_nat_plus",
        )

    def test_reserved_names(self):
        program = program_from_text("cmp_plus(lex).\n")
        with pytest.raises(NameCollision, match="cmp_plus/1 is reserved"):
            carrier_names("cmp", program)

    def test_regtype_repr(self, fig1, table):
        minus, plus, rules = regtype_repr(table, fig1)
        assert (minus, plus) == ("p_nat_nat_minus", "p_nat_nat_plus")
        assert [r.indicator for r in rules] == [(minus, 1)] + [(plus, 1)] * 4

    def test_with_carriers(self, fig1, table):
        extended = with_carriers(fig1, [table])
        assert extended.carriers == {
            "p_nat_nat": ("p_nat_nat_minus", "p_nat_nat_plus")
        }
        assert extended.is_property(("p_nat_nat_plus", 1))
        types = RegTypeDomain(extended).types
        assert types["p_nat_nat_minus"] == type_of_constants((atom("n2n"),))
        assert types["p_nat_nat_plus"] == type_of_constants(
            tuple(atom(n) for n in ("n2n", "i2z", "z2i", "nz2n"))
        )
        assert not fig1.carriers
