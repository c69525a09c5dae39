import pytest
from django.conf import settings

from hiord.test.utils import (
    corpus_file,
    corpus_program,
    program_from_text,
    small_budgets,
)


class TestCorpus:
    def test_file(self):
        assert corpus_file("take.pl").name == "take.pl"

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            corpus_file("missing.pl")

    def test_program(self):
        program = corpus_program("http.pl")
        assert program.name == "http.pl"
        assert "handler" in program.properties


def test_program_from_text():
    program = program_from_text(
        """
        p(a).
        p(b).
        """,
        name="inline.pl",
    )
    assert program.name == "inline.pl"
    assert len(program.clauses(("p", 1))) == 2


class TestSmallBudgets:
    def test_overrides(self):
        limit = settings.HIORD_FIXPOINT_LIMIT
        with small_budgets(depth=5, witnesses=2):
            assert settings.HIORD_MAX_DEPTH == 5
            assert settings.HIORD_WITNESS_LIMIT == 2
            assert settings.HIORD_FIXPOINT_LIMIT == limit
        assert settings.HIORD_MAX_DEPTH == 2000

    def test_fixpoint(self):
        with small_budgets(fixpoint=1):
            assert settings.HIORD_FIXPOINT_LIMIT == 1
