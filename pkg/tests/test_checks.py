import pytest
from django.core import checks
from django.core.management import call_command
from django.core.management.base import SystemCheckError

from hiord.checks import (
    _check_budgets,
    _check_fixpoint_limit,
    _check_lattice_file,
    _check_report_format,
)
from hiord.test.utils import corpus_file


def test_check_budgets(settings):
    assert _check_budgets(None) == []
    settings.HIORD_WITNESS_LIMIT = 0
    settings.HIORD_MAX_DEPTH = "many"
    errors = _check_budgets(None)
    assert (
        checks.Error(
            "HIORD_WITNESS_LIMIT must be a positive integer, got 0.",
            hint="Set 'HIORD_WITNESS_LIMIT' to a value of at least 1.",
            id="hiord.E001",
        )
        in errors
    )
    assert (
        checks.Error(
            "HIORD_MAX_DEPTH must be a positive integer, got 'many'.",
            hint="Set 'HIORD_MAX_DEPTH' to a value of at least 1.",
            id="hiord.E001",
        )
        in errors
    )
    assert len(errors) == 2


def test_check_budgets_rejects_booleans(settings):
    settings.HIORD_MAX_VARIANTS = True
    assert [e.id for e in _check_budgets(None)] == ["hiord.E001"]


def test_check_lattice_file(settings):
    assert _check_lattice_file(None) == []
    settings.HIORD_LATTICE_FILE = str(corpus_file("fig1.lattice"))
    assert _check_lattice_file(None) == []


def test_check_lattice_file_missing(settings, tmp_path):
    path = str(tmp_path / "missing.lattice")
    settings.HIORD_LATTICE_FILE = path
    (error,) = _check_lattice_file(None)
    assert error.id == "hiord.E002"
    assert error.msg == f"HIORD_LATTICE_FILE {path!r} cannot be loaded."
    assert error.hint.startswith("cannot read lattice file")


def test_check_lattice_file_not_a_lattice(settings, tmp_path):
    path = tmp_path / "diamond.lattice"
    path.write_text(
        "lattice { elems: [top, a, b, c, d, bot]; edges: [a < top, b < top, "
        "c < a, c < b, d < a, d < b, bot < c, bot < d] }",
        encoding="utf-8",
    )
    settings.HIORD_LATTICE_FILE = str(path)
    (error,) = _check_lattice_file(None)
    assert error.id == "hiord.E003"
    assert "no greatest lower bound" in error.hint


def test_check_report_format(settings):
    assert _check_report_format(None) == []
    settings.HIORD_REPORT_FORMAT = "xml"
    assert _check_report_format(None) == [
        checks.Error(
            "Unknown HIORD_REPORT_FORMAT 'xml'.",
            hint="Use one of text, json.",
            id="hiord.E004",
        )
    ]


def test_check_fixpoint_limit(settings):
    assert _check_fixpoint_limit(None) == []
    settings.HIORD_FIXPOINT_LIMIT = 1
    (warning,) = _check_fixpoint_limit(None)
    assert warning.id == "hiord.W001"
    settings.HIORD_FIXPOINT_LIMIT = 0
    assert _check_fixpoint_limit(None) == []


def test_django_check(settings):
    call_command("check")
    settings.HIORD_REPORT_FORMAT = "xml"
    with pytest.raises(SystemCheckError):
        call_command("check")
