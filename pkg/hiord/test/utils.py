"""Test utilities for programs verified with hiord."""

import textwrap
from contextlib import contextmanager

from django.test import override_settings

from hiord.lang.parser import parse_program
from hiord.utils import CORPUS_DIR

__all__ = (
    "corpus_file",
    "corpus_program",
    "program_from_text",
    "small_budgets",
)


def corpus_file(name):
    """Path of a bundled corpus file, e.g. ``corpus_file("fig1.lattice")``."""
    path = CORPUS_DIR / name
    if not path.exists():
        raise FileNotFoundError(path)
    return path


def corpus_program(name):
    """
    Parse a bundled program.

    Example::

        from hiord.test.utils import corpus_program
        from hiord.verifier import hiord_verify

        verdict = hiord_verify(corpus_program("dutch_final.pl"))
        assert verdict.exit_code == 0

    """
    path = corpus_file(name)
    return parse_program(path.read_text(encoding="utf-8"), name=path.name)


def program_from_text(text, name="test.pl"):
    """Parse a program given inline, dedenting it first."""

    return parse_program(textwrap.dedent(text), name=name)


@contextmanager
def small_budgets(depth=200, witnesses=16, fixpoint=None):
    """
    Run the enclosed code with reduced search budgets.

    Args:
    ----
        depth (int): Derivation depth budget.
        witnesses (int): Queries tried per witness search.
        fixpoint (int): Cap on the conformance fixpoint, unchanged by default.

    """
    overrides = {"HIORD_MAX_DEPTH": depth, "HIORD_WITNESS_LIMIT": witnesses}
    if fixpoint is not None:
        overrides["HIORD_FIXPOINT_LIMIT"] = fixpoint
    with override_settings(**overrides):
        yield
