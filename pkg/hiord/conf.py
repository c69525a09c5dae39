import os

from appconf import AppConf
from django.conf import settings

__all__ = ("settings",)


def _int_tuple(value):
    return tuple(int(v) for v in value.split(",") if v.strip())


def _str_tuple(value):
    return tuple(v.strip() for v in value.split(",") if v.strip())


class HiordAppConf(AppConf):
    HIORD_MAX_DEPTH = int(os.environ.get("HIORD_MAX_DEPTH", 10000))
    """
    Depth budget of a single derivation, counted in reduction steps.

    Derivations reaching the budget are classified as *budget-exhausted*; the
    oracles then answer conservatively. Default is ``10000``.
    """

    HIORD_FIXPOINT_LIMIT = int(os.environ.get("HIORD_FIXPOINT_LIMIT", 16))
    """
    Maximal number of iterations of the predicate property fixpoint.

    Properties still unresolved at the cap are treated as ``term``.
    Nesting depth of properties is rarely above two, default is ``16``.
    """

    HIORD_WIDENING_STATES = int(os.environ.get("HIORD_WIDENING_STATES", 64))
    """Grammar size (non-terminals) above which joins cut types at a fixed depth."""

    HIORD_WIDENING_DEPTH = int(os.environ.get("HIORD_WIDENING_DEPTH", 2))
    """Depth kept by the shape cut, see :attr:`HIORD_WIDENING_STATES`."""

    HIORD_MAX_VARIANTS = int(os.environ.get("HIORD_MAX_VARIANTS", 8))
    """
    Call-pattern variants kept per predicate by the analysis.

    Further call patterns are merged into a single widened variant.
    """

    HIORD_WITNESS_DEPTH = int(os.environ.get("HIORD_WITNESS_DEPTH", 3))
    """Term depth used when enumerating queries for conformance witnesses."""

    HIORD_WITNESS_LIMIT = int(os.environ.get("HIORD_WITNESS_LIMIT", 64))
    """Maximal number of queries tried by one witness search."""

    HIORD_SAMPLE_INTEGERS = _int_tuple(
        os.environ.get("HIORD_SAMPLE_INTEGERS", "-2,-1,0,1,2,3,4")
    )
    """
    Integers standing for the ``int`` and ``nat`` leaves of regular types.

    Enumeration of infinite types is exact only up to this sample.
    """

    HIORD_SAMPLE_ATOMS = _str_tuple(os.environ.get("HIORD_SAMPLE_ATOMS", "a,b"))
    """Atoms standing for the ``atm`` and ``term`` leaves of regular types."""

    HIORD_LATTICE_FILE = os.environ.get("HIORD_LATTICE_FILE", "")
    """
    Finite lattice used instead of regular types.

    This setting is OPTIONAL, the ``--lattice`` option of the commands takes
    precedence. Empty means regular types.
    """

    HIORD_REPORT_FORMAT = os.environ.get("HIORD_REPORT_FORMAT", "text")
    """Default report format of the commands, ``text`` or ``json``."""
