from django.core.checks import Error, Warning

from hiord.conf import settings
from hiord.exceptions import LatticeError

__all__ = (
    "_check_budgets",
    "_check_lattice_file",
    "_check_report_format",
    "_check_fixpoint_limit",
)

_BUDGETS = (
    "HIORD_MAX_DEPTH",
    "HIORD_FIXPOINT_LIMIT",
    "HIORD_WIDENING_STATES",
    "HIORD_WIDENING_DEPTH",
    "HIORD_MAX_VARIANTS",
    "HIORD_WITNESS_DEPTH",
    "HIORD_WITNESS_LIMIT",
)

REPORT_FORMATS = ("text", "json")


def _check_budgets(app_configs, **kwargs):
    errors = []
    for name in _BUDGETS:
        value = getattr(settings, name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            errors.append(
                Error(
                    f"{name} must be a positive integer, got {value!r}.",
                    hint=f"Set '{name}' to a value of at least 1.",
                    id="hiord.E001",
                )
            )
    return errors


def _check_lattice_file(app_configs, **kwargs):
    from hiord.domains.finite import load_lattice

    path = settings.HIORD_LATTICE_FILE
    if not path:
        return []
    try:
        load_lattice(path)
    except LatticeError as e:
        message = str(e)
        if message.startswith("cannot read"):
            return [
                Error(
                    f"HIORD_LATTICE_FILE {path!r} cannot be loaded.",
                    hint=message,
                    id="hiord.E002",
                )
            ]
        return [
            Error(
                f"HIORD_LATTICE_FILE {path!r} is not a lattice.",
                hint=message,
                id="hiord.E003",
            )
        ]
    return []


def _check_report_format(app_configs, **kwargs):
    if settings.HIORD_REPORT_FORMAT not in REPORT_FORMATS:
        return [
            Error(
                f"Unknown HIORD_REPORT_FORMAT {settings.HIORD_REPORT_FORMAT!r}.",
                hint=f"Use one of {', '.join(REPORT_FORMATS)}.",
                id="hiord.E004",
            )
        ]
    return []


def _check_fixpoint_limit(app_configs, **kwargs):
    limit = settings.HIORD_FIXPOINT_LIMIT
    if isinstance(limit, int) and 0 < limit < 2:
        return [
            Warning(
                "HIORD_FIXPOINT_LIMIT below 2 leaves nested predicate properties "
                "unresolved.",
                hint="Use a limit of at least 2.",
                id="hiord.W001",
            )
        ]
    return []
