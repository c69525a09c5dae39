"""
Console entry point ``hiord``.

``hiord check|run|conformance ...`` runs the management command of the same
name without a Django project: a minimal settings module is configured when
none is.
"""

import logging
import os
import sys

import django
from django.conf import settings as django_settings
from django.core.management import CommandError, load_command_class

from hiord.exceptions import VerificationFailed

__all__ = ("main", "COMMANDS")

COMMANDS = {
    "check": "hiord_check",
    "run": "hiord_run",
    "conformance": "hiord_conformance",
}

USAGE = "usage: hiord {check,run,conformance} ...\n"

_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}


def _setup():
    if not django_settings.configured:
        django_settings.configure(INSTALLED_APPS=["hiord"], USE_TZ=True)
    django.setup()


def _logging(verbosity):
    logger = logging.getLogger("hiord")
    logger.setLevel(_LEVELS.get(verbosity, logging.DEBUG))
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)


def main(argv=None):
    """
    Run a ``hiord`` subcommand.

    Returns
    -------
        int: ``0`` when all assertions are checked, ``1`` when some is false,
        ``2`` when some remain to be checked, ``3`` on usage and syntax errors.

    """
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(USAGE)
        return 3
    _setup()
    name, rest = COMMANDS[argv[0]], argv[1:]
    if os.environ.get("NO_COLOR") and "--no-color" not in rest:
        rest.append("--no-color")
    command = load_command_class("hiord", name)
    try:
        parser = command.create_parser("hiord", argv[0])
        options = vars(parser.parse_args(rest))
        args = options.pop("args", ())
        _logging(options.get("verbosity", 1))
        command.execute(*args, **options)
    except VerificationFailed as e:
        sys.stderr.write(f"{e}\n")
        return e.returncode
    except CommandError as e:
        sys.stderr.write(f"{e}\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
