from django.apps import AppConfig
from django.core import checks


class HiordAppConfig(AppConfig):
    """Higher-order assertion verifier Django App configuration."""

    name = "hiord"
    verbose_name = "HiOrd verifier"

    def ready(self):
        from .checks import (
            _check_budgets,
            _check_fixpoint_limit,
            _check_lattice_file,
            _check_report_format,
        )

        checks.register(_check_budgets, "hiord")
        checks.register(_check_lattice_file, "hiord")
        checks.register(_check_report_format, "hiord")
        checks.register(_check_fixpoint_limit, "hiord")
