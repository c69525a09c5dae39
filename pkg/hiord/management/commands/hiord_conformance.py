from django.core.management import BaseCommand, CommandError

from hiord.exceptions import HiordError
from hiord.report import render_matrix
from hiord.utils import USAGE_ERROR, load_program
from hiord.verifier import hiord_verify


class Command(BaseCommand):
    """Print the conformance of predicates to the predicate properties of a program."""

    help = __doc__.strip()

    def add_arguments(self, parser):
        parser.add_argument("file", help="Program file.")
        parser.add_argument(
            "--lattice",
            help="Finite lattice file used instead of regular types.",
        )

    def handle(self, *args, **options):
        program = load_program(options["file"])
        try:
            verdict = hiord_verify(program, options.get("lattice"))
        except HiordError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR) from e
        if not verdict.tables:
            self.stdout.write(self.style.WARNING("No predicate properties."))
            return
        self.stdout.write(render_matrix(verdict.tables), ending="")
        for prop in sorted(verdict.tables):
            table = verdict.tables[prop]
            minus = ", ".join(p[0] for p in table.minus) or "-"
            plus = ", ".join(p[0] for p in table.plus) or "-"
            self.stdout.write(f"{prop}: strong {minus}; weak {plus}")
