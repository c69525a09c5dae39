from contextlib import nullcontext

from django.core.management import BaseCommand, CommandError
from django.test import override_settings

from hiord.assertions import ConditionSet
from hiord.engine.semantics import Outcome, derive
from hiord.exceptions import HiordError
from hiord.lang.parser import parse_query
from hiord.lang.printer import format_goal, format_term
from hiord.utils import USAGE_ERROR, load_program
from hiord.verifier import hiord_verify


class Command(BaseCommand):
    """
    Run a query against a program.

    Example::

        python manage.py hiord_run take.pl --query 'take(2, [a, b, c], L)'
        python manage.py hiord_run http.pl --query "server(h, 'PUT', R)" \\
            --with-assertions

    With ``--with-assertions`` the query runs under the semantics with
    assertions; a violated assertion condition ends its derivation and is
    reported by label. Predicate-property literals are checked against the
    weakly conforming predicates found by the verifier.

    """

    help = __doc__.strip().splitlines()[0]

    def add_arguments(self, parser):
        parser.add_argument("file", help="Program file.")
        parser.add_argument("--query", "-q", required=True, help="Conjunctive query.")
        parser.add_argument(
            "--with-assertions",
            action="store_true",
            default=False,
            help="Check assertions while running.",
        )
        parser.add_argument(
            "--depth",
            type=int,
            help="Derivation depth budget, default HIORD_MAX_DEPTH.",
        )
        parser.add_argument(
            "--lattice",
            help="Finite lattice file used when verifying for --with-assertions.",
        )

    def handle(self, *args, **options):
        program = load_program(options["file"])
        try:
            goal = parse_query(options["query"])
        except HiordError as e:
            raise CommandError(f"Invalid query: {e}", returncode=USAGE_ERROR) from e
        depth = options.get("depth")
        budget = override_settings(HIORD_MAX_DEPTH=depth) if depth else nullcontext()
        with budget:
            conditions = None
            if options["with_assertions"]:
                try:
                    program = hiord_verify(program, options.get("lattice")).program
                except HiordError as e:
                    raise CommandError(str(e), returncode=USAGE_ERROR) from e
                conditions = ConditionSet.from_assertions(program.assertions)
            result = derive(goal, program, conditions=conditions)

        self.stdout.write(self.style.NOTICE(f"?- {format_goal(goal)}."))
        for answer in result.answers:
            bindings = ", ".join(
                f"{format_term(var)} = {format_term(value)}" for var, value in answer
            )
            self.stdout.write(self.style.SUCCESS(bindings or "true"))
        for label in dict.fromkeys(result.errors):
            self.stdout.write(self.style.ERROR(f"assertion violated: {label}"))
        if result.exhausted:
            self.stderr.write(
                f"hiord.W201: depth budget exhausted on "
                f"{len(result.of(Outcome.EXHAUSTED))} derivations."
            )
        if not result.answers and not result.errors:
            self.stdout.write(self.style.WARNING("false"))
