from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from pathlib import Path

from django.core.management import BaseCommand, CommandError
from django.test import override_settings

from hiord.conf import settings
from hiord.domains.finite import load_lattice
from hiord.exceptions import HiordError, VerificationFailed
from hiord.report import build_report, render_json, render_matrix, render_text
from hiord.utils import USAGE_ERROR, load_program, run_checks, with_entries
from hiord.verifier import hiord_verify


class Command(BaseCommand):
    """
    Verify programs with assertions and predicate properties.

    Example::

        python manage.py hiord_check qsort_lex_t.pl
        python manage.py hiord_check qsort_lex_t.pl --entry 'qsort(Xs, lex, Ys)'

    The command exits with ``0`` when every assertion is checked, ``1`` when
    some assertion is false, ``2`` when some remain to be checked at run time
    and ``3`` on usage or syntax errors.

    """

    help = __doc__.strip().splitlines()[0]

    def add_arguments(self, parser):
        parser.add_argument("files", nargs="+", help="Program files to verify.")
        parser.add_argument(
            "--entry",
            action="append",
            default=[],
            help="Entry 'Goal' or 'Goal : Pre', replacing the entry directives. "
            "May be given several times.",
        )
        parser.add_argument(
            "--lattice",
            dest="lattice",
            help="Finite lattice file used instead of regular types.",
        )
        parser.add_argument(
            "--report",
            choices=("text", "json"),
            help="Report format, default HIORD_REPORT_FORMAT.",
        )
        parser.add_argument(
            "--run-checks",
            action="store_true",
            default=False,
            help="Run the entries under the semantics with assertions.",
        )
        parser.add_argument(
            "--depth",
            type=int,
            help="Derivation depth budget, default HIORD_MAX_DEPTH.",
        )
        parser.add_argument(
            "--dump-analysis", metavar="file_name", help="Write the analysis table."
        )
        parser.add_argument(
            "--dump-conformance",
            metavar="file_name",
            help="Write the conformance matrices.",
        )

    def handle(self, *args, **options):
        report_format = options.get("report") or settings.HIORD_REPORT_FORMAT
        lattice = options.get("lattice") or settings.HIORD_LATTICE_FILE or None
        depth = options.get("depth")
        if depth is not None and depth < 1:
            raise CommandError("--depth must be positive.", returncode=USAGE_ERROR)
        try:
            lattice = load_lattice(lattice) if lattice else None
        except HiordError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR) from e
        programs = [
            with_entries(load_program(name), options["entry"])
            for name in options["files"]
        ]
        budget = override_settings(HIORD_MAX_DEPTH=depth) if depth else nullcontext()
        with budget:
            with ThreadPoolExecutor() as executor:
                futures = [
                    executor.submit(hiord_verify, program, lattice)
                    for program in programs
                ]
                verdicts = [self.result(f) for f in futures]
            checks = (
                [run_checks(v, depth) for v in verdicts]
                if options["run_checks"]
                else [None] * len(verdicts)
            )

        for program, verdict, violations in zip(programs, verdicts, checks):
            report = build_report(verdict, program.name)
            if report_format == "json":
                self.stdout.write(render_json(report), ending="")
            else:
                self.stdout.write(render_text(report, self.style), ending="")
            for message in verdict.diagnostics:
                self.stderr.write(f"{program.name}: {message.id}: {message.msg}")
            if violations is not None:
                self.write_violations(violations)

        if options.get("dump_analysis"):
            Path(options["dump_analysis"]).write_text(
                "".join(
                    f"% {p.name}\n{v.analysis.dump()}\n"
                    for p, v in zip(programs, verdicts)
                ),
                encoding="utf-8",
            )
        if options.get("dump_conformance"):
            Path(options["dump_conformance"]).write_text(
                "".join(
                    f"% {p.name}\n{render_matrix(v.tables)}"
                    for p, v in zip(programs, verdicts)
                ),
                encoding="utf-8",
            )

        code = max((v.exit_code for v in verdicts), key=lambda c: (c == 1, c))
        if code:
            raise VerificationFailed(
                "Some assertions are false."
                if code == 1
                else "Some assertions remain to be checked.",
                code,
            )

    @staticmethod
    def result(future):
        try:
            return future.result()
        except HiordError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR) from e

    def write_violations(self, violations):
        if not violations:
            self.stdout.write(self.style.SUCCESS("run-time checks: no violation"))
        for query, label in violations:
            self.stdout.write(
                self.style.ERROR(f"run-time check: {query} violates {label}")
            )
