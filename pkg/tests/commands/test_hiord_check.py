import io
import json

import pytest
from django.core.management import CommandError, call_command

from hiord.exceptions import VerificationFailed
from hiord.test.utils import corpus_file


def check(*args):
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command("hiord_check", *args, stdout=stdout, stderr=stderr, no_color=True)
    return stdout.getvalue(), stderr.getvalue()


class TestHiordCheck:
    def test_checked(self):
        stdout, _ = check("dutch_final.pl")
        assert stdout.startswith("program dutch_final.pl\n")
        assert stdout.endswith("exit code 0\n")

    def test_false_assertion(self):
        with pytest.raises(VerificationFailed) as e:
            check("dutch_v1.pl")
        assert e.value.returncode == 1
        assert str(e.value) == "Some assertions are false."

    def test_check_remaining(self):
        with pytest.raises(VerificationFailed) as e:
            check("dutch_v2.pl")
        assert e.value.returncode == 2

    def test_false_wins_over_check(self):
        with pytest.raises(VerificationFailed) as e:
            check("dutch_v2.pl", "dutch_v1.pl", "dutch_final.pl")
        assert e.value.returncode == 1

    def test_path(self):
        stdout, _ = check(str(corpus_file("empty.pl")))
        assert stdout == "program empty.pl\nexit code 0\n"

    def test_json_report(self):
        stdout, _ = check("even.pl", "--report", "json")
        report = json.loads(stdout)
        assert report["program"] == "even.pl"
        assert report["exit_code"] == 0

    def test_diagnostics_on_stderr(self):
        stderr = io.StringIO()
        with pytest.raises(VerificationFailed):
            call_command(
                "hiord_check", "qsort_lex.pl", stdout=io.StringIO(), stderr=stderr
            )
        assert "qsort_lex.pl: hiord.W204: " in stderr.getvalue()

    def test_comparator_conforms(self):
        stdout, _ = check("qsort_lex_t.pl")
        assert stdout.endswith("exit code 0\n")

    def test_entry_option(self):
        with pytest.raises(VerificationFailed) as e:
            check("qsort_lex_t.pl", "--entry", "qsort(Xs, lex, Ys)")
        assert e.value.returncode == 2

    def test_invalid_entry(self):
        with pytest.raises(CommandError) as e:
            check("qsort_lex.pl", "--entry", "qsort(")
        assert e.value.returncode == 3

    def test_missing_file(self):
        with pytest.raises(CommandError) as e:
            check("missing.pl")
        assert e.value.returncode == 3
        assert str(e.value) == "No such file: missing.pl"

    def test_syntax_error(self, tmp_path):
        path = tmp_path / "broken.pl"
        path.write_text("p(a.\n", encoding="utf-8")
        with pytest.raises(CommandError) as e:
            check(str(path))
        assert e.value.returncode == 3
        assert str(e.value).startswith("broken.pl: ")

    def test_bad_depth(self):
        with pytest.raises(CommandError, match="--depth must be positive"):
            check("empty.pl", "--depth", "0")

    def test_bad_lattice(self, tmp_path):
        path = tmp_path / "bad.lattice"
        path.write_text("lattice { elems: [a, b]; edges: [] }", encoding="utf-8")
        with pytest.raises(CommandError) as e:
            check("empty.pl", "--lattice", str(path))
        assert e.value.returncode == 3

    def test_lattice(self):
        lattice = str(corpus_file("fig1.lattice"))
        stdout, _ = check("fig1.pl", "--lattice", lattice)
        assert "\n  n2n/2 to p_nat_nat: yes (iteration 1)\n" in stdout
        assert "\n  a2n/2 to p_nat_nat: no" in stdout

    def test_run_checks(self):
        stdout, _ = check("dutch_final.pl", "--run-checks")
        assert "run-time checks: no violation" in stdout

    def test_dumps(self, tmp_path):
        analysis = tmp_path / "analysis.txt"
        matrix = tmp_path / "matrix.txt"
        check(
            "dutch_final.pl",
            "--dump-analysis",
            str(analysis),
            "--dump-conformance",
            str(matrix),
        )
        assert analysis.read_text(encoding="utf-8").startswith("% dutch_final.pl\n")
        assert "dutch_cmp:\n" in matrix.read_text(encoding="utf-8")
