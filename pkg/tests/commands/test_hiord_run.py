import io

import pytest
from django.core.management import CommandError, call_command


def run(*args):
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command("hiord_run", *args, stdout=stdout, stderr=stderr, no_color=True)
    return stdout.getvalue(), stderr.getvalue()


def test_answers():
    stdout, _ = run("take.pl", "--query", "take(2, [a, b, c], L)")
    assert stdout.splitlines() == ["?- take(2, [a, b, c], L).", "L = [a, b]"]


def test_ground_query():
    stdout, _ = run("take.pl", "-q", "take(0, [a], [])")
    assert stdout.splitlines()[-1] == "true"


def test_no_answer():
    stdout, _ = run("take.pl", "-q", "take(1, [], L)")
    assert stdout.splitlines()[-1] == "false"


def test_plain_semantics_ignores_assertions():
    stdout, _ = run("http.pl", "-q", "server(h, 'PUT', R)")
    assert "R = 'BAD_REQ'" in stdout
    assert "assertion violated" not in stdout


def test_with_assertions():
    stdout, _ = run("http.pl", "-q", "server(h, 'PUT', R)", "--with-assertions")
    assert "assertion violated: server/3#success1" in stdout


def test_invalid_query():
    with pytest.raises(CommandError) as e:
        run("take.pl", "-q", "take(")
    assert e.value.returncode == 3
    assert str(e.value).startswith("Invalid query: ")
