import io

from django.core.management import call_command

from hiord.test.utils import corpus_file


def conformance(*args):
    stdout = io.StringIO()
    call_command("hiord_conformance", *args, stdout=stdout, no_color=True)
    return stdout.getvalue()


def test_matrix():
    stdout = conformance("fig1.pl", "--lattice", str(corpus_file("fig1.lattice")))
    assert stdout.startswith("p_nat_nat:\n")
    assert stdout.splitlines()[-1] == (
        "p_nat_nat: strong n2n; weak n2n, i2z, z2i, nz2n"
    )


def test_no_properties():
    assert conformance("take.pl") == "No predicate properties.\n"
