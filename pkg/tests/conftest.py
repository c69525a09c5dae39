import pytest

from hiord.domains import make_domain
from hiord.domains.finite import load_lattice
from hiord.test.utils import corpus_file, corpus_program


@pytest.fixture
def fig1():
    """The running example program, analyzed over its finite lattice."""
    return corpus_program("fig1.pl")


@pytest.fixture
def fig1_lattice():
    return load_lattice(corpus_file("fig1.lattice"))


@pytest.fixture
def fig1_domain(fig1, fig1_lattice):
    return make_domain(fig1, fig1_lattice)


@pytest.fixture
def dutch_final():
    return corpus_program("dutch_final.pl")


@pytest.fixture
def regtypes(dutch_final):
    """Regular types over the properties of the Dutch flag program."""
    return make_domain(dutch_final)
