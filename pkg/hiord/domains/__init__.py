"""Abstract domains: regular types and finite lattices."""

from hiord.conf import settings
from hiord.domains.finite import LatticeDomain, load_lattice
from hiord.domains.regtypes import RegTypeDomain

__all__ = ("make_domain",)


def make_domain(program, lattice=None):
    """
    Domain for ``program``.

    ``lattice`` is a :class:`~hiord.domains.finite.FiniteLattice` or a path to
    a lattice file; it defaults to ``HIORD_LATTICE_FILE`` and regular types
    are used when neither is set.
    """
    lattice = lattice or settings.HIORD_LATTICE_FILE
    if not lattice:
        return RegTypeDomain(program)
    if isinstance(lattice, str) or hasattr(lattice, "__fspath__"):
        lattice = load_lattice(lattice)
    return LatticeDomain(program, lattice)
