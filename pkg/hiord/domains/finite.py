"""
Finite lattices named after properties.

A lattice file lists elements and Hasse edges::

    lattice {
        elems: [top, int, atm, nat, bot];
        edges: [int < top, atm < top, nat < int, bot < nat, bot < atm]
    }

Element ``e`` stands for the terms of which the property ``e/1`` of the
program succeeds trivially; ``top`` for all terms and ``bot`` for none.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from hiord.assertions import PropFormula
from hiord.conf import settings
from hiord.domains.base import Domain
from hiord.engine.semantics import trivially_succeeds
from hiord.engine.store import EMPTY as EMPTY_STORE
from hiord.exceptions import LatticeError
from hiord.lang.terms import (
    Atom,
    Compound,
    atom,
    integer,
    is_constant,
    literal_terms,
    term_variables,
)

__all__ = ("FiniteLattice", "LatticeDomain", "parse_lattice", "load_lattice")

logger = logging.getLogger(__name__)

_LATTICE = re.compile(
    r"^\s*lattice\s*\{\s*elems\s*:\s*\[(?P<elems>[^\]]*)\]\s*;"
    r"\s*edges\s*:\s*\[(?P<edges>[^\]]*)\]\s*;?\s*\}\s*$",
    re.DOTALL,
)
_NAME = re.compile(r"^[a-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class FiniteLattice:
    name: str
    elements: tuple
    order: frozenset
    top: str
    bottom: str
    meets: dict = field(compare=False, repr=False)
    joins: dict = field(compare=False, repr=False)

    def leq(self, a, b):
        return (a, b) in self.order

    def meet(self, a, b):
        return self.meets[(a, b)]

    def join(self, a, b):
        return self.joins[(a, b)]

    def check_laws(self):
        """
        Verify the lattice laws on all element pairs and triples.

        Raises
        ------
            LatticeError: Naming the first violated law.

        """
        for a, b in itertools.product(self.elements, repeat=2):
            if self.meet(a, b) != self.meet(b, a):
                raise LatticeError(f"{self.name}: meet of {a}, {b} not commutative")
            if self.join(a, b) != self.join(b, a):
                raise LatticeError(f"{self.name}: join of {a}, {b} not commutative")
            if self.meet(a, self.join(a, b)) != a or self.join(a, self.meet(a, b)) != a:
                raise LatticeError(f"{self.name}: absorption fails for {a}, {b}")
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c):
                raise LatticeError(
                    f"{self.name}: meet not associative on {a}, {b}, {c}"
                )
            if self.join(a, self.join(b, c)) != self.join(self.join(a, b), c):
                raise LatticeError(
                    f"{self.name}: join not associative on {a}, {b}, {c}"
                )


def _bound(lattice_name, candidates, order, greatest):
    for c in candidates:
        if all(((d, c) if greatest else (c, d)) in order for d in candidates):
            return c
    kind = "greatest lower" if greatest else "least upper"
    raise LatticeError(f"{lattice_name}: no {kind} bound among {sorted(candidates)}")


def parse_lattice(text, name="lattice"):
    """
    Parse a lattice definition and build its meet and join tables.

    Raises
    ------
        LatticeError: On syntax errors, unknown elements, cycles, or when the
            order has no unique top, bottom, meets or joins.

    """
    text = re.sub(r"%[^\n]*", "", text)
    match = _LATTICE.match(text)
    if match is None:
        raise LatticeError(
            f"{name}: expected 'lattice {{ elems: [...]; edges: [...] }}'"
        )
    elements = tuple(e.strip() for e in match["elems"].split(",") if e.strip())
    for e in elements:
        if not _NAME.match(e):
            raise LatticeError(f"{name}: invalid element name {e!r}")
    if len(set(elements)) != len(elements):
        raise LatticeError(f"{name}: duplicate elements")
    order = {(e, e) for e in elements}
    for edge in (e.strip() for e in match["edges"].split(",") if e.strip()):
        parts = [p.strip() for p in edge.split("<")]
        if len(parts) != 2 or not all(p in elements for p in parts):
            raise LatticeError(f"{name}: invalid edge {edge!r}")
        order.add(tuple(parts))
    changed = True
    while changed:
        closure = {(a, d) for a, b in order for c, d in order if b == c}
        changed = not closure <= order
        order |= closure
    for a, b in order:
        if a != b and (b, a) in order:
            raise LatticeError(f"{name}: cycle between {a} and {b}")
    tops = [e for e in elements if all((d, e) in order for d in elements)]
    bottoms = [e for e in elements if all((e, d) in order for d in elements)]
    if len(tops) != 1 or len(bottoms) != 1:
        raise LatticeError(f"{name}: a lattice needs a unique top and bottom")
    meets, joins = {}, {}
    for a, b in itertools.product(elements, repeat=2):
        lower = [c for c in elements if (c, a) in order and (c, b) in order]
        upper = [c for c in elements if (a, c) in order and (b, c) in order]
        meets[(a, b)] = _bound(name, lower, order, greatest=True)
        joins[(a, b)] = _bound(name, upper, order, greatest=False)
    lattice = FiniteLattice(
        name, elements, frozenset(order), tops[0], bottoms[0], meets, joins
    )
    lattice.check_laws()
    return lattice


def load_lattice(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LatticeError(f"cannot read lattice file {path}: {e}") from e
    return parse_lattice(text, path.name)


class LatticeDomain(Domain):
    """
    A finite lattice whose elements are properties of the program.

    Values carry no term structure: compound terms are only described by the
    top element.
    """

    name = "lattice"

    def __init__(self, program, lattice):
        super().__init__(program)
        self.lattice = lattice
        self._constants = {}

    @property
    def top(self):
        return self.lattice.top

    @property
    def bottom(self):
        return self.lattice.bottom

    def leq(self, a, b):
        return self.lattice.leq(a, b)

    def meet(self, a, b):
        return self.lattice.meet(a, b)

    def join(self, a, b):
        return self.lattice.join(a, b)

    def _holds(self, element, term):
        if element == self.top:
            return True
        if element == self.bottom or not self.program.defines((element, 1)):
            return False
        formula = PropFormula(((Atom(element, (term,)),),))
        return trivially_succeeds(formula, EMPTY_STORE, self.program)

    def constant(self, term):
        if term not in self._constants:
            value = self.top
            for element in self.lattice.elements:
                if self._holds(element, term):
                    value = self.meet(value, element)
            self._constants[term] = value
        return self._constants[term]

    def construct(self, functor, leaves):
        if not leaves:
            return self.constant(Compound(functor))
        if any(leaf == self.bottom for leaf in leaves):
            return self.bottom
        return self.top

    def deconstruct(self, leaf, functor, arity):
        if leaf == self.bottom:
            return None
        return (self.top,) * arity

    def from_property(self, name, params=()):
        if params:
            return None
        if name in self.lattice.elements:
            return name
        if name == "term":
            return self.top
        return None

    def contains(self, leaf, term):
        if leaf == self.top:
            return True
        if term_variables(term):
            return False
        return self._holds(leaf, term)

    def _universe(self):
        found = [integer(i) for i in settings.HIORD_SAMPLE_INTEGERS]
        found += [atom(a) for a in settings.HIORD_SAMPLE_ATOMS]
        for rule in self.program.rules:
            for literal in rule.body:
                for term in literal_terms(literal):
                    if is_constant(term) and term not in found:
                        found.append(term)
        return found

    def enumerate(self, leaf, depth):
        if depth < 1:
            return []
        return [t for t in self._universe() if self.contains(leaf, t)]

    def render(self, leaf):
        return leaf
