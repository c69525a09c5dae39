"""
Constraint stores over Herbrand terms and ground integer arithmetic.

A :class:`Store` is a solved-form substitution. Stores are immutable; every
binding returns a new store.
"""

from __future__ import annotations

from functools import cmp_to_key

from hiord.lang.terms import (
    Compound,
    Variable,
    is_integer,
    term_variables,
)

__all__ = (
    "Store",
    "EMPTY",
    "evaluate",
    "standard_order",
    "compare_terms",
    "is_variant",
    "variant_mapping",
)


class Store:
    """Variable bindings in solved form, with occurs check."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings=None):
        self._bindings = dict(bindings or {})

    def __repr__(self):
        inner = ", ".join(f"{v}={t!r}" for v, t in self._bindings.items())
        return f"Store({inner})"

    def __len__(self):
        return len(self._bindings)

    def walk(self, term):
        while isinstance(term, Variable) and term in self._bindings:
            term = self._bindings[term]
        return term

    def resolve(self, term):
        """Apply the store to ``term`` completely."""
        term = self.walk(term)
        if isinstance(term, Variable) or not term.args:
            return term
        return Compound(term.functor, tuple(self.resolve(a) for a in term.args))

    def is_bound(self, var):
        return not isinstance(self.walk(var), Variable)

    def _occurs(self, var, term):
        stack = [term]
        while stack:
            t = self.walk(stack.pop())
            if t == var:
                return True
            if isinstance(t, Compound):
                stack.extend(t.args)
        return False

    def unify(self, left, right):
        """Return the store extended with ``left = right``, or ``None``."""
        bindings = dict(self._bindings)
        store = Store.__new__(Store)
        store._bindings = bindings
        stack = [(left, right)]
        while stack:
            a, b = stack.pop()
            a, b = store.walk(a), store.walk(b)
            if a == b:
                continue
            if isinstance(a, Variable):
                if store._occurs(a, b):
                    return None
                bindings[a] = b
            elif isinstance(b, Variable):
                if store._occurs(b, a):
                    return None
                bindings[b] = a
            elif a.functor != b.functor or len(a.args) != len(b.args):
                return None
            else:
                stack.extend(zip(a.args, b.args))
        return store

    def unify_all(self, pairs):
        store = self
        for left, right in pairs:
            store = store.unify(left, right)
            if store is None:
                return None
        return store

    def project(self, variables):
        """
        Projection onto ``variables``: their resolved values.

        Unbound variables that are aliased to another projected variable map to
        it; the result is hashable and independent of the bindings of other
        variables.
        """
        result = []
        for var in variables:
            value = self.resolve(var)
            if value != var:
                result.append((var, value))
        return tuple(result)

    def entails(self, variables, other):
        """
        Whether this store entails ``other`` on ``variables``.

        ``other`` must be an extension of this store; it is entailed iff it
        neither binds nor aliases any variable free in ``variables``.
        """
        watched = []
        for var in variables:
            term_variables(self.resolve(var), watched)
        targets = set()
        for var in watched:
            value = other.walk(var)
            if not isinstance(value, Variable) or value in targets:
                return False
            targets.add(value)
        return True


EMPTY = Store()


def _trunc_div(x, y):
    q = abs(x) // abs(y)
    return q if (x >= 0) == (y >= 0) else -q


def evaluate(expr, store):
    """Evaluate a ground integer expression, ``None`` if not evaluable."""
    expr = store.walk(expr)
    if isinstance(expr, Variable):
        return None
    if is_integer(expr):
        return expr.functor
    args = [evaluate(a, store) for a in expr.args]
    if any(a is None for a in args):
        return None
    op = expr.functor
    try:
        if len(args) == 1:
            (x,) = args
            return {"-": lambda: -x, "+": lambda: x, "abs": lambda: abs(x)}[op]()
        if len(args) == 2:
            x, y = args
            table = {
                "+": lambda: x + y,
                "-": lambda: x - y,
                "*": lambda: x * y,
                "//": lambda: _trunc_div(x, y),
                "/": lambda: _trunc_div(x, y),
                "mod": lambda: x % y,
                "rem": lambda: x - y * _trunc_div(x, y),
                "min": lambda: min(x, y),
                "max": lambda: max(x, y),
            }
            return table[op]()
    except (KeyError, ZeroDivisionError):
        return None
    return None


def _rank(term):
    if isinstance(term, Variable):
        return 0
    if is_integer(term):
        return 1
    if not term.args:
        return 2
    return 3


def compare_terms(a, b):
    """Standard order: variables < numbers < atoms < compound terms."""
    ra, rb = _rank(a), _rank(b)
    if ra != rb:
        return -1 if ra < rb else 1
    if ra == 0:
        return (a.name > b.name) - (a.name < b.name)
    if ra in (1, 2):
        return (a.functor > b.functor) - (a.functor < b.functor)
    key_a, key_b = (len(a.args), a.functor), (len(b.args), b.functor)
    if key_a != key_b:
        return -1 if key_a < key_b else 1
    for x, y in zip(a.args, b.args):
        c = compare_terms(x, y)
        if c:
            return c
    return 0


standard_order = cmp_to_key(compare_terms)


def variant_mapping(a, b):
    """
    Variable bijection renaming ``a`` into ``b``, or ``None``.

    ``a`` and ``b`` are variants when such a renaming exists.
    """
    forward, backward = {}, {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if isinstance(x, Variable) or isinstance(y, Variable):
            if not (isinstance(x, Variable) and isinstance(y, Variable)):
                return None
            if forward.setdefault(x, y) != y or backward.setdefault(y, x) != x:
                return None
        elif x.functor != y.functor or len(x.args) != len(y.args):
            return None
        else:
            stack.extend(zip(x.args, y.args))
    return forward


def is_variant(a, b):
    return variant_mapping(a, b) is not None
