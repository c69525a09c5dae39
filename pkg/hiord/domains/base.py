"""
Abstract domain interface and abstract values over positional variables.

A domain describes sets of terms by *leaves*; an :class:`AbsVal` maps the
positional variables ``$1..$n`` of a predicate to leaves. A variable without
an entry is unconstrained (``⊤``); a single ``⊥`` leaf makes the whole value
``⊥``.
"""

from __future__ import annotations

from hiord.exceptions import MixedDomainError

__all__ = ("Domain", "AbsVal", "position", "positional_key")


def positional_key(i):
    return f"${i}"


def position(key):
    """Argument position of a positional key, ``None`` for other names."""
    if key.startswith("$") and key[1:].isdigit():
        return int(key[1:])
    return None


class Domain:
    """
    Interface of the abstract domains.

    Leaves must be hashable and compare equal when they describe the same set
    of terms. Every domain instance is bound to one program, whose properties
    give meaning to property literals.
    """

    name = ""

    def __init__(self, program):
        self.program = program
        self.diagnostics = []

    @property
    def top(self):
        raise NotImplementedError

    @property
    def bottom(self):
        raise NotImplementedError

    def leq(self, a, b):
        raise NotImplementedError

    def meet(self, a, b):
        raise NotImplementedError

    def join(self, a, b):
        raise NotImplementedError

    def widen(self, a, b):
        """Upper bound of ``a`` and ``b`` ensuring finite ascending chains."""
        return self.join(a, b)

    def join_is_exact(self, a, b):
        """Whether ``γ(a ⊔ b) = γ(a) ∪ γ(b)``."""
        return self.leq(a, b) or self.leq(b, a)

    def constant(self, term):
        """Most precise leaf containing the constant ``term``."""
        raise NotImplementedError

    def construct(self, functor, leaves):
        """Leaf of the terms ``f(t1, ..., tn)`` with ``ti`` in ``leaves[i]``."""
        raise NotImplementedError

    def deconstruct(self, leaf, functor, arity):
        """
        Argument leaves of the ``functor/arity`` terms in ``leaf``.

        ``None`` when ``leaf`` contains no such term.
        """
        raise NotImplementedError

    def from_property(self, name, params=()):
        """
        Leaf described by a unary property literal, ``None`` if not describable.

        ``params`` holds the type arguments of a parametric property.
        """
        raise NotImplementedError

    def contains(self, leaf, term):
        raise NotImplementedError

    def predicate_names(self, leaf):
        """Names of the atoms ``leaf`` is limited to, or ``None``."""
        return None

    def enumerate(self, leaf, depth):
        raise NotImplementedError

    def render(self, leaf):
        raise NotImplementedError

    def warn(self, message):
        if all(m.id != message.id or m.msg != message.msg for m in self.diagnostics):
            self.diagnostics.append(message)


class AbsVal:
    """Abstract value: a leaf per variable name."""

    __slots__ = ("domain", "env", "is_bottom")

    def __init__(self, domain, env=None, bottom=False):
        self.domain = domain
        items = {}
        for key, leaf in (env or {}).items():
            if leaf == domain.bottom:
                bottom = True
                break
            if leaf != domain.top:
                items[key] = leaf
        self.is_bottom = bottom
        self.env = {} if bottom else items

    @classmethod
    def top(cls, domain):
        return cls(domain)

    @classmethod
    def bottom(cls, domain):
        return cls(domain, bottom=True)

    @property
    def is_top(self):
        return not self.is_bottom and not self.env

    def __repr__(self):
        return f"AbsVal({self.render()})"

    def __eq__(self, other):
        if not isinstance(other, AbsVal):
            return NotImplemented
        return (
            self.domain is other.domain
            and self.is_bottom == other.is_bottom
            and self.env == other.env
        )

    def __hash__(self):
        return hash((self.is_bottom, frozenset(self.env.items())))

    def _same(self, other):
        if self.domain is not other.domain:
            raise MixedDomainError(
                f"cannot combine values of {self.domain.name} "
                f"and {other.domain.name} instances"
            )

    def get(self, key):
        if self.is_bottom:
            return self.domain.bottom
        return self.env.get(key, self.domain.top)

    def keys(self):
        return set(self.env)

    def leq(self, other):
        self._same(other)
        if self.is_bottom:
            return True
        if other.is_bottom:
            return False
        return all(
            self.domain.leq(self.get(key), leaf) for key, leaf in other.env.items()
        )

    def meet(self, other):
        self._same(other)
        if self.is_bottom or other.is_bottom:
            return AbsVal.bottom(self.domain)
        env = dict(self.env)
        for key, leaf in other.env.items():
            env[key] = self.domain.meet(env[key], leaf) if key in env else leaf
        return AbsVal(self.domain, env)

    def _combine(self, other, op):
        self._same(other)
        if self.is_bottom:
            return other
        if other.is_bottom:
            return self
        shared = self.keys() & other.keys()
        return AbsVal(
            self.domain, {key: op(self.env[key], other.env[key]) for key in shared}
        )

    def join(self, other):
        return self._combine(other, self.domain.join)

    def widen(self, other):
        return self._combine(other, self.domain.widen)

    def join_is_exact(self, other):
        """
        Whether the join loses nothing.

        It is exact when one value includes the other, or when they differ in
        one variable only and the domain joins those leaves exactly.
        """
        self._same(other)
        if self.leq(other) or other.leq(self):
            return True
        if self.keys() != other.keys():
            return False
        differing = [k for k in self.env if self.env[k] != other.env[k]]
        return len(differing) == 1 and self.domain.join_is_exact(
            self.env[differing[0]], other.env[differing[0]]
        )

    def set(self, key, leaf):
        if self.is_bottom:
            return self
        return AbsVal(self.domain, {**self.env, key: leaf})

    def restrict(self, keys):
        """Projection onto ``keys``."""
        if self.is_bottom:
            return self
        keys = set(keys)
        return AbsVal(self.domain, {k: v for k, v in self.env.items() if k in keys})

    def rename(self, mapping):
        if self.is_bottom:
            return self
        return AbsVal(
            self.domain, {mapping.get(k, k): v for k, v in self.env.items()}
        )

    def render(self):
        if self.is_bottom:
            return "⊥"
        if not self.env:
            return "⊤"

        def order(key):
            pos = position(key)
            return (pos is None, pos or 0, key)

        parts = [
            f"{_display(key)}: {self.domain.render(self.env[key])}"
            for key in sorted(self.env, key=order)
        ]
        return "{" + ", ".join(parts) + "}"


def _display(key):
    pos = position(key)
    return f"X{pos}" if pos is not None else key
