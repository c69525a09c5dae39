"""Terms, literals and rules of the higher-order constraint language."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

__all__ = (
    "Span",
    "NIL",
    "Constraint",
    "literal_terms",
    "Variable",
    "Compound",
    "Term",
    "Eq",
    "ArithIs",
    "ArithCmp",
    "Test",
    "Atom",
    "HigherOrderAtom",
    "CheckLiteral",
    "ExitMarker",
    "Literal",
    "Rule",
    "atom",
    "integer",
    "make_list",
    "list_items",
    "is_atom",
    "is_integer",
    "is_constant",
    "term_variables",
    "literal_variables",
    "substitute",
    "substitute_literal",
    "term_size",
    "term_depth",
    "fresh_variable",
    "rename_rule",
    "indicator",
    "format_indicator",
    "ARITH_COMPARISONS",
    "TEST_BUILTINS",
)

_fresh = itertools.count(1)


@dataclass(frozen=True)
class Span:
    """Source position of a clause or directive."""

    line: int = 0
    column: int = 0

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Compound:
    """
    Function symbol applied to arguments.

    Constants are zero-arity compounds; integer constants carry an ``int``
    functor, atoms a ``str`` functor.
    """

    functor: Union[str, int]
    args: tuple["Term", ...] = ()

    @property
    def arity(self):
        return len(self.args)

    @property
    def is_constant(self):
        return not self.args


Term = Union[Variable, Compound]

NIL = Compound("[]")


def atom(name):
    return Compound(name)


def integer(value):
    return Compound(int(value))


def is_atom(term):
    return (
        isinstance(term, Compound)
        and not term.args
        and isinstance(term.functor, str)
    )


def is_integer(term):
    return (
        isinstance(term, Compound)
        and not term.args
        and isinstance(term.functor, int)
        and not isinstance(term.functor, bool)
    )


def is_constant(term):
    return isinstance(term, Compound) and not term.args


def make_list(items, tail=NIL):
    result = tail
    for item in reversed(list(items)):
        result = Compound(".", (item, result))
    return result


def list_items(term):
    """Return ``(items, tail)`` of a (possibly partial) list term."""
    items = []
    while isinstance(term, Compound) and term.functor == "." and term.arity == 2:
        items.append(term.args[0])
        term = term.args[1]
    return items, term


def term_variables(term, acc=None):
    """Variables of ``term`` in first-occurrence order."""
    acc = [] if acc is None else acc
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Variable):
            if t not in acc:
                acc.append(t)
        else:
            stack.extend(reversed(t.args))
    return acc


def substitute(term, mapping):
    """Replace variables by terms, without chasing the replacements."""
    if isinstance(term, Variable):
        return mapping.get(term, term)
    if not term.args:
        return term
    return Compound(term.functor, tuple(substitute(a, mapping) for a in term.args))


def term_size(term):
    """Number of symbol occurrences; a variable counts as zero."""
    if isinstance(term, Variable):
        return 0
    return 1 + sum(term_size(a) for a in term.args)


def term_depth(term):
    if isinstance(term, Variable):
        return 0
    return 1 + max((term_depth(a) for a in term.args), default=0)


def fresh_variable(prefix="_G"):
    return Variable(f"{prefix}{next(_fresh)}")


ARITH_COMPARISONS = frozenset({"<", ">", "=<", ">=", "=:=", "=\\="})

# builtin tests evaluated as constraints: name -> arity
TEST_BUILTINS = {
    "true": 0,
    "fail": 0,
    "false": 0,
    "\\=": 2,
    "==": 2,
    "\\==": 2,
    "@<": 2,
    "@>": 2,
    "@=<": 2,
    "@>=": 2,
    "integer": 1,
    "number": 1,
    "atom": 1,
    "atomic": 1,
    "var": 1,
    "nonvar": 1,
    "ground": 1,
}


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class ArithIs:
    target: Term
    expr: Term


@dataclass(frozen=True)
class ArithCmp:
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class Test:
    """Builtin test such as ``integer(X)`` or ``X @< Y``."""

    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self):
        return len(self.args)

    @property
    def indicator(self):
        return (self.pred, len(self.args))


@dataclass(frozen=True)
class HigherOrderAtom:
    var: Variable
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class CheckLiteral:
    """Success check pushed by the semantics with assertions."""

    inner: Atom
    label: str


@dataclass(frozen=True)
class ExitMarker:
    """Marks the return of a call; only pushed when derivations are observed."""

    call: Atom
    call_id: int


Constraint = Union[Eq, ArithIs, ArithCmp, Test]
Literal = Union[Eq, ArithIs, ArithCmp, Test, Atom, HigherOrderAtom, CheckLiteral]


def literal_terms(literal):
    if isinstance(literal, Eq):
        return (literal.left, literal.right)
    if isinstance(literal, ArithIs):
        return (literal.target, literal.expr)
    if isinstance(literal, ArithCmp):
        return (literal.left, literal.right)
    if isinstance(literal, HigherOrderAtom):
        return (literal.var,) + literal.args
    if isinstance(literal, CheckLiteral):
        return literal.inner.args
    if isinstance(literal, ExitMarker):
        return literal.call.args
    return literal.args


def literal_variables(literal, acc=None):
    acc = [] if acc is None else acc
    for t in literal_terms(literal):
        term_variables(t, acc)
    return acc


def substitute_literal(literal, mapping):
    def s(t):
        return substitute(t, mapping)

    if isinstance(literal, Eq):
        return Eq(s(literal.left), s(literal.right))
    if isinstance(literal, ArithIs):
        return ArithIs(s(literal.target), s(literal.expr))
    if isinstance(literal, ArithCmp):
        return ArithCmp(literal.op, s(literal.left), s(literal.right))
    if isinstance(literal, Test):
        return Test(literal.name, tuple(map(s, literal.args)))
    if isinstance(literal, Atom):
        return Atom(literal.pred, tuple(map(s, literal.args)))
    if isinstance(literal, HigherOrderAtom):
        var = mapping.get(literal.var, literal.var)
        if not isinstance(var, Variable):
            raise TypeError("higher-order callee must stay a variable")
        return HigherOrderAtom(var, tuple(map(s, literal.args)))
    if isinstance(literal, CheckLiteral):
        return CheckLiteral(substitute_literal(literal.inner, mapping), literal.label)
    raise TypeError(f"not a literal: {literal!r}")


@dataclass(frozen=True)
class Rule:
    """
    Program rule ``H :- B``.

    Head arguments are pairwise distinct variables; the parser moves every
    other head argument into an equality at the front of the body.
    """

    head: Atom
    body: tuple[Literal, ...] = ()
    span: Span = field(default=Span(), compare=False)

    @property
    def indicator(self):
        return self.head.indicator

    def variables(self):
        acc = []
        for t in self.head.args:
            term_variables(t, acc)
        for literal in self.body:
            literal_variables(literal, acc)
        return acc


def rename_rule(rule, prefix="_G"):
    """Copy of ``rule`` with all variables replaced by fresh ones."""
    mapping = {v: fresh_variable(prefix) for v in rule.variables()}
    head = substitute_literal(rule.head, mapping)
    body = tuple(substitute_literal(lit, mapping) for lit in rule.body)
    return Rule(head, body, rule.span)


def indicator(name, arity):
    return (name, arity)


def format_indicator(ind):
    return f"{ind[0]}/{ind[1]}"
