"""Render terms, rules, assertions and programs in the surface syntax."""

from __future__ import annotations

import re

from hiord.assertions import PLACEHOLDER, PredAssertion
from hiord.lang.parser import INFIX, PREFIX, SYMBOL_CHARS
from hiord.lang.terms import (
    NIL,
    ArithCmp,
    ArithIs,
    Atom,
    CheckLiteral,
    Compound,
    Eq,
    ExitMarker,
    HigherOrderAtom,
    Test,
    Variable,
    format_indicator,
    list_items,
)

__all__ = (
    "format_term",
    "format_literal",
    "format_rule",
    "format_formula",
    "format_assertion",
    "format_property",
    "format_program",
)

_PLAIN_ATOM = re.compile(r"^[a-z][A-Za-z0-9_]*$")


def _variable_name(var):
    # positional variables of normalized assertions are not valid source
    if var.name.startswith("$"):
        return "X" + var.name[1:]
    return var.name


def format_atom(name):
    if (
        _PLAIN_ATOM.match(name)
        or (name and all(ch in SYMBOL_CHARS for ch in name))
        or name in ("[]", "!", ";")
    ):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def format_term(term, max_prec=999):
    """
    Render a term; operators are written infix.

    ``max_prec`` is the highest operator priority allowed without parentheses,
    999 for arguments of compound terms.
    """
    if isinstance(term, Variable):
        return _variable_name(term)
    functor = term.functor
    if isinstance(functor, int):
        text = str(functor)
        return f"({text})" if functor < 0 and max_prec < 999 else text
    if not term.args:
        return format_atom(functor)
    if functor == "." and term.arity == 2:
        items, tail = list_items(term)
        text = ", ".join(format_term(i) for i in items)
        if tail != NIL:
            text += "|" + format_term(tail)
        return f"[{text}]"
    if term.arity == 2 and functor in INFIX:
        prec, kind = INFIX[functor]
        left = format_term(term.args[0], prec - 1 if kind[0] == "x" else prec)
        right = format_term(term.args[1], prec - 1 if kind[2] == "x" else prec)
        if functor == ",":
            text = f"{left}, {right}"
        elif functor == "/":
            text = f"{left}/{right}"
        else:
            text = f"{left} {functor} {right}"
        return f"({text})" if prec > max_prec else text
    if term.arity == 1 and functor in PREFIX:
        prec, kind = PREFIX[functor]
        arg = format_term(term.args[0], prec - 1 if kind == "fx" else prec)
        text = f"{functor} {arg}"
        return f"({text})" if prec > max_prec else text
    args = ", ".join(format_term(a) for a in term.args)
    return f"{format_atom(functor)}({args})"


def _call(name, args):
    if not args:
        return format_atom(name) if isinstance(name, str) else name
    rendered = ", ".join(format_term(a) for a in args)
    head = format_atom(name) if isinstance(name, str) else name
    return f"{head}({rendered})"


def format_literal(literal):
    if isinstance(literal, Eq):
        return format_term(Compound("=", (literal.left, literal.right)), 999)
    if isinstance(literal, ArithIs):
        return format_term(Compound("is", (literal.target, literal.expr)), 999)
    if isinstance(literal, ArithCmp):
        return format_term(Compound(literal.op, (literal.left, literal.right)), 999)
    if isinstance(literal, Test):
        if len(literal.args) == 2 and literal.name in INFIX:
            return format_term(Compound(literal.name, literal.args), 999)
        return _call(literal.name, literal.args)
    if isinstance(literal, Atom):
        return _call(literal.pred, literal.args)
    if isinstance(literal, HigherOrderAtom):
        name = _variable_name(literal.var)
        if not literal.args:
            return name
        return f"{name}({', '.join(format_term(a) for a in literal.args)})"
    if isinstance(literal, CheckLiteral):
        return f"check({format_literal(literal.inner)}, {literal.label})"
    if isinstance(literal, ExitMarker):
        return f"exit({format_literal(literal.call)})"
    raise TypeError(f"not a literal: {literal!r}")


def format_goal(literals):
    return ", ".join(format_literal(lit) for lit in literals) or "true"


def format_rule(rule):
    head = format_literal(rule.head)
    if not rule.body:
        return f"{head}."
    return f"{head} :-\n    " + ",\n    ".join(map(format_literal, rule.body)) + "."


def format_formula(formula):
    """Render a property formula; disjunctions are parenthesized."""
    conjuncts = [
        ", ".join(format_literal(lit) for lit in conjunct) or "true"
        for conjunct in formula.disjuncts
    ]
    if len(conjuncts) == 1:
        text = conjuncts[0]
        return f"({text})" if len(formula.disjuncts[0]) > 1 else text
    return "(" + " ; ".join(conjuncts) + ")"


def _assertion_body(head, pre, post):
    text = head
    if not pre.is_true:
        text += f" : {format_formula(pre)}"
    if not post.is_true:
        text += f" => {format_formula(post)}"
    return text


def format_assertion(assertion):
    if isinstance(assertion, PredAssertion):
        head = format_literal(assertion.head)
    else:
        params = ", ".join(format_term(p) for p in assertion.params)
        head = f"{PLACEHOLDER}({params})"
    return f":- pred {_assertion_body(head, assertion.pre, assertion.post)}."


def format_property(prop):
    members = "\n".join(f"    {format_assertion(m)}" for m in prop.members)
    return f"{prop.name} := {{\n{members}\n}}."


def format_program(program):
    """Render a whole program; library rules are omitted."""
    blocks = []
    if program.props:
        specs = ", ".join(format_indicator(p) for p in sorted(program.props))
        blocks.append(f":- prop {specs}.")
    if program.regtypes:
        specs = ", ".join(format_indicator(p) for p in sorted(program.regtypes))
        blocks.append(f":- regtype {specs}.")
    blocks.extend(format_property(p) for p in program.properties.values())
    for asserts in program.assertions.values():
        blocks.extend(format_assertion(a) for a in asserts)
    for entry in program.entries:
        goal = format_literal(entry.goal)
        if entry.pre is not None:
            goal += f" : {format_formula(entry.pre)}"
        blocks.append(f":- entry {goal}.")
    for wrap in program.wraps:
        blocks.append(
            f":- wrap {format_indicator(wrap.pred)} with {wrap.prop} as {wrap.name}."
        )
    blocks.extend(format_rule(r) for r in program.rules)
    return "\n".join(blocks) + ("\n" if blocks else "")
