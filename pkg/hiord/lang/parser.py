"""
Reader for programs, assertions and predicate properties.

The surface syntax is the usual Prolog clause syntax with a fixed operator
table, extended by the directives ``prop``, ``regtype``, ``pred``, ``entry``
and ``wrap``, by regular type definitions ``t := a | b | c.`` and by predicate
property definitions::

    p_nat_nat := {
        :- pred _(X, Y) : nat(X) => nat(Y).
    }.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from django.core.checks import Error, Warning

from hiord.assertions import (
    PLACEHOLDER,
    TRUE,
    AnonAssertion,
    PredAssertion,
    PredicateProperty,
    PropFormula,
)
from hiord.exceptions import ParseError, ParseErrorList
from hiord.lang.prelude import PRELUDE
from hiord.lang.program import Entry, Program, WrapDirective
from hiord.lang.terms import (
    ARITH_COMPARISONS,
    NIL,
    TEST_BUILTINS,
    ArithCmp,
    ArithIs,
    Atom,
    Compound,
    Eq,
    HigherOrderAtom,
    Rule,
    Span,
    Test,
    Variable,
    format_indicator,
    literal_variables,
    make_list,
    term_variables,
)

__all__ = ("parse_program", "parse_entry", "parse_query", "parse_term", "tokenize")

logger = logging.getLogger(__name__)

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
PUNCT = set("()[]{},|")
SOLO = set("!;")

XFX, XFY, YFX, FX, FY = "xfx", "xfy", "yfx", "fx", "fy"

INFIX = {
    ":-": (1200, XFX),
    ";": (1100, XFY),
    "->": (1050, XFY),
    "=>": (1050, XFX),
    ",": (1000, XFY),
    "with": (800, XFX),
    "as": (700, XFX),
    "=": (700, XFX),
    "\\=": (700, XFX),
    "==": (700, XFX),
    "\\==": (700, XFX),
    "@<": (700, XFX),
    "@>": (700, XFX),
    "@=<": (700, XFX),
    "@>=": (700, XFX),
    "is": (700, XFX),
    "<": (700, XFX),
    ">": (700, XFX),
    "=<": (700, XFX),
    ">=": (700, XFX),
    "=:=": (700, XFX),
    "=\\=": (700, XFX),
    "+": (500, YFX),
    "-": (500, YFX),
    "*": (400, YFX),
    "/": (400, YFX),
    "//": (400, YFX),
    "mod": (400, YFX),
    "rem": (400, YFX),
    ":": (200, XFY),
    "**": (200, XFX),
    "^": (200, XFY),
}

PREFIX = {
    ":-": (1200, FX),
    "pred": (1150, FX),
    "prop": (1150, FX),
    "regtype": (1150, FX),
    "entry": (1150, FX),
    "wrap": (1150, FX),
    "\\+": (900, FY),
    "-": (200, FY),
    "+": (200, FY),
}

DIRECTIVES = ("prop", "regtype", "pred", "entry", "wrap")


@dataclass(frozen=True)
class Token:
    kind: str  # name, qname, var, int, punct, end, eof
    value: object
    line: int
    column: int
    spaced: bool = False


@dataclass(frozen=True)
class _Apply:
    """``X(t1, ..., tn)`` with a variable in functor position."""

    name: str
    args: tuple[object, ...]


def tokenize(text):
    """
    Split source text into tokens.

    Raises
    ------
        ParseError: On a character that starts no token or an unterminated
            quoted atom or comment.

    """
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    spaced = True

    def advance(k):
        nonlocal i, line, col
        for ch in text[i : i + k]:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i += k

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance(1)
            spaced = True
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                advance(1)
            spaced = True
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise ParseError("unterminated block comment", line, col)
            advance(end + 2 - i)
            spaced = True
            continue
        start_line, start_col = line, col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", int(text[i:j]), line, col, spaced))
            advance(j - i)
        elif ch.isalpha() and ch.islower():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col, spaced))
            advance(j - i)
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("var", text[i:j], line, col, spaced))
            advance(j - i)
        elif ch == "'":
            j, chars = i + 1, []
            while True:
                if j >= n:
                    raise ParseError("unterminated quoted atom", start_line, start_col)
                if text[j] == "'" and text.startswith("''", j):
                    chars.append("'")
                    j += 2
                elif text[j] == "'":
                    j += 1
                    break
                elif text[j] == "\\" and j + 1 < n:
                    chars.append(text[j + 1])
                    j += 2
                else:
                    chars.append(text[j])
                    j += 1
            tokens.append(Token("qname", "".join(chars), line, col, spaced))
            advance(j - i)
        elif ch in PUNCT:
            tokens.append(Token("punct", ch, line, col, spaced))
            advance(1)
        elif ch in SOLO:
            tokens.append(Token("name", ch, line, col, spaced))
            advance(1)
        elif ch in SYMBOL_CHARS:
            j = i
            while j < n and text[j] in SYMBOL_CHARS:
                j += 1
            run = text[i:j]
            layout_follows = j >= n or text[j].isspace() or text[j] == "%"
            if run == "." and layout_follows:
                tokens.append(Token("end", ".", line, col, spaced))
            elif run.endswith(".") and layout_follows:
                tokens.append(Token("name", run[:-1], line, col, spaced))
                tokens.append(Token("end", ".", line, col + len(run) - 1, False))
            else:
                tokens.append(Token("name", run, line, col, spaced))
            advance(j - i)
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        spaced = False
    tokens.append(Token("eof", None, line, col, True))
    return tokens


class _TermReader:
    """Operator precedence reader over a token list."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.anonymous = 0

    def peek(self, k=0):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect(self, kind, value=None):
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            got = tok.value if tok.value is not None else tok.kind
            raise self.error(f"expected {want!r}, found {got!r}", tok)
        return tok

    def at_punct(self, value, k=0):
        tok = self.peek(k)
        return tok.kind == "punct" and tok.value == value

    def _terminates(self, tok):
        if tok.kind in ("end", "eof"):
            return True
        if tok.kind == "punct" and tok.value in ")]},|":
            return True
        return tok.kind == "name" and tok.value in INFIX and tok.value not in PREFIX

    def parse(self, max_prec=1200):
        left, left_prec = self.primary(max_prec)
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value == ",":
                name = ","
            elif tok.kind == "name" and tok.value in INFIX:
                name = tok.value
            else:
                break
            prec, kind = INFIX[name]
            if prec > max_prec:
                break
            left_max = prec - 1 if kind[0] == "x" else prec
            if left_prec > left_max:
                break
            right_max = prec - 1 if kind[2] == "x" else prec
            self.next()
            right, _ = self.parse(right_max)
            left, left_prec = Compound(name, (left, right)), prec
        return left, left_prec

    def arguments(self):
        self.expect("punct", "(")
        args = [self.parse(999)[0]]
        while self.at_punct(","):
            self.next()
            args.append(self.parse(999)[0])
        self.expect("punct", ")")
        return tuple(args)

    def primary(self, max_prec):
        tok = self.next()
        if tok.kind == "int":
            return Compound(tok.value), 0
        if tok.kind == "var":
            if self.at_punct("(") and not self.peek().spaced:
                return _Apply(tok.value, self.arguments()), 0
            if tok.value == "_":
                self.anonymous += 1
                return Variable(f"_A{self.anonymous}"), 0
            return Variable(tok.value), 0
        if tok.kind == "punct":
            if tok.value == "(":
                term, _ = self.parse(1200)
                self.expect("punct", ")")
                return term, 0
            if tok.value == "[":
                if self.at_punct("]"):
                    self.next()
                    return NIL, 0
                items = [self.parse(999)[0]]
                while self.at_punct(","):
                    self.next()
                    items.append(self.parse(999)[0])
                tail = NIL
                if self.at_punct("|"):
                    self.next()
                    tail = self.parse(999)[0]
                self.expect("punct", "]")
                return make_list(items, tail), 0
            raise self.error(f"unexpected {tok.value!r}", tok)
        if tok.kind in ("name", "qname"):
            name = tok.value
            if self.at_punct("(") and not self.peek().spaced:
                return Compound(name, self.arguments()), 0
            operand_follows = not self._terminates(self.peek())
            if tok.kind == "name" and name in PREFIX and operand_follows:
                nxt = self.peek()
                if name == "-" and nxt.kind == "int" and not nxt.spaced:
                    self.next()
                    return Compound(-nxt.value), 0
                prec, kind = PREFIX[name]
                if prec > max_prec:
                    prec = 999
                arg, _ = self.parse(prec - 1 if kind == FX else prec)
                return Compound(name, (arg,)), prec
            if tok.kind == "name" and (name in INFIX or name in PREFIX):
                return Compound(name), 0 if self._terminates(self.peek()) else 1201
            return Compound(name), 0
        if tok.kind == "end":
            raise self.error("unexpected end of clause", tok)
        raise self.error("unexpected end of input", tok)


def _flatten(term, op):
    while isinstance(term, Compound) and term.functor == op and term.arity == 2:
        yield from _flatten(term.args[0], op)
        term = term.args[1]
    yield term


def _check_term(term, span):
    """Reject variables in functor position inside data terms."""
    if isinstance(term, _Apply):
        raise ParseError(
            f"variable {term.name} in functor position", span.line, span.column
        )
    if isinstance(term, Compound):
        for arg in term.args:
            _check_term(arg, span)
    return term


def _goal(term, span):
    if isinstance(term, Variable):
        return HigherOrderAtom(term, ())
    if isinstance(term, _Apply):
        if term.name == PLACEHOLDER:
            raise ParseError(
                "placeholder '_' outside a predicate property", *_pos(span)
            )
        args = tuple(_check_term(a, span) for a in term.args)
        return HigherOrderAtom(Variable(term.name), args)
    if not isinstance(term, Compound) or isinstance(term.functor, int):
        raise ParseError(f"not callable: {term!r}", *_pos(span))
    name, args = term.functor, tuple(_check_term(a, span) for a in term.args)
    if name in (";", "->", "\\+") and len(args) in (1, 2):
        raise ParseError(f"unsupported control construct {name}", *_pos(span))
    if name == "=" and len(args) == 2:
        return Eq(*args)
    if name == "is" and len(args) == 2:
        return ArithIs(*args)
    if name in ARITH_COMPARISONS and len(args) == 2:
        return ArithCmp(name, *args)
    if name == "call" and args:
        callee, rest = args[0], args[1:]
        if isinstance(callee, Variable):
            return HigherOrderAtom(callee, rest)
        if isinstance(callee, Compound) and isinstance(callee.functor, str):
            return Atom(callee.functor, callee.args + rest)
        raise ParseError("call/N expects a callable first argument", *_pos(span))
    if TEST_BUILTINS.get(name) == len(args):
        return Test(name, args)
    return Atom(name, args)


def _pos(span):
    return span.line, span.column


def _head(term, span):
    if isinstance(term, _Apply):
        raise ParseError(f"variable {term.name} in functor position", *_pos(span))
    if not isinstance(term, Compound) or not isinstance(term.functor, str):
        raise ParseError(f"invalid clause head {term!r}", *_pos(span))
    return Atom(term.functor, tuple(_check_term(a, span) for a in term.args))


def normalize_rule(head, body, span=Span()):
    """
    Build a rule whose head arguments are pairwise distinct variables.

    Every other head argument ``t`` at position ``i`` is replaced by a fresh
    variable ``V`` and ``V = t`` is prepended to the body, e.g. ``p(a).``
    becomes ``p(_N1) :- _N1 = a.``.
    """
    used = {v.name for a in head.args for v in term_variables(a)}
    for literal in body:
        used.update(v.name for v in literal_variables(literal))
    args, equations, seen, k = [], [], set(), 0
    for arg in head.args:
        if isinstance(arg, Variable) and arg not in seen:
            seen.add(arg)
            args.append(arg)
            continue
        k += 1
        while f"_N{k}" in used:
            k += 1
        fresh = Variable(f"_N{k}")
        used.add(fresh.name)
        args.append(fresh)
        equations.append(Eq(fresh, arg))
    return Rule(Atom(head.pred, tuple(args)), tuple(equations) + tuple(body), span)


def _formula(term, span):
    if isinstance(term, Compound) and term.functor == ";" and term.arity == 2:
        left, right = (_formula(a, span) for a in term.args)
        return left.disjoin(right)
    if isinstance(term, Compound) and term.functor == "," and term.arity == 2:
        left, right = (_formula(a, span) for a in term.args)
        return left.conjoin(right)
    if term == Compound("true"):
        return TRUE
    if isinstance(term, Compound) and isinstance(term.functor, str):
        args = tuple(_check_term(a, span) for a in term.args)
        return PropFormula(((Atom(term.functor, args),),))
    raise ParseError(f"not a property literal: {term!r}", *_pos(span))


def _assertion_parts(term):
    pre = post = None
    if isinstance(term, Compound) and term.functor == "=>" and term.arity == 2:
        term, post = term.args
    if isinstance(term, Compound) and term.functor == ":" and term.arity == 2:
        term, pre = term.args
    return term, pre, post


def _head_variables(args, span):
    if not all(isinstance(a, Variable) for a in args) or len(set(args)) != len(args):
        raise ParseError(
            "assertion head arguments must be distinct variables", *_pos(span)
        )
    return tuple(args)


def _indicators(term, span):
    specs = []
    for spec in _flatten(term, ","):
        if (
            isinstance(spec, Compound)
            and spec.functor == "/"
            and spec.arity == 2
            and isinstance(spec.args[0], Compound)
            and isinstance(spec.args[0].functor, str)
            and not spec.args[0].args
            and isinstance(spec.args[1], Compound)
            and isinstance(spec.args[1].functor, int)
        ):
            specs.append((spec.args[0].functor, spec.args[1].functor))
        else:
            raise ParseError("expected a predicate indicator name/arity", *_pos(span))
    return specs


class _ProgramBuilder:
    def __init__(self):
        self.rules = []
        self.props = []
        self.regtypes = []
        self.properties = {}
        self.assertions = {}
        self.entries = []
        self.wraps = []
        self.errors = []

    def clause(self, term, span):
        if isinstance(term, Compound) and term.functor == ":-" and term.arity == 1:
            self.directive(term.args[0], span)
            return
        if isinstance(term, Compound) and term.functor == ":-" and term.arity == 2:
            head = _head(term.args[0], span)
            body = tuple(_goal(g, span) for g in _flatten(term.args[1], ","))
        else:
            head, body = _head(term, span), ()
        self.rules.append(normalize_rule(head, body, span))

    def directive(self, term, span):
        if not (
            isinstance(term, Compound)
            and term.functor in DIRECTIVES
            and term.arity == 1
        ):
            raise ParseError(f"unknown directive {term!r}", *_pos(span))
        kind, (arg,) = term.functor, term.args
        if kind == "prop":
            self.props.extend(_indicators(arg, span))
        elif kind == "regtype":
            self.regtypes.extend(_indicators(arg, span))
        elif kind == "pred":
            self.pred_assertion(arg, span)
        elif kind == "entry":
            goal, pre, post = _assertion_parts(arg)
            if post is not None:
                raise ParseError("entries take no post-condition", *_pos(span))
            goal = _head(goal, span)
            formula = None if pre is None else _formula(pre, span)
            self.entries.append(Entry(goal, formula, span))
        else:
            self.wrap(arg, span)

    def pred_assertion(self, term, span):
        head, pre, post = _assertion_parts(term)
        if isinstance(head, _Apply):
            raise ParseError(
                "anonymous assertions belong inside a predicate property", *_pos(span)
            )
        head = _head(head, span)
        params = _head_variables(head.args, span)
        assertion = PredAssertion(
            Atom(head.pred, params),
            TRUE if pre is None else _formula(pre, span),
            TRUE if post is None else _formula(post, span),
            span,
        )
        self.assertions.setdefault(assertion.indicator, []).append(assertion)

    def wrap(self, term, span):
        if (
            isinstance(term, Compound)
            and term.functor == "with"
            and isinstance(term.args[1], Compound)
            and term.args[1].functor == "as"
            and term.args[1].arity == 2
        ):
            (pred,) = _indicators(term.args[0], span)
            prop, name = term.args[1].args
            if all(isinstance(t, Compound) and not t.args for t in (prop, name)):
                self.wraps.append(WrapDirective(pred, prop.functor, name.functor, span))
                return
        raise ParseError("expected ':- wrap p/N with Property as name.'", *_pos(span))

    def property_definition(self, name, members, span):
        if name in self.properties:
            raise ParseError(f"duplicate predicate property {name}", *_pos(span))
        anon = []
        for term, member_span in members:
            if not (
                isinstance(term, Compound)
                and term.functor == ":-"
                and term.arity == 1
                and isinstance(term.args[0], Compound)
                and term.args[0].functor == "pred"
            ):
                raise ParseError(
                    "a predicate property holds ':- pred _(...)' assertions",
                    *_pos(member_span),
                )
            head, pre, post = _assertion_parts(term.args[0].args[0])
            if not (isinstance(head, _Apply) and head.name == PLACEHOLDER):
                raise ParseError(
                    "anonymous assertions have the head _(X1, ..., Xn)",
                    *_pos(member_span),
                )
            anon.append(
                AnonAssertion(
                    _head_variables(head.args, member_span),
                    TRUE if pre is None else _formula(pre, member_span),
                    TRUE if post is None else _formula(post, member_span),
                )
            )
        self.properties[name] = PredicateProperty(name, tuple(anon), span)

    def regtype_definition(self, name, alternatives, span):
        self.regtypes.append((name, 1))
        for alt in alternatives:
            self.rules.append(
                normalize_rule(Atom(name, (_check_term(alt, span),)), (), span)
            )


def _read(text):
    tokens = tokenize(text)
    reader = _TermReader(tokens)
    builder = _ProgramBuilder()
    while reader.peek().kind != "eof":
        start = reader.peek()
        span = Span(start.line, start.column)
        reader.anonymous = 0
        try:
            if start.kind == "name" and reader.peek(1).value == ":=":
                reader.pos += 2
                if reader.at_punct("{"):
                    reader.next()
                    members = []
                    while not reader.at_punct("}"):
                        tok = reader.peek()
                        reader.anonymous = 0
                        term, _ = reader.parse(1200)
                        reader.expect("end")
                        members.append((term, Span(tok.line, tok.column)))
                    reader.next()
                    reader.expect("end")
                    builder.property_definition(start.value, members, span)
                else:
                    alternatives = [reader.parse(999)[0]]
                    while reader.at_punct("|"):
                        reader.next()
                        alternatives.append(reader.parse(999)[0])
                    reader.expect("end")
                    builder.regtype_definition(start.value, alternatives, span)
            else:
                term, _ = reader.parse(1200)
                reader.expect("end")
                builder.clause(term, span)
        except ParseError as e:
            builder.errors.append(e)
            while reader.peek().kind not in ("end", "eof"):
                reader.next()
            if reader.peek().kind == "end":
                reader.next()
    return builder


@lru_cache(maxsize=None)
def _prelude():
    builder = _read(PRELUDE)
    if builder.errors:
        raise ParseErrorList(builder.errors)
    return tuple(builder.rules), frozenset(builder.regtypes)


def _diagnostics(builder, program_rules, library, known_props):
    messages = []
    defined = {r.indicator for r in program_rules} | {r.indicator for r in library}
    for rule in program_rules:
        for literal in rule.body:
            if isinstance(literal, Atom) and literal.indicator not in defined:
                messages.append(
                    Warning(
                        f"{format_indicator(literal.indicator)} is not defined.",
                        hint=f"Called from {format_indicator(rule.indicator)} "
                        f"at {rule.span}.",
                        id="hiord.W101",
                    )
                )
    for pred, asserts in list(builder.assertions.items()):
        if pred in builder.props:
            messages.append(
                Error(
                    f"{format_indicator(pred)} is declared a property and has "
                    "pred assertions.",
                    hint="Its assertions are ignored.",
                    id="hiord.E101",
                )
            )
            del builder.assertions[pred]
            continue
        for a in asserts:
            for literal in a.pre.literals():
                _check_property(literal, known_props, builder, messages, a.span)
            for literal in a.post.literals():
                _check_property(literal, known_props, builder, messages, a.span)
    for pred in list(builder.regtypes):
        if pred[1] != 1:
            messages.append(
                Error(
                    f"parametric regtype {format_indicator(pred)} is not supported.",
                    hint="Only list/2 takes a type parameter; "
                    "it is treated as a plain property.",
                    id="hiord.E102",
                )
            )
            builder.regtypes.remove(pred)
            builder.props.append(pred)
    return tuple(messages)


def _check_property(literal, known, builder, messages, span):
    if literal.indicator in known or literal.pred in builder.properties:
        return
    messages.append(
        Warning(
            f"{format_indicator(literal.indicator)} is not a declared property.",
            hint=f"Used in the assertion at {span}; "
            "declare it with ':- prop' or ':- regtype'.",
            id="hiord.W102",
        )
    )


def parse_program(text, name=""):
    """
    Parse a program.

    Args:
    ----
        text (str): Source text.
        name (str): Identifier used in reports, usually the file name.

    Returns:
    -------
        Program: The program with normalized rule heads.

    Raises:
    ------
        ParseErrorList: With every syntax error found; the reader resumes after
            the next clause terminator.

    """
    builder = _read(text)
    if builder.errors:
        raise ParseErrorList(builder.errors)
    prelude_rules, prelude_regtypes = _prelude()
    user_defined = {r.indicator for r in builder.rules}
    library = tuple(r for r in prelude_rules if r.indicator not in user_defined)
    library_regtypes = frozenset(p for p in prelude_regtypes if p not in user_defined)
    known = set(builder.props) | set(builder.regtypes) | library_regtypes
    known |= {(name, arity) for name, arity in TEST_BUILTINS.items()}
    diagnostics = _diagnostics(builder, builder.rules, library, known)
    program = Program(
        rules=tuple(builder.rules),
        props=frozenset(builder.props),
        regtypes=frozenset(builder.regtypes),
        properties=dict(builder.properties),
        assertions={k: tuple(v) for k, v in builder.assertions.items()},
        entries=tuple(builder.entries),
        wraps=tuple(builder.wraps),
        library=library,
        library_regtypes=library_regtypes,
        diagnostics=diagnostics,
        name=name,
    )
    logger.debug(
        "parsed %s: %d rules, %d assertions, %d predicate properties",
        name or "<text>",
        len(program.rules),
        sum(len(a) for a in program.assertions.values()),
        len(program.properties),
    )
    return program


def _single(text):
    text = text.strip()
    if not text.endswith("."):
        text += " ."
    tokens = tokenize(text)
    reader = _TermReader(tokens)
    term, _ = reader.parse(1200)
    reader.expect("end")
    reader.expect("eof")
    return term


def parse_term(text):
    """Parse one data term, e.g. ``[a, b | T]``."""
    return _check_term(_single(text), Span(1, 1))


def parse_entry(text):
    """Parse ``Goal`` or ``Goal : Pre`` as given to ``--entry``."""
    span = Span(1, 1)
    goal, pre, post = _assertion_parts(_single(text))
    if post is not None:
        raise ParseError("entries take no post-condition", 1, 1)
    return Entry(_head(goal, span), None if pre is None else _formula(pre, span), span)


def parse_query(text):
    """Parse a conjunctive query into body literals."""
    span = Span(1, 1)
    return tuple(_goal(g, span) for g in _flatten(_single(text), ","))
