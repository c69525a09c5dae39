"""
Regular types as deterministic regular tree grammars.

A :class:`RegType` is a tuple of grammar nodes, node ``0`` being the root.
Each node accepts the terms of its *classes* (``int``, ``nat``, ``atm`` or
``any``), its constants, and the terms ``f(t1, ..., tn)`` of its functor
alternatives, with ``ti`` accepted by the ``i``-th child node. A node has at
most one alternative per functor, so grammars are tuple-distributive, and
every type is kept minimized: no empty nodes, no two equivalent nodes.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from django.core.checks import Warning

from hiord.conf import settings
from hiord.domains.base import Domain
from hiord.engine.store import EMPTY as EMPTY_STORE
from hiord.lang.parser import normalize_rule
from hiord.lang.printer import format_atom, format_term
from hiord.lang.terms import (
    NIL,
    ArithCmp,
    Atom,
    Compound,
    Eq,
    Test,
    Variable,
    atom,
    format_indicator,
    integer,
    is_atom,
    is_integer,
    term_depth,
)

__all__ = (
    "Node",
    "RegType",
    "RegTypeDomain",
    "EMPTY",
    "TOP",
    "type_of_class",
    "type_of_constants",
    "list_of",
    "construct",
    "subtype",
    "includes",
    "intersect",
    "union",
    "widen",
    "cut",
    "contains",
    "enumerate_terms",
    "render",
)

logger = logging.getLogger(__name__)

# integer constants a widened node keeps before it is generalized to nat/int
MAX_INTEGER_CONSTANTS = 3


@dataclass(frozen=True)
class Node:
    classes: frozenset = frozenset()
    constants: tuple = ()
    functors: tuple = ()

    @property
    def is_any(self):
        return "any" in self.classes

    @property
    def labels(self):
        return frozenset(key for key, _ in self.functors)


ANY = Node(frozenset({"any"}))

_CLASS_ORDER = {("nat", "nat"), ("nat", "int"), ("int", "int"), ("atm", "atm")}


def _class_contains(classes, term):
    if "any" in classes:
        return True
    if is_integer(term):
        return "int" in classes or ("nat" in classes and term.functor >= 0)
    if is_atom(term):
        return "atm" in classes
    return False


def _class_leq(cls, classes):
    return "any" in classes or any((cls, other) in _CLASS_ORDER for other in classes)


def _class_meet(a, b):
    if a == "any":
        return b
    if b == "any" or a == b:
        return a
    if {a, b} == {"int", "nat"}:
        return "nat"
    return None


class RegType:
    """An immutable, minimized regular type; equality is language equality."""

    __slots__ = ("nodes",)

    def __init__(self, nodes=()):
        self.nodes = tuple(nodes)

    @property
    def is_empty(self):
        return not self.nodes

    @property
    def is_any(self):
        return bool(self.nodes) and self.nodes[0].is_any

    @property
    def root(self):
        return self.nodes[0]

    def node(self, index):
        return ANY if index is None else self.nodes[index]

    def __eq__(self, other):
        if not isinstance(other, RegType):
            return NotImplemented
        return includes(self, other) and includes(other, self)

    def __hash__(self):
        if self.is_empty:
            return hash(())
        root = self.root
        return hash((root.classes, frozenset(root.constants), root.labels))

    def __repr__(self):
        return f"RegType({render(self)})"


EMPTY = RegType()
TOP = RegType((ANY,))


class _Grammar:
    """Nondeterministic grammar with references, determinized on demand."""

    def __init__(self):
        self.states = []

    def new(self):
        self.states.append([])
        return len(self.states) - 1

    def add(self, state, *alternative):
        self.states[state].append(alternative)

    def embed(self, regtype):
        if regtype.is_empty:
            return self.new()
        base = len(self.states)
        for _ in regtype.nodes:
            self.new()
        for i, node in enumerate(regtype.nodes):
            for cls in sorted(node.classes):
                self.add(base + i, "class", cls)
            for constant in node.constants:
                self.add(base + i, "const", constant)
            for key, kids in node.functors:
                self.add(base + i, "fun", key, tuple(base + k for k in kids))
        return base

    def closure(self, states):
        seen, stack = set(), list(states)
        while stack:
            state = stack.pop()
            if state not in seen:
                seen.add(state)
                stack.extend(alt[1] for alt in self.states[state] if alt[0] == "ref")
        return frozenset(seen)

    def determinize(self, roots):
        start = self.closure(roots)
        index, order, nodes = {start: 0}, [start], []
        for states in order:
            classes, constants, slots = set(), [], {}
            for state in sorted(states):
                for alt in self.states[state]:
                    if alt[0] == "class":
                        classes.add(alt[1])
                    elif alt[0] == "const" and alt[1] not in constants:
                        constants.append(alt[1])
                    elif alt[0] == "fun":
                        args = slots.setdefault(alt[1], [set() for _ in alt[2]])
                        for arg, child in zip(args, alt[2]):
                            arg.add(child)
            functors = []
            for key, args in slots.items():
                kids = []
                for arg in args:
                    target = self.closure(arg)
                    if target not in index:
                        index[target] = len(order)
                        order.append(target)
                    kids.append(index[target])
                functors.append((key, tuple(kids)))
            nodes.append(Node(frozenset(classes), tuple(constants), tuple(functors)))
        return _finish(nodes)


def _normalize(node):
    if node.is_any:
        return ANY
    classes = set(node.classes)
    if "int" in classes:
        classes.discard("nat")
    constants = tuple(c for c in node.constants if not _class_contains(classes, c))
    return Node(frozenset(classes), constants, node.functors)


def _finish(nodes, root=0):
    """Normalize, drop empty nodes and alternatives, then minimize."""
    nodes = [_normalize(n) for n in nodes]
    alive = [False] * len(nodes)
    changed = True
    while changed:
        changed = False
        for i, node in enumerate(nodes):
            if alive[i]:
                continue
            if (
                node.classes
                or node.constants
                or any(all(alive[k] for k in kids) for _, kids in node.functors)
            ):
                alive[i] = changed = True
    if not nodes or not alive[root]:
        return EMPTY
    nodes = [
        Node(
            n.classes,
            n.constants,
            tuple(
                (key, kids) for key, kids in n.functors if all(alive[k] for k in kids)
            ),
        )
        for n in nodes
    ]
    return _minimize(nodes, root)


def _minimize(nodes, root):
    reach, seen = [root], {root}
    for i in reach:
        for _, kids in nodes[i].functors:
            for k in kids:
                if k not in seen:
                    seen.add(k)
                    reach.append(k)
    keys = {}
    block = {
        i: keys.setdefault(
            (nodes[i].classes, frozenset(nodes[i].constants), nodes[i].labels),
            len(keys),
        )
        for i in reach
    }
    while True:
        keys = {}
        refined = {}
        for i in reach:
            signature = (
                block[i],
                frozenset(
                    (key, tuple(block[k] for k in kids))
                    for key, kids in nodes[i].functors
                ),
            )
            refined[i] = keys.setdefault(signature, len(keys))
        stable = len(keys) == len(set(block.values()))
        block = refined
        if stable:
            break
    representative = {}
    for i in reach:
        representative.setdefault(block[i], i)
    number, order, result = {block[root]: 0}, [block[root]], []
    for b in order:
        node = nodes[representative[b]]
        functors = []
        for key, kids in node.functors:
            mapped = []
            for k in kids:
                if block[k] not in number:
                    number[block[k]] = len(order)
                    order.append(block[k])
                mapped.append(number[block[k]])
            functors.append((key, tuple(mapped)))
        result.append(Node(node.classes, node.constants, tuple(functors)))
    return RegType(result)


def type_of_class(cls):
    return TOP if cls == "any" else RegType((Node(frozenset({cls})),))


def type_of_constants(constants):
    """Type of the given constants, in the given order."""
    constants = tuple(dict.fromkeys(constants))
    if not constants:
        return EMPTY
    return _finish([Node(constants=constants)])


def list_of(element):
    """Type of the lists whose items are in ``element``."""
    grammar = _Grammar()
    item = grammar.embed(element)
    state = grammar.new()
    grammar.add(state, "const", NIL)
    grammar.add(state, "fun", (".", 2), (item, state))
    return grammar.determinize({state})


def construct(functor, types):
    if not types:
        return type_of_constants((Compound(functor),))
    grammar = _Grammar()
    kids = tuple(grammar.embed(t) for t in types)
    state = grammar.new()
    grammar.add(state, "fun", (functor, len(types)), kids)
    return grammar.determinize({state})


def subtype(regtype, index):
    """The type accepted by node ``index`` of ``regtype``."""
    return _finish(list(regtype.nodes), index)


def includes(a, b):
    """Whether the language of ``a`` is included in that of ``b``."""
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    assumed, stack = set(), [(0, 0)]
    while stack:
        pair = stack.pop()
        if pair in assumed:
            continue
        assumed.add(pair)
        x, y = a.nodes[pair[0]], b.nodes[pair[1]]
        if y.is_any:
            continue
        if x.is_any:
            return False
        if not all(_class_leq(cls, y.classes) for cls in x.classes):
            return False
        for constant in x.constants:
            if constant not in y.constants and not _class_contains(y.classes, constant):
                return False
        alternatives = dict(y.functors)
        for key, kids in x.functors:
            if key not in alternatives:
                return False
            stack.extend(zip(kids, alternatives[key]))
    return True


def intersect(a, b):
    """Product construction; an ``any`` node pairs with every node."""
    if a.is_empty or b.is_empty:
        return EMPTY
    index, order, nodes = {}, [], []

    def ref(pair):
        if pair not in index:
            index[pair] = len(order)
            order.append(pair)
        return index[pair]

    ref((0, 0))
    for i, j in order:
        x, y = a.node(i), b.node(j)
        if x.is_any and y.is_any:
            nodes.append(ANY)
            continue
        classes = set()
        for c in x.classes:
            for d in y.classes:
                met = _class_meet(c, d)
                if met is not None:
                    classes.add(met)
        constants = [
            t
            for t in x.constants
            if t in y.constants or _class_contains(y.classes, t)
        ]
        constants += [
            t
            for t in y.constants
            if t not in constants and _class_contains(x.classes, t)
        ]
        if x.is_any:
            functors = tuple(
                (key, tuple(ref((None, k)) for k in kids)) for key, kids in y.functors
            )
        elif y.is_any:
            functors = tuple(
                (key, tuple(ref((k, None)) for k in kids)) for key, kids in x.functors
            )
        else:
            alternatives = dict(y.functors)
            functors = tuple(
                (key, tuple(ref(p) for p in zip(kids, alternatives[key])))
                for key, kids in x.functors
                if key in alternatives
            )
        nodes.append(Node(frozenset(classes), tuple(constants), functors))
    return _finish(nodes)


def union(a, b):
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    grammar = _Grammar()
    return grammar.determinize({grammar.embed(a), grammar.embed(b)})


def _generalize_integers(regtype):
    nodes = []
    for node in regtype.nodes:
        integers = [c for c in node.constants if is_integer(c)]
        if len(integers) > MAX_INTEGER_CONSTANTS:
            cls = "nat" if all(c.functor >= 0 for c in integers) else "int"
            node = Node(node.classes | {cls}, node.constants, node.functors)
        nodes.append(node)
    return _finish(nodes)


def _collapse(regtype):
    """Merge the nodes sharing the same functor labels; ``None`` if none do."""
    groups = {}
    for i, node in enumerate(regtype.nodes):
        if node.functors:
            groups.setdefault(node.labels, []).append(i)
    merged = [members for members in groups.values() if len(members) > 1]
    if not merged:
        return None
    grammar = _Grammar()
    base = grammar.embed(regtype)
    for members in merged:
        for i, j in itertools.permutations(members, 2):
            grammar.add(base + i, "ref", base + j)
    return grammar.determinize({base})


def cut(regtype, depth):
    """Replace every functor node below ``depth`` by ``any``."""
    if regtype.is_empty:
        return regtype
    grammar = _Grammar()

    def build(i, level):
        state = grammar.new()
        node = regtype.nodes[i]
        if level >= depth and node.functors:
            grammar.add(state, "class", "any")
            return state
        for cls in sorted(node.classes):
            grammar.add(state, "class", cls)
        for constant in node.constants:
            grammar.add(state, "const", constant)
        for key, kids in node.functors:
            grammar.add(state, "fun", key, tuple(build(k, level + 1) for k in kids))
        return state

    return grammar.determinize({build(0, 0)})


def widen(old, new, states=64, depth=2):
    """
    Upper bound of ``old`` and ``new`` with finite ascending chains.

    Nodes with the same functor labels are merged until no two remain, and
    integer constants are generalized to ``nat``/``int`` beyond a few per
    node. Grammars still larger than ``states`` nodes are cut at ``depth``.
    """
    result = _generalize_integers(union(old, new))
    for _ in range(8):
        collapsed = _collapse(result)
        if collapsed is None:
            break
        result = collapsed
    else:
        result = cut(result, depth)
    if len(result.nodes) > states:
        result = cut(result, depth)
    return result


def contains(regtype, term):
    """Whether the ground ``term`` is in ``regtype``; non-ground terms are not."""
    if regtype.is_empty:
        return False
    stack = [(0, term)]
    while stack:
        i, t = stack.pop()
        node = regtype.nodes[i]
        if node.is_any:
            continue
        if isinstance(t, Variable):
            return False
        if not t.args:
            if t in node.constants or _class_contains(node.classes, t):
                continue
            return False
        kids = dict(node.functors).get((t.functor, len(t.args)))
        if kids is None:
            return False
        stack.extend(zip(kids, t.args))
    return True


def enumerate_terms(regtype, depth, integers=(), atoms=()):
    """
    Ground terms of ``regtype`` up to ``depth``, by depth then declaration order.

    Class leaves stand for the sample ``integers`` and ``atoms``.
    """
    if regtype.is_empty or depth < 1:
        return []
    exact = {}

    def leaves(node):
        found = list(node.constants)
        classes = node.classes
        samples = []
        if classes & {"any", "int"}:
            samples += [integer(i) for i in integers]
        elif "nat" in classes:
            samples += [integer(i) for i in integers if i >= 0]
        if classes & {"any", "atm"}:
            samples += [atom(a) for a in atoms]
        found += [t for t in samples if t not in found]
        return found

    def upto(i, d):
        return [t for e in range(1, d + 1) for t in at(i, e)]

    def at(i, d):
        if (i, d) not in exact:
            node = regtype.nodes[i]
            if d == 1:
                found = leaves(node)
            else:
                found = []
                for (name, _), kids in node.functors:
                    pools = [upto(k, d - 1) for k in kids]
                    for args in itertools.product(*pools):
                        if max(term_depth(a) for a in args) == d - 1:
                            found.append(Compound(name, args))
            exact[(i, d)] = found
        return exact[(i, d)]

    return upto(0, depth)


def _recursive_nodes(regtype):
    recursive = set()
    for start in range(len(regtype.nodes)):
        stack = [k for _, kids in regtype.nodes[start].functors for k in kids]
        seen = set()
        while stack:
            i = stack.pop()
            if i == start:
                recursive.add(start)
                break
            if i not in seen:
                seen.add(i)
                stack.extend(k for _, kids in regtype.nodes[i].functors for k in kids)
    return recursive


def render(regtype):
    """Readable form, e.g. ``list(r | w | b)``."""
    if regtype.is_empty:
        return "⊥"
    recursive = _recursive_nodes(regtype)

    def show(i, stack):
        node = regtype.nodes[i]
        if node.is_any:
            return "term"
        if i in stack:
            return f"T{i}"
        alternatives = dict(node.functors)
        if (
            node.constants == (NIL,)
            and not node.classes
            and set(alternatives) == {(".", 2)}
            and alternatives[(".", 2)][1] == i
        ):
            return f"list({show(alternatives[('.', 2)][0], stack + (i,))})"
        parts = sorted(node.classes) + [format_term(c) for c in node.constants]
        for (name, _), kids in node.functors:
            args = ", ".join(show(k, stack + (i,)) for k in kids)
            parts.append(f"{format_atom(name)}({args})")
        text = " | ".join(parts)
        if i in recursive:
            return f"T{i} = ({text})"
        return text

    return show(0, ())


class _NotRegular(Exception):
    pass


def _constraint(literal, store):
    """``(variable, kind)`` of a body literal of a unary property clause."""
    if isinstance(literal, Test) and len(literal.args) == 1:
        kind = {"integer": "int", "number": "int", "atom": "atm"}.get(literal.name)
        arg = store.walk(literal.args[0])
        if kind is None or not isinstance(arg, Variable):
            raise _NotRegular(literal)
        return arg, ("class", kind)
    if isinstance(literal, ArithCmp):
        left, right = store.walk(literal.left), store.walk(literal.right)
        if literal.op == ">=" and isinstance(left, Variable) and right == integer(0):
            return left, ("nonneg",)
        if literal.op == "=<" and left == integer(0) and isinstance(right, Variable):
            return right, ("nonneg",)
        raise _NotRegular(literal)
    if isinstance(literal, Atom) and literal.arity == 1:
        arg = store.walk(literal.args[0])
        if isinstance(arg, Variable):
            return arg, ("ref", literal.pred)
    if isinstance(literal, Atom) and literal.indicator == ("list", 2):
        param, arg = (store.walk(a) for a in literal.args)
        if is_atom(param) and isinstance(arg, Variable):
            return arg, ("list", param.functor)
    raise _NotRegular(literal)


def _combine(kinds):
    classes = {k[1] for k in kinds if k[0] == "class"}
    nonneg = any(k[0] == "nonneg" for k in kinds)
    others = [k for k in kinds if k[0] in ("ref", "list")]
    if others:
        if len(kinds) > 1:
            raise _NotRegular(kinds)
        return others[0]
    if nonneg:
        if classes != {"int"}:
            raise _NotRegular(kinds)
        return ("class", "nat")
    if len(classes) != 1:
        raise _NotRegular(kinds)
    return ("class", classes.pop())


class _Compiler:
    """Compiles the unary properties of a program into regular types."""

    def __init__(self, program):
        self.program = program
        self.grammar = _Grammar()
        self.roots = {}
        self.depends = {}
        self.not_regular = set()
        indicators = {r.indicator for r in program.rules + program.library}
        indicators |= {p for p in program.regtypes if p[1] == 1}
        for name, arity in sorted(indicators):
            if arity == 1 and program.is_property((name, 1)):
                self.roots[name] = self.grammar.new()

    def compile(self):
        for name, root in self.roots.items():
            self.depends[name] = set()
            for rule in self.program.clauses((name, 1)):
                try:
                    state = self._clause(name, rule)
                except _NotRegular as e:
                    logger.debug("%s/1 is not regular: %r", name, e.args[0])
                    self.not_regular.add(name)
                    break
                if state is not None:
                    self.grammar.add(root, "ref", state)
        changed = True
        while changed:
            changed = False
            for name, used in self.depends.items():
                if name not in self.not_regular and used & self.not_regular:
                    self.not_regular.add(name)
                    changed = True
        return {
            name: None
            if name in self.not_regular
            else self.grammar.determinize({root})
            for name, root in self.roots.items()
        }

    def _ref(self, owner, name):
        if name not in self.roots:
            raise _NotRegular(name)
        self.depends[owner].add(name)
        return self.roots[name]

    def _clause(self, owner, rule):
        store, rest = EMPTY_STORE, []
        for literal in rule.body:
            if isinstance(literal, Eq):
                store = store.unify(literal.left, literal.right)
                if store is None:
                    return None
            elif not (isinstance(literal, Test) and literal.name == "true"):
                rest.append(literal)
        pattern = store.resolve(rule.head.args[0])
        kinds = {}
        for literal in rest:
            var, kind = _constraint(literal, store)
            kinds.setdefault(var, []).append(kind)
        occurrences = []
        stack = [pattern]
        while stack:
            t = stack.pop()
            if isinstance(t, Variable):
                occurrences.append(t)
            else:
                stack.extend(t.args)
        if len(occurrences) != len(set(occurrences)) or set(kinds) - set(occurrences):
            raise _NotRegular(rule)
        combined = {var: _combine(k) for var, k in kinds.items()}
        return self._pattern(owner, pattern, combined)

    def _pattern(self, owner, term, combined):
        grammar = self.grammar
        state = grammar.new()
        if isinstance(term, Variable):
            kind = combined.get(term, ("class", "any"))
            if kind[0] == "class":
                grammar.add(state, "class", kind[1])
            elif kind[0] == "ref":
                grammar.add(state, "ref", self._ref(owner, kind[1]))
            else:
                grammar.add(state, "const", NIL)
                item = self._ref(owner, kind[1])
                grammar.add(state, "fun", (".", 2), (item, state))
        elif not term.args:
            grammar.add(state, "const", term)
        else:
            kids = tuple(self._pattern(owner, a, combined) for a in term.args)
            grammar.add(state, "fun", (term.functor, len(kids)), kids)
        return state


class RegTypeDomain(Domain):
    """Regular types over the properties of a program."""

    name = "regtypes"

    def __init__(self, program):
        super().__init__(program)
        self._types = None

    @property
    def types(self):
        if self._types is None:
            compiler = _Compiler(self.program)
            self._types = compiler.compile()
            declared = self.program.props | self.program.regtypes
            for name in sorted(compiler.not_regular):
                if (name, 1) in declared:
                    self.warn(
                        Warning(
                            f"{format_indicator((name, 1))} is not a regular type.",
                            hint="Its literals are treated as relational "
                            "properties.",
                            id="hiord.W103",
                        )
                    )
        return self._types

    @property
    def top(self):
        return TOP

    @property
    def bottom(self):
        return EMPTY

    def leq(self, a, b):
        return includes(a, b)

    def meet(self, a, b):
        return intersect(a, b)

    def join(self, a, b):
        return union(a, b)

    def widen(self, a, b):
        return widen(
            a,
            b,
            settings.HIORD_WIDENING_STATES,
            settings.HIORD_WIDENING_DEPTH,
        )

    def join_is_exact(self, a, b):
        if includes(a, b) or includes(b, a):
            return True
        # distinct root functors keep the argument tuples apart
        return not (a.root.labels & b.root.labels)

    def constant(self, term):
        return type_of_constants((term,))

    def construct(self, functor, leaves):
        return construct(functor, tuple(leaves))

    def deconstruct(self, leaf, functor, arity):
        if leaf.is_empty:
            return None
        if leaf.is_any:
            return (TOP,) * arity
        kids = dict(leaf.root.functors).get((functor, arity))
        if kids is None:
            return None
        return tuple(subtype(leaf, k) for k in kids)

    def from_property(self, name, params=()):
        if params:
            if name == "list" and len(params) == 1 and is_atom(params[0]):
                element = self.from_property(params[0].functor)
                return None if element is None else list_of(element)
            return None
        if name in self.types:
            return self.types[name]
        if name == "term":
            return TOP
        builtin = {"integer": "int", "number": "int", "atom": "atm"}.get(name)
        return None if builtin is None else type_of_class(builtin)

    def contains(self, leaf, term):
        return contains(leaf, term)

    def predicate_names(self, leaf):
        if leaf.is_empty:
            return set()
        root = leaf.root
        if root.classes or root.functors:
            return None
        if not all(is_atom(c) for c in root.constants):
            return None
        return {c.functor for c in root.constants}

    def enumerate(self, leaf, depth):
        return enumerate_terms(
            leaf,
            depth,
            settings.HIORD_SAMPLE_INTEGERS,
            settings.HIORD_SAMPLE_ATOMS,
        )

    def render(self, leaf):
        return render(leaf)

    def declared_name(self, leaf):
        """Name of a declared unary property with the language of ``leaf``."""
        for name, regtype in self.types.items():
            if regtype is not None and regtype == leaf:
                return name
        return None

    def rules(self, leaf, name):
        """
        Regtype rules defining ``name`` as ``leaf``.

        Returns
        -------
            tuple: The generated predicate names and their rules; inner nodes
            become predicates ``name_k``.

        """
        if leaf.is_empty:
            return (name,), ()
        names = {}
        for i, node in enumerate(leaf.nodes):
            leaf_class = not node.constants and not node.functors
            if i and leaf_class and len(node.classes) == 1:
                (cls,) = node.classes
                names[i] = "term" if cls == "any" else cls
            else:
                names[i] = name if i == 0 else f"{name}_{i}"
        rules = []
        for i, node in enumerate(leaf.nodes):
            if names[i] in ("term", "int", "nat", "atm"):
                continue
            x = Variable("X")
            for cls in sorted(node.classes):
                pred = "term" if cls == "any" else cls
                head = Atom(names[i], (x,))
                rules.append(normalize_rule(head, (Atom(pred, (x,)),)))
            for constant in node.constants:
                rules.append(normalize_rule(Atom(names[i], (constant,)), ()))
            for (functor, arity), kids in node.functors:
                args = tuple(Variable(f"X{j}") for j in range(1, arity + 1))
                body = tuple(Atom(names[k], (a,)) for k, a in zip(kids, args))
                rules.append(
                    normalize_rule(Atom(names[i], (Compound(functor, args),)), body)
                )
        generated = tuple(
            n
            for n in dict.fromkeys(names.values())
            if n not in ("term", "int", "nat", "atm")
        )
        return generated, tuple(rules)
