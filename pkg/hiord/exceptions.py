from django.core.management import CommandError

__all__ = (
    "HiordError",
    "ParseError",
    "ParseErrorList",
    "ArityMismatch",
    "MixedPredicateError",
    "MixedDomainError",
    "UnknownPropertyError",
    "UnresolvedProperty",
    "NameCollision",
    "LatticeError",
    "VerificationFailed",
)


class HiordError(Exception):
    """Base class of all verifier errors."""


class ParseError(HiordError):
    """Syntax error at a source position."""

    def __init__(self, message, line=0, column=0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class ParseErrorList(HiordError):
    """All syntax errors found in one source text."""

    def __init__(self, errors):
        self.errors = tuple(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class ArityMismatch(HiordError):
    """A predicate and a property (or placeholder) disagree on arity."""


class MixedPredicateError(HiordError):
    """Assertions of different predicates were grouped together."""


class MixedDomainError(HiordError):
    """Abstract values of different domain instances were combined."""


class UnknownPropertyError(HiordError):
    """A property literal names no property, regtype or predicate property."""


class UnresolvedProperty(HiordError):
    """A nested predicate property has no conformance table yet."""

    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"unresolved predicate properties: {', '.join(self.names)}")


class NameCollision(HiordError):
    """A generated predicate name is already defined."""


class LatticeError(HiordError):
    """A lattice definition is malformed or violates the lattice laws."""


class VerificationFailed(CommandError):
    """Verification ended with false or unproved assertions."""

    def __init__(self, message, returncode):
        super().__init__(message, returncode=returncode)
