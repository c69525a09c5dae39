"""Concrete semantics of programs, with and without assertions."""
