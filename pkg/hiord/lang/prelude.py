"""Library properties available to every program unless it defines them."""

__all__ = ("PRELUDE",)

PRELUDE = """
:- regtype term/1, int/1, nat/1, num/1, atm/1, list/1, list/2.

term(_).

int(X) :- integer(X).

nat(X) :- integer(X), X >= 0.

% numbers are integers
num(X) :- number(X).

atm(X) :- atom(X).

list([]).
list([_|Xs]) :- list(Xs).

list(_, []).
list(T, [X|Xs]) :- T(X), list(T, Xs).
"""
