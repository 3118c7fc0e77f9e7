"""Quantifier-free formulas: AST, text syntax, evaluation and solution sets.

Variables are indices into a canonical tuple ``z1, z2, ...`` (``Var(0)`` is
``z1``). Parameters are raw elements of one particular structure, written
``@e``. Surface grammar::

    phi  ::= NAME '(' term (',' term)* ')' | term '=' term | term '!=' term
           | '!' phi | '(' phi ('&' phi)* ')' | '(' phi ('|' phi)* ')'
    term ::= 'z' INT | '@' INT

Binary ``(a & b)`` is the core form; longer chains and a parenthesised
single formula are accepted as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import ArityMismatch, ParseError, ResourceLimit, UnboundVariable, UnknownRelation, ValidationError

DEFAULT_GRID_BUDGET = 4_000_000


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"z{self.index + 1}"


@dataclass(frozen=True)
class Param:
    element: int

    def __str__(self):
        return f"@{self.element}"


Term = Union[Var, Param]


@dataclass(frozen=True)
class Atom:
    relation: str
    terms: tuple


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple = ()


@dataclass(frozen=True)
class Or:
    args: tuple = ()


Formula = Union[Atom, Eq, Not, And, Or]

TRUE = And(())
FALSE = Or(())


def conj(parts: Sequence[Formula]) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Sequence[Formula]) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def _terms_of(phi):
    if isinstance(phi, Atom):
        yield from phi.terms
    elif isinstance(phi, Eq):
        yield phi.left
        yield phi.right
    elif isinstance(phi, Not):
        yield from _terms_of(phi.arg)
    else:
        for a in phi.args:
            yield from _terms_of(a)


def free_vars(phi: Formula) -> frozenset:
    return frozenset(t.index for t in _terms_of(phi) if isinstance(t, Var))


def params_of(phi: Formula) -> frozenset:
    return frozenset(t.element for t in _terms_of(phi) if isinstance(t, Param))


def substitute(phi: Formula, mapping: Mapping[int, Term]) -> Formula:
    """Replace variables by terms; variables absent from ``mapping`` stay."""

    def term(t):
        return mapping.get(t.index, t) if isinstance(t, Var) else t

    def go(f):
        if isinstance(f, Atom):
            return Atom(f.relation, tuple(term(t) for t in f.terms))
        if isinstance(f, Eq):
            return Eq(term(f.left), term(f.right))
        if isinstance(f, Not):
            return Not(go(f.arg))
        return type(f)(tuple(go(a) for a in f.args))

    return go(phi)


def shift_vars(phi: Formula, offset: int) -> Formula:
    return substitute(phi, {i: Var(i + offset) for i in free_vars(phi)})


def check_formula(phi: Formula, signature, max_vars: int | None = None) -> None:
    """Raise if an atom has the wrong arity or a variable index is too large."""
    arity = signature.arity
    limit = signature.max_arity if max_vars is None else max_vars

    def go(f):
        if isinstance(f, Atom):
            if f.relation not in arity:
                raise UnknownRelation(f"unknown relation {f.relation!r}")
            if len(f.terms) != arity[f.relation]:
                raise ArityMismatch(f"{f.relation} has arity {arity[f.relation]}, got {len(f.terms)} terms")
        elif isinstance(f, Not):
            go(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                go(a)

    go(phi)
    for i in free_vars(phi):
        if i >= limit:
            raise ValidationError(f"variable z{i + 1} exceeds the {limit} canonical variables")


# -- text --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<var>z\d+)\b|(?P<param>@\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>!=|[()!&|=,]))")


class _Parser:
    def __init__(self, text, signature, max_vars):
        self.text = text
        self.sig = signature
        self.max_vars = max_vars
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text) + 1)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] == "eof" or (value is not None and tok[1] != value):
            want = repr(value) if value else "a token"
            raise ParseError(f"expected {want}, found {tok[1] or 'end of input'!r}", 1, tok[2])
        self.i += 1
        return tok

    def term(self):
        kind, val, col = self.take()
        if kind == "var":
            idx = int(val[1:]) - 1
            if idx < 0:
                raise ParseError("variables are numbered from z1", 1, col)
            return Var(idx)
        if kind == "param":
            return Param(int(val[1:]))
        raise ParseError(f"expected a term, found {val!r}", 1, col)

    def formula(self):
        kind, val, col = self.peek()
        if val == "!" and kind == "op":
            self.take()
            return Not(self.formula())
        if val == "(" and kind == "op":
            self.take()
            first = self.formula()
            parts, op = [first], None
            while self.peek()[1] in ("&", "|"):
                sym = self.take()
                if op is not None and sym[1] != op:
                    raise ParseError("mixed '&' and '|' need explicit parentheses", 1, sym[2])
                op = sym[1]
                parts.append(self.formula())
            self.take(")")
            if op is None:
                return first
            return And(tuple(parts)) if op == "&" else Or(tuple(parts))
        if kind == "name":
            self.take()
            arity = self.sig.arity
            if val not in arity:
                raise UnknownRelation(f"unknown relation {val!r} at column {col}")
            self.take("(")
            terms = [self.term()]
            while self.peek()[1] == ",":
                self.take()
                terms.append(self.term())
            self.take(")")
            if len(terms) != arity[val]:
                raise ArityMismatch(f"{val} has arity {arity[val]}, got {len(terms)} terms at column {col}")
            return Atom(val, tuple(terms))
        left = self.term()
        op = self.take()
        if op[1] not in ("=", "!="):
            raise ParseError(f"expected '=' after term, found {op[1]!r}", 1, op[2])
        eq = Eq(left, self.term())
        return eq if op[1] == "=" else Not(eq)


def parse_formula(text: str, signature, max_vars: int | None = None) -> Formula:
    """Parse formula text against ``signature``.

    ``max_vars`` overrides the default bound on variable indices (the
    signature's maximum arity).
    """
    p = _Parser(text, signature, max_vars)
    phi = p.formula()
    if p.peek()[0] != "eof":
        kind, val, col = p.peek()
        raise ParseError(f"trailing input {val!r}", 1, col)
    check_formula(phi, signature, max_vars)
    return phi


def to_text(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"{phi.relation}({','.join(map(str, phi.terms))})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Not):
        inner = to_text(phi.arg)
        return f"!({inner})" if isinstance(phi.arg, Eq) else "!" + inner
    if not phi.args:
        return "@0 = @0" if isinstance(phi, And) else "!(@0 = @0)"
    if len(phi.args) == 1:
        return to_text(phi.args[0])
    sep = " & " if isinstance(phi, And) else " | "
    return "(" + sep.join(to_text(a) for a in phi.args) + ")"


# -- semantics ---------------------------------------------------------------

def _check_param(s, e):
    if not 0 <= e < s.size:
        raise ValidationError(f"parameter @{e} is not an element of this structure (N={s.size})")
    return e


def eval_formula(s, phi: Formula, asgn: Mapping[int, int]) -> bool:
    """Truth value of ``phi`` in ``s`` under the assignment ``asgn``."""

    def term(t):
        if isinstance(t, Param):
            return _check_param(s, t.element)
        try:
            return asgn[t.index]
        except KeyError:
            raise UnboundVariable(f"variable {t} is not assigned") from None

    def go(f):
        if isinstance(f, Atom):
            return s.holds(f.relation, tuple(term(t) for t in f.terms))
        if isinstance(f, Eq):
            return term(f.left) == term(f.right)
        if isinstance(f, Not):
            return not go(f.arg)
        if isinstance(f, And):
            return all(go(a) for a in f.args)
        return any(go(a) for a in f.args)

    return go(phi)


def evaluate(s, phi: Formula, env: Mapping[int, np.ndarray]) -> np.ndarray:
    """Vectorised truth of ``phi``; ``env`` maps variable index to broadcastable index arrays."""

    def term(t):
        if isinstance(t, Param):
            return _check_param(s, t.element)
        try:
            return env[t.index]
        except KeyError:
            raise UnboundVariable(f"variable {t} is not assigned") from None

    def go(f):
        if isinstance(f, Atom):
            return s.dense(f.relation)[tuple(term(t) for t in f.terms)]
        if isinstance(f, Eq):
            return np.equal(term(f.left), term(f.right))
        if isinstance(f, Not):
            return np.logical_not(go(f.arg))
        if isinstance(f, And):
            return reduce(np.logical_and, (go(a) for a in f.args), np.True_)
        return reduce(np.logical_or, (go(a) for a in f.args), np.False_)

    return go(phi)


def grid_env(n: int, xbar: Sequence[int]) -> dict:
    k = len(xbar)
    env = {}
    for axis, v in enumerate(xbar):
        shape = [1] * k
        shape[axis] = n
        env[v] = np.arange(n, dtype=np.intp).reshape(shape)
    return env


def grid_truth(s, phi: Formula, xbar: Sequence[int], budget: int = DEFAULT_GRID_BUDGET) -> np.ndarray:
    """Boolean array of shape ``(N,)*len(xbar)``; axis j is variable ``xbar[j]``."""
    xbar = tuple(xbar)
    if len(set(xbar)) != len(xbar):
        raise ValidationError(f"repeated variable in {xbar}")
    missing = free_vars(phi) - set(xbar)
    if missing:
        raise UnboundVariable(f"free variables {sorted(f'z{i + 1}' for i in missing)} not in the tuple")
    if s.size ** len(xbar) > budget:
        raise ResourceLimit(f"assignment grid {s.size}^{len(xbar)} exceeds budget {budget}")
    out = evaluate(s, phi, grid_env(s.size, xbar))
    return np.broadcast_to(out, (s.size,) * len(xbar))


def solutions(s, phi: Formula, xbar: Sequence[int], budget: int = DEFAULT_GRID_BUDGET) -> list:
    """All satisfying assignments to ``xbar`` as element tuples, lexicographically."""
    truth = grid_truth(s, phi, xbar, budget)
    return [tuple(int(e) for e in row) for row in np.argwhere(truth)]
