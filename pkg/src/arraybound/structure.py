"""Finite relational structures: representation, text format, reducts, generators.

The universe of a structure of size N is always ``{0, ..., N-1}``. Relations
are stored as sets of directed tuples, so a symmetric graph lists both
orientations of every edge. Equality is built in and never declared.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError, UnknownRelation, ValidationError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    """Finite relational vocabulary with constant symbols."""

    relations: tuple[tuple[str, int], ...]
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = [name for name, _ in self.relations] + list(self.constants)
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate symbol names in {names}")
        for name in names:
            if not _NAME.match(name):
                raise ValidationError(f"invalid symbol name {name!r}")
        for name, arity in self.relations:
            if not isinstance(arity, int) or arity < 1:
                raise ValidationError(f"relation {name} has arity {arity}; must be >= 1")

    @classmethod
    def of(cls, relations: Mapping[str, int], constants: Sequence[str] = ()) -> Signature:
        return cls(tuple(relations.items()), tuple(constants))

    @property
    def arity(self) -> dict[str, int]:
        return dict(self.relations)

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.relations), default=1)


class Structure:
    """An immutable finite structure over ``{0, ..., size-1}``.

    Parameters
    ----------
    signature : Signature
    size : int
        Number of elements N (at least 1).
    tables : mapping
        Relation name to an iterable of tuples. Missing relations are empty.
    constants : mapping, optional
        Constant name to element.
    """

    def __init__(self, signature: Signature, size: int, tables: Mapping[str, Iterable[Sequence[int]]],
                 constants: Mapping[str, int] | None = None):
        if size < 1:
            raise ValidationError("empty universe is not allowed")
        arity = signature.arity
        for name in tables:
            if name not in arity:
                raise UnknownRelation(f"unknown relation {name!r}")
        self.signature = signature
        self.size = int(size)
        built = {}
        for name, r in signature.relations:
            rows = set()
            for tup in tables.get(name, ()):
                tup = tuple(int(e) for e in tup)
                if len(tup) != r:
                    raise ValidationError(f"tuple {name}{tup} has length {len(tup)}, expected {r}")
                for e in tup:
                    if not 0 <= e < size:
                        raise ValidationError(f"tuple {name}{tup}: element {e} not in universe of size {size}")
                rows.add(tup)
            built[name] = frozenset(rows)
        self._tables = built
        constants = dict(constants or {})
        for name in constants:
            if name not in signature.constants:
                raise ValidationError(f"undeclared constant {name!r}")
        for name in signature.constants:
            if name not in constants:
                raise ValidationError(f"constant {name!r} has no interpretation")
            e = int(constants[name])
            if not 0 <= e < size:
                raise ValidationError(f"constant {name} = {e} not in universe of size {size}")
        self._constants = {name: int(constants[name]) for name in signature.constants}
        self._dense = {}

    @property
    def tables(self) -> dict[str, frozenset]:
        return dict(self._tables)

    @property
    def constants(self) -> dict[str, int]:
        return dict(self._constants)

    def table(self, name: str) -> frozenset:
        try:
            return self._tables[name]
        except KeyError:
            raise UnknownRelation(f"unknown relation {name!r}") from None

    def holds(self, name: str, tup: Sequence[int]) -> bool:
        return tuple(tup) in self.table(name)

    def dense(self, name: str) -> np.ndarray:
        """Boolean array of shape ``(N,)*arity`` with the relation's truth table."""
        arr = self._dense.get(name)
        if arr is None:
            r = self.signature.arity[name]
            arr = np.zeros((self.size,) * r, dtype=bool)
            rows = self.table(name)
            if rows:
                idx = np.array(sorted(rows), dtype=np.intp)
                arr[tuple(idx.T)] = True
            arr.setflags(write=False)
            self._dense[name] = arr
        return arr

    def constant_elements(self) -> tuple[int, ...]:
        return tuple(sorted(set(self._constants.values())))

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.signature == other.signature and self.size == other.size
                and self._tables == other._tables and self._constants == other._constants)

    def __hash__(self):
        return hash((self.signature, self.size, tuple(sorted(self._tables.items()))))

    def __repr__(self):
        counts = ", ".join(f"{n}:{len(t)}" for n, t in self._tables.items())
        return f"Structure(N={self.size}, {{{counts}}})"


def check_elements(s: Structure, elements: Iterable[int], what: str = "parameter") -> tuple[int, ...]:
    """Validate a list of distinct in-range elements and return it as a tuple."""
    out = tuple(int(e) for e in elements)
    for e in out:
        if not 0 <= e < s.size:
            raise ValidationError(f"{what} element {e} not in universe of size {s.size}")
    if len(set(out)) != len(out):
        raise ValidationError(f"duplicate {what} elements in {out}")
    return out


def reduct(s: Structure, keep: Iterable[str]) -> Structure:
    """Restrict ``s`` to the relations in ``keep``; universe and constants are kept."""
    keep = set(keep)
    arity = s.signature.arity
    for name in keep:
        if name not in arity:
            raise UnknownRelation(f"unknown relation {name!r}")
    sig = Signature(tuple((n, a) for n, a in s.signature.relations if n in keep), s.signature.constants)
    return Structure(sig, s.size, {n: s.table(n) for n in sig.relation_names}, s.constants)


# -- text format -------------------------------------------------------------

def parse_structure(text: str) -> Structure:
    """Parse the line-oriented structure format.

    ``universe N`` must come first; ``rel NAME ARITY`` declares a relation
    before any of its tuples; ``const NAME ELEM`` and ``tuple NAME e1 ...``
    follow. ``#`` starts a comment.
    """
    size = None
    relations: dict[str, int] = {}
    consts: dict[str, int] = {}
    tuples: dict[str, list] = {}

    def integer(tok, line, col):
        if not re.fullmatch(r"\d+", tok):
            raise ParseError(f"expected a non-negative integer, got {tok!r}", line, col)
        return int(tok)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if not toks:
            continue
        (kw, kcol), args = toks[0], toks[1:]
        if kw != "universe" and size is None:
            raise ParseError("'universe N' must precede all other declarations", lineno, kcol)
        if kw == "universe":
            if size is not None:
                raise ParseError("duplicate universe declaration", lineno, kcol)
            if len(args) != 1:
                raise ParseError("usage: universe N", lineno, kcol)
            size = integer(*args[0], lineno)
            if size < 1:
                raise ValidationError("empty universe is not allowed")
        elif kw == "rel":
            if len(args) != 2:
                raise ParseError("usage: rel NAME ARITY", lineno, kcol)
            name = args[0][0]
            if not _NAME.match(name):
                raise ParseError(f"invalid relation name {name!r}", lineno, args[0][1])
            if name in relations or name in consts:
                raise ValidationError(f"duplicate declaration of {name!r} on line {lineno}")
            arity = integer(*args[1], lineno)
            if arity < 1:
                raise ValidationError(f"relation {name} declared with arity 0 on line {lineno}")
            relations[name] = arity
            tuples[name] = []
        elif kw == "const":
            if len(args) != 2:
                raise ParseError("usage: const NAME ELEM", lineno, kcol)
            name = args[0][0]
            if not _NAME.match(name):
                raise ParseError(f"invalid constant name {name!r}", lineno, args[0][1])
            if name in relations or name in consts:
                raise ValidationError(f"duplicate declaration of {name!r} on line {lineno}")
            e = integer(*args[1], lineno)
            if e >= size:
                raise ValidationError(f"constant {name} = {e}: element not in universe of size {size}")
            consts[name] = e
        elif kw == "tuple":
            if not args:
                raise ParseError("usage: tuple NAME e1 ... ek", lineno, kcol)
            name = args[0][0]
            if name not in relations:
                raise UnknownRelation(f"tuple for undeclared relation {name!r} on line {lineno}")
            elems = tuple(integer(t, lineno, c) for t, c in args[1:])
            if len(elems) != relations[name]:
                raise ValidationError(f"tuple {name}{elems} on line {lineno} has wrong length; arity is {relations[name]}")
            for e in elems:
                if e >= size:
                    raise ValidationError(f"tuple {name}{elems} on line {lineno}: element {e} >= N = {size}")
            tuples[name].append(elems)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, kcol)
    if size is None:
        raise ParseError("missing 'universe N' declaration", 1, 1)
    sig = Signature(tuple(relations.items()), tuple(consts))
    return Structure(sig, size, tuples, consts)


def serialize_structure(s: Structure) -> str:
    """Canonical text form: declarations in signature order, tuples sorted."""
    lines = [f"universe {s.size}"]
    for name, arity in s.signature.relations:
        lines.append(f"rel {name} {arity}")
    for name in s.signature.constants:
        lines.append(f"const {name} {s.constants[name]}")
    for name, _ in s.signature.relations:
        for tup in sorted(s.table(name)):
            lines.append("tuple " + name + " " + " ".join(map(str, tup)))
    return "\n".join(lines) + "\n"


# -- generators --------------------------------------------------------------

def _require_size(k):
    if k < 1:
        raise ValidationError(f"generator size must be >= 1, got {k}")


def gen_matching(k: int) -> Structure:
    """``2k`` vertices joined by ``k`` disjoint symmetric edges ``2i -- 2i+1``."""
    _require_size(k)
    edges = [(2 * i, 2 * i + 1) for i in range(k)] + [(2 * i + 1, 2 * i) for i in range(k)]
    return Structure(Signature.of({"E": 2}), 2 * k, {"E": edges})


def gen_cycle(k: int) -> Structure:
    """Directed successor cycle ``S(i, i+1 mod k)`` on ``k`` elements."""
    _require_size(k)
    return Structure(Signature.of({"S": 2}), k, {"S": [(i, (i + 1) % k) for i in range(k)]})


def gen_halfgraph(k: int) -> Structure:
    """Half-graph: ``a_i = i``, ``b_j = k + j``, symmetric edges ``a_i -- b_j`` for ``i <= j``."""
    _require_size(k)
    edges = []
    for i in range(k):
        for j in range(i, k):
            edges += [(i, k + j), (k + j, i)]
    return Structure(Signature.of({"E": 2}), 2 * k, {"E": edges})


def gen_random(k: int, density: float, seed: int, relations: Mapping[str, int] | None = None) -> Structure:
    """Each possible tuple of each relation is included with probability ``density``."""
    _require_size(k)
    if not 0.0 <= density <= 1.0:
        raise ValidationError(f"density must lie in [0, 1], got {density}")
    relations = dict(relations or {"E": 2})
    rng = np.random.default_rng(seed)
    tables = {}
    for name, arity in relations.items():
        cells = list(product(range(k), repeat=arity))
        keep = rng.random(len(cells)) < density
        tables[name] = [c for c, flag in zip(cells, keep) if flag]
    return Structure(Signature.of(relations), k, tables)


def halfgraph_b(k: int, j: int) -> int:
    """Element id of ``b_j`` in ``gen_halfgraph(k)``."""
    return k + j


GENERATORS = {
    "matching": gen_matching,
    "cycle": gen_cycle,
    "halfgraph": gen_halfgraph,
    "random": gen_random,
}


def generate(name: str, size: int, density: float = 0.5, seed: int = 0) -> Structure:
    if name not in GENERATORS:
        raise ValidationError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}")
    if name == "random":
        return gen_random(size, density, seed)
    return GENERATORS[name](size)
