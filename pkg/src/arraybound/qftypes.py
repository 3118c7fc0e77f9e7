"""Quantifier-free types of tuples over finite parameter sets.

A type is stored as a :class:`TypeFingerprint`: the equality pattern of the
tuple (among its own positions, with parameters and with constants) plus the
truth value of every *mixed atom*, i.e. every relation atom whose slots are
filled with tuple positions or parameters and which mentions at least one
position. Interpretations of constants are always added to the parameter pool
for atom slots, so a type over ``D`` really is a type over ``D`` plus the
constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimit, ValidationError
from .formula import Atom, Eq, Not, Param, Var, conj
from .structure import Structure, check_elements

DEFAULT_TYPE_BUDGET = 2_000_000


def parameter_pool(s: Structure, params: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(params) | set(s.constant_elements())))


def literal_keys(signature, k: int, pool: Sequence[int]) -> list:
    """Every atomic question a type of length ``k`` over ``pool`` answers, in canonical order.

    Keys are ``("eq", i, j)`` for ``i < j``, ``("eqp", i, e)`` and
    ``("atom", rel, slots)`` with slots ``("x", i)`` or ``("e", e)``.
    """
    keys = [("eq", i, j) for i in range(k) for j in range(i + 1, k)]
    keys += [("eqp", i, e) for i in range(k) for e in pool]
    fillers = [("x", i) for i in range(k)] + [("e", e) for e in pool]
    for rel, arity in signature.relations:
        for slots in product(fillers, repeat=arity):
            if any(tag == "x" for tag, _ in slots):
                keys.append(("atom", rel, slots))
    return keys


def _slot_text(slot):
    tag, v = slot
    return f"z{v + 1}" if tag == "x" else f"@{v}"


def literal_formula(key, value: bool = True):
    """The literal asserting that ``key`` has truth value ``value``."""
    kind = key[0]
    if kind == "eq":
        f = Eq(Var(key[1]), Var(key[2]))
    elif kind == "eqp":
        f = Eq(Var(key[1]), Param(key[2]))
    else:
        f = Atom(key[1], tuple(Var(v) if tag == "x" else Param(v) for tag, v in key[2]))
    return f if value else Not(f)


def key_positions(key) -> frozenset:
    if key[0] == "eq":
        return frozenset(key[1:])
    if key[0] == "eqp":
        return frozenset((key[1],))
    return frozenset(v for tag, v in key[2] if tag == "x")


@dataclass(frozen=True)
class TypeFingerprint:
    """Canonical quantifier-free type of a ``var_count``-tuple over ``params``.

    ``eq_pattern[i]`` is ``(rep, param, consts)``: the first position equal to
    position ``i``, the parameter it equals (or ``None``), and the names of the
    constants it equals. ``atom_facts`` lists ``(relation, slots, truth)`` for
    every mixed atom.
    """

    var_count: int
    params: tuple
    constants: tuple
    eq_pattern: tuple
    atom_facts: tuple

    @property
    def pool(self) -> tuple:
        return tuple(sorted(set(self.params) | {e for _, e in self.constants}))

    def facts(self) -> dict:
        out = {}
        k = self.var_count
        for i in range(k):
            for j in range(i + 1, k):
                out[("eq", i, j)] = self.eq_pattern[i][0] == self.eq_pattern[j][0]
        const_elem = dict(self.constants)
        for i, (_, param, names) in enumerate(self.eq_pattern):
            hit = {param} if param is not None else set()
            hit |= {const_elem[n] for n in names}
            for e in self.pool:
                out[("eqp", i, e)] = e in hit
        for rel, slots, truth in self.atom_facts:
            out[("atom", rel, slots)] = truth
        return out

    @classmethod
    def from_facts(cls, var_count, params, constants, facts) -> "TypeFingerprint":
        params = tuple(sorted(params))
        constants = tuple(sorted(constants))
        pset = set(params)
        eq_pattern = []
        for i in range(var_count):
            rep = next((j for j in range(i) if facts[("eq", j, i)]), i)
            hits = [e for e in sorted(pset | {e for _, e in constants}) if facts[("eqp", i, e)]]
            param = next((e for e in hits if e in pset), None)
            names = tuple(n for n, e in constants if e in hits)
            eq_pattern.append((rep, param, names))
        atoms = tuple(sorted((key[1], key[2], bool(v)) for key, v in facts.items() if key[0] == "atom"))
        return cls(var_count, params, constants, tuple(eq_pattern), atoms)

    def pinned(self) -> bool:
        """True when some position equals a parameter or a constant."""
        return any(p is not None or names for _, p, names in self.eq_pattern)

    def token(self) -> str:
        """Stable one-line text form used in reports."""
        eq = []
        for i, (rep, param, names) in enumerate(self.eq_pattern):
            part = f"z{i + 1}"
            if rep != i:
                part += f"=z{rep + 1}"
            if param is not None:
                part += f"=@{param}"
            for n in names:
                part += f"={n}"
            eq.append(part)
        pos = [f"{rel}({','.join(_slot_text(s) for s in slots)})" for rel, slots, t in self.atom_facts if t]
        return (f"k={self.var_count}|D={','.join(map(str, self.params))}|eq={' '.join(eq)}"
                f"|true={' '.join(pos) if pos else '-'}")

    def __str__(self):
        return self.token()


def qf_type(s: Structure, tup: Sequence[int], params: Sequence[int] = ()) -> TypeFingerprint:
    """The complete atomic diagram of ``tup`` relative to ``params``."""
    tup = tuple(int(e) for e in tup)
    if not tup:
        raise ValidationError("qf_type needs a tuple of length >= 1")
    check_elements(s, set(tup), "tuple")
    params = check_elements(s, params)
    pool = parameter_pool(s, params)
    facts = {}
    for key in literal_keys(s.signature, len(tup), pool):
        kind = key[0]
        if kind == "eq":
            facts[key] = tup[key[1]] == tup[key[2]]
        elif kind == "eqp":
            facts[key] = tup[key[1]] == key[2]
        else:
            facts[key] = s.holds(key[1], tuple(tup[v] if tag == "x" else v for tag, v in key[2]))
    return TypeFingerprint.from_facts(len(tup), params, s.constants.items(), facts)


def isolating_formula(fp: TypeFingerprint):
    """Conjunction of every literal of ``fp``; its solutions are exactly the realizations."""
    return conj([literal_formula(key, v) for key, v in fp.facts().items()])


def restrict(fp: TypeFingerprint, params: Sequence[int]) -> TypeFingerprint:
    """The type over the smaller parameter set ``params`` implied by ``fp``."""
    params = tuple(sorted(set(params)))
    if not set(params) <= set(fp.params):
        raise ValidationError(f"{params} is not a subset of {fp.params}")
    keep = set(params) | {e for _, e in fp.constants}
    facts = {}
    for key, v in fp.facts().items():
        if key[0] == "eqp" and key[2] not in keep:
            continue
        if key[0] == "atom" and any(tag == "e" and e not in keep for tag, e in key[2]):
            continue
        facts[key] = v
    return TypeFingerprint.from_facts(fp.var_count, params, fp.constants, facts)


def _remap_key(key, pos_map):
    kind = key[0]
    if kind == "eq":
        i, j = sorted((pos_map[key[1]], pos_map[key[2]]))
        return ("eq", i, j)
    if kind == "eqp":
        return ("eqp", pos_map[key[1]], key[2])
    return ("atom", key[1], tuple(("x", pos_map[v]) if tag == "x" else (tag, v) for tag, v in key[2]))


def permute(fp: TypeFingerprint, order: Sequence[int]) -> TypeFingerprint:
    """Reorder coordinates: new position ``i`` is old position ``order[i]``."""
    order = tuple(order)
    if sorted(order) != list(range(fp.var_count)):
        raise ValidationError(f"{order} is not a permutation of {fp.var_count} positions")
    old = fp.facts()
    facts = {}
    for i in range(fp.var_count):
        for j in range(i + 1, fp.var_count):
            a, b = sorted((order[i], order[j]))
            facts[("eq", i, j)] = old[("eq", a, b)]
    for key, v in old.items():
        if key[0] == "eqp":
            facts[("eqp", order.index(key[1]), key[2])] = v
        elif key[0] == "atom":
            inverse = {o: n for n, o in enumerate(order)}
            facts[_remap_key(key, inverse)] = v
    return TypeFingerprint.from_facts(fp.var_count, fp.params, fp.constants, facts)


def subtuple_type(fp: TypeFingerprint, positions: Sequence[int]) -> TypeFingerprint:
    """Type of the subtuple at ``positions`` (in that order)."""
    positions = tuple(positions)
    new_of = {old: new for new, old in enumerate(positions)}
    old = fp.facts()
    facts = {}
    for key, v in old.items():
        used = key_positions(key)
        if used <= set(positions):
            facts[_remap_key(key, new_of)] = v
    return TypeFingerprint.from_facts(len(positions), fp.params, fp.constants, facts)


# -- grid enumeration ---------------------------------------------------------

class TypeClasses:
    """All ``k``-tuples of a structure grouped by their type over ``params``.

    ``rows`` holds the tuples in lexicographic order and ``labels[g]`` the
    type index of ``rows[g]``; types are numbered by first realization.
    """

    def __init__(self, s: Structure, k: int, params: Sequence[int] = (), budget: int = DEFAULT_TYPE_BUDGET):
        self.structure = s
        self.k = k
        self.params = check_elements(s, params)
        pool = parameter_pool(s, self.params)
        n = s.size
        if k < 1:
            raise ValidationError("tuple length must be >= 1")
        keys = literal_keys(s.signature, k, pool)
        if n ** k > budget or n ** k * max(len(keys), 1) > 64 * budget:
            raise ResourceLimit(f"{n}^{k} tuples with {len(keys)} literals exceed the type budget {budget}")
        rows = np.indices((n,) * k, dtype=np.intp).reshape(k, -1).T
        cols = np.empty((rows.shape[0], len(keys)), dtype=bool)
        for c, key in enumerate(keys):
            kind = key[0]
            if kind == "eq":
                cols[:, c] = rows[:, key[1]] == rows[:, key[2]]
            elif kind == "eqp":
                cols[:, c] = rows[:, key[1]] == key[2]
            else:
                idx = tuple(rows[:, v] if tag == "x" else v for tag, v in key[2])
                cols[:, c] = s.dense(key[1])[idx]
        if len(keys) <= 62:
            weights = np.left_shift(np.int64(1), np.arange(len(keys), dtype=np.int64))
            codes = cols.astype(np.int64) @ weights
            _, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
        else:
            packed = np.ascontiguousarray(np.packbits(cols, axis=1))
            view = packed.view(np.dtype((np.void, packed.shape[1]))).ravel()
            _, first, inverse = np.unique(view, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.intp)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        self.rows = rows
        self.labels = rank[inverse.ravel()]
        self.count = len(first)
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.count))[:-1]
        self._groups = np.split(rows[order], bounds)
        self._fps = None

    def realizations(self, t: int) -> np.ndarray:
        return self._groups[t]

    def fingerprint(self, t: int) -> TypeFingerprint:
        return qf_type(self.structure, tuple(int(e) for e in self._groups[t][0]), self.params)

    def fingerprints(self) -> list:
        if self._fps is None:
            self._fps = [self.fingerprint(t) for t in range(self.count)]
        return self._fps


def enumerate_types(s: Structure, k: int, params: Sequence[int] = (), allow_long: bool = False,
                    budget: int = DEFAULT_TYPE_BUDGET) -> dict:
    """Map each realized type of ``k``-tuples over ``params`` to its sorted realizations."""
    if k < 1 or (k > s.signature.max_arity and not allow_long):
        raise ValidationError(f"tuple length {k} outside 1..{s.signature.max_arity} (pass allow_long to exceed)")
    tc = TypeClasses(s, k, params, budget)
    return {fp: [tuple(int(e) for e in r) for r in tc.realizations(t)] for t, fp in enumerate(tc.fingerprints())}


def external_type_count(s: Structure, base: Sequence[int], k: int, budget: int = DEFAULT_TYPE_BUDGET) -> int:
    """Number of types over ``base`` realized by tuples lying entirely outside ``base``."""
    base = check_elements(s, base, "base")
    if len(base) == s.size:
        return 0
    tc = TypeClasses(s, k, base, budget)
    outside = ~np.isin(tc.rows, base).any(axis=1)
    return int(np.unique(tc.labels[outside]).size)
