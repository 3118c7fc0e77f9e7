"""Maximal mutually algebraic decompositions of tuples over a finite base.

A subset ``u`` of positions of a tuple ``c`` qualifies when the isolating
formula of ``tp(c|u / base)`` has MA bound at most ``kappa``. The
decomposition assigns to each position the inclusion-maximal qualifying
subset containing it. When two different maximal subsets overlap, the
result is reported as a closure violation rather than repaired.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .arrays import fingerprint_realizations, packing_at_least
from .errors import BaseOverlap, ValidationError
from .formula import solutions
from .ma import DEFAULT_KAPPA, DEFAULT_TAU, ma_bound
from .qftypes import TypeFingerprint, isolating_formula, qf_type
from .structure import Structure, check_elements

BANNER = "finite-proxy, non-conclusive: maximality is relative to this base and kappa"


@dataclass(frozen=True)
class Piece:
    positions: tuple
    elements: tuple
    fingerprint: TypeFingerprint
    bound: int


@dataclass
class Decomposition:
    pieces: list
    base: tuple
    kappa: int
    violation: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def partition(self) -> frozenset:
        return frozenset(frozenset(p.positions) for p in self.pieces)

    def __str__(self):
        if self.violation:
            a, b = self.violation
            return f"ClosureViolation({_fmt(a)}, {_fmt(b)})"
        return "[" + " | ".join(_fmt(p.positions) for p in self.pieces) + "]"

    def as_dict(self) -> dict:
        out = {"base": list(self.base), "kappa": self.kappa, "note": BANNER}
        if self.violation:
            out["closure_violation"] = [[f"z{i + 1}" for i in sorted(u)] for u in self.violation]
            return out
        out["pieces"] = [{"positions": [f"z{i + 1}" for i in p.positions], "elements": list(p.elements),
                          "type": p.fingerprint.token(), "ma_bound": p.bound} for p in self.pieces]
        return out


def _fmt(positions):
    return "{" + ",".join(f"z{i + 1}" for i in sorted(positions)) + "}"


def _check(s, tup, base):
    tup = tuple(int(e) for e in tup)
    if not tup:
        raise ValidationError("empty tuple")
    check_elements(s, set(tup), "tuple")
    base = check_elements(s, base, "base")
    overlap = set(tup) & set(base)
    if overlap:
        raise BaseOverlap(f"tuple elements {sorted(overlap)} lie in the base")
    return tup, base


def _piece_bound(s, tup, positions, base):
    fp = qf_type(s, tuple(tup[i] for i in positions), base)
    return fp, ma_bound(s, isolating_formula(fp), tuple(range(len(positions)))).k


def ma_subsequences(s: Structure, tup: Sequence[int], base: Sequence[int] = (), kappa: int = DEFAULT_KAPPA) -> set:
    """All nonempty position subsets whose subtuple type is ``kappa``-MA over ``base``."""
    tup, base = _check(s, tup, base)
    out = set()
    for r in range(1, len(tup) + 1):
        for u in itertools.combinations(range(len(tup)), r):
            if _piece_bound(s, tup, u, base)[1] <= kappa:
                out.add(frozenset(u))
    return out


def max_ma_decomposition(s: Structure, tup: Sequence[int], base: Sequence[int] = (), kappa: int = DEFAULT_KAPPA,
                         seed: int | None = None) -> Decomposition:
    """Partition positions into maximal qualifying subsets.

    ``seed`` shuffles the order in which candidate subsets are scanned; the
    answer never depends on it.
    """
    tup, base = _check(s, tup, base)
    qualifying = list(ma_subsequences(s, tup, base, kappa))
    if seed is not None:
        random.Random(seed).shuffle(qualifying)
    maximal = [u for u in qualifying if not any(u < v for v in qualifying)]
    owner = {}
    for u in maximal:
        for i in u:
            if i in owner and owner[i] != u:
                a, b = sorted((owner[i], u), key=lambda w: (len(w), sorted(w)))
                return Decomposition([], base, kappa, (a, b))
            owner[i] = u
    pieces = []
    for u in sorted(set(owner.values()), key=min):
        pos = tuple(sorted(u))
        fp, k = _piece_bound(s, tup, pos, base)
        pieces.append(Piece(pos, tuple(tup[i] for i in pos), fp, k))
    return Decomposition(pieces, base, kappa)


@dataclass
class FinitePart:
    positions: tuple
    count: int


def finite_part(s: Structure, tup: Sequence[int], base: Sequence[int], extra: Sequence[int], bound: int):
    """Smallest position subset whose type over ``base + extra`` has at most ``bound`` realizations."""
    tup, base = _check(s, tup, base)
    params = tuple(dict.fromkeys(tuple(base) + tuple(int(e) for e in extra)))
    for r in range(1, len(tup) + 1):
        for u in itertools.combinations(range(len(tup)), r):
            fp = qf_type(s, tuple(tup[i] for i in u), params)
            count = len(solutions(s, isolating_formula(fp), tuple(range(r))))
            if count <= bound:
                return FinitePart(u, count)
    return None


@dataclass
class Determination:
    verdict: str  # "consistent", "inconsistent" or "vacuous"
    reason: str
    note: str = BANNER

    def as_dict(self):
        return {"verdict": self.verdict, "reason": self.reason, "note": self.note}


def check_determination(s: Structure, c1: Sequence[int], c2: Sequence[int], base: Sequence[int] = (),
                        kappa: int = DEFAULT_KAPPA, tau: int = DEFAULT_TAU) -> Determination:
    """Do equal decompositions with equal, array-supporting pieces force equal full types?"""
    if len(c1) != len(c2):
        raise ValidationError("tuples must have the same length")
    d1 = max_ma_decomposition(s, c1, base, kappa)
    d2 = max_ma_decomposition(s, c2, base, kappa)
    if not (d1.ok and d2.ok):
        return Determination("vacuous", "closure violation in a decomposition")
    if d1.partition() != d2.partition():
        return Determination("vacuous", "different maximal partitions")
    f2 = {p.positions: p.fingerprint for p in d2.pieces}
    for p in d1.pieces:
        if f2[p.positions] != p.fingerprint:
            return Determination("vacuous", f"piece {_fmt(p.positions)} has different types")
        if not packing_at_least(fingerprint_realizations(s, p.fingerprint), tau):
            return Determination("vacuous", f"piece {_fmt(p.positions)} does not support a {tau}-array")
    same = qf_type(s, c1, d1.base) == qf_type(s, c2, d1.base)
    return Determination("consistent" if same else "inconsistent",
                         "full types agree" if same else "full types differ")
