"""Disjoint arrays of realizations: exact packing, N_{x,m}(D) counts, UBA scans.

An m-array of a type is a set of m realizations whose element ranges are
pairwise disjoint. Deciding whether a type supports one is a maximum set
packing problem, solved exactly here by branch and bound.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimit, ValidationError
from .formula import solutions
from .qftypes import DEFAULT_TYPE_BUDGET, TypeClasses, TypeFingerprint, isolating_formula
from .structure import Structure, check_elements, reduct

DEFAULT_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class ArrayCertificate:
    """Pairwise range-disjoint realizations witnessing an m-array."""

    realizations: tuple

    @property
    def m(self) -> int:
        return len(self.realizations)


def _prepare(tuples):
    """Sorted distinct tuples and one representative per element range."""
    seen = {}
    for t in sorted({tuple(int(e) for e in t) for t in tuples}):
        mask = sum(1 << e for e in set(t))
        seen.setdefault(mask, t)
    return seen


def _search(masks, cap, budget, lower):
    """Branch and bound for a maximum family of pairwise disjoint masks.

    ``masks`` must already be in branching order. Stops as soon as ``cap``
    disjoint masks are found. Returns the best family found (list of masks).
    """
    best = list(lower)
    if len(best) >= cap or not masks:
        return best[:cap]
    min_bits = min(m.bit_count() for m in masks)
    nodes = 0

    def dfs(cands, chosen):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimit(f"packing search exceeded {budget} nodes")
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= cap:
                return True
        suffix = [0] * (len(cands) + 1)
        for i in range(len(cands) - 1, -1, -1):
            suffix[i] = suffix[i + 1] | cands[i]
        for i, v in enumerate(cands):
            rest = len(cands) - i
            bound = min(rest, suffix[i].bit_count() // min_bits)
            if len(chosen) + bound <= len(best):
                break
            chosen.append(v)
            if dfs([c for c in cands[i + 1:] if not c & v], chosen):
                return True
            chosen.pop()
        return False

    dfs(list(masks), [])
    return best[:cap]


def _greedy(masks):
    taken, used = [], 0
    for m in masks:
        if not m & used:
            taken.append(m)
            used |= m
    return taken


def _order_by_degree(masks):
    freq = {}
    for m in masks:
        x = m
        while x:
            low = x & -x
            freq[low] = freq.get(low, 0) + 1
            x ^= low
    def score(m):
        x, total = m, 0
        while x:
            low = x & -x
            total += freq[low]
            x ^= low
        return total
    return sorted(masks, key=lambda m: (score(m), m))


def max_disjoint_packing(realizations: Iterable[Sequence[int]], cap: int | None = None,
                         budget: int = DEFAULT_NODE_BUDGET):
    """Largest set of pairwise range-disjoint tuples.

    Parameters
    ----------
    realizations : iterable of tuples
        Candidate tuples (all of the same length).
    cap : int, optional
        Stop once this many disjoint tuples are found; the result is then
        ``min(true optimum, cap)``.
    budget : int
        Maximum number of search nodes before :class:`ResourceLimit`.

    Returns
    -------
    (size, ArrayCertificate)
    """
    reps = _prepare(realizations)
    if not reps:
        return 0, ArrayCertificate(())
    cap = len(reps) if cap is None else cap
    masks = _order_by_degree(list(reps))
    lower = _greedy(masks)
    best = _search(masks, cap, budget, lower)
    cert = tuple(sorted(reps[m] for m in best))
    return len(cert), ArrayCertificate(cert)


def packing_at_least(realizations, m: int, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Whether some ``m`` realizations have pairwise disjoint ranges."""
    if m <= 0:
        return True
    rows = np.asarray(realizations)
    if rows.size == 0 or len(rows) < m:
        return False
    if m == 1:
        return True
    # a coordinate shared by every realization rules out even a 2-array
    if rows.ndim == 1:
        rows = rows.reshape(-1, 1)
    if (rows == rows[0]).all(axis=0).any():
        return False
    # vectorised first-fit settles most positive cases without the exact search
    used = np.zeros(int(rows.max()) + 1, dtype=bool)
    remaining, found = rows, 0
    while found < m and len(remaining):
        used[remaining[0]] = True
        found += 1
        remaining = remaining[~used[remaining].any(axis=1)]
    if found >= m:
        return True
    size, _ = max_disjoint_packing(rows.tolist(), cap=m, budget=budget)
    return size >= m


def lex_least_array(realizations, size: int, budget: int = DEFAULT_NODE_BUDGET):
    """Lexicographically least ``size`` pairwise range-disjoint realizations, or ``None``."""
    reps = _prepare(realizations)
    if size <= 0:
        return ()
    ordered = sorted(reps.values())
    masks = [sum(1 << e for e in set(t)) for t in ordered]
    greedy = _greedy(masks)
    if len(greedy) >= size:
        chosen = greedy[:size]
    else:
        # depth-first in lexicographic order: the first complete hit is the least one
        min_bits = min(m.bit_count() for m in masks)
        nodes = 0

        def dfs(start, used, chosen):
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise ResourceLimit(f"array search exceeded {budget} nodes")
            if len(chosen) == size:
                return list(chosen)
            need = size - len(chosen)
            for i in range(start, len(masks)):
                if len(masks) - i < need:
                    break
                v = masks[i]
                if v & used:
                    continue
                free = 0
                for w in masks[i + 1:]:
                    if not w & (used | v):
                        free |= w
                if need - 1 > free.bit_count() // min_bits:
                    continue
                chosen.append(v)
                hit = dfs(i + 1, used | v, chosen)
                if hit:
                    return hit
                chosen.pop()
            return None

        chosen = dfs(0, 0, [])
        if chosen is None:
            return None
    by_mask = {m: t for m, t in zip(masks, ordered)}
    return tuple(by_mask[m] for m in chosen)


def fingerprint_realizations(s: Structure, fp: TypeFingerprint) -> list:
    return solutions(s, isolating_formula(fp), tuple(range(fp.var_count)))


def supports_m_array(s: Structure, fp: TypeFingerprint, m: int, budget: int = DEFAULT_NODE_BUDGET):
    """Decide whether ``fp`` has ``m`` realizations with disjoint ranges.

    Returns ``(flag, certificate)``; the certificate is ``None`` when the
    answer is negative.
    """
    reals = fingerprint_realizations(s, fp)
    if m <= 0:
        return True, ArrayCertificate(())
    size, cert = max_disjoint_packing(reals, cap=m, budget=budget)
    if size >= m:
        return True, cert
    return False, None


def count_supporting(s: Structure, k: int, params: Sequence[int], m: int,
                     budget: int = DEFAULT_TYPE_BUDGET, classes: TypeClasses | None = None) -> int:
    """N_{x,m}(D): how many types of ``k``-tuples over ``params`` support an m-array."""
    tc = classes or TypeClasses(s, k, params, budget)
    return sum(packing_at_least(tc.realizations(t), m) for t in range(tc.count))


# -- sampling of parameter sets ------------------------------------------------

@dataclass(frozen=True)
class Exhaustive:
    """Every parameter set of size at most ``max_size``."""

    max_size: int

    def sets(self, s: Structure):
        for r in range(self.max_size + 1):
            yield from itertools.combinations(range(s.size), r)

    def describe(self):
        return f"exhaustive-up-to-{self.max_size}"


@dataclass(frozen=True)
class SeededRandom:
    """``count`` random parameter sets with sizes ``0..max_size``."""

    count: int
    max_size: int
    seed: int = 0

    def sets(self, s: Structure):
        rng = np.random.default_rng(self.seed)
        for _ in range(self.count):
            r = int(rng.integers(0, min(self.max_size, s.size) + 1))
            yield tuple(sorted(int(e) for e in rng.choice(s.size, size=r, replace=False)))

    def describe(self):
        return f"seeded-random(count={self.count},max={self.max_size},seed={self.seed})"


@dataclass(frozen=True)
class Chain:
    """An explicit list of parameter sets, normally nested."""

    parameter_sets: tuple

    def sets(self, s: Structure):
        for d in self.parameter_sets:
            yield tuple(d)

    def describe(self):
        return f"chain(len={len(self.parameter_sets)})"


@dataclass
class Verdict:
    kind: str  # "growing" or "bounded-so-far"
    max_count: int
    witness: list = field(default_factory=list)

    def as_dict(self):
        return {"verdict": self.kind, "max_count": self.max_count,
                "witness": [{"D": list(d), "count": c} for d, c in self.witness]}


@dataclass
class UBAProfile:
    """Counts N_{x,m}(D) gathered over sampled parameter sets, with verdicts per length."""

    m: int
    sampler: str
    rows: list = field(default_factory=list)  # (D, k, count)
    verdicts: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "m", "D", "count"])
        for d, k, c in self.rows:
            w.writerow([k, self.m, " ".join(map(str, d)), c])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "sampler": self.sampler,
            "note": "finite-proxy, non-conclusive: counts come from one finite structure",
            "rows": [{"k": k, "D": list(d), "count": c} for d, k, c in self.rows],
            "verdicts": {str(k): v.as_dict() for k, v in sorted(self.verdicts.items())},
        }


def longest_increasing_chain(counts: dict) -> list:
    """Longest chain D_1 < D_2 < ... (proper subsets) with strictly increasing counts."""
    sets = sorted(counts, key=lambda d: (len(d), sorted(d)))
    present = set(sets)
    down_closed = all(d - {e} in present for d in sets for e in d)
    best_len, prev = {}, {}
    for d in sets:
        if down_closed:
            preds = [d - {e} for e in sorted(d)]
        else:
            preds = [p for p in sets if len(p) < len(d) and p < d]
        best_len[d], prev[d] = 1, None
        for p in preds:
            if counts[p] < counts[d] and best_len[p] + 1 > best_len[d]:
                best_len[d], prev[d] = best_len[p] + 1, p
    if not sets:
        return []
    end = max(sets, key=lambda d: (best_len[d], -len(d)))
    chain = []
    while end is not None:
        chain.append(end)
        end = prev[end]
    return chain[::-1]


def uba_scan(s: Structure, m: int, ks: Iterable[int], sampler, min_chain: int = 3,
             budget: int = DEFAULT_TYPE_BUDGET) -> UBAProfile:
    """Sample parameter sets and record how many types support an ``m``-array.

    A length ``k`` is reported ``growing`` only when the samples contain a
    nested chain of at least ``min_chain`` parameter sets along which the count
    strictly increases; otherwise ``bounded-so-far`` with the observed maximum.
    """
    ks = list(ks)
    profile = UBAProfile(m=m, sampler=sampler.describe())
    seen = []
    for d in sampler.sets(s):
        d = check_elements(s, d)
        seen.append(d)
    if not seen:
        raise ValidationError("the sampler produced no parameter sets")
    for k in ks:
        counts = {}
        for d in seen:
            c = count_supporting(s, k, d, m, budget)
            profile.rows.append((d, k, c))
            counts.setdefault(frozenset(d), c)
        chain = longest_increasing_chain(counts)
        mx = max(counts.values())
        if len(chain) >= min_chain:
            ordered = {frozenset(d): d for d in seen}
            profile.verdicts[k] = Verdict("growing", mx, [(tuple(sorted(ordered[c])), counts[c]) for c in chain])
        else:
            profile.verdicts[k] = Verdict("bounded-so-far", mx)
    return profile


# -- reducts -------------------------------------------------------------------

@dataclass
class PigeonholeRecord:
    token: str
    packing_target: int
    refinements: int
    refined_ok: bool


def reduct_pigeonhole(s: Structure, keep: Iterable[str], k: int, params: Sequence[int], m: int,
                      budget: int = DEFAULT_NODE_BUDGET) -> list:
    """Check reduct types against their full-signature refinements.

    For every type of the reduct whose realizations contain ``m*T`` disjoint
    ones, where ``T`` is the number of full types refining it, report whether
    some refining full type supports an ``m``-array.
    """
    small = reduct(s, keep)
    part = TypeClasses(small, k, params)
    full = TypeClasses(s, k, params)
    out = []
    for t in range(part.count):
        mask = part.labels == t
        refining = np.unique(full.labels[mask])
        target = m * len(refining)
        if not packing_at_least(part.realizations(t), target, budget):
            continue
        ok = any(packing_at_least(full.realizations(int(r)), m, budget) for r in refining)
        out.append(PigeonholeRecord(part.fingerprint(t).token(), target, len(refining), ok))
    return out
