"""Core extraction from MA conjunctions and finite bases of <=k-conjunctions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .arrays import packing_at_least
from .errors import CoverageFailure, PreconditionFailure, ResourceLimit, ValidationError
from .formula import And, Formula, Not, Var, conj, eval_formula, free_vars, solutions, substitute, to_text
from .ma import DEFAULT_KAPPA, DEFAULT_TAU, ma_bound
from .qftypes import TypeClasses, isolating_formula
from .structure import Structure

DEFAULT_BASIS_BUDGET = 100_000


@dataclass
class BasisReport:
    alphas: list
    betas: list
    xbar: tuple
    kappa: int
    tau: int
    verdict: str = "coverage-failure"
    s0: tuple = ()
    seed: int | None = None
    core: Formula | None = None
    core_bound: int | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "success"

    def as_dict(self) -> dict:
        return {
            "xbar": [f"z{i + 1}" for i in self.xbar],
            "alphas": [{"formula": to_text(f), "vars": [f"z{i + 1}" for i in v]} for f, v in self.alphas],
            "betas": [{"formula": to_text(f), "vars": [f"z{i + 1}" for i in v]} for f, v in self.betas],
            "kappa": self.kappa,
            "tau": self.tau,
            "verdict": self.verdict,
            "s0": list(self.s0),
            "core": None if self.core is None else to_text(self.core),
            "core_bound": self.core_bound,
        }


def _normalize(items, what):
    out = []
    for f, v in items:
        v = tuple(v)
        if not free_vars(f) <= set(v):
            raise ValidationError(f"{what} {to_text(f)} uses variables outside {v}")
        out.append((f, v))
    return out


def _chain(alphas, seed):
    union = set(alphas[seed][1])
    chosen = [seed]
    grown = True
    while grown:
        grown = False
        for i, (_, v) in enumerate(alphas):
            if i in chosen:
                continue
            vs = set(v)
            if vs & union and vs - union:
                chosen.append(i)
                union |= vs
                grown = True
                break
    return chosen, union


def extract_core(s: Structure, alphas: Sequence, neg_betas: Sequence, xbar: Sequence[int],
                 kappa: int = DEFAULT_KAPPA, tau: int = DEFAULT_TAU, strict: bool = False) -> BasisReport:
    """Pick a chain of conjuncts covering ``xbar`` and verify their conjunction.

    ``alphas`` and ``neg_betas`` are ``(formula, vars)`` pairs; the input
    conjunction is every alpha together with the negation of every beta.
    Seeds are tried in index order and each chain is grown greedily.
    """
    xbar = tuple(xbar)
    alphas = _normalize(alphas, "alpha")
    betas = _normalize(neg_betas, "beta")
    for f, v in alphas + betas:
        if not set(v) <= set(xbar):
            raise ValidationError(f"conjunct {to_text(f)} has variables outside xbar")
        if ma_bound(s, f, v).k > kappa:
            raise PreconditionFailure(f"conjunct {to_text(f)} is not {kappa}-mutually algebraic")
    theta = And(tuple(f for f, _ in alphas) + tuple(Not(f) for f, _ in betas))
    if ma_bound(s, theta, xbar).k > kappa:
        raise PreconditionFailure(f"the conjunction is not {kappa}-mutually algebraic")
    if not packing_at_least(solutions(s, theta, xbar), tau):
        raise PreconditionFailure(f"the conjunction does not support a {tau}-array")

    report = BasisReport(alphas, betas, xbar, kappa, tau)
    for seed in range(len(alphas)):
        chosen, union = _chain(alphas, seed)
        if union != set(xbar):
            continue
        core = conj([alphas[i][0] for i in sorted(chosen)])
        report.s0, report.seed, report.core = tuple(sorted(chosen)), seed, core
        report.core_bound = ma_bound(s, core, xbar).k
        report.verdict = "success" if report.core_bound <= kappa else "verification-failed"
        return report
    if strict:
        raise CoverageFailure(f"no chain of conjuncts covers {['z%d' % (i + 1) for i in xbar]}")
    return report


# -- finite basis --------------------------------------------------------------

@dataclass
class Assignment:
    length: int
    type_token: str
    members: tuple  # (index into B, variable map) pairs
    formula: Formula | None
    bound: int | None
    reason: str = ""

    @property
    def covered(self) -> bool:
        return self.formula is not None

    def as_dict(self):
        return {"length": self.length, "type": self.type_token, "covered": self.covered,
                "members": [{"index": i, "map": [f"z{j + 1}" for j in m]} for i, m in self.members],
                "formula": None if self.formula is None else to_text(self.formula),
                "ma_bound": self.bound, "reason": self.reason}


@dataclass
class BasisFamily:
    size: int
    k: int
    base: tuple
    kappa: int
    tau: int
    assignments: list = field(default_factory=list)

    @property
    def uncovered(self) -> list:
        return [a for a in self.assignments if not a.covered]

    def as_dict(self):
        return {"family_size": self.size, "k": self.k, "base": list(self.base), "kappa": self.kappa,
                "tau": self.tau, "assignments": [a.as_dict() for a in self.assignments],
                "uncovered": len(self.uncovered)}


def basis_family(n_members: int, k: int) -> list:
    """Index subsets of size at most ``k``: the members of B_k."""
    return [c for j in range(k + 1) for c in itertools.combinations(range(n_members), j)]


def _instances(B, length):
    """Every formula of ``B`` placed on ``length`` positions by an injective variable map."""
    out = []
    for idx, (f, v) in enumerate(B):
        for image in itertools.permutations(range(length), len(v)):
            g = substitute(f, {a: Var(b) for a, b in zip(v, image)})
            out.append((idx, image, g))
    return out


def build_basis(s: Structure, B: Sequence, k: int, base: Sequence[int] = (), kappa: int = DEFAULT_KAPPA,
                tau: int = DEFAULT_TAU, budget: int = DEFAULT_BASIS_BUDGET) -> BasisFamily:
    """Assign to every array-rich MA type a verified conjunction of at most ``k`` placed members of ``B``."""
    if k < 0:
        raise ValidationError("k must be non-negative")
    B = _normalize(B, "basis formula")
    if len(B) ** k > budget:
        raise ResourceLimit(f"|B|^k = {len(B)}^{k} exceeds the basis budget {budget}")
    for f, v in B:
        if ma_bound(s, f, v).k > kappa:
            raise PreconditionFailure(f"basis formula {to_text(f)} is not {kappa}-mutually algebraic")
    family = BasisFamily(sum(comb(len(B), j) for j in range(k + 1)), k, tuple(base), kappa, tau)
    for length in range(1, s.signature.max_arity + 1):
        tc = TypeClasses(s, length, base)
        xbar = tuple(range(length))
        trivial = ma_bound(s, And(()), xbar).k <= kappa
        placed = _instances(B, length)
        for t in range(tc.count):
            rows = tc.realizations(t)
            fp = tc.fingerprint(t)
            if not packing_at_least(rows, tau) or ma_bound(s, isolating_formula(fp), xbar).k > kappa:
                continue
            family.assignments.append(_assign(s, fp, rows[0], length, placed, k, kappa, tau, trivial))
    return family


def _assign(s, fp, rep, length, placed, k, kappa, tau, trivial):
    token = fp.token()
    if trivial:
        return Assignment(length, token, (), And(()), 0)
    asgn = {i: int(e) for i, e in enumerate(rep)}
    alphas, betas, meta = [], [], []
    for idx, image, g in placed:
        if eval_formula(s, g, asgn):
            alphas.append((g, tuple(sorted(image))))
            meta.append((idx, image))
        else:
            betas.append((g, tuple(sorted(image))))
    try:
        rep_ = extract_core(s, alphas, betas, tuple(range(length)), kappa, tau)
    except PreconditionFailure as exc:
        return Assignment(length, token, (), None, None, f"UncoveredType: {exc}")
    if not rep_.ok:
        return Assignment(length, token, (), None, None, f"UncoveredType: {rep_.verdict}")
    if len(rep_.s0) > k:
        return Assignment(length, token, (), None, None, f"UncoveredType: core needs {len(rep_.s0)} > k members")
    return Assignment(length, token, tuple(meta[i] for i in rep_.s0), rep_.core, rep_.core_bound)
