"""Mutual-algebraicity bounds of quantifier-free formulas in a finite structure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrays import packing_at_least
from .errors import ValidationError
from .formula import DEFAULT_GRID_BUDGET, Formula, free_vars, grid_truth, parse_formula, to_text
from .qftypes import TypeClasses, isolating_formula
from .structure import Structure, generate

DEFAULT_KAPPA = 4
DEFAULT_TAU = 3


@dataclass
class MAReport:
    """Per-split fiber maxima of a formula.

    ``per_partition`` maps each proper nonempty subset of positions (the
    fixed side) to the largest number of completions of one assignment to it.
    """

    formula: Formula
    xbar: tuple
    per_partition: dict = field(default_factory=dict)
    k: int = 0
    vacuous: bool = False

    def as_dict(self) -> dict:
        return {
            "formula": to_text(self.formula),
            "xbar": [f"z{i + 1}" for i in self.xbar],
            "k": self.k,
            "vacuous": self.vacuous,
            "partitions": [
                {"fixed": [f"z{self.xbar[p] + 1}" for p in part], "max_fiber": fib}
                for part, fib in self.per_partition.items()
            ],
        }


def fiber_maxima(truth: np.ndarray) -> dict:
    n = truth.ndim
    out = {}
    for r in range(1, n):
        for fixed in itertools.combinations(range(n), r):
            free = tuple(ax for ax in range(n) if ax not in fixed)
            counts = truth.sum(axis=free)
            out[fixed] = int(counts.max()) if counts.size else 0
    return out


def ma_bound(s: Structure, phi: Formula, xbar: Sequence[int], budget: int = DEFAULT_GRID_BUDGET) -> MAReport:
    """Exact fiber maxima of ``phi`` over every proper split of ``xbar``.

    The returned ``k`` is the smallest bound for which ``phi`` is k-mutually
    algebraic in ``s``. Formulas in a single variable are vacuously
    mutually algebraic and get ``k = 0``.
    """
    xbar = tuple(xbar)
    if not xbar:
        raise ValidationError("ma_bound needs at least one variable")
    truth = grid_truth(s, phi, xbar, budget)
    if len(xbar) == 1:
        return MAReport(phi, xbar, {}, 0, True)
    per = fiber_maxima(truth)
    return MAReport(phi, xbar, per, max(per.values()))


@dataclass
class FamilyScan:
    generator: str
    formula: str
    sizes: list
    ks: list
    flag: str

    def as_dict(self):
        return {"generator": self.generator, "formula": self.formula,
                "rows": [{"size": n, "k": k} for n, k in zip(self.sizes, self.ks)],
                "flag": self.flag,
                "note": "finite-proxy, non-conclusive: growth across a finite family"}


def family_scan(generator: str, sizes: Sequence[int], template: str, xbar: Sequence[int] | None = None) -> FamilyScan:
    """MA bound of one formula across a generated family; ``stabilizing`` if the last three agree."""
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValidationError("family sizes must be strictly increasing")
    ks = []
    for n in sizes:
        s = generate(generator, n)
        phi = parse_formula(template, s.signature, None if xbar is None else max(xbar) + 1)
        xs = tuple(sorted(free_vars(phi))) if xbar is None else tuple(xbar)
        ks.append(ma_bound(s, phi, xs).k)
    flag = "stabilizing" if len(ks) >= 3 and len(set(ks[-3:])) == 1 else "growing"
    return FamilyScan(generator, template, sizes, ks, flag)


def count_qma_types(s: Structure, k: int, base: Sequence[int], tau: int = DEFAULT_TAU,
                    kappa: int = DEFAULT_KAPPA) -> int:
    """Types over ``base`` whose isolating formula is kappa-MA and that support a tau-array."""
    tc = TypeClasses(s, k, base)
    total = 0
    for t in range(tc.count):
        if not packing_at_least(tc.realizations(t), tau):
            continue
        rep = ma_bound(s, isolating_formula(tc.fingerprint(t)), tuple(range(k)))
        if rep.k <= kappa:
            total += 1
    return total
