"""Defining schemes built from disjoint arrays, and free products of types.

Given an isolating formula ``phi(x)`` and a formula ``theta(x, y)``, the
separation number ``m`` is the least integer such that for no ``d`` both
``phi & theta(., d)`` and ``phi & !theta(., d)`` have ``m`` disjoint
solutions. With a ``2m``-array ``a_0 .. a_{2m-1}`` of solutions of ``phi``,
the scheme ``OR over m-subsets s of AND_{i in s} theta(a_i, y)`` then decides
on the parameter side whether ``theta(., d)`` keeps an ``m``-array.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrays import ArrayCertificate, lex_least_array, max_disjoint_packing, packing_at_least
from .errors import InsufficientArrays, NoSuchM, NotArrayIsolated, ValidationError
from .formula import (And, Formula, Param, conj, disj, eval_formula, evaluate, free_vars, shift_vars,
                      solutions, substitute, to_text)
from .qftypes import (TypeClasses, TypeFingerprint, isolating_formula, key_positions, literal_formula,
                      literal_keys, qf_type)
from .structure import Structure

MAX_SCHEME_M = 6
DEFAULT_TAU = 3


@dataclass
class Separation:
    """Result of :func:`compute_m`.

    ``violations`` lists parameter tuples for which neither side reaches
    ``m`` disjoint solutions (the "exactly one" clause fails there).
    """

    m: int
    violations: list = field(default_factory=list)


@dataclass(frozen=True)
class SchemeParams:
    isolator: Formula
    xbar: tuple
    theta: Formula
    ybar: tuple
    m: int
    array: ArrayCertificate


def _packing_number(rows: np.ndarray, cap: int) -> int:
    if len(rows) == 0:
        return 0
    used = np.zeros(int(rows.max()) + 1, dtype=bool)
    remaining, found = rows, 0
    while found < cap and len(remaining):
        used[remaining[0]] = True
        found += 1
        remaining = remaining[~used[remaining].any(axis=1)]
    if found >= cap:
        return cap
    size, _ = max_disjoint_packing(rows.tolist(), cap=cap)
    return size


def _grid(n, k):
    if k == 0:
        return np.zeros((1, 0), dtype=np.intp)
    return np.indices((n,) * k, dtype=np.intp).reshape(k, -1).T


def _split_truth(s, phi, xbar, theta, ybar):
    """Solutions of ``phi`` and the truth of ``theta`` for every (solution, y-tuple) pair."""
    rows = np.array(solutions(s, phi, xbar), dtype=np.intp).reshape(-1, len(xbar))
    ygrid = _grid(s.size, len(ybar))
    env = {v: rows[:, j][:, None] for j, v in enumerate(xbar)}
    env.update({v: ygrid[:, j][None, :] for j, v in enumerate(ybar)})
    truth = np.broadcast_to(evaluate(s, theta, env), (len(rows), len(ygrid)))
    return rows, ygrid, truth


def _check_vars(phi, xbar, theta, ybar):
    if set(xbar) & set(ybar):
        raise ValidationError("x and y variable tuples must be disjoint")
    if not free_vars(phi) <= set(xbar):
        raise ValidationError("the isolator may only use the x variables")
    if not free_vars(theta) <= set(xbar) | set(ybar):
        raise ValidationError("theta may only use the x and y variables")


def compute_m(s: Structure, phi: Formula, xbar: Sequence[int], theta: Formula, ybar: Sequence[int],
              m_max: int | None = None) -> Separation:
    """Least ``m`` such that, for every ``d``, not both sides of ``theta(., d)`` pack ``m`` solutions of ``phi``.

    Raises :class:`NoSuchM` when that ``m`` exceeds ``m_max`` (default
    ``N // len(xbar)``).
    """
    xbar, ybar = tuple(xbar), tuple(ybar)
    _check_vars(phi, xbar, theta, ybar)
    if m_max is None:
        m_max = s.size // len(xbar)
    if m_max < 1:
        raise NoSuchM(m_max)
    rows, ygrid, truth = _split_truth(s, phi, xbar, theta, ybar)
    cap = m_max + 1
    if len(rows):
        cols, inverse = np.unique(truth.T, axis=0, return_inverse=True)
    else:
        cols, inverse = np.zeros((1, 0), dtype=bool), np.zeros(len(ygrid), dtype=np.intp)
    inverse = inverse.ravel()
    lows, highs = [], []
    for col in cols:
        a = _packing_number(rows[col], cap)
        b = _packing_number(rows[~col], cap)
        lows.append(min(a, b))
        highs.append(max(a, b))
    m = max(lows) + 1
    if m > m_max:
        raise NoSuchM(m_max)
    bad = {i for i, h in enumerate(highs) if h < m}
    violations = [tuple(int(e) for e in ygrid[g]) for g in range(len(ygrid)) if inverse[g] in bad]
    return Separation(m, violations)


def make_scheme(s: Structure, phi: Formula, xbar: Sequence[int], theta: Formula, ybar: Sequence[int],
                m_max: int | None = None, force: bool = False, array: Sequence | None = None) -> SchemeParams:
    """Compute ``m`` and back it with the lexicographically least ``2m``-array of ``phi``.

    ``array`` substitutes an explicit ``2m``-array (it is validated).
    """
    xbar, ybar = tuple(xbar), tuple(ybar)
    sep = compute_m(s, phi, xbar, theta, ybar, m_max)
    if sep.m > MAX_SCHEME_M and not force:
        raise ValidationError(f"m = {sep.m} gives C({2 * sep.m},{sep.m}) disjuncts; pass force=True")
    reals = solutions(s, phi, xbar)
    if array is None:
        chosen = lex_least_array(reals, 2 * sep.m)
        if chosen is None:
            raise InsufficientArrays(f"the isolator has no {2 * sep.m}-array in this structure")
    else:
        chosen = tuple(tuple(int(e) for e in t) for t in array)
        ok = len(chosen) == 2 * sep.m and set(chosen) <= set(reals) and all(
            not set(a) & set(b) for a, b in itertools.combinations(chosen, 2))
        if not ok:
            raise ValidationError(f"supplied array is not a {2 * sep.m}-array of the isolator")
    return SchemeParams(phi, xbar, theta, ybar, sep.m, ArrayCertificate(tuple(chosen)))


def build_scheme(params: SchemeParams) -> Formula:
    """The disjunction, over m-subsets of the 2m-array, of theta instantiated at each member."""
    inst = []
    for a in params.array.realizations:
        inst.append(substitute(params.theta, {v: Param(e) for v, e in zip(params.xbar, a)}))
    m = params.m
    return disj([conj([inst[i] for i in subset]) for subset in itertools.combinations(range(2 * m), m)])


@dataclass
class BasedefReport:
    scheme_holds: bool
    array_test: bool

    @property
    def agree(self) -> bool:
        return self.scheme_holds == self.array_test


def check_basedef(s: Structure, params: SchemeParams, dbar: Sequence[int], scheme: Formula | None = None) -> BasedefReport:
    """Compare the scheme at ``dbar`` with a direct m-array test on ``phi & theta(., dbar)``."""
    dbar = tuple(int(e) for e in dbar)
    if len(dbar) != len(params.ybar):
        raise ValidationError(f"expected {len(params.ybar)} parameters, got {len(dbar)}")
    scheme = build_scheme(params) if scheme is None else scheme
    asgn = dict(zip(params.ybar, dbar))
    holds = eval_formula(s, scheme, asgn)
    fixed = substitute(params.theta, {v: Param(e) for v, e in asgn.items()})
    side = solutions(s, And((params.isolator, fixed)), params.xbar)
    return BasedefReport(holds, packing_at_least(side, params.m))


def scheme_agreement(s: Structure, params: SchemeParams) -> tuple[int, int]:
    """``(agreeing, total)`` over every parameter tuple, computed in one vectorised pass."""
    scheme = build_scheme(params)
    ygrid = _grid(s.size, len(params.ybar))
    env = {v: ygrid[:, j] for j, v in enumerate(params.ybar)}
    holds = np.broadcast_to(evaluate(s, scheme, env), (len(ygrid),))
    rows, _, truth = _split_truth(s, params.isolator, params.xbar, params.theta, params.ybar)
    agree = 0
    for g in range(len(ygrid)):
        test = packing_at_least(rows[truth[:, g]], params.m)
        agree += bool(holds[g]) == test
    return agree, len(ygrid)


# -- free products --------------------------------------------------------------

@dataclass
class FreeProductReport:
    fingerprint: TypeFingerprint
    cross_fingerprint: TypeFingerprint
    witness: tuple
    separations: dict

    @property
    def cross_check(self) -> bool:
        return self.fingerprint == self.cross_fingerprint

    def as_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint.token(),
            "cross_fingerprint": self.cross_fingerprint.token(),
            "cross_check": "pass" if self.cross_check else "fail",
            "witness": [list(self.witness[0]), list(self.witness[1])],
            "schemes": [{"literal": k, "m_inner": a, "m_outer": b} for k, (a, b) in self.separations.items()],
        }


def _decide(s, phi_p, xs, psi_q, ys, theta, m_max, force):
    inner = make_scheme(s, psi_q, ys, theta, xs, m_max=m_max, force=force)
    inner_formula = build_scheme(inner)
    outer = make_scheme(s, phi_p, xs, inner_formula, (), m_max=m_max, force=force)
    return eval_formula(s, build_scheme(outer), {}), inner.m, outer.m


def free_product(s: Structure, p: TypeFingerprint, q: TypeFingerprint, tau: int = DEFAULT_TAU,
                 m_max: int | None = None, force: bool = False) -> FreeProductReport:
    """Type of a generic pair (realization of p, realization of q) over their common base.

    Every literal that mentions positions of both tuples is decided by the
    nested scheme ``d_p x [d_q y theta]``; the rest are read off ``p`` and
    ``q``. The result is cross-checked against an actual pair ``c + d`` where
    ``c`` starts the least tau-array of ``p`` and ``d`` realizes the unique
    tau-array-supporting extension of ``q`` over the base plus ``c``.
    """
    if p.params != q.params or p.constants != q.constants:
        raise ValidationError("p and q must be types over the same parameter set")
    a, b = p.var_count, q.var_count
    xs, ys = tuple(range(a)), tuple(range(a, a + b))
    phi_p = isolating_formula(p)
    psi_q = shift_vars(isolating_formula(q), a)
    for fp, f, vs in ((p, phi_p, xs), (q, psi_q, ys)):
        if lex_least_array(solutions(s, f, vs), max(tau, 2)) is None:
            raise InsufficientArrays(f"type {fp.token()} does not support a {max(tau, 2)}-array")

    pf, qf = p.facts(), q.facts()
    facts, seps = {}, {}
    for key in literal_keys(s.signature, a + b, p.pool):
        used = key_positions(key)
        if used <= set(xs):
            facts[key] = pf[key]
        elif used <= set(ys):
            facts[key] = qf[_shift_key(key, -a)]
        else:
            value, mi, mo = _decide(s, phi_p, xs, psi_q, ys, literal_formula(key), m_max, force)
            facts[key] = bool(value)
            seps[to_text(literal_formula(key))] = (mi, mo)
    assembled = TypeFingerprint.from_facts(a + b, p.params, p.constants, facts)

    c = lex_least_array(solutions(s, phi_p, xs), max(tau, 2))[0]
    ext_params = tuple(sorted(set(p.params) | set(c)))
    tc = TypeClasses(s, b, ext_params)
    candidates = []
    for t in range(tc.count):
        first = tuple(int(e) for e in tc.realizations(t)[0])
        if qf_type(s, first, p.params) == q and packing_at_least(tc.realizations(t), tau):
            candidates.append(first)
    if len(candidates) != 1:
        raise NotArrayIsolated(
            f"{len(candidates)} extensions of q over base+{c} support a {tau}-array", len(candidates))
    d = candidates[0]
    cross = qf_type(s, c + d, p.params)
    return FreeProductReport(assembled, cross, (c, d), seps)


def _shift_key(key, delta):
    if key[0] == "eq":
        return ("eq", key[1] + delta, key[2] + delta)
    if key[0] == "eqp":
        return ("eqp", key[1] + delta, key[2])
    return ("atom", key[1], tuple(("x", v + delta) if tag == "x" else (tag, v) for tag, v in key[2]))


def swap_order(a: int, b: int) -> tuple:
    """Permutation that turns a (q, p) product back into (p, q) coordinate order."""
    return tuple(b + i for i in range(a)) + tuple(range(b))
