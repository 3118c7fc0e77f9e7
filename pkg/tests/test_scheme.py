import itertools

import pytest

from arraybound.errors import InsufficientArrays, NoSuchM, NotArrayIsolated, ValidationError
from arraybound.formula import Or, Param, Var, eval_formula, parse_formula
from arraybound.qftypes import isolating_formula, permute, qf_type
from arraybound.scheme import (build_scheme, check_basedef, compute_m, free_product, make_scheme,
                               scheme_agreement, swap_order)
from arraybound.structure import gen_cycle, gen_matching, gen_random


def _edge(s, rel="E"):
    return isolating_formula(qf_type(s, (0, 1)))


def _theta(s, text):
    return parse_formula(text, s.signature, 3)


def test_compute_m_edge():
    s = gen_matching(20)
    sep = compute_m(s, _edge(s), (0, 1), _theta(s, "E(z1,z3)"), (2,))
    assert sep.m == 2 and sep.violations == []


def test_compute_m_tautology_and_mmax():
    s = gen_matching(20)
    assert compute_m(s, _edge(s), (0, 1), _theta(s, "z3 = z3"), (2,)).m == 1
    with pytest.raises(NoSuchM):
        compute_m(s, _edge(s), (0, 1), _theta(s, "E(z1,z3)"), (2,), m_max=0)


def test_compute_m_minimal():
    s = gen_cycle(24)
    phi = isolating_formula(qf_type(s, (0, 1)))
    theta = _theta(s, "S(z3,z1)")
    m = compute_m(s, phi, (0, 1), theta, (2,)).m
    assert m >= 2
    with pytest.raises(NoSuchM):
        compute_m(s, phi, (0, 1), theta, (2,), m_max=m - 1)


def test_scheme_size():
    s = gen_matching(20)
    phi = _edge(s)
    p1 = make_scheme(s, phi, (0, 1), _theta(s, "z3 = z3"), (2,))
    assert p1.m == 1 and len(build_scheme(p1).args) == 2
    p2 = make_scheme(s, phi, (0, 1), _theta(s, "E(z1,z3)"), (2,))
    assert isinstance(build_scheme(p2), Or) and len(build_scheme(p2).args) == 6


@pytest.mark.parametrize("gen, theta", [(gen_matching(20), "E(z1,z3)"), (gen_matching(20), "E(z3,z2)"),
                                        (gen_matching(20), "z3 = z1"), (gen_cycle(24), "S(z1,z3)"),
                                        (gen_cycle(24), "S(z3,z2)"), (gen_cycle(24), "z3 = z1")])
def test_agreement(gen, theta):
    params = make_scheme(gen, _edge(gen), (0, 1), _theta(gen, theta), (2,))
    agree, total = scheme_agreement(gen, params)
    assert agree == total == gen.size


def test_agreement_random():
    ran = 0
    for seed in range(40):
        s = gen_random(14, 0.15, seed)
        phi = parse_formula("z1 = z1", s.signature)
        theta = _theta(s, "E(z1,z2)")
        try:
            params = make_scheme(s, phi, (0,), theta, (1,))
        except (NoSuchM, InsufficientArrays, ValidationError):
            continue
        agree, total = scheme_agreement(s, params)
        assert agree == total
        ran += 1
    assert ran >= 10


def test_choice_independence():
    s = gen_matching(20)
    phi, theta = _edge(s), _theta(s, "E(z1,z3)")
    a = make_scheme(s, phi, (0, 1), theta, (2,))
    b = make_scheme(s, phi, (0, 1), theta, (2,), array=[(10, 11), (12, 13), (14, 15), (16, 17)])
    for d in range(s.size):
        assert check_basedef(s, a, (d,)).scheme_holds == check_basedef(s, b, (d,)).scheme_holds


def test_unsatisfiable_side():
    s = gen_matching(10)
    params = make_scheme(s, _edge(s), (0, 1), _theta(s, "(E(z1,z3) & z1 != z1)"), (2,))
    assert not check_basedef(s, params, (0,)).scheme_holds


def test_free_product_edges():
    s = gen_matching(20)
    p = qf_type(s, (0, 1))
    rep = free_product(s, p, p)
    assert rep.cross_check
    assert rep.fingerprint == qf_type(s, (0, 1, 2, 3))


def test_free_product_vertices():
    s = gen_matching(20)
    v = qf_type(s, (0,))
    rep = free_product(s, v, v)
    assert rep.cross_check
    assert rep.fingerprint == qf_type(s, (0, 2))


def test_free_product_symmetry():
    s = gen_cycle(24)
    p, q = qf_type(s, (0, 1)), qf_type(s, (0,))
    pq = free_product(s, p, q).fingerprint
    qp = free_product(s, q, p).fingerprint
    assert permute(qp, swap_order(p.var_count, q.var_count)) == pq


def test_free_product_needs_same_base():
    s = gen_matching(10)
    with pytest.raises(ValidationError):
        free_product(s, qf_type(s, (0,), (5,)), qf_type(s, (0,)))
