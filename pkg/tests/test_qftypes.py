import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from arraybound.errors import ValidationError
from arraybound.formula import eval_formula, solutions, to_text
from arraybound.qftypes import (TypeClasses, enumerate_types, external_type_count, isolating_formula, permute,
                                qf_type, restrict, subtuple_type)
from arraybound.structure import Signature, Structure, gen_halfgraph, gen_matching, gen_random, halfgraph_b
from test_formula import formulas


def test_edge_fingerprint():
    fp = qf_type(gen_matching(1), (0, 1))
    facts = fp.facts()
    assert facts[("eq", 0, 1)] is False
    assert facts[("atom", "E", (("x", 0), ("x", 1)))] is True
    assert facts[("atom", "E", (("x", 1), ("x", 0)))] is True
    assert facts[("atom", "E", (("x", 0), ("x", 0)))] is False


def test_diagonal_fingerprint():
    fp = qf_type(gen_matching(1), (0, 0))
    assert fp.facts()[("eq", 0, 1)] is True
    assert not any(v for k, v in fp.facts().items() if k[0] == "atom")
    assert "z1 = z2" in to_text(isolating_formula(fp))


def test_parameter_facts():
    k = 3
    s = gen_halfgraph(k)
    fp = qf_type(s, (0,), (halfgraph_b(k, 0), halfgraph_b(k, 2)))
    facts = fp.facts()
    assert facts[("atom", "E", (("x", 0), ("e", halfgraph_b(k, 0))))] is True
    assert facts[("atom", "E", (("x", 0), ("e", halfgraph_b(k, 2))))] is True


def test_enumerate_examples():
    m2 = gen_matching(2)
    one = enumerate_types(m2, 1)
    assert len(one) == 1 and len(next(iter(one.values()))) == 4
    assert len(enumerate_types(m2, 2)) == 3
    h = gen_halfgraph(2)
    types = enumerate_types(h, 1, (halfgraph_b(2, 0),))
    # a_0 (adjacent to b_0), a_1 with b_1 (not adjacent), and b_0 itself
    assert sorted(len(r) for r in types.values()) == [1, 1, 2]
    with pytest.raises(ValidationError):
        enumerate_types(m2, 3)
    assert len(enumerate_types(m2, 3, allow_long=True)) > 3


@pytest.mark.parametrize("seed", range(6))
def test_isolating_formula_is_exact(seed):
    s = gen_random(5, 0.35, seed, {"E": 2, "P": 1})
    rng = random.Random(seed)
    params = tuple(rng.sample(range(5), rng.randint(0, 2)))
    for k in (1, 2):
        for fp, reals in enumerate_types(s, k, params).items():
            assert solutions(s, isolating_formula(fp), tuple(range(k))) == reals


@pytest.mark.parametrize("seed", range(5))
def test_partition_matches_oracle(seed):
    s = gen_random(5, 0.4, seed)
    params = (seed % 5,)
    ours = sorted(sorted(r) for r in enumerate_types(s, 2, params).values())
    ref = sorted(sorted(g) for g in oracles.type_classes(s, 2, params).values())
    assert ours == ref


@given(st.lists(formulas(), min_size=10, max_size=10), st.integers(0, 500))
@settings(max_examples=25, deadline=None)
def test_fingerprint_soundness(phis, seed):
    s = gen_random(6, 0.45, seed)
    params = tuple(range(5))
    by_fp = {}
    for tup in itertools.product(range(6), repeat=3):
        fp = qf_type(s, tup, params)
        truth = tuple(eval_formula(s, p, dict(enumerate(tup))) for p in phis)
        assert by_fp.setdefault(fp, truth) == truth


def test_restriction_and_permutation():
    s = gen_random(6, 0.4, 3)
    for tup in itertools.product(range(6), repeat=2):
        fp = qf_type(s, tup, (0, 1, 2))
        assert restrict(fp, (1,)) == qf_type(s, tup, (1,))
        assert permute(fp, (1, 0)) == qf_type(s, tup[::-1], (0, 1, 2))
        assert subtuple_type(fp, (1,)) == qf_type(s, tup[1:], (0, 1, 2))


def test_parameter_order_irrelevant():
    s = gen_random(7, 0.3, 9)
    assert TypeClasses(s, 2, (4, 1, 6)).count == TypeClasses(s, 2, (1, 6, 4)).count


def test_constants_join_the_pool():
    sig = Signature.of({"E": 2}, ["c"])
    s = Structure(sig, 4, {"E": [(0, 1), (2, 1)]}, {"c": 1})
    # 0 and 2 both point at the constant, 3 does not
    groups = sorted(sorted(r) for r in enumerate_types(s, 1).values())
    assert groups == [[(0,), (2,)], [(1,)], [(3,)]]


def test_external_type_count():
    m = gen_matching(10)
    assert external_type_count(m, tuple(range(20)), 1) == 0
    assert external_type_count(m, (0, 1), 1) == 1
    h = gen_halfgraph(10)
    assert external_type_count(h, tuple(halfgraph_b(10, j) for j in range(5)), 1) >= 6
