import itertools

import pytest

from arraybound.decomposition import (check_determination, finite_part, ma_subsequences, max_ma_decomposition)
from arraybound.errors import BaseOverlap
from arraybound.structure import gen_halfgraph, gen_matching
from fixtures import matching_plus_noise, random_tuple


def _sets(subs):
    return sorted(sorted(u) for u in subs)


def test_edge_subsequences():
    assert _sets(ma_subsequences(gen_matching(10), (0, 1), (), 1)) == [[0], [0, 1], [1]]


def test_halfgraph_pair_fails():
    h = gen_halfgraph(10)
    assert _sets(ma_subsequences(h, (0, 19), (), 1)) == [[0], [1]]


def test_singletons_always_qualify():
    s = matching_plus_noise(5, 3)
    for tup in [(0, 5, 7), (2, 2, 9)]:
        subs = ma_subsequences(s, tup, (), 0)
        assert all(frozenset({i}) in subs for i in range(3))


def test_decomposition_examples():
    s = gen_matching(10)
    assert str(max_ma_decomposition(s, (0, 1, 4), (), 1)) == "[{z1,z2} | {z3}]"
    assert str(max_ma_decomposition(s, (0, 2), (), 1)) == "[{z1} | {z2}]"
    with pytest.raises(BaseOverlap):
        max_ma_decomposition(s, (0, 1), (1,), 1)


def _instances(n):
    for seed in range(n):
        s = matching_plus_noise(5, seed)
        length = 1 + seed % 3
        base = (seed % 10,) if seed % 4 == 0 else ()
        yield s, random_tuple(s, length, seed, avoid=base), base


@pytest.mark.parametrize("chunk", range(4))
def test_order_invariance_and_hereditarity(chunk):
    for s, tup, base in list(_instances(200))[chunk::4]:
        ref = max_ma_decomposition(s, tup, base, 1)
        assert ref.ok
        assert sorted(i for p in ref.pieces for i in p.positions) == list(range(len(tup)))
        for seed in range(3):
            assert max_ma_decomposition(s, tup, base, 1, seed=seed).partition() == ref.partition()
        for r in range(1, len(ref.pieces) + 1):
            for chosen in itertools.combinations(ref.pieces, r):
                positions = sorted(i for p in chosen for i in p.positions)
                sub = max_ma_decomposition(s, [tup[i] for i in positions], base, 1)
                expect = {frozenset(positions.index(i) for i in p.positions) for p in chosen}
                assert sub.partition() == expect


def test_kappa_monotone():
    for s, tup, base in _instances(60):
        finer = max_ma_decomposition(s, tup, base, 1)
        coarser = max_ma_decomposition(s, tup, base, 4)
        if finer.ok and coarser.ok:
            for piece in finer.partition():
                assert any(piece <= big for big in coarser.partition())


def test_finite_part():
    s = gen_matching(10)
    fp = finite_part(s, (0,), (), (1,), 1)
    assert fp.positions == (0,) and fp.count == 1
    assert finite_part(s, (0, 2), (), (), 19) is None
    assert finite_part(s, (0, 2), (), (), 20 ** 2) is not None


def test_determination():
    s = gen_matching(20)
    assert check_determination(s, (0, 1), (4, 5), (), 1, 3).verdict == "consistent"
    assert check_determination(s, (0, 1), (4, 6), (), 1, 3).verdict == "vacuous"
    h = gen_halfgraph(10)
    base = (10,)  # b_0, adjacent to a_0 only
    det = check_determination(h, (0,), (1,), base, 1, 1)
    assert det.verdict == "vacuous"
    assert "non-conclusive" in det.note
