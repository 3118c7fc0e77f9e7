import pytest
from hypothesis import given, settings, strategies as st

from arraybound.errors import ParseError, UnknownRelation, ValidationError
from arraybound.structure import (Signature, Structure, gen_cycle, gen_halfgraph, gen_matching, gen_random,
                                  generate, parse_structure, reduct, serialize_structure)


def test_parse_minimal():
    s = parse_structure("universe 2\nrel E 2\ntuple E 0 1")
    assert s.size == 2
    assert s.table("E") == {(0, 1)}


def test_parse_out_of_range():
    with pytest.raises(ValidationError):
        parse_structure("universe 1\nrel E 2\ntuple E 0 3")


@pytest.mark.parametrize("text, exc", [
    ("rel E 2\nuniverse 2", ParseError),
    ("universe 0", ValidationError),
    ("universe 2\ntuple E 0 1", UnknownRelation),
    ("universe 2\nrel E 0", ValidationError),
    ("universe 2\nrel E 2\ntuple E 0", ValidationError),
    ("universe 2\nfoo 1", ParseError),
    ("universe x", ParseError),
    ("universe 2\nrel E 2\nrel E 1", ValidationError),
    ("universe 2\nconst c 5", ValidationError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_structure(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_structure("universe 3\n  bogus 1")
    assert (info.value.line, info.value.column) == (2, 3)


def test_comments_and_constants():
    s = parse_structure("# demo\nuniverse 3\nrel P 1 # unary\nconst c 2\ntuple P 1\n")
    assert s.constants == {"c": 2}
    assert s.holds("P", (1,))


def test_round_trip_matching():
    s = gen_matching(3)
    assert parse_structure(serialize_structure(s)) == s


@given(st.integers(1, 7), st.floats(0, 1), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_round_trip_random(k, density, seed):
    s = gen_random(k, density, seed, {"E": 2, "P": 1})
    assert parse_structure(serialize_structure(s)) == s


def test_generators():
    assert gen_matching(1).table("E") == {(0, 1), (1, 0)}
    assert gen_cycle(3).table("S") == {(0, 1), (1, 2), (2, 0)}
    assert len(gen_halfgraph(2).table("E")) == 6
    for k in range(1, 8):
        assert len(gen_matching(k).table("E")) == 2 * k
        assert len(gen_halfgraph(k).table("E")) == k * (k + 1)
    with pytest.raises(ValidationError):
        gen_cycle(0)
    with pytest.raises(ValidationError):
        generate("petersen", 3)


def test_random_is_seeded():
    assert gen_random(6, 0.3, 7) == gen_random(6, 0.3, 7)
    assert gen_random(6, 0.3, 7) != gen_random(6, 0.3, 8)


def test_reduct():
    m = gen_matching(3)
    sig = Signature.of({"E": 2, "C": 1})
    coloured = Structure(sig, 6, {"E": m.table("E"), "C": [(0,), (3,)]})
    assert reduct(coloured, {"E"}) == m
    assert reduct(coloured, {"E", "C"}) == coloured
    bare = reduct(coloured, set())
    assert bare.size == 6 and bare.signature.relations == ()
    with pytest.raises(UnknownRelation):
        reduct(m, {"F"})


def test_dense_matches_table():
    s = gen_random(5, 0.4, 1)
    d = s.dense("E")
    assert {tuple(map(int, t)) for t in zip(*d.nonzero())} == s.table("E")
    assert not d.flags.writeable
