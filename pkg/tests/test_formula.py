import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arraybound.errors import ArityMismatch, ParseError, UnboundVariable, UnknownRelation, ValidationError
from arraybound.formula import (FALSE, TRUE, And, Atom, Eq, Not, Or, Param, Var, eval_formula, free_vars,
                                grid_truth, parse_formula, solutions, to_text)
from arraybound.structure import gen_cycle, gen_matching, gen_random

SIG = gen_matching(1).signature


def test_parse_atom():
    assert parse_formula("E(z1,z2)", SIG) == Atom("E", (Var(0), Var(1)))


def test_parse_compound():
    phi = parse_formula("(E(z1,@3) & !(z1 = z2))", SIG)
    assert phi == And((Atom("E", (Var(0), Param(3))), Not(Eq(Var(0), Var(1)))))


@pytest.mark.parametrize("text, exc", [
    ("E(z1)", ArityMismatch),
    ("F(z1,z2)", UnknownRelation),
    ("E(z1,z3)", ValidationError),
    ("(E(z1,z2) & E(z2,z1) | z1 = z2)", ParseError),
    ("E(z1,z2) z1", ParseError),
    ("", ParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_formula(text, SIG)


def test_sugar():
    assert parse_formula("z1 != z2", SIG) == Not(Eq(Var(0), Var(1)))
    assert parse_formula("(E(z1,z2))", SIG) == Atom("E", (Var(0), Var(1)))


@pytest.mark.parametrize("text", ["E(z1,z2)", "(E(z1,@3) & !(z1 = z2))", "!(E(z2,z1) | z1 = @0)",
                                  "(E(z1,z2) & E(z2,z1) & z1 != z2)"])
def test_text_round_trip(text):
    phi = parse_formula(text, SIG, max_vars=4)
    assert parse_formula(to_text(phi), SIG, max_vars=4) == phi


def test_constant_formulas_print():
    s = gen_matching(2)
    assert eval_formula(s, parse_formula(to_text(TRUE), SIG), {})
    assert not eval_formula(s, parse_formula(to_text(FALSE), SIG), {})


def test_eval_examples():
    m1 = gen_matching(1)
    e = parse_formula("E(z1,z2)", SIG)
    assert eval_formula(m1, e, {0: 0, 1: 1})
    assert not eval_formula(m1, e, {0: 0, 1: 0})
    c5 = gen_cycle(5)
    assert eval_formula(c5, parse_formula("S(z1,z2)", c5.signature), {0: 4, 1: 0})
    with pytest.raises(UnboundVariable):
        eval_formula(m1, e, {0: 0})
    with pytest.raises(ValidationError):
        eval_formula(m1, parse_formula("E(z1,@7)", SIG), {0: 0})


def test_solutions_examples():
    m2 = gen_matching(2)
    assert solutions(m2, parse_formula("E(z1,z2)", SIG), (0, 1)) == [(0, 1), (1, 0), (2, 3), (3, 2)]
    assert solutions(m2, parse_formula("z1 != z1", SIG), (0,)) == []
    c3 = gen_cycle(3)
    assert len(solutions(c3, parse_formula("S(z1,z2)", c3.signature), (0, 1))) == 3


def _random_formula(draw, depth, nvars):
    terms = st.one_of(st.builds(Var, st.integers(0, nvars - 1)), st.builds(Param, st.integers(0, 4)))
    if depth == 0:
        return draw(st.one_of(st.builds(lambda a, b: Atom("E", (a, b)), terms, terms), st.builds(Eq, terms, terms)))
    kind = draw(st.sampled_from(["leaf", "not", "and", "or"]))
    if kind == "leaf":
        return _random_formula(draw, 0, nvars)
    if kind == "not":
        return Not(_random_formula(draw, depth - 1, nvars))
    args = tuple(_random_formula(draw, depth - 1, nvars) for _ in range(draw(st.integers(0, 3))))
    return And(args) if kind == "and" else Or(args)


formulas = st.composite(lambda draw: _random_formula(draw, 3, 3))


@given(formulas(), st.integers(0, 1000))
@settings(max_examples=150, deadline=None)
def test_grid_agrees_with_eval(phi, seed):
    s = gen_random(5, 0.4, seed)
    xbar = (0, 1, 2)
    truth = grid_truth(s, phi, xbar)
    for tup in itertools.product(range(5), repeat=3):
        assert truth[tup] == eval_formula(s, phi, dict(zip(xbar, tup)))


@given(formulas(), formulas(), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_de_morgan(phi, psi, seed):
    s = gen_random(6, 0.5, seed)
    xbar = (0, 1, 2)
    lhs = grid_truth(s, Not(And((phi, psi))), xbar)
    rhs = ~(grid_truth(s, phi, xbar) & grid_truth(s, psi, xbar))
    assert np.array_equal(lhs, rhs)


def test_free_vars_order_stable():
    a, b = Atom("E", (Var(0), Var(2))), Eq(Var(1), Param(0))
    assert free_vars(And((a, b))) == free_vars(And((b, a))) == {0, 1, 2}
