from __future__ import annotations

import random

import pytest

import gen
from transdim.diffpoly import (
    DiffPolynomial,
    dp_add,
    dp_mul,
    evaluate,
    order_vector,
    partial,
    separant,
    total_derive,
)
from transdim.errors import ArityMismatch, ConstantPolynomial, EmptyList
from transdim.parser import parse_diffpoly
from transdim.transseries import X, Transseries, derive, exp_large

Y, Y1, Y2 = (DiffPolynomial.var(1, 1, r) for r in range(3))
V = DiffPolynomial.var
ZSET = Y * Y2 - Y1**2  # Y Y'' - (Y')^2


def test_ring_examples():
    assert dp_mul(Y, Y) == Y**2
    assert ZSET == parse_diffpoly("Y*D2(Y) - D1(Y)^2", 1)
    assert dp_add(ZSET, DiffPolynomial(1)) == ZSET
    with pytest.raises(ArityMismatch):
        dp_add(Y, V(2, 1))


def test_partial_examples():
    assert partial(ZSET, 1, 2) == Y
    assert partial(ZSET, 1, 1) == Y1 * -2
    assert partial(Y, 1, 1).is_zero()
    with pytest.raises(ArityMismatch):
        partial(Y, 2, 0)


def test_total_derive_examples():
    assert total_derive(Y) == Y1
    assert total_derive(Y**2) == Y * Y1 * 2
    assert total_derive(Y * X) == Y + Y1 * X


def test_evaluate_examples():
    assert evaluate(ZSET, [exp_large(X * 2) * 3]).is_zero()
    assert evaluate(ZSET, [X]) == Transseries.const(-1)
    assert evaluate(Y1 - Y, [exp_large(X)]).is_zero()
    with pytest.raises(ArityMismatch):
        evaluate(Y, [X, X])


def test_order_vector_examples():
    assert order_vector([ZSET]) == [2]
    assert order_vector([V(2, 1, 1) - V(2, 2), V(2, 2, 1)]) == [1, 1]
    assert order_vector([V(2, 1)]) == [0, 0]
    with pytest.raises(EmptyList):
        order_vector([])
    with pytest.raises(ArityMismatch):
        order_vector([Y, V(2, 1)])


def test_separant_examples():
    assert separant(ZSET) == Y
    F = Y**2 + 1
    G = Y * 3 - 2
    assert separant(F * Y1 - G) == F
    assert separant(Y**3) == Y**2 * 3
    with pytest.raises(ConstantPolynomial):
        separant(DiffPolynomial.const(1, X))
    with pytest.raises(ArityMismatch):
        separant(V(2, 1))


def test_arity_checked_on_construction():
    with pytest.raises(ArityMismatch):
        DiffPolynomial(1, {(((2, 0), 1),): 1})


def _point(rng: random.Random, arity: int) -> list[Transseries]:
    return [gen.transseries(rng, terms=2) for _ in range(arity)]


def test_evaluation_is_a_differential_ring_morphism():
    rng = random.Random(31)
    for _ in range(200):
        arity = rng.randint(1, 2)
        P, Q = gen.diffpoly(rng, arity), gen.diffpoly(rng, arity)
        y = _point(rng, arity)
        assert evaluate(P * Q, y) == evaluate(P, y) * evaluate(Q, y)
        assert evaluate(P + Q, y) == evaluate(P, y) + evaluate(Q, y)
        assert evaluate(total_derive(P), y) == derive(evaluate(P, y))


def test_partial_total_derive_commutation():
    """d/dY^(r) o delta = delta o d/dY^(r) + d/dY^(r-1)."""
    rng = random.Random(32)
    for _ in range(200):
        arity = rng.randint(1, 2)
        P = gen.diffpoly(rng, arity)
        j, r = rng.randint(1, arity), rng.randint(0, 3)
        lhs = partial(total_derive(P), j, r)
        rhs = total_derive(partial(P, j, r))
        if r > 0:
            rhs = rhs + partial(P, j, r - 1)
        assert lhs == rhs


def test_order_vector_of_product():
    rng = random.Random(33)
    for _ in range(100):
        arity = rng.randint(1, 3)
        P, Q = gen.diffpoly(rng, arity), gen.diffpoly(rng, arity)
        if (P * Q).is_zero():
            continue
        assert order_vector([P * Q]) == [max(a, b) for a, b in zip(order_vector([P]), order_vector([Q]))]


def test_render_parse_round_trip():
    rng = random.Random(34)
    for _ in range(200):
        arity = rng.randint(1, 3)
        P = gen.diffpoly(rng, arity)
        assert parse_diffpoly(P.render(), arity) == P
