from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transdim.errors import DivisionByZero, ZeroPolynomial
from transdim.exact_algebra import (
    RatFunc,
    UniPoly,
    fmt_rational,
    poly_gcd,
    rational_roots,
    interpolate,
    resultant,
    resultant_by_interpolation,
    resultant_q,
    squarefree_decomp,
)

Y = UniPoly((0, 1))
T = UniPoly((0, 1))


def P(*coeffs) -> UniPoly:
    return UniPoly(tuple(Fraction(c) for c in coeffs))


small_ints = st.integers(min_value=-6, max_value=6)
polys = st.lists(small_ints, min_size=1, max_size=6).map(lambda cs: P(*cs))


def test_gcd_examples():
    assert poly_gcd(Y**2 - 1, Y - 1) == Y - 1
    assert poly_gcd(Y * 3, UniPoly()) == Y
    assert poly_gcd(Y**2 + 1, Y**2 - 1) == P(1)


def test_squarefree_examples():
    assert squarefree_decomp(Y**3) == [(Y, 3)]
    assert squarefree_decomp(Y**2 - 1) == [(Y**2 - 1, 1)]
    assert squarefree_decomp(Y**3 - Y**2) == [(Y - 1, 1), (Y, 2)]
    with pytest.raises(ZeroPolynomial):
        squarefree_decomp(UniPoly())


def test_resultant_examples():
    one = UniPoly.constant(1)
    # res_Y(Y, 1 - t)
    assert resultant([UniPoly(), one], [one - T]) == one - T
    r = resultant([UniPoly.constant(-1), UniPoly(), one], [one, T * -2])
    roots, split = rational_roots(r)
    assert split and roots == [Fraction(-1, 2), Fraction(1, 2)]
    assert resultant([UniPoly(), one], [UniPoly(), one]).is_zero()


def test_rational_roots_examples():
    assert rational_roots((Y - 1) * (Y - 2)) == ([1, 2], True)
    assert rational_roots(Y**2 - 2) == ([], False)
    assert rational_roots(P(1, -3, 2)) == ([Fraction(1, 2), 1], True)
    assert rational_roots((Y - 1) ** 2 * (Y**2 + 1)) == ([1, 1], False)
    with pytest.raises(ZeroPolynomial):
        rational_roots(UniPoly())


def test_fmt_rational():
    assert fmt_rational(Fraction(3)) == "3"
    assert fmt_rational(Fraction(-3, 6)) == "-1/2"


def test_degree_of_zero_is_minus_infinity():
    assert UniPoly().degree == float("-inf")
    assert P(0, 0, 0).is_zero()


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    if g.is_zero():
        assert a.is_zero() and b.is_zero()
        return
    assert g.lead == 1
    assert (a % g).is_zero() and (b % g).is_zero()


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_common_divisor_divides_gcd(a, b, c):
    if c.is_zero():
        return
    g = poly_gcd(a * c, b * c)
    assert (g % c).is_zero()


@settings(max_examples=200, deadline=None)
@given(st.lists(small_ints, min_size=2, max_size=9))
def test_squarefree_reconstructs(cs):
    g = P(*cs)
    if g.is_zero():
        return
    parts = squarefree_decomp(g)
    prod = UniPoly.constant(g.lead)
    for f, k in parts:
        assert f.lead == 1 and f.degree >= 1
        assert poly_gcd(f, f.derivative()).degree == 0
        prod = prod * f**k
    assert prod == g
    mults = [k for _, k in parts]
    assert mults == sorted(set(mults))
    for i, (f, _) in enumerate(parts):
        for h, _ in parts[i + 1 :]:
            assert poly_gcd(f, h).degree == 0


@settings(max_examples=200, deadline=None)
@given(polys)
def test_rational_roots_are_roots(p):
    if p.is_zero():
        return
    roots, split = rational_roots(p)
    for r in roots:
        assert p(r) == 0
    assert split == (len(roots) == max(p.degree, 0))


def test_resultant_vanishes_iff_common_factor():
    rng = random.Random(7)
    for _ in range(100):
        a = P(*[rng.randint(-3, 3) for _ in range(rng.randint(2, 4))])
        b = P(*[rng.randint(-3, 3) for _ in range(rng.randint(2, 4))])
        if rng.random() < 0.4:
            shared = Y - rng.randint(-2, 2)
            a, b = a * shared, b * shared
        if a.is_zero() or b.is_zero() or a.degree < 1 or b.degree < 1:
            continue
        assert (resultant_q(a, b) == 0) == (poly_gcd(a, b).degree > 0)


def test_resultant_matches_root_product():
    """Over Q[t], res_Y(g, B - t g') = prod over roots a of g of (B(a) - t g'(a))
    when g is monic and splits into distinct rational linear factors."""
    rng = random.Random(3)
    for _ in range(40):
        roots = rng.sample(range(-4, 5), rng.randint(1, 3))
        g = UniPoly.from_roots([Fraction(a) for a in roots])
        B = P(*[rng.randint(-3, 3) for _ in range(len(roots))])
        dg = g.derivative()
        top = max(len(B.coeffs), len(dg.coeffs))
        second = [
            UniPoly.constant(B.coeffs[k] if k < len(B.coeffs) else 0) - T * (dg.coeffs[k] if k < len(dg.coeffs) else 0)
            for k in range(top)
        ]
        got = resultant([UniPoly.constant(c) for c in g.coeffs], second)
        expected = UniPoly.constant(1)
        for a in roots:
            expected = expected * (UniPoly.constant(B(a)) - T * dg(a))
        assert got == expected or got == -expected


def test_ratfunc_normalizes():
    r = RatFunc(Y**2 - 1, (Y - 1) * 2)
    assert r.num == (Y + 1) * Fraction(1, 2) and r.den == UniPoly.constant(1)
    assert RatFunc(Y, Y**2).derivative() == RatFunc(UniPoly.constant(-1), Y**2)
    with pytest.raises(DivisionByZero):
        RatFunc(Y, UniPoly())


def test_division_and_shift():
    a = (Y - 1) * (Y + 2) * (Y - 3)
    q, r = a.divmod(Y - 1)
    assert r.is_zero() and q * (Y - 1) == a
    assert (Y**2).shift(1) == Y**2 + Y * 2 + 1


def test_interpolated_resultant_matches_sylvester_determinant():
    rng = random.Random(19)
    for _ in range(150):
        a = [UniPoly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))]) for _ in range(rng.randint(1, 5))]
        b = [UniPoly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))]) for _ in range(rng.randint(1, 5))]
        if not any(not c.is_zero() for c in a) or not any(not c.is_zero() for c in b):
            continue
        assert resultant_by_interpolation(a, b) == resultant(a, b)
        q_a = UniPoly([c(Fraction(2)) for c in a])
        q_b = UniPoly([c(Fraction(2)) for c in b])
        if not q_a.is_zero() and not q_b.is_zero() and len(q_a.coeffs) == len(_trimmed(a)) and len(q_b.coeffs) == len(_trimmed(b)):
            r = resultant(a, b)
            assert resultant_q(q_a, q_b) == (r(Fraction(2)) if not r.is_zero() else 0)


def _trimmed(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def test_interpolate_recovers_polynomial():
    rng = random.Random(20)
    for _ in range(50):
        p = UniPoly([rng.randint(-9, 9) for _ in range(rng.randint(1, 8))])
        xs = [Fraction(i, 3) for i in range(max(p.degree, 0) + 1)]
        assert interpolate(xs, [p(x) for x in xs]) == p


def test_rational_roots_large_coefficients_use_isolation():
    big = Fraction(-(10**9), 3)
    p = UniPoly.from_roots([Fraction(3, 7), Fraction(3, 7), big]) * UniPoly([-2, 0, 0, 1])
    assert rational_roots(p) == ([big, Fraction(3, 7), Fraction(3, 7)], False)
    rng = random.Random(21)
    for _ in range(25):
        roots = [Fraction(rng.randint(-10**5, 10**5), rng.randint(1, 100)) for _ in range(rng.randint(2, 4))]
        p = UniPoly.from_roots(roots) * rng.randint(1, 5)
        assert rational_roots(p) == (sorted(roots), True)


def test_interface_exposes_fractions():
    p = UniPoly([1, Fraction(1, 2), 3]) * UniPoly([Fraction(-2, 3), 1])
    assert all(type(c) is Fraction for c in p.coeffs)
    assert type(p.lead) is Fraction and type(p(Fraction(1, 3))) is Fraction
    assert p == UniPoly(list(p.coeffs)) and hash(p) == hash(UniPoly(list(p.coeffs)))
    assert UniPoly([Fraction(5, 2)]) == Fraction(5, 2)
