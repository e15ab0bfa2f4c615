"""Seeded random generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from transdim.diffpoly import DiffPolynomial
from transdim.transseries import X, Monomial, Transseries, exp_large, sign

EXPONENTS = [Fraction(q) for q in (-2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-1, 3)]


def rational(rng: random.Random, lo: int = -5, hi: int = 5, nonzero: bool = True) -> Fraction:
    while True:
        v = Fraction(rng.randint(lo, hi), rng.choice((1, 1, 1, 2, 3)))
        if v or not nonzero:
            return v


def log_vector(rng: random.Random, max_index: int = 2) -> dict[int, Fraction]:
    return {i: rng.choice(EXPONENTS) for i in range(max_index + 1) if rng.random() < 0.5}


def purely_large(rng: random.Random, height: int = 1, terms: int = 2) -> Transseries:
    """A nonzero sum of monomials that are all > 1."""
    out = Transseries()
    while out.is_zero():
        for _ in range(rng.randint(1, terms)):
            logs = {0: Fraction(rng.choice((1, 2, 3, Fraction(1, 2))))}
            if rng.random() < 0.4:
                logs[1] = rng.choice(EXPONENTS)
            # a positive exponential keeps the monomial above 1
            exp_arg = purely_large(rng, height - 1, 1) if height > 1 and rng.random() < 0.3 else None
            if exp_arg is not None and sign(exp_arg) < 0:
                exp_arg = -exp_arg
            out = out + Transseries.monomial(Monomial.make(exp_arg, logs), rational(rng))
    return out


def monomial(rng: random.Random, height: int = 1) -> Monomial:
    exp_arg = None
    if height > 0 and rng.random() < 0.35:
        exp_arg = purely_large(rng, height, 2)
        if rng.random() < 0.5:
            exp_arg = -exp_arg
    return Monomial.make(exp_arg, log_vector(rng))


def transseries(rng: random.Random, terms: int = 3, height: int = 1) -> Transseries:
    out = Transseries()
    for _ in range(rng.randint(0, terms)):
        out = out + Transseries.monomial(monomial(rng, height), rational(rng))
    return out


def nonzero_transseries(rng: random.Random, terms: int = 3, height: int = 1) -> Transseries:
    while True:
        f = transseries(rng, terms, height)
        if not f.is_zero():
            return f


def x_polynomial(rng: random.Random, degree: int = 2, lo: int = -3, hi: int = 3) -> Transseries:
    """A polynomial in x with integer coefficients."""
    return sum((X**k * rng.randint(lo, hi) for k in range(degree + 1)), Transseries())


def exp_sample(a: Fraction, b: Fraction) -> Transseries:
    return exp_large(X * b) * a


def diffpoly(rng: random.Random, arity: int = 1, max_order: int = 2, terms: int = 3) -> DiffPolynomial:
    p = DiffPolynomial(arity)
    for _ in range(rng.randint(1, terms)):
        mono = DiffPolynomial.const(arity, transseries(rng, 2, 1) if rng.random() < 0.5 else rational(rng))
        for _ in range(rng.randint(0, 2)):
            mono = mono * DiffPolynomial.var(arity, rng.randint(1, arity), rng.randint(0, max_order))
        p = p + mono
    return p
