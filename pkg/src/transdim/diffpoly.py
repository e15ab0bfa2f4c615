"""Differential polynomials over the transseries fragment.

``Y_j^(r)`` is represented by the pair ``(j, r)`` with ``j`` counted from 1.
A :class:`DiffPolynomial` is a sparse map from monomials (sorted tuples of
``((j, r), power)``) to nonzero transseries coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, ConstantPolynomial, EmptyList
from .transseries import ONE_SERIES, ZERO, Transseries, derive

Number = int | Fraction
DerivativeVar = tuple[int, int]
DiffMonomial = tuple[tuple[DerivativeVar, int], ...]

UNIT: DiffMonomial = ()


def _mono_mul(a: DiffMonomial, b: DiffMonomial) -> DiffMonomial:
    powers = dict(a)
    for v, k in b:
        powers[v] = powers.get(v, 0) + k
    return tuple(sorted(powers.items()))


class DiffPolynomial:
    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[DiffMonomial, Transseries | Number] | None = None) -> None:
        clean: dict[DiffMonomial, Transseries] = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(coeff, Transseries):
                coeff = Transseries.const(coeff)
            for (j, r), k in mono:
                if not 1 <= j <= arity or r < 0 or k <= 0:
                    raise ArityMismatch(f"Y{j}^({r}) outside arity {arity}")
            if not coeff.is_zero():
                clean[mono] = coeff
        self.arity = arity
        self.terms = clean
        self._hash = hash((arity, frozenset(clean.items())))

    @classmethod
    def var(cls, arity: int, j: int = 1, r: int = 0) -> DiffPolynomial:
        return cls(arity, {(((j, r), 1),): ONE_SERIES})

    @classmethod
    def const(cls, arity: int, c: Transseries | Number) -> DiffPolynomial:
        return cls(arity, {UNIT: c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        """True when no indeterminate occurs (P lies in K)."""
        return all(m == UNIT for m in self.terms)

    def constant_coefficient(self) -> Transseries:
        return self.terms.get(UNIT, ZERO)

    def variables(self) -> set[DerivativeVar]:
        return {v for m in self.terms for v, _ in m}

    def order_in(self, j: int) -> int | None:
        orders = [r for (i, r) in self.variables() if i == j]
        return max(orders) if orders else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffPolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def _coerce(self, other: DiffPolynomial | Transseries | Number) -> DiffPolynomial:
        if isinstance(other, DiffPolynomial):
            if other.arity != self.arity:
                raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
            return other
        return DiffPolynomial.const(self.arity, other)

    def __add__(self, other) -> DiffPolynomial:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return DiffPolynomial(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> DiffPolynomial:
        return DiffPolynomial(self.arity, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> DiffPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> DiffPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> DiffPolynomial:
        other = self._coerce(other)
        out: dict[DiffMonomial, Transseries] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return DiffPolynomial(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> DiffPolynomial:
        if n < 0:
            raise ValueError("negative power of a differential polynomial")
        result = DiffPolynomial.const(self.arity, 1)
        for _ in range(n):
            result = result * self
        return result

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (-sum(k for _, k in m), m), reverse=False):
            coeff = self.terms[mono]
            factors = [_render_var(v, self.arity) + (f"^{k}" if k > 1 else "") for v, k in mono]
            # nonnegative rationals need no parentheses
            plain = coeff.is_constant() and coeff.constant_value() >= 0
            c_text = coeff.render() if plain else f"({coeff.render()})"
            if not factors:
                parts.append(c_text)
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c_text}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DiffPolynomial({self.render()})"


def _render_var(v: DerivativeVar, arity: int) -> str:
    j, r = v
    name = "Y" if arity == 1 else f"Y{j}"
    return name if r == 0 else f"D{r}({name})"


def dp_add(p: DiffPolynomial, q: DiffPolynomial) -> DiffPolynomial:
    return p + q


def dp_mul(p: DiffPolynomial, q: DiffPolynomial) -> DiffPolynomial:
    return p * q


def partial(p: DiffPolynomial, j: int, r: int) -> DiffPolynomial:
    """Formal partial derivative with respect to ``Y_j^(r)``."""
    if not 1 <= j <= p.arity:
        raise ArityMismatch(f"variable {j} outside arity {p.arity}")
    target = (j, r)
    out: dict[DiffMonomial, Transseries] = {}
    for mono, coeff in p.terms.items():
        powers = dict(mono)
        k = powers.get(target)
        if not k:
            continue
        if k == 1:
            del powers[target]
        else:
            powers[target] = k - 1
        m = tuple(sorted(powers.items()))
        out[m] = out[m] + coeff * k if m in out else coeff * k
    return DiffPolynomial(p.arity, out)


def total_derive(p: DiffPolynomial) -> DiffPolynomial:
    """Extend the derivation of the coefficients by ``Y_j^(r) -> Y_j^(r+1)``."""
    out: dict[DiffMonomial, Transseries] = {}

    def bump(m: DiffMonomial, c: Transseries) -> None:
        out[m] = out[m] + c if m in out else c

    for mono, coeff in p.terms.items():
        dc = derive(coeff)
        if not dc.is_zero():
            bump(mono, dc)
        for v, k in mono:
            j, r = v
            powers = dict(mono)
            if k == 1:
                del powers[v]
            else:
                powers[v] = k - 1
            nxt = (j, r + 1)
            powers[nxt] = powers.get(nxt, 0) + 1
            bump(tuple(sorted(powers.items())), coeff * k)
    return DiffPolynomial(p.arity, out)


def evaluate(p: DiffPolynomial, point: Sequence[Transseries]) -> Transseries:
    """Substitute the derivatives of ``point`` for the indeterminates."""
    if len(point) != p.arity:
        raise ArityMismatch(f"point of length {len(point)} for arity {p.arity}")
    towers: list[list[Transseries]] = [[y] for y in point]

    def deriv(j: int, r: int) -> Transseries:
        tower = towers[j - 1]
        while len(tower) <= r:
            tower.append(derive(tower[-1]))
        return tower[r]

    total = ZERO
    for mono, coeff in p.terms.items():
        value = coeff
        for (j, r), k in mono:
            value = value * deriv(j, r) ** k
            if value.is_zero():
                break
        total = total + value
    return total


def order_vector(polys: Sequence[DiffPolynomial]) -> list[int]:
    if not polys:
        raise EmptyList("order vector of an empty family")
    n = polys[0].arity
    if any(p.arity != n for p in polys):
        raise ArityMismatch("family with mixed arities")
    vec = [0] * n
    for p in polys:
        for j, r in p.variables():
            vec[j - 1] = max(vec[j - 1], r)
    return vec


def order(p: DiffPolynomial) -> int:
    """Order of a single-variable polynomial; 0 when no derivative occurs."""
    return order_vector([p])[0]


def separant(p: DiffPolynomial) -> DiffPolynomial:
    if p.arity != 1:
        raise ArityMismatch("separant is defined here for one variable")
    if p.is_constant():
        raise ConstantPolynomial("separant of a polynomial without indeterminates")
    return partial(p, 1, order(p))


def from_univariate(coeffs: Iterable[Number], arity: int = 1, j: int = 1, r: int = 0) -> DiffPolynomial:
    """``sum c_k * (Y_j^(r))^k`` from a rational coefficient list, low degree first."""
    terms: dict[DiffMonomial, Transseries] = {}
    for k, c in enumerate(coeffs):
        if c:
            terms[() if k == 0 else (((j, r), k),)] = Transseries.const(c)
    return DiffPolynomial(arity, terms)
