"""Finitely supported exp-log transseries with rational coefficients.

A transmonomial is ``exp(L) * l0^q0 * l1^q1 * ...`` where ``l0 = x``,
``l(n+1) = log(ln)`` and ``L`` is a purely large transseries.  Monomials are
kept in a normal form where ``exp(c*lj)`` (``j >= 1``) has been folded into
``l(j-1)^c``, so structural equality coincides with equality of the
functions they denote.

Ordering is decided by comparing logarithms: ``m1 > m2`` iff
``log m1 - log m2`` is positive, which recurses on strictly smaller
exponential height.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import DivisionByZero, NotMonomialTerm, NotPurelyLarge, ZeroSeries
from .exact_algebra import fmt_rational

Number = int | Fraction
LogVector = tuple[tuple[int, Fraction], ...]


class OrderedSign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class Monomial:
    """Transmonomial ``exp(exp_part) * prod(l_i ** q_i)``.

    Build instances through :meth:`make`, which applies the fold rule.
    """

    __slots__ = ("exp_part", "log_part", "_hash")

    def __init__(self, exp_part: Transseries, log_part: LogVector) -> None:
        self.exp_part = exp_part
        self.log_part = log_part
        self._hash = hash((exp_part, log_part))

    @classmethod
    def make(cls, exp_part: Transseries | None = None, logs: Mapping[int, Number] | None = None) -> Monomial:
        vec: dict[int, Fraction] = {}
        for i, q in (logs or {}).items():
            if i < 0:
                raise ValueError("iterated logarithm index must be natural")
            if q:
                vec[i] = vec.get(i, Fraction(0)) + Fraction(q)
        kept: dict[Monomial, Fraction] = {}
        if exp_part is not None:
            for m, c in exp_part._terms.items():
                j = m.single_log_index()
                if j is not None and j >= 1:
                    # exp(c * l_j) == l_{j-1} ** c
                    vec[j - 1] = vec.get(j - 1, Fraction(0)) + c
                else:
                    kept[m] = c
        log_part = tuple(sorted((i, q) for i, q in vec.items() if q))
        return cls(Transseries._raw(kept), log_part)

    def single_log_index(self) -> int | None:
        """``j`` if this monomial is exactly ``l_j``, else None."""
        if self.exp_part._terms or len(self.log_part) != 1:
            return None
        j, q = self.log_part[0]
        return j if q == 1 else None

    def is_one(self) -> bool:
        return not self.exp_part._terms and not self.log_part

    def logs(self) -> dict[int, Fraction]:
        return dict(self.log_part)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._hash == other._hash and self.log_part == other.log_part and self.exp_part == other.exp_part

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: Monomial) -> Monomial:
        # both factors are normalized, so the sum of exp parts needs no folding
        logs = self.logs()
        for i, q in other.log_part:
            logs[i] = logs.get(i, Fraction(0)) + q
        log_part = tuple(sorted((i, q) for i, q in logs.items() if q))
        return Monomial(self.exp_part + other.exp_part, log_part)

    def __pow__(self, q: Number) -> Monomial:
        q = Fraction(q)
        return Monomial.make(self.exp_part * q, {i: e * q for i, e in self.log_part})

    def inverse(self) -> Monomial:
        return self ** -1

    def __truediv__(self, other: Monomial) -> Monomial:
        return self * other.inverse()

    def log(self) -> Transseries:
        """``log m = L + sum q_i * l_{i+1}``."""
        out = dict(self.exp_part._terms)
        for i, q in self.log_part:
            out[ell_monomial(i + 1)] = q
        return Transseries._raw(out)

    def dagger(self) -> Transseries:
        return _monomial_dagger(self)

    def height(self) -> int:
        return 0 if self.exp_part.is_zero() else 1 + self.exp_part.height()

    def depth(self) -> int:
        d = max((i for i, _ in self.log_part), default=0)
        return max(d, self.exp_part.depth())

    def __repr__(self) -> str:
        return f"Monomial({self.render()})"

    def render(self) -> str:
        factors: list[str] = []
        if self.exp_part._terms:
            factors.append(f"exp({self.exp_part.render()})")
        for i, q in self.log_part:
            base = "x" if i == 0 else f"l{i}"
            factors.append(base + _render_exponent(q))
        return "*".join(factors) if factors else "1"

    def to_json(self) -> dict:
        return {
            "exp": self.exp_part.to_json(),
            "logs": {str(i): fmt_rational(q) for i, q in self.log_part},
        }


def _render_exponent(q: Fraction) -> str:
    if q == 1:
        return ""
    if q.denominator == 1 and q > 0:
        return f"^{q.numerator}"
    return f"^({fmt_rational(q)})"


@lru_cache(maxsize=None)
def ell_monomial(n: int) -> Monomial:
    return Monomial.make(None, {n: 1})


@lru_cache(maxsize=None)
def ell_dagger_monomial(n: int) -> Monomial:
    """``1/(l0 l1 ... ln)``, the logarithmic derivative of ``l_n``."""
    return Monomial.make(None, {i: -1 for i in range(n + 1)})


@lru_cache(maxsize=None)
def compare_monomials(m1: Monomial, m2: Monomial) -> int:
    """-1, 0 or 1 according to m1 < m2, m1 == m2, m1 > m2 asymptotically."""
    if m1 == m2:
        return 0
    if m1.exp_part.is_zero() and m2.exp_part.is_zero():
        v1, v2 = dict(m1.log_part), dict(m2.log_part)
        for i in sorted(set(v1) | set(v2)):
            a, b = v1.get(i, 0), v2.get(i, 0)
            if a != b:
                return 1 if a > b else -1
        return 0
    return int(sign(m1.log() - m2.log()))


_monomial_key = cmp_to_key(compare_monomials)


class Transseries:
    """Finite sum of rational multiples of transmonomials."""

    __slots__ = ("_terms", "_hash", "_order")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None) -> None:
        clean = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._terms = clean
        self._hash = hash(frozenset(clean.items()))
        self._order: tuple[Monomial, ...] | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> Transseries:
        obj = cls.__new__(cls)
        obj._terms = {m: c for m, c in terms.items() if c}
        obj._hash = hash(frozenset(obj._terms.items()))
        obj._order = None
        return obj

    # -- constructors --------------------------------------------------

    @classmethod
    def const(cls, c: Number) -> Transseries:
        return cls({ONE: c}) if c else ZERO

    @classmethod
    def monomial(cls, m: Monomial, c: Number = 1) -> Transseries:
        return cls({m: c})

    @classmethod
    def ell(cls, n: int, power: Number = 1) -> Transseries:
        return cls({Monomial.make(None, {n: power}): 1})

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._terms.get(ONE, Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def support(self) -> tuple[Monomial, ...]:
        """Monomials in decreasing asymptotic order."""
        if self._order is None:
            self._order = tuple(sorted(self._terms, key=_monomial_key, reverse=True))
        return self._order

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        for m in self.support():
            yield m, self._terms[m]

    def __len__(self) -> int:
        return len(self._terms)

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def height(self) -> int:
        return max((m.height() for m in self._terms), default=0)

    def depth(self) -> int:
        return max((m.depth() for m in self._terms), default=0)

    def is_purely_large(self) -> bool:
        return all(compare_monomials(m, ONE) > 0 for m in self._terms)

    # -- equality ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Transseries.const(other)
        if not isinstance(other, Transseries):
            return NotImplemented
        return self._hash == other._hash and self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    # -- ring operations -----------------------------------------------

    def __add__(self, other: Transseries | Number) -> Transseries:
        other = _lift(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Transseries._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Transseries:
        return Transseries._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Transseries | Number) -> Transseries:
        return self + (-_lift(other))

    def __rsub__(self, other: Number) -> Transseries:
        return _lift(other) - self

    def __mul__(self, other: Transseries | Number) -> Transseries:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Transseries._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Transseries):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Transseries._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Transseries:
        if not isinstance(n, int):
            raise TypeError("integer exponent required")
        if n < 0:
            if not self.is_single_term():
                raise NotMonomialTerm("negative power of a multi-term series")
            (m, c), = self._terms.items()
            return Transseries({m ** n: c ** n})
        result = ONE_SERIES
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale_monomial(self, m: Monomial, c: Number = 1) -> Transseries:
        """Multiply by the single term ``c*m``."""
        return Transseries._raw({_mono_mul(k, m): v * c for k, v in self._terms.items()})

    # -- rendering -----------------------------------------------------

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m, c in self.terms():
            a = abs(c)
            if m.is_one():
                body = fmt_rational(a)
            elif a == 1:
                body = m.render()
            else:
                body = f"{fmt_rational(a)}*{m.render()}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+") else "-" + text[2:]

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Transseries({self.render()})"

    def to_json(self) -> list:
        return [{"coeff": fmt_rational(c), "monomial": m.to_json()} for m, c in self.terms()]


def _lift(v: Transseries | Number) -> Transseries:
    if isinstance(v, Transseries):
        return v
    return Transseries.const(v)


@lru_cache(maxsize=1 << 18)
def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if m1.is_one():
        return m2
    if m2.is_one():
        return m1
    return m1 * m2


ZERO = Transseries._raw({})
ONE = Monomial(ZERO, ())
ONE_SERIES = Transseries._raw({ONE: Fraction(1)})
X = Transseries._raw({ell_monomial(0): Fraction(1)})


# -- the operations --------------------------------------------------------


def add(f: Transseries, g: Transseries) -> Transseries:
    return f + g


def mul(f: Transseries, g: Transseries) -> Transseries:
    return f * g


def sign(f: Transseries) -> OrderedSign:
    if f.is_zero():
        return OrderedSign.ZERO
    lead = f.coefficient(f.support()[0])
    return OrderedSign.POSITIVE if lead > 0 else OrderedSign.NEGATIVE


def compare(f: Transseries, g: Transseries) -> OrderedSign:
    return sign(f - g)


def dominant_monomial(f: Transseries) -> Monomial:
    if f.is_zero():
        raise ZeroSeries("dominant monomial of 0")
    return f.support()[0]


def dominant_term(f: Transseries) -> tuple[Fraction, Monomial]:
    m = dominant_monomial(f)
    return f.coefficient(m), m


def exp_large(arg: Transseries) -> Transseries:
    """``exp(arg)`` for purely large ``arg`` as a single-term series."""
    bad = [m for m in arg.support() if compare_monomials(m, ONE) <= 0]
    if bad:
        raise NotPurelyLarge(f"exp argument has non-large monomial {bad[0].render()}")
    return Transseries._raw({Monomial.make(arg, None): Fraction(1)})


@lru_cache(maxsize=1 << 14)
def _monomial_dagger(m: Monomial) -> Transseries:
    out = derive(m.exp_part)
    for i, q in m.log_part:
        out = out + Transseries._raw({ell_dagger_monomial(i): q})
    return out


@lru_cache(maxsize=1 << 14)
def derive(f: Transseries) -> Transseries:
    """Termwise derivation with ``x' = 1`` and ``exp(L)' = L' exp(L)``."""
    out: dict[Monomial, Fraction] = {}
    for m, c in f._terms.items():
        if m.is_one():
            continue
        for k, v in _monomial_dagger(m)._terms.items():
            p = _mono_mul(m, k)
            out[p] = out.get(p, 0) + c * v
    return Transseries._raw(out)


def derive_n(f: Transseries, n: int) -> Transseries:
    for _ in range(n):
        f = derive(f)
    return f


def dagger(f: Transseries) -> Transseries:
    """Logarithmic derivative ``f'/f`` of a single nonzero term."""
    if f.is_zero():
        raise ZeroSeries("logarithmic derivative of 0")
    if not f.is_single_term():
        raise NotMonomialTerm("dagger needs a single term; use truncated_div for f'/f")
    (m,) = f._terms
    return _monomial_dagger(m)


def truncated_div(f: Transseries, g: Transseries, iterations: int) -> tuple[Transseries, bool]:
    """Approximate ``f/g`` by truncating the geometric series of ``1/(1+eps)``.

    With ``g = c*m*(1 + eps)`` and ``eps < 1`` the quotient is
    ``f/(c m) * sum_{k<=iterations} (-eps)^k``; ``exact`` is true iff eps = 0.
    """
    if g.is_zero():
        raise DivisionByZero("division by the zero series")
    c, m = dominant_term(g)
    inv = m.inverse()
    scaled_f = f.scale_monomial(inv, 1 / c)
    eps = g.scale_monomial(inv, 1 / c) - 1
    if eps.is_zero():
        return scaled_f, True
    neg = -eps
    acc = ONE_SERIES
    power = ONE_SERIES
    for _ in range(iterations):
        power = power * neg
        acc = acc + power
    return scaled_f * acc, False


def exact_div(f: Transseries, g: Transseries) -> Transseries:
    """Division by a single term; raises for anything the fragment cannot hold."""
    q, exact = truncated_div(f, g, 0)
    if not exact:
        from .errors import InexactDivision

        raise InexactDivision("divisor is not a single term")
    return q


def lambda_partial_sum(n: int) -> Transseries:
    """``1/l0 + 1/(l0 l1) + ... + 1/(l0 ... ln)``."""
    return Transseries({ell_dagger_monomial(i): 1 for i in range(n + 1)})


def omega_partial_sum(n: int) -> Transseries:
    """``1/l0^2 + 1/(l0^2 l1^2) + ... + 1/(l0^2 ... ln^2)``."""
    return Transseries({ell_dagger_monomial(i) ** 2: 1 for i in range(n + 1)})


def membership_cutoff(f: Transseries) -> int:
    return depth(f) + 2


def lambda_member(f: Transseries) -> bool:
    return sign(f - lambda_partial_sum(membership_cutoff(f))) is OrderedSign.NEGATIVE


def omega_member(f: Transseries) -> bool:
    return sign(f - omega_partial_sum(membership_cutoff(f))) is OrderedSign.NEGATIVE


def depth(f: Transseries) -> int:
    return f.depth()


def height(f: Transseries) -> int:
    return f.height()


def series_sum(items: Iterable[Transseries]) -> Transseries:
    out: dict[Monomial, Fraction] = {}
    for s in items:
        for m, c in s._terms.items():
            out[m] = out.get(m, 0) + c
    return Transseries._raw(out)
