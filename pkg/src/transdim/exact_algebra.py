"""Exact univariate polynomial and rational-function algebra over Q.

Rationals are :class:`fractions.Fraction` at the interface. Polynomials are
immutable dense coefficient tuples, lowest degree first, with trailing zeros
stripped; internally coefficients are gmpy2 ``mpq`` values for speed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import DivisionByZero, ZeroPolynomial

NEG_INF = float("-inf")

Number = int | Fraction
_MPQ = type(mpq(0))
_ZERO = mpq(0)


class UniPoly:
    """Polynomial in one variable with rational coefficients."""

    __slots__ = ("_q", "_coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()) -> None:
        cs = [c if type(c) is _MPQ else mpq(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self._q: tuple = tuple(cs)
        self._coeffs: tuple[Fraction, ...] | None = None
        self._hash: int | None = None

    @classmethod
    def _raw(cls, cs: list) -> UniPoly:
        """Internal constructor for lists already made of mpq values."""
        while cs and not cs[-1]:
            cs.pop()
        p = cls.__new__(cls)
        p._q = tuple(cs)
        p._coeffs = None
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Number) -> UniPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> UniPoly:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> UniPoly:
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @classmethod
    def from_map(cls, terms: dict[int, Number]) -> UniPoly:
        if not terms:
            return cls()
        cs = [Fraction(0)] * (max(terms) + 1)
        for d, c in terms.items():
            cs[d] += Fraction(c)
        return cls(cs)

    # -- basic queries -------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        if self._coeffs is None:
            self._coeffs = tuple(_fraction(c) for c in self._q)
        return self._coeffs

    @property
    def degree(self) -> int | float:
        return len(self._q) - 1 if self._q else NEG_INF

    @property
    def lead(self) -> Fraction:
        return _fraction(self._q[-1]) if self._q else Fraction(0)

    def is_zero(self) -> bool:
        return not self._q

    def is_constant(self) -> bool:
        return len(self._q) <= 1

    def to_map(self) -> dict[int, Fraction]:
        return {d: c for d, c in enumerate(self.coeffs) if c}

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UniPoly):
            return self._q == other._q
        if isinstance(other, (int, Fraction)):
            return self._q == UniPoly.constant(other)._q
        return NotImplemented

    def __hash__(self) -> int:
        # mpq hashes agree with Fraction hashes
        if self._hash is None:
            self._hash = hash(self._q)
        return self._hash

    def __repr__(self) -> str:
        return f"UniPoly({self})"

    def __str__(self) -> str:
        return self.render("Y")

    def render(self, var: str = "Y") -> str:
        if not self._q:
            return "0"
        parts: list[str] = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if d == 0:
                body = fmt_rational(a)
            else:
                mono = var if d == 1 else f"{var}^{d}"
                body = mono if a == 1 else f"{fmt_rational(a)}*{mono}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: UniPoly | Number) -> UniPoly:
        a, b = self._q, _lift(other)._q
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly._raw([-c for c in self._q])

    def __sub__(self, other: UniPoly | Number) -> UniPoly:
        b = _lift(other)._q
        out = list(self._q) + [_ZERO] * (len(b) - len(self._q))
        for i, y in enumerate(b):
            out[i] -= y
        return UniPoly._raw(out)

    def __rsub__(self, other: Number) -> UniPoly:
        return _lift(other) - self

    def __mul__(self, other: UniPoly | Number) -> UniPoly:
        a, b = self._q, _lift(other)._q
        if not a or not b:
            return UniPoly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UniPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self._q)
        divisor = other._q
        db = len(divisor) - 1
        lead = divisor[-1]
        if len(rem) - 1 < db:
            return UniPoly(), self
        quot = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] if lead == 1 else rem[k + db] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(divisor):
                    rem[k + j] -= q * b
        return UniPoly._raw(quot), UniPoly._raw(rem[:db])

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def exact_div(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, value):
        """Horner evaluation at any ring element that mixes with Fractions."""
        if isinstance(value, (int, Fraction)):
            v, acc = mpq(value), _ZERO
            for c in reversed(self._q):
                acc = acc * v + c
            return _fraction(acc)
        acc = self.coeffs[-1] if self.coeffs else Fraction(0)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly._raw([i * c for i, c in enumerate(self._q) if i])

    def antiderivative(self) -> UniPoly:
        return UniPoly._raw([_ZERO] + [c / (i + 1) for i, c in enumerate(self._q)])

    def monic(self) -> UniPoly:
        if not self._q:
            return self
        lead = self._q[-1]
        if lead == 1:
            return self
        return UniPoly._raw([c / lead for c in self._q])

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive in Z[Y]."""
        if not self._q:
            return Fraction(0)
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(abs(num), den)

    def primitive_int(self) -> list[int]:
        """Integer coefficients of the primitive associate (positive lead)."""
        c = self.content()
        if self.lead < 0:
            c = -c
        return [int(x / c) for x in self.coeffs]

    def shift(self, a: Number) -> UniPoly:
        """Return p(Y + a)."""
        out = UniPoly()
        lin = UniPoly((a, 1))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _lift(v: UniPoly | Number) -> UniPoly:
    return v if isinstance(v, UniPoly) else UniPoly.constant(v)


def fmt_rational(q: Number) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    # keeping the divisor monic avoids coefficient growth and divisions
    b = b.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_decomp(g: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm. Factors are monic, squarefree, pairwise coprime, and
    multiplicities increase strictly; trivial factors are omitted."""
    if g.is_zero():
        raise ZeroPolynomial("squarefree decomposition of 0")
    out: list[tuple[UniPoly, int]] = []
    dg = g.derivative()
    c = poly_gcd(g, dg)
    w = g.monic().exact_div(c)
    y = dg.exact_div(c) * (1 / g.lead)
    z = y - w.derivative()
    i = 1
    while not w.is_constant():
        a = poly_gcd(w, z)
        if not a.is_constant():
            out.append((a, i))
        w = w.exact_div(a)
        y = z.exact_div(a)
        z = y - w.derivative()
        i += 1
    return out


# -- resultants over Q[t] -------------------------------------------------

TPoly = Sequence[UniPoly]
"""A polynomial in Y whose coefficients (lowest degree first) lie in Q[t]."""


def _strip(p: TPoly) -> list[UniPoly]:
    cs = list(p)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def resultant(a: TPoly, b: TPoly) -> UniPoly:
    """Resultant in Y of two polynomials with coefficients in Q[t].

    Computed as the determinant of the Sylvester matrix by fraction-free
    (Bareiss) elimination; every division is exact in Q[t].
    """
    a, b = _strip(a), _strip(b)
    if not a or not b:
        raise ZeroPolynomial("resultant with the zero polynomial")
    m, n = len(a) - 1, len(b) - 1
    if m == 0 and n == 0:
        return UniPoly.constant(1)
    size = m + n
    zero = UniPoly()
    rows: list[list[UniPoly]] = []
    # rows hold coefficients highest degree first
    for i in range(n):
        rows.append([zero] * i + list(reversed(a)) + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(reversed(b)) + [zero] * (m - 1 - i))
    return bareiss_det(rows) if size else UniPoly.constant(1)


def bareiss_det(rows: list[list[UniPoly]]) -> UniPoly:
    """Determinant of a square matrix over Q[t] by Bareiss elimination."""
    mat = [list(r) for r in rows]
    n = len(mat)
    sign = 1
    prev = UniPoly.constant(1)
    for k in range(n - 1):
        if mat[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not mat[i][k].is_zero()), None)
            if swap is None:
                return UniPoly()
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        pivot = mat[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * pivot - mat[i][k] * mat[k][j]).exact_div(prev)
            mat[i][k] = UniPoly()
        prev = pivot
    det = mat[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant_q(a: UniPoly, b: UniPoly) -> Fraction:
    """Resultant of two polynomials over Q, by the Euclidean recurrence."""
    if a.is_zero() or b.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    acc = Fraction(1)
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lead**m
        if m == 0:
            return acc * a.lead**n
        r = a % b
        if r.is_zero():
            return Fraction(0)
        # res(a, b) = (-1)^(mn) lc(b)^(m - deg r) res(b, r)
        acc *= (-1 if m * n % 2 else 1) * b.lead ** (m - r.degree)
        a, b = b, r


def _t_degree(p: TPoly) -> int:
    return max((c.degree for c in p if not c.is_zero()), default=0)


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPoly:
    """The polynomial of degree < len(xs) through the points (Newton form)."""
    coef = list(ys)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = UniPoly.constant(coef[-1]) if coef else UniPoly()
    for i in range(n - 2, -1, -1):
        out = out * UniPoly((-xs[i], 1)) + UniPoly.constant(coef[i])
    return out


def resultant_by_interpolation(a: TPoly, b: TPoly) -> UniPoly:
    """Same value as :func:`resultant`, via evaluation at rational t.

    Points where a formal leading coefficient vanishes are skipped so the
    specialized Sylvester matrix keeps its shape.
    """
    a, b = _strip(a), _strip(b)
    if not a or not b:
        raise ZeroPolynomial("resultant with the zero polynomial")
    m, n = len(a) - 1, len(b) - 1
    bound = n * _t_degree(a) + m * _t_degree(b)
    xs: list[Fraction] = []
    ys: list[Fraction] = []
    t = 0
    while len(xs) <= bound:
        x = Fraction(t)
        t += 1
        if a[-1](x) == 0 or b[-1](x) == 0:
            continue
        xs.append(x)
        ys.append(resultant_q(UniPoly(c(x) for c in a), UniPoly(c(x) for c in b)))
    return interpolate(xs, ys)


# -- rational roots ----------------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


DIVISOR_SEARCH_LIMIT = 10**8


def _candidates_by_divisors(ints: list[int]) -> list[Fraction]:
    return sorted({Fraction(s * num, den) for num in _divisors(ints[0]) for den in _divisors(ints[-1]) for s in (1, -1)})


def _sturm_chain(p: UniPoly) -> list[list[int]]:
    """Sturm sequence, each member scaled by a positive rational to Z[Y]."""
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)
    return [[int(c / q.content()) for c in q.coeffs] for q in chain]


def _sign_at(ints: list[int], x: Fraction) -> int:
    """Sign of the polynomial at ``x = n/d`` (d > 0), in integer arithmetic.

    Horner on the homogenized form ``sum c_i n^i d^(k-i)``.
    """
    n, d = x.numerator, x.denominator
    acc, dp = ints[-1], d
    for c in reversed(ints[:-1]):
        acc = acc * n + c * dp
        dp *= d
    return (acc > 0) - (acc < 0)


def _sign_changes(chain: list[list[int]], x: Fraction) -> int:
    signs = [v for v in (_sign_at(q, x) for q in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _candidates_by_isolation(q: UniPoly, lead: int) -> list[Fraction]:
    """One candidate per real root of the squarefree ``q``.

    Two distinct rationals with denominators dividing ``lead`` are at least
    ``1/lead^2`` apart, so once an isolating interval is narrower than that
    the only possible rational root inside is the closest such fraction.
    """
    chain = _sturm_chain(q)
    # Cauchy bound, rounded up so that every bisection point is dyadic
    bound = Fraction(1 + math.ceil(max(abs(c / q.lead) for c in q.coeffs[:-1]))) if q.degree > 0 else Fraction(1)
    width = Fraction(1, 2 * lead * lead)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = _sign_changes(chain, lo) - _sign_changes(chain, hi)
        if count == 0:
            continue
        if count == 1 and hi - lo < width:
            guess = ((lo + hi) / 2).limit_denominator(lead)
            if lo <= guess <= hi:
                out.append(guess)
            continue
        # counts are over half-open intervals (lo, hi], so a root at mid is not lost
        mid = (lo + hi) / 2
        stack.extend([(lo, mid), (mid, hi)])
    return sorted(set(out))


SIEVE_PRIMES = (101, 103, 107, 109, 113, 127, 131, 137)


def _has_root_mod_all_primes(ints: list[int]) -> bool:
    """False when some prime not dividing the lead gives a rootless reduction.

    A rational root a/b has b dividing the lead, so it reduces to a root
    modulo every such prime.
    """
    for p in SIEVE_PRIMES:
        if ints[-1] % p == 0:
            continue
        red = [c % p for c in ints]
        if not any(_eval_mod(red, x, p) == 0 for x in range(p)):
            return False
    return True


def _eval_mod(cs: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % p
    return acc


def rational_roots(p: UniPoly) -> tuple[list[Fraction], bool]:
    """Rational roots of ``p`` with multiplicity, sorted ascending.

    ``fully_split`` is true iff ``p`` is a product of rational linear factors.
    """
    if p.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    roots: list[Fraction] = []
    rest = p
    while rest.coeffs and rest.coeffs[0] == 0:
        roots.append(Fraction(0))
        rest = UniPoly(rest.coeffs[1:])
    if rest.degree > 0:
        ints = rest.primitive_int()
        if max(abs(ints[0]), abs(ints[-1])) <= DIVISOR_SEARCH_LIMIT:
            candidates = _candidates_by_divisors(ints)
        elif not _has_root_mod_all_primes(ints):
            candidates = []
        else:
            sq = rest.exact_div(poly_gcd(rest, rest.derivative()))
            candidates = _candidates_by_isolation(sq, abs(sq.primitive_int()[-1]))
        for r in candidates:
            lin = UniPoly((-r, 1))
            while rest.degree > 0 and rest(r) == 0:
                roots.append(r)
                rest = rest.exact_div(lin)
    roots.sort()
    return roots, rest.degree == 0


# -- rational functions ---------------------------------------------------


class RatFunc:
    """Reduced quotient num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly | Number, den: UniPoly | Number = 1) -> None:
        num, den = _lift(num), _lift(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den._q[-1]
        self.num = UniPoly._raw([c / lead for c in num._q])
        self.den = den.monic()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        return self.render("Y")

    def render(self, var: str = "Y") -> str:
        if self.den == 1:
            return self.num.render(var)
        return f"({self.num.render(var)})/({self.den.render(var)})"

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den, self.den * other.num)

    def derivative(self) -> RatFunc:
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def log_derivative(self) -> RatFunc:
        """R'/R."""
        return self.derivative() / self
