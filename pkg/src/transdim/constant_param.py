"""Constant creation for ``P = F(Y) Y' - G(Y)`` over C = Q.

``P`` creates a constant iff ``F/G = c R'/R`` or ``F/G = R'`` for a rational
function ``R``.  Hermite reduction splits ``F/G = A' + B/g`` with ``g``
squarefree; the Rothstein-Trager resultant ``res_Y(g, B - t g')`` has the
residues of ``B/g`` as its roots.  Over Q a logarithmic derivative exists iff
all residues are rational; ``c`` is then the positive generator of the group
they span.

A verdict of :class:`NoCreation` is relative to Q: irrational but pairwise
commensurable residues would create a constant over R (``caveat`` is set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .diffpoly import DiffPolynomial, evaluate, from_univariate
from .errors import NoCertificate, NotCoprime, SizeLimitExceeded, ZeroPolynomial
from .exact_algebra import RatFunc, UniPoly, poly_gcd, rational_roots, resultant_by_interpolation, squarefree_decomp
from .transseries import ONE_SERIES, X, Transseries, derive, exp_large

FIELD = "Q"
MAX_DEGREE = 96  # bound on deg F + deg G for the creation decision


@dataclass(frozen=True)
class HermiteResult:
    rational_part: RatFunc
    proper_num: UniPoly
    squarefree_den: UniPoly


@dataclass(frozen=True)
class ExactDerivative:
    R: RatFunc
    field: str = FIELD


@dataclass(frozen=True)
class LogDerivative:
    c: Fraction
    factors: tuple[tuple[UniPoly, int], ...]
    field: str = FIELD

    @property
    def R(self) -> RatFunc:
        num, den = UniPoly.constant(1), UniPoly.constant(1)
        for p, n in self.factors:
            if n > 0:
                num = num * p**n
            else:
                den = den * p ** (-n)
        return RatFunc(num, den)


@dataclass(frozen=True)
class NoCreation:
    reason: str
    caveat: bool = False
    field: str = FIELD


@dataclass(frozen=True)
class Undecided:
    reason: str
    field: str = FIELD


CreationVerdict = ExactDerivative | LogDerivative | NoCreation | Undecided


def _solve_bezout(a: UniPoly, b: UniPoly, c: UniPoly) -> tuple[UniPoly, UniPoly]:
    """(s, t) with s*a + t*b = c and deg s < deg b, for coprime a, b."""
    r0, r1 = a, b
    s0, s1 = UniPoly.constant(1), UniPoly()
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise NotCoprime("Bezout solve for non-coprime polynomials")
    s = (s0 * c * (1 / r0.lead)) % b
    t = (c - s * a).exact_div(b)
    return s, t


def _check_inputs(F: UniPoly, G: UniPoly) -> None:
    if F.is_zero() or G.is_zero():
        raise ZeroPolynomial("F and G must be nonzero")
    if F.degree + G.degree > MAX_DEGREE:
        raise SizeLimitExceeded(f"deg F + deg G exceeds {MAX_DEGREE}")
    common = poly_gcd(F, G)
    if common.degree > 0:
        raise NotCoprime(f"F and G share the factor {common}")


def hermite_reduce(F: UniPoly, G: UniPoly) -> HermiteResult:
    """``F/G = A' + B/g`` with ``g`` monic squarefree and ``deg B < deg g``."""
    if G.is_zero():
        raise ZeroPolynomial("zero denominator")
    if not F.is_zero():
        common = poly_gcd(F, G)
        if common.degree > 0:
            raise NotCoprime(f"F and G share the factor {common}")
    return _hermite(F, G)


def _hermite(F: UniPoly, G: UniPoly) -> HermiteResult:
    quotient, a = F.divmod(G)
    rational = RatFunc(quotient.antiderivative())
    d = G
    for v, i in squarefree_decomp(G):
        if i < 2:
            continue
        u = d.exact_div(v**i)
        for j in range(i - 1, 0, -1):
            b, c = _solve_bezout(u * v.derivative(), v, a * Fraction(-1, j))
            rational = rational + RatFunc(b, v**j)
            a = c * (-j) - u * b.derivative()
        d = u * v
    rest = RatFunc(a, d)
    return HermiteResult(rational, rest.num, rest.den)


def residues(B: UniPoly, g: UniPoly) -> tuple[list[tuple[Fraction, Fraction]], bool]:
    """Residues ``B(a)/g'(a)`` at the rational roots ``a`` of squarefree ``g``."""
    if g.degree <= 0:
        return [], True
    roots, split = rational_roots(g)
    dg = g.derivative()
    return [(a, B(a) / dg(a)) for a in roots], split


def rothstein_trager(B: UniPoly, g: UniPoly) -> UniPoly:
    """``res_Y(g, B - t g')`` as a polynomial in t."""
    t = UniPoly((0, 1))
    dg = g.derivative()
    top = max(len(B.coeffs), len(dg.coeffs))
    second = [UniPoly.constant(B.coeffs[k] if k < len(B.coeffs) else 0) - t * (dg.coeffs[k] if k < len(dg.coeffs) else 0) for k in range(top)]
    first = [UniPoly.constant(c) for c in g.coeffs]
    return resultant_by_interpolation(first, second)


def _rational_gcd(values: Sequence[Fraction]) -> Fraction:
    num = reduce(math.gcd, (abs(v.numerator) for v in values), 0)
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in values), 1)
    return Fraction(num, den)


def decide_creation(F: UniPoly, G: UniPoly) -> CreationVerdict:
    _check_inputs(F, G)
    h = _hermite(F, G)
    if h.proper_num.is_zero():
        return ExactDerivative(h.rational_part)
    if not h.rational_part.is_constant():
        # c R'/R is proper with squarefree denominator, so A' would have to vanish
        return NoCreation("nonzero rational part next to a logarithmic part")
    res = rothstein_trager(h.proper_num, h.squarefree_den)
    roots, split = rational_roots(res)
    if not split:
        return NoCreation("some residue is irrational", caveat=True)
    distinct = sorted(set(roots))
    c = _rational_gcd(distinct)
    factors = []
    g, B = h.squarefree_den, h.proper_num
    for r in distinct:
        p = poly_gcd(g, B - g.derivative() * r)
        factors.append((p, int(r / c)))
    return LogDerivative(c, tuple(factors))


@dataclass(frozen=True)
class ParametrizationCertificate:
    """First-integral data: ``f(y) = R(y)/exp(b_exponent)`` (log case) or
    ``f(y) = R(y) - x`` (exact case) is constant on the zero set, and each
    fiber of ``f`` has at most ``fiber_bound`` elements."""

    case: str
    R: RatFunc
    c: Fraction | None
    b_exponent: Transseries | None
    fiber_bound: int
    excluded: UniPoly = field(compare=False)

    @property
    def excluded_locus(self) -> str:
        base = f"G(y)*den(R)(y) = 0, i.e. ({self.excluded.render('y')}) = 0"
        return base + (" or R(y) = 0" if self.case == "LogDerivative" else "")

    def b(self) -> Transseries:
        return exp_large(self.b_exponent) if self.b_exponent is not None else ONE_SERIES


def build_certificate(F: UniPoly, G: UniPoly) -> ParametrizationCertificate:
    verdict = decide_creation(F, G)
    if isinstance(verdict, LogDerivative):
        R = verdict.R
        e = max(R.num.degree, R.den.degree)
        return ParametrizationCertificate(
            "LogDerivative", R, verdict.c, X * (1 / verdict.c), int(e), G * R.den
        )
    if isinstance(verdict, ExactDerivative):
        R = verdict.R
        e = max(R.num.degree, R.den.degree)
        return ParametrizationCertificate("ExactDerivative", R, None, None, int(e), G * R.den)
    raise NoCertificate(f"no certificate: {verdict.reason}")


def first_order_equation(F: UniPoly, G: UniPoly) -> DiffPolynomial:
    """``F(Y) Y' - G(Y)`` as a differential polynomial."""
    return from_univariate(F.coeffs) * DiffPolynomial.var(1, 1, 1) - from_univariate(G.coeffs)


def _at(p: UniPoly, y: Transseries) -> Transseries:
    v = p(y)
    return v if isinstance(v, Transseries) else Transseries.const(v)


@dataclass(frozen=True)
class PointReport:
    point: Transseries
    status: str  # pass | fail | excluded | not_member
    detail: str = ""


def verify_certificate(
    F: UniPoly, G: UniPoly, cert: ParametrizationCertificate, points: Sequence[Transseries]
) -> list[PointReport]:
    P = first_order_equation(F, G)
    A, B = cert.R.num, cert.R.den
    out = []
    for y in points:
        if not evaluate(P, [y]).is_zero():
            out.append(PointReport(y, "not_member", "P(y) != 0"))
            continue
        Ay, By = _at(A, y), _at(B, y)
        if _at(G, y).is_zero():
            out.append(PointReport(y, "excluded", "G(y) = 0"))
            continue
        if By.is_zero():
            out.append(PointReport(y, "excluded", "R has a pole at y"))
            continue
        if cert.case == "LogDerivative" and Ay.is_zero():
            out.append(PointReport(y, "excluded", "R(y) = 0"))
            continue
        wronskian = derive(Ay) * By - Ay * derive(By)
        if cert.case == "LogDerivative":
            residual = wronskian * cert.c - Ay * By
        else:
            residual = wronskian - By * By
        if residual.is_zero():
            out.append(PointReport(y, "pass"))
        else:
            out.append(PointReport(y, "fail", f"residual {residual.render()}"))
    return out


def fiber_equation(cert: ParametrizationCertificate, value: Fraction | int) -> list[Transseries]:
    """Coefficients (low degree first) of the polynomial in y whose roots form
    the fiber ``f(y) = value``: ``A(y) - k B(y)`` with ``k = value*b`` in the
    log case and ``k = x + value`` in the exact case."""
    k = cert.b() * value if cert.case == "LogDerivative" else X + value
    A, B = cert.R.num, cert.R.den
    n = max(len(A.coeffs), len(B.coeffs))
    coeffs = []
    for i in range(n):
        a = A.coeffs[i] if i < len(A.coeffs) else 0
        b = B.coeffs[i] if i < len(B.coeffs) else 0
        coeffs.append(Transseries.const(a) - k * b)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs
