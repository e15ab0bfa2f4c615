"""Recursive descent parser for transseries, differential polynomials and
set descriptors.

Expression grammar::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '-' INT | '(' ['-'|'+'] INT ['/' INT] ')'
    atom     := INT | 'x' | 'l' INT | 'Y' [INT] | 'exp' '(' expr ')'
              | 'log' '(' expr ')' | 'D' [INT] '(' expr ')' | '(' expr ')'

Every expression is parsed as a differential polynomial of a given arity;
a transseries is the arity-0 case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import UNIT, DiffPolynomial, total_derive
from .dimension import (
    Constants,
    Empty,
    FinitePoints,
    Full,
    Permute,
    Product,
    Project,
    SetDescriptor,
    Union,
    ZeroSet,
)
from .errors import ArityViolation, DivisionByZero, OutOfFragment, ParseError, SizeLimitExceeded
from .exact_algebra import UniPoly
from .transseries import X, Transseries, exp_large

MAX_NESTING = 100
MAX_POLY_POWER = 64
MAX_DERIVATIVE = 32
MAX_WORK = 20_000  # bound on term-pair products per multiplication
MAX_TERMS = 2_000

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]+\d*)|(?P<op>[-+*/^(),;{}\[\]|]))")


@dataclass(frozen=True)
class Token:
    kind: str  # int | name | op | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    def __init__(self, text: str, arity: int) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.arity = arity
        self.nesting = 0

    # -- token helpers -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> Token:
        if not (self.tok.kind == "op" and self.tok.text == op):
            raise ParseError(f"expected {op!r}", self.tok.pos)
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            raise ParseError("expected an integer", self.tok.pos)
        return int(self.advance().text)

    # -- grammar -------------------------------------------------------

    def parse(self) -> DiffPolynomial:
        value = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self) -> DiffPolynomial:
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise ParseError("expression nested too deeply", self.tok.pos)
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                break
        self.nesting -= 1
        return value

    def term(self) -> DiffPolynomial:
        value = self.unary()
        while True:
            if self.accept("*"):
                pos = self.tokens[self.i - 1].pos
                value = _guarded_mul(value, self.unary(), pos)
            elif self.tok.kind == "op" and self.tok.text == "/":
                pos = self.advance().pos
                value = value * self._inverse(self.unary(), pos)
            else:
                return value

    def unary(self) -> DiffPolynomial:
        if self.accept("-"):
            return -self.unary_bounded()
        if self.accept("+"):
            return self.unary_bounded()
        return self.power()

    def unary_bounded(self) -> DiffPolynomial:
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise ParseError("expression nested too deeply", self.tok.pos)
        value = self.unary()
        self.nesting -= 1
        return value

    def power(self) -> DiffPolynomial:
        base = self.atom()
        if not self.accept("^"):
            return base
        pos = self.tok.pos
        q = self.exponent()
        return self._raise(base, q, pos)

    def exponent(self) -> Fraction:
        if self.accept("-"):
            return -Fraction(self.expect_int())
        if self.accept("("):
            sign = 1
            if self.accept("-"):
                sign = -1
            else:
                self.accept("+")
            num = self.expect_int()
            den = 1
            if self.accept("/"):
                den = self.expect_int()
                if den == 0:
                    raise ParseError("zero denominator in exponent", self.tokens[self.i - 1].pos)
            self.expect(")")
            return Fraction(sign * num, den)
        return Fraction(self.expect_int())

    def atom(self) -> DiffPolynomial:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return self._const(int(t.text))
        if t.kind == "op" and t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if t.kind != "name":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)
        self.advance()
        name = t.text
        if name == "x":
            return self._const(X)
        if name == "exp":
            arg = self._call_argument()
            return self._const(exp_large(self._series(arg, t.pos)))
        if name == "log":
            arg = self._series(self._call_argument(), t.pos)
            return self._const(_log_of_ell(arg))
        m = re.fullmatch(r"l(\d+)", name)
        if m:
            return self._const(Transseries.ell(int(m.group(1))))
        m = re.fullmatch(r"Y(\d*)", name)
        if m:
            j = int(m.group(1)) if m.group(1) else 1
            if not 1 <= j <= self.arity:
                raise ArityViolation(f"Y{j} outside arity {self.arity}", t.pos)
            return DiffPolynomial.var(self.arity, j)
        m = re.fullmatch(r"D(\d*)", name)
        if m:
            k = int(m.group(1)) if m.group(1) else 1
            if k > MAX_DERIVATIVE:
                raise ParseError(f"derivative order {k} above {MAX_DERIVATIVE}", t.pos)
            value = self._call_argument()
            for _ in range(k):
                value = _checked(total_derive(value), t.pos)
            return value
        raise ParseError(f"unknown name {name!r}", t.pos)

    # -- semantic helpers ----------------------------------------------

    def _call_argument(self) -> DiffPolynomial:
        self.expect("(")
        value = self.expr()
        self.expect(")")
        return value

    def _const(self, value: Transseries | int) -> DiffPolynomial:
        return DiffPolynomial.const(self.arity, value)

    def _series(self, p: DiffPolynomial, pos: int) -> Transseries:
        if not p.is_constant():
            raise OutOfFragment(f"differential indeterminate inside a function call at position {pos}")
        return p.constant_coefficient()

    def _single_term(self, p: DiffPolynomial, pos: int) -> Transseries:
        if not p.is_constant():
            raise OutOfFragment(f"division or power of a polynomial in Y at position {pos}")
        s = p.constant_coefficient()
        if s.is_zero():
            raise DivisionByZero(f"zero divisor at position {pos}")
        if not s.is_single_term():
            raise OutOfFragment(f"multi-term divisor at position {pos}; the fragment only divides by single terms")
        return s

    def _inverse(self, p: DiffPolynomial, pos: int) -> DiffPolynomial:
        s = self._single_term(p, pos)
        return self._const(s**-1)

    def _raise(self, base: DiffPolynomial, q: Fraction, pos: int) -> DiffPolynomial:
        if q.denominator == 1 and q >= 0:
            n = int(q)
            if n > MAX_POLY_POWER and not _is_unit_term(base):
                raise OutOfFragment(f"power {n} exceeds {MAX_POLY_POWER} for this base")
            if _is_unit_term(base):
                return self._const(base.constant_coefficient() ** n)
            result = self._const(1)
            for _ in range(n):
                result = _guarded_mul(result, base, pos)
            return result
        s = self._single_term(base, pos)
        ((m, c),) = s.terms()
        if abs(q) > MAX_POLY_POWER and abs(c) != 1:
            raise OutOfFragment(f"power {q} of a non-unit coefficient exceeds {MAX_POLY_POWER}")
        if q.denominator == 1:
            return self._const(s ** int(q))
        if c != 1:
            raise OutOfFragment(f"rational power of a non-unit coefficient at position {pos}")
        return self._const(Transseries.monomial(m**q))


def _size(p: DiffPolynomial) -> int:
    return sum(len(c.support()) for c in p.terms.values())


def _checked(p: DiffPolynomial, pos: int) -> DiffPolynomial:
    if _size(p) > MAX_TERMS:
        raise SizeLimitExceeded(f"expression grows beyond {MAX_TERMS} terms at position {pos}")
    return p


def _guarded_mul(a: DiffPolynomial, b: DiffPolynomial, pos: int) -> DiffPolynomial:
    if _size(a) * _size(b) > MAX_WORK:
        raise SizeLimitExceeded(f"product too large at position {pos}")
    return _checked(a * b, pos)


def _is_unit_term(p: DiffPolynomial) -> bool:
    if not p.is_constant():
        return False
    s = p.constant_coefficient()
    return s.is_single_term() and abs(next(iter(s.terms()))[1]) == 1


def _log_of_ell(arg: Transseries) -> Transseries:
    if arg.is_single_term():
        ((m, c),) = arg.terms()
        j = m.single_log_index()
        if c == 1 and j is not None:
            return Transseries.ell(j + 1)
    raise OutOfFragment("log is only available for iterated logarithms of x")


def parse_diffpoly(text: str, arity: int) -> DiffPolynomial:
    return ExpressionParser(text, arity).parse()


def parse_transseries(text: str) -> Transseries:
    return ExpressionParser(text, 0).parse().constant_coefficient()


def parse_unipoly(text: str) -> UniPoly:
    """A polynomial in Y with rational coefficients (no derivatives, no x)."""
    p = parse_diffpoly(text, 1)
    coeffs: dict[int, Fraction] = {}
    for mono, c in p.terms.items():
        if any(r for (_, r), _ in mono):
            raise OutOfFragment("derivatives are not allowed in a polynomial of C[Y]")
        if not c.is_constant():
            raise OutOfFragment("coefficients of a polynomial in C[Y] must be rational")
        deg = sum(k for _, k in mono)
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + c.constant_value()
    return UniPoly.from_map(coeffs)


def split_top_level(text: str, sep: str = ";") -> list[str]:
    """Split on ``sep`` outside any bracket."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced bracket", i)
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise ParseError("unbalanced bracket", len(text))
    parts.append(text[start:])
    return parts


def parse_point(text: str) -> list[Transseries]:
    """Coordinates separated by ``;`` or ``,`` at the top level."""
    sep = ";" if ";" in text else ","
    parts = split_top_level(text, sep)
    if any(not p.strip() for p in parts):
        raise ParseError("empty coordinate", 0)
    return [parse_transseries(p) for p in parts]


# -- set descriptors --------------------------------------------------------


class DescriptorParser:
    """``full n | empty n | const n | zero {P; ...} n [at (y1, ...)]
    | points {(y1, ...); ...} n | union(A, B) | prod(A, B)
    | proj(A, m) | perm([s1, ..., sn], A)``; permutations are 1-based."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.nesting = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def word(self) -> str:
        self.ws()
        m = re.compile(r"[A-Za-z]+").match(self.text, self.pos)
        if not m:
            raise self.error("expected a descriptor keyword")
        self.pos = m.end()
        return m.group()

    def integer(self) -> int:
        self.ws()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def char(self, ch: str) -> None:
        self.ws()
        if not self.text.startswith(ch, self.pos):
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def peek(self, ch: str) -> bool:
        self.ws()
        return self.text.startswith(ch, self.pos)

    def balanced(self, open_: str, close: str) -> str:
        """Text between a bracket pair (consumes both brackets)."""
        self.char(open_)
        start, depth = self.pos, 1
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == open_:
                depth += 1
            elif ch == close:
                depth -= 1
                if depth == 0:
                    inner = self.text[start : self.pos]
                    self.pos += 1
                    return inner
            self.pos += 1
        raise self.error(f"missing {close!r}")

    def parse(self) -> SetDescriptor:
        d = self.descriptor()
        self.ws()
        if self.pos != len(self.text):
            raise self.error("trailing input")
        return d

    def descriptor(self) -> SetDescriptor:
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise self.error("descriptor nested too deeply")
        kw = self.word()
        if kw == "full":
            d: SetDescriptor = Full(self.integer())
        elif kw == "empty":
            d = Empty(self.integer())
        elif kw == "const":
            d = Constants(self.integer())
        elif kw == "zero":
            body = self.balanced("{", "}")
            n = self.integer()
            polys = tuple(parse_diffpoly(p, n) for p in split_top_level(body))
            witness = None
            save = self.pos
            if self.word_if("at"):
                witness = tuple(parse_point(self.balanced("(", ")")))
            else:
                self.pos = save
            d = ZeroSet(polys, n, witness)
        elif kw == "points":
            body = self.balanced("{", "}")
            n = self.integer()
            pts = []
            for chunk in split_top_level(body):
                chunk = chunk.strip()
                if chunk.startswith("(") and chunk.endswith(")"):
                    chunk = chunk[1:-1]
                pts.append(tuple(parse_point(chunk)))
            d = FinitePoints(tuple(pts), n)
        elif kw in ("union", "prod"):
            self.char("(")
            a = self.descriptor()
            self.char(",")
            b = self.descriptor()
            self.char(")")
            d = Union(a, b) if kw == "union" else Product(a, b)
        elif kw == "proj":
            self.char("(")
            a = self.descriptor()
            self.char(",")
            m = self.integer()
            self.char(")")
            d = Project(a, m)
        elif kw == "perm":
            self.char("(")
            body = self.balanced("[", "]")
            try:
                sigma = tuple(int(s) - 1 for s in body.split(",")) if body.strip() else ()
            except ValueError:
                raise self.error("permutation entries must be integers") from None
            self.char(",")
            a = self.descriptor()
            self.char(")")
            d = Permute(sigma, a)
        else:
            raise self.error(f"unknown descriptor {kw!r}")
        self.nesting -= 1
        return d

    def word_if(self, kw: str) -> bool:
        self.ws()
        if re.compile(kw + r"\b").match(self.text, self.pos):
            self.pos += len(kw)
            return True
        return False


def parse_descriptor(text: str) -> SetDescriptor:
    return DescriptorParser(text).parse()
