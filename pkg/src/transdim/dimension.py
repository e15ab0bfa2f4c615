"""Dimension intervals for symbolic descriptors of definable sets.

Every descriptor evaluates to an interval ``[lo, hi]`` that provably
contains the dimension of the set it denotes; ``-inf`` is the dimension of
the empty set.  ``Full(n)`` and ``ZeroSet`` are the cases where a nonempty
interior (dimension ``n``) resp. no interior (dimension ``< n``) is known.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .diffpoly import DiffPolynomial, evaluate
from .errors import ArityMismatch, MalformedDescriptor, Undecidable
from .exact_algebra import NEG_INF
from .transseries import Transseries, derive

Dim = "int | float"  # an int or NEG_INF


@dataclass(frozen=True)
class DimInterval:
    lo: Dim
    hi: Dim

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise MalformedDescriptor(f"empty interval [{self.lo}, {self.hi}]")

    def to_json(self) -> dict:
        return {"lo": _dim_json(self.lo), "hi": _dim_json(self.hi)}


def _dim_json(d: Dim) -> int | str:
    return "-inf" if d == NEG_INF else int(d)


class Discreteness(enum.Enum):
    DISCRETE = "Discrete"
    NOT_DISCRETE = "NotDiscrete"
    UNKNOWN = "Unknown"


Point = Sequence[Transseries]


class SetDescriptor:
    arity: int


@dataclass(frozen=True)
class Full(SetDescriptor):
    arity: int


@dataclass(frozen=True)
class Empty(SetDescriptor):
    arity: int


@dataclass(frozen=True)
class FinitePoints(SetDescriptor):
    points: tuple[tuple[Transseries, ...], ...]
    arity: int


@dataclass(frozen=True)
class Constants(SetDescriptor):
    arity: int


@dataclass(frozen=True)
class ZeroSet(SetDescriptor):
    """Common zeros of ``polys``; ``witness`` is an optional claimed member."""

    polys: tuple[DiffPolynomial, ...]
    arity: int
    witness: tuple[Transseries, ...] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Union(SetDescriptor):
    left: SetDescriptor
    right: SetDescriptor

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.left.arity


@dataclass(frozen=True)
class Product(SetDescriptor):
    left: SetDescriptor
    right: SetDescriptor

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.left.arity + self.right.arity


@dataclass(frozen=True)
class Permute(SetDescriptor):
    """``{(y_sigma(1), ..., y_sigma(n)) : y in inner}``, sigma 0-based."""

    sigma: tuple[int, ...]
    inner: SetDescriptor

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.inner.arity


@dataclass(frozen=True)
class Project(SetDescriptor):
    """Image of ``inner`` under projection onto the first ``m`` coordinates."""

    inner: SetDescriptor
    m: int

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.m


def validate(s: SetDescriptor) -> None:
    match s:
        case Full(n) | Empty(n) | Constants(n):
            if n < 0 or (isinstance(s, Constants) and n < 1):
                raise MalformedDescriptor(f"bad arity {n}")
        case FinitePoints(points, n):
            if not points or any(len(p) != n for p in points):
                raise MalformedDescriptor("finite point set must be nonempty with consistent arity")
        case ZeroSet(polys, n, witness):
            if not polys or any(p.is_zero() for p in polys):
                raise MalformedDescriptor("zero set needs nonzero polynomials")
            if any(p.arity != n for p in polys) or (witness is not None and len(witness) != n):
                raise MalformedDescriptor("zero set arity mismatch")
        case Union(a, b):
            validate(a)
            validate(b)
            if a.arity != b.arity:
                raise MalformedDescriptor("union of sets of different arity")
        case Product(a, b):
            validate(a)
            validate(b)
        case Permute(sigma, a):
            validate(a)
            if sorted(sigma) != list(range(a.arity)):
                raise MalformedDescriptor(f"{list(sigma)} is not a permutation of {a.arity} coordinates")
        case Project(a, m):
            validate(a)
            if not 0 <= m <= a.arity:
                raise MalformedDescriptor(f"projection to {m} of {a.arity} coordinates")
        case _:
            raise MalformedDescriptor(f"unknown descriptor {s!r}")


def _add(a: Dim, b: Dim) -> Dim:
    return NEG_INF if NEG_INF in (a, b) else a + b


def _eval(s: SetDescriptor) -> DimInterval:
    match s:
        case Full(n):
            return DimInterval(n, n)
        case Empty():
            return DimInterval(NEG_INF, NEG_INF)
        case FinitePoints() | Constants():
            return DimInterval(0, 0)
        case ZeroSet(polys, n, witness):
            # a proper zero set has empty interior, so its dimension is < n
            lo = 0 if witness is not None and member(s, witness) else NEG_INF
            return DimInterval(lo, n - 1)
        case Union(a, b):
            da, db = _eval(a), _eval(b)
            return DimInterval(max(da.lo, db.lo), max(da.hi, db.hi))
        case Product(a, b):
            da, db = _eval(a), _eval(b)
            return DimInterval(_add(da.lo, db.lo), _add(da.hi, db.hi))
        case Permute(_, a):
            return _eval(a)
        case Project(a, m):
            da = _eval(a)
            hi = min(da.hi, m)
            lo = 0 if da.lo >= 0 else NEG_INF
            return DimInterval(min(lo, hi), hi)
    raise MalformedDescriptor(f"unknown descriptor {s!r}")


def dim_eval(s: SetDescriptor) -> DimInterval:
    validate(s)
    return _eval(s)


def member(s: SetDescriptor, y: Point) -> bool:
    if len(y) != s.arity:
        raise ArityMismatch(f"point of length {len(y)} for a set in K^{s.arity}")
    match s:
        case Full():
            return True
        case Empty():
            return False
        case FinitePoints(points):
            return tuple(y) in set(points)
        case Constants():
            return all(derive(c).is_zero() for c in y)
        case ZeroSet(polys):
            return all(evaluate(p, list(y)).is_zero() for p in polys)
        case Union(a, b):
            return member(a, y) or member(b, y)
        case Product(a, b):
            return member(a, y[: a.arity]) and member(b, y[a.arity :])
        case Permute(sigma, a):
            # y = (z_sigma(0), ..., z_sigma(n-1)) for some z in a
            z: list[Transseries | None] = [None] * len(y)
            for i, k in enumerate(sigma):
                z[k] = y[i]
            return member(a, z)  # type: ignore[arg-type]
        case Project(a, m):
            return _project_member(a, tuple(y))
    raise MalformedDescriptor(f"unknown descriptor {s!r}")


def _project_member(a: SetDescriptor, y: tuple[Transseries, ...]) -> bool:
    if len(y) == a.arity:
        return member(a, y)
    match a:
        case Full():
            return True
        case Empty():
            return False
        case FinitePoints(points):
            return any(p[: len(y)] == y for p in points)
        case Constants():
            return all(derive(c).is_zero() for c in y)
        case Union(l, r):
            return _project_member(l, y) or _project_member(r, y)
        case Product(l, r) if len(y) <= l.arity:
            return _project_member(l, y) and not _is_empty(r)
        case Product(l, r):
            return member(l, y[: l.arity]) and _project_member(r, y[l.arity :])
    raise Undecidable("projection membership over an infinite descriptor")


def _is_empty(s: SetDescriptor) -> bool:
    d = _eval(s)
    if d.hi == NEG_INF:
        return True
    if d.lo >= 0:
        return False
    raise Undecidable("emptiness of a zero set is not decided")


def discreteness_flag(s: SetDescriptor) -> Discreteness:
    d = dim_eval(s)
    if d.hi <= 0:
        return Discreteness.DISCRETE
    if d.lo >= 1:
        return Discreteness.NOT_DISCRETE
    return Discreteness.UNKNOWN
