"""Strong d-independence at a point, via ranks of matrices of partials.

Ranks are computed from minors because division by a multi-term series
leaves the finite fragment; determinants only need ring operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .diffpoly import DiffPolynomial, evaluate, order_vector, partial
from .errors import ArityMismatch, EmptyList, NotVanishing, OrderViolation, SizeLimitExceeded
from .transseries import ONE_SERIES, ZERO, Transseries

MAX_SIZE = 6


@dataclass(frozen=True)
class TransMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Transseries, ...], ...]

    @classmethod
    def of(cls, grid: Sequence[Sequence[Transseries]]) -> TransMatrix:
        entries = tuple(tuple(r) for r in grid)
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        if any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), len(entries[0]), entries)

    def __getitem__(self, ij: tuple[int, int]) -> Transseries:
        i, j = ij
        return self.entries[i][j]

    def to_json(self) -> list[list[str]]:
        return [[e.render() for e in row] for row in self.entries]


def determinant(grid: Sequence[Sequence[Transseries]]) -> Transseries:
    """Laplace expansion along rows, memoized on the set of used columns."""
    n = len(grid)
    if n == 0:
        return ONE_SERIES
    memo: dict[int, Transseries] = {0: ONE_SERIES}
    # memo[mask] = det of rows n-popcount(mask).. restricted to columns in mask
    for size in range(1, n + 1):
        row = n - size
        for cols in combinations(range(n), size):
            mask = 0
            for c in cols:
                mask |= 1 << c
            acc = ZERO
            for pos, c in enumerate(cols):
                entry = grid[row][c]
                if entry.is_zero():
                    continue
                sub = memo[mask & ~(1 << c)]
                if sub.is_zero():
                    continue
                term = entry * sub
                acc = acc - term if pos % 2 else acc + term
            memo[mask] = acc
    return memo[(1 << n) - 1]


def minor_rank(m: TransMatrix, max_size: int = MAX_SIZE) -> int:
    """Largest k such that some k x k minor is nonzero."""
    if min(m.rows, m.cols) > max_size:
        raise SizeLimitExceeded(f"matrix {m.rows}x{m.cols} exceeds minor cap {max_size}")
    for k in range(min(m.rows, m.cols), 0, -1):
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                sub = [[m.entries[i][j] for j in cols] for i in rows]
                if not determinant(sub).is_zero():
                    return k
    return 0


def jacobian_at(polys: Sequence[DiffPolynomial], point: Sequence[Transseries], orders: Sequence[int]) -> TransMatrix:
    if not polys:
        raise EmptyList("empty family")
    n = polys[0].arity
    if len(orders) != n or len(point) != n:
        raise ArityMismatch("order vector / point length differs from arity")
    actual = order_vector(polys)
    for j, (have, bound) in enumerate(zip(actual, orders)):
        if have > bound:
            raise OrderViolation(f"order {have} in Y{j + 1} exceeds bound {bound}")
    grid = [[evaluate(partial(p, j + 1, orders[j]), point) for j in range(n)] for p in polys]
    return TransMatrix.of(grid)


@dataclass(frozen=True)
class IndependenceResult:
    answer: bool
    witness_rank: int
    orders: tuple[int, ...]


def strongly_d_independent_at(
    polys: Sequence[DiffPolynomial], point: Sequence[Transseries], max_size: int = MAX_SIZE
) -> IndependenceResult:
    """Whether the family is strongly d-independent at ``point``.

    Only the componentwise maximal order vector needs checking: raising any
    entry above every order in that variable zeroes the whole column.
    """
    orders = order_vector(polys)
    rank = minor_rank(jacobian_at(polys, point, orders), max_size)
    return IndependenceResult(rank == len(polys), rank, tuple(orders))


def codim_lower_bound(
    polys: Sequence[DiffPolynomial], point: Sequence[Transseries], max_size: int = MAX_SIZE
) -> int:
    """Size of the largest subfamily strongly d-independent at ``point``."""
    if not polys:
        raise EmptyList("empty family")
    if len(polys) > max_size:
        raise SizeLimitExceeded(f"{len(polys)} polynomials exceed subset-search cap {max_size}")
    for i, p in enumerate(polys):
        if not evaluate(p, point).is_zero():
            raise NotVanishing(i)
    for k in range(min(len(polys), polys[0].arity), 0, -1):
        for sub in combinations(polys, k):
            if strongly_d_independent_at(sub, point, max_size).answer:
                return k
    return 0
