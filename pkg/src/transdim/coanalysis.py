"""Co-analyzability and fiberability by C on finite structures.

On a finite structure every subset is taken to be definable.  A set
``S`` of n-tuples is co-analyzed in ``r`` steps with bound ``e`` by a
certificate ``(e, R_1, ..., R_r)``: ``R_r`` is a subset of ``C x M^n``
projecting onto ``S``, and for each ``c`` some parameter ``b`` turns
``(e, R_1^b, ..., R_{r-1}^b)`` into an ``(r-1)``-step co-analysis of the
section ``R_r(c)``.  Tuples of ``R_i`` are flat: ``(c, s_1..s_n, block_i,
..., block_{r-1})`` with ``block_k`` of length ``d_k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .errors import ShapeMismatch, SizeLimitExceeded
from .transseries import ZERO, Transseries, X, dagger, exp_large, truncated_div
from .diffpoly import DiffPolynomial, evaluate

Atom = Hashable
Point = tuple
WITNESS_SEARCH_CAP = 10**6


@dataclass(frozen=True)
class FiniteStructure:
    universe: tuple
    constants: tuple

    def __post_init__(self) -> None:
        if not self.constants:
            raise ShapeMismatch("the constant set C must be nonempty")
        if not set(self.constants) <= set(self.universe):
            raise ShapeMismatch("C must be a subset of M")
        if len(set(self.universe)) != len(self.universe):
            raise ShapeMismatch("duplicate atoms in M")

    @classmethod
    def of(cls, universe: Iterable[Atom], constants: Iterable[Atom]) -> FiniteStructure:
        return cls(tuple(sorted(set(universe))), tuple(sorted(set(constants))))


@dataclass(frozen=True)
class CoAnalysisCertificate:
    e: int
    relations: tuple[frozenset, ...] = ()
    arities: tuple[int, ...] = ()

    @property
    def steps(self) -> int:
        return len(self.relations)


def _validate_shapes(struct: FiniteStructure, S: set, n: int, cert: CoAnalysisCertificate) -> None:
    r = cert.steps
    if cert.e < 0:
        raise ShapeMismatch("negative bound")
    if len(cert.arities) != max(r - 1, 0) or any(d < 0 for d in cert.arities):
        raise ShapeMismatch(f"{r}-step certificate needs {max(r - 1, 0)} block arities")
    universe, consts = set(struct.universe), set(struct.constants)
    for p in S:
        if len(p) != n or not set(p) <= universe:
            raise ShapeMismatch(f"{p!r} is not in M^{n}")
    for i, rel in enumerate(cert.relations):
        width = 1 + n + sum(cert.arities[i:])
        for t in rel:
            if len(t) != width or t[0] not in consts or not set(t) <= universe:
                raise ShapeMismatch(f"tuple {t!r} does not fit relation R_{i + 1}")


def check_certificate(struct: FiniteStructure, S: Iterable[Point], n: int, cert: CoAnalysisCertificate) -> bool:
    """Literal recursive verification of an r-step co-analysis of ``S``."""
    S = set(map(tuple, S))
    _validate_shapes(struct, S, n, cert)
    for d in cert.arities:
        if len(struct.universe) ** d > WITNESS_SEARCH_CAP:
            raise SizeLimitExceeded(f"|M|^{d} exceeds the witness search cap")
    return _check(struct, frozenset(S), n, cert.e, tuple(cert.relations), tuple(cert.arities))


def _section(rel: Iterable[tuple], c: Atom, n: int) -> set:
    return {t[1 : 1 + n] for t in rel if t[0] == c}


def _strip_block(rel: frozenset, b: tuple) -> frozenset:
    """``R^b``: tuples whose trailing block equals ``b``, with it removed."""
    if not b:
        return rel
    k = len(b)
    return frozenset(t[:-k] for t in rel if t[-k:] == b)


def _check(struct: FiniteStructure, S: frozenset, n: int, e: int, rels: tuple, arities: tuple) -> bool:
    if not rels:
        return len(S) <= e
    top = rels[-1]
    if {t[1 : 1 + n] for t in top} != S:
        return False
    if len(rels) == 1:
        return all(len(_section(top, c, n)) <= e for c in struct.constants)
    d = arities[-1]
    lower, lower_arities = rels[:-1], arities[:-1]

    def candidates() -> Iterable[tuple]:
        # parameters that occur in R_{r-1} first, then all of M^d
        seen = set()
        occurring = sorted({t[len(t) - d :] for t in lower[-1]}, key=repr) if d else [()]
        for b in itertools.chain(occurring, itertools.product(struct.universe, repeat=d)):
            if b not in seen:
                seen.add(b)
                yield b

    for c in struct.constants:
        target = frozenset(_section(top, c, n))
        if not any(
            _check(struct, target, n, e, tuple(_strip_block(R, b) for R in lower), lower_arities)
            for b in candidates()
        ):
            return False
    return True


def coanalyzable_bounded(struct: FiniteStructure, S: Iterable[Point], r: int, e: int) -> bool:
    """Closed form ``|S| <= e * |C|^r``.

    Greedy covering gives sufficiency (split S into |C| chunks of size at
    most ``e |C|^(r-1)`` and recurse); necessity follows by induction since
    every section is itself co-analyzable in ``r - 1`` steps.
    """
    return len(set(map(tuple, S))) <= e * len(struct.constants) ** r


# -- fiberability ---------------------------------------------------------


@dataclass(frozen=True)
class Fibration:
    """Map ``assignment: point -> c`` with a sub-fibration of every fiber.

    A level-0 fibration has no map; its domain is just a finite set.
    """

    level: int
    domain: frozenset
    assignment: dict = field(default_factory=dict, compare=False)
    children: dict = field(default_factory=dict, compare=False)

    def fiber(self, c: Atom) -> frozenset:
        return frozenset(p for p, v in self.assignment.items() if v == c)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "domain": sorted(map(list, self.domain)),
            "map": [[list(p), c] for p, c in sorted(self.assignment.items())],
            "fibers": {str(c): f.to_json() for c, f in sorted(self.children.items())},
        }


def fiberable_bounded(
    struct: FiniteStructure, S: Iterable[Point], r: int, e: int, max_size: int = 16
) -> tuple[bool, Fibration | None]:
    """Brute-force search for an r-level fibration with final fibers of size <= e."""
    S = frozenset(map(tuple, S))
    if len(S) > max_size:
        raise SizeLimitExceeded(f"|S| = {len(S)} exceeds fibration search cap {max_size}")
    consts = struct.constants
    found = _fiber_search(S, r, e, len(consts))
    if found is None:
        return False, None
    return True, _label(found, consts, r)


@lru_cache(maxsize=1 << 16)
def _fiber_search(T: frozenset, r: int, e: int, k: int):
    """Nested block structure ``(T, [child, ...])`` or None; blocks are unlabeled."""
    if r == 0:
        return (T, ()) if len(T) <= e else None
    elems = sorted(T, key=repr)
    blocks: list[list] = []

    def extend(i: int):
        if i == len(elems):
            return [_fiber_search(frozenset(b), r - 1, e, k) for b in blocks]
        p = elems[i]
        # an element joins an existing block or opens the next one (labels are symmetric)
        for b in blocks:
            b.append(p)
            if _fiber_search(frozenset(b), r - 1, e, k) is not None:
                got = extend(i + 1)
                if got is not None:
                    b.pop()
                    return got
            b.pop()
        if len(blocks) < k:
            blocks.append([p])
            if _fiber_search(frozenset([p]), r - 1, e, k) is not None:
                got = extend(i + 1)
                if got is not None:
                    blocks.pop()
                    return got
            blocks.pop()
        return None

    children = extend(0)
    return None if children is None else (T, tuple(children))


def _label(node, consts: Sequence[Atom], r: int) -> Fibration:
    T, children = node
    if r == 0:
        return Fibration(0, T)
    assignment, labelled = {}, {}
    for c, child in zip(consts, children):
        for p in child[0]:
            assignment[p] = c
        labelled[c] = _label(child, consts, r - 1)
    return Fibration(r, T, assignment, labelled)


def fibration_to_certificate(
    struct: FiniteStructure, S: Iterable[Point], n: int, r: int, e: int
) -> CoAnalysisCertificate | None:
    """Certificate whose sections are the fibers of a fibration found by search."""
    ok, fib = fiberable_bounded(struct, S, r, e)
    return certificate_from_cover(_fibration_tree(fib), n, r, e) if ok else None


def _fibration_tree(f: Fibration):
    """Cover tree ``(set, {c: subtree})`` of a fibration."""
    return (f.domain, {c: _fibration_tree(g) for c, g in f.children.items()})


def certificate_from_cover(tree, n: int, r: int, e: int) -> CoAnalysisCertificate:
    """Flatten an r-level cover tree into ``(e, R_1, ..., R_r)`` with all d_i = 1.

    ``R_i`` holds ``(c_i, p, c_{i+1}, ..., c_r)`` for ``p`` in the node reached
    by the path ``c_r, ..., c_i`` from the root; the parameter ``b`` chosen for
    a constant is the constant itself.
    """
    if r == 0:
        return CoAnalysisCertificate(e)
    rels: list[set] = [set() for _ in range(r)]

    def walk(node, level: int, path: tuple) -> None:
        _, children = node
        for c, child in children.items():
            for p in child[0]:
                rels[level - 1].add((c,) + tuple(p) + path)
            if level > 1:
                walk(child, level - 1, (c,) + path)

    walk(tree, r, ())
    return CoAnalysisCertificate(e, tuple(frozenset(R) for R in rels), (1,) * (r - 1))


def search_cover(struct: FiniteStructure, S: Iterable[Point], r: int, e: int):
    """Exhaustive search over section covers (sections may overlap).

    Returns an r-level cover tree of ``S`` or None.  Independent of both the
    closed form and the fibration search.
    """
    S = frozenset(map(tuple, S))
    k = len(struct.constants)
    consts = struct.constants
    subsets = [frozenset(c) for size in range(len(S) + 1) for c in itertools.combinations(sorted(S, key=repr), size)]
    good: dict[frozenset, object] = {T: (T, {}) for T in subsets if len(T) <= e}
    for _ in range(r):
        # unions of at most k good sets, remembering one decomposition
        reach: dict[frozenset, tuple] = {frozenset(): ()}
        for _ in range(k):
            nxt = dict(reach)
            for U, parts in reach.items():
                if len(parts) >= k:
                    continue
                for T in good:
                    W = U | T
                    if W not in nxt:
                        nxt[W] = parts + (T,)
            reach = nxt
        good = {W: (W, {c: good[T] for c, T in zip(consts, parts)}) for W, parts in reach.items()}
    return good.get(S)


# -- the T-side example ----------------------------------------------------


def tee_fiberability_demo(grid: Sequence[int] = (-2, -1, 0, 1, 2)) -> dict:
    """Check the two-step fibration of the zero set of ``Y Y'' - Y'^2``.

    Samples ``a exp(b x)`` for ``a != 0`` and ``b`` from ``grid``, plus 0;
    the first map is ``y -> y'/y`` (and ``0 -> 0``), the second sends ``y``
    in the fiber over ``b`` to the constant ``y / exp(b x)``.
    """
    Y = DiffPolynomial.var(1)
    P = Y * DiffPolynomial.var(1, 1, 2) - DiffPolynomial.var(1, 1, 1) ** 2
    samples: list[tuple[int, int, Transseries]] = [(0, 0, ZERO)]
    for a in grid:
        if a == 0:
            continue
        for b in grid:
            samples.append((a, b, exp_large(X * b) * a))

    on_zero_set = all(evaluate(P, [y]).is_zero() for _, _, y in samples)

    def f(y: Transseries) -> Transseries:
        return ZERO if y.is_zero() else dagger(y)

    values = {(a, b): f(y) for a, b, y in samples}
    constant_per_class = all(v == Transseries.const(b) for (a, b), v in values.items() if a != 0) and values[(0, 0)] == ZERO
    distinct = len({values[(a, b)] for a, b, _ in samples if a != 0}) == len({b for a, b, _ in samples if a != 0})

    fibers: dict[Transseries, set] = {}
    for a, b, y in samples:
        fibers.setdefault(f(y), set()).add(y)
    fibers_ok = True
    second_level_ok = True
    for b in sorted({b for a, b, _ in samples if a != 0}):
        expected = {exp_large(X * b) * a for a in grid if a != 0}
        if b == 0:
            expected.add(ZERO)  # the fiber over 0 is all of C
        if fibers.get(Transseries.const(b), set()) != expected:
            fibers_ok = False
        # second map: y -> y / exp(bx) is constant and injective on the fiber
        base = exp_large(X * b)
        images = []
        for y in fibers.get(Transseries.const(b), set()):
            q, exact = truncated_div(y, base, 0)
            if not exact or not q.is_constant():
                second_level_ok = False
            images.append(q)
        if len(set(images)) != len(images):
            second_level_ok = False
    return {
        "samples": len(samples),
        "zero_set": on_zero_set,
        "constant_on_classes": constant_per_class,
        "separates_classes": distinct,
        "fibers_are_orbits": fibers_ok,
        "second_step_injective": second_level_ok,
        "passed": on_zero_set and constant_per_class and distinct and fibers_ok and second_level_ok,
    }
