"""Monomial ideals as exponent antichains, and staircase region calculus.

The complement of a staircase region in N^d, and intersections of such
sets, decompose into finitely many axis-aligned boxes.  Boxes with finite
ranges in some coordinates are further split into regions with those
coordinates fixed and the rest free above a lower bound; this is the shape
on which polynomial vanishing can be decided by a finite grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Iterator, Sequence

Exponent = tuple[int, ...]


def dominates(v: Exponent, w: Exponent) -> bool:
    """v >= w componentwise."""
    return all(a >= b for a, b in zip(v, w))


def reduce_to_antichain(points: Iterable[Exponent]) -> tuple[Exponent, ...]:
    """Minimal elements under componentwise <=, sorted for determinism."""
    pts = sorted(set(tuple(p) for p in points))
    minimal: list[Exponent] = []
    for p in pts:
        if not any(dominates(p, q) for q in minimal):
            minimal = [q for q in minimal if not dominates(q, p)]
            minimal.append(p)
    return tuple(sorted(minimal))


class NotMonomialError(ValueError):
    """Raised when an operation requires monomial input."""


@dataclass(frozen=True)
class MonomialIdeal:
    """Finite antichain of exponent vectors in N^d (minimal generators)."""

    dim: int
    gens: tuple[Exponent, ...]

    @classmethod
    def from_generators(cls, dim: int,
                        gens: Iterable[Exponent]) -> MonomialIdeal:
        gens = [tuple(g) for g in gens]
        for g in gens:
            if len(g) != dim:
                raise ValueError(f"generator {g} has wrong dimension")
            if any(e < 0 for e in g):
                raise ValueError(f"negative exponent in generator {g}")
        return cls(dim, reduce_to_antichain(gens))

    @classmethod
    def unit(cls, dim: int) -> MonomialIdeal:
        return cls(dim, ((0,) * dim,))

    @classmethod
    def zero(cls, dim: int) -> MonomialIdeal:
        return cls(dim, ())

    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    def is_zero(self) -> bool:
        return not self.gens

    def contains(self, v: Exponent) -> bool:
        return any(dominates(v, g) for g in self.gens)

    def contains_ideal(self, other: MonomialIdeal) -> bool:
        return all(self.contains(g) for g in other.gens)

    def power(self, k: int) -> MonomialIdeal:
        """I^k; generators are k-fold sums of generators, reduced."""
        if k < 0:
            raise ValueError("negative ideal power")
        if k == 0:
            return MonomialIdeal.unit(self.dim)
        current = [(0,) * self.dim]
        for _ in range(k):
            current = list(reduce_to_antichain(
                tuple(a + b for a, b in zip(p, g))
                for p in current for g in self.gens))
        return MonomialIdeal(self.dim, tuple(sorted(current)))

    def power_sums(self, k: int) -> Iterator[Exponent]:
        """All k-fold generator sums, without antichain reduction."""
        from itertools import combinations_with_replacement
        for combo in combinations_with_replacement(self.gens, k):
            total = [0] * self.dim
            for g in combo:
                for i, e in enumerate(g):
                    total[i] += e
            yield tuple(total)

    def __str__(self) -> str:
        if not self.gens:
            return "<0>"
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


# ---------------------------------------------------------------------------
# Box calculus on N^d
# ---------------------------------------------------------------------------

INF = None  # open upper end


@dataclass(frozen=True)
class Box:
    """Product of integer intervals [lo_i, hi_i], hi_i = None meaning +oo."""

    lo: tuple[int, ...]
    hi: tuple[int | None, ...]

    def is_empty(self) -> bool:
        return any(h is not None and h < l for l, h in zip(self.lo, self.hi))

    def intersect(self, other: Box) -> Box:
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(b if a is None else (a if b is None else min(a, b))
                   for a, b in zip(self.hi, other.hi))
        return Box(lo, hi)

    def contains(self, v: Exponent) -> bool:
        return all(l <= x and (h is None or x <= h)
                   for x, l, h in zip(v, self.lo, self.hi))


def full_box(dim: int) -> Box:
    return Box((0,) * dim, (INF,) * dim)


def staircase_boxes(gens: Sequence[Exponent], dim: int) -> list[Box]:
    """The upward-closed set {v : v >= g for some g} as boxes."""
    return [Box(tuple(g), (INF,) * dim) for g in gens]


def staircase_complement_boxes(gens: Sequence[Exponent],
                               dim: int) -> list[Box]:
    """N^d minus the staircase of gens, as disjoint boxes.

    The complement of a single orthant {v >= g} is split disjointly as the
    union over i of {v_i < g_i, v_j >= g_j for j < i}; intersecting over
    the generators keeps the pieces disjoint.
    """
    boxes = [full_box(dim)]
    for g in gens:
        pieces: list[Box] = []
        for i in range(dim):
            if g[i] == 0:
                continue
            lo = [0] * dim
            hi: list[int | None] = [INF] * dim
            for j in range(i):
                lo[j] = g[j]
            hi[i] = g[i] - 1
            pieces.append(Box(tuple(lo), tuple(hi)))
        boxes = [b.intersect(p) for b in boxes for p in pieces]
        boxes = [b for b in boxes if not b.is_empty()]
    return boxes


def intersect_box_lists(a: Sequence[Box], b: Sequence[Box]) -> list[Box]:
    out = [x.intersect(y) for x in a for y in b]
    return [box for box in out if not box.is_empty()]


def box_regions(box: Box) -> Iterator[tuple[dict[int, int], dict[int, int]]]:
    """Split a box into (fixed coordinates, free lower bounds) regions.

    Coordinates with a finite upper end are enumerated value by value;
    the remaining coordinates are free above their lower bounds.
    """
    finite = [i for i, h in enumerate(box.hi) if h is not None]
    free_lower = {i: box.lo[i]
                  for i, h in enumerate(box.hi) if h is None}
    ranges = [range(box.lo[i], box.hi[i] + 1) for i in finite]
    for values in iproduct(*ranges):
        yield dict(zip(finite, values)), dict(free_lower)
