"""Exact rational polyhedra via Fourier-Motzkin elimination.

A polyhedron is a finite list of constraints <w, x> >= c or <w, x> > c
with rational data.  Feasibility and linear maximization are decided by
eliminating variables one at a time, with exact bookkeeping of strict
inequalities.  Dimensions in scope are small, so no LP solver is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


class _Unbounded:
    def __repr__(self) -> str:
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()


class InfeasibleError(ValueError):
    """Raised when an operation requires a nonempty polyhedron."""


@dataclass(frozen=True)
class Constraint:
    """<coeffs, x> >= bound, or > bound when strict."""

    coeffs: tuple[Fraction, ...]
    bound: Fraction
    strict: bool = False

    def normalized(self) -> Constraint:
        scale = lcm(*(c.denominator for c in self.coeffs),
                    self.bound.denominator)
        ints = [int(c * scale) for c in self.coeffs] + [int(self.bound * scale)]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        return Constraint(tuple(Fraction(v) for v in ints[:-1]),
                          Fraction(ints[-1]), self.strict)


def constraint(coeffs: Sequence[Fraction | int], bound: Fraction | int,
               strict: bool = False) -> Constraint:
    return Constraint(tuple(Fraction(c) for c in coeffs), Fraction(bound),
                      strict)


@dataclass(frozen=True)
class PolyhedronQ:
    """Conjunction of rational linear inequalities in a fixed dimension."""

    dim: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.dim:
                raise ValueError(
                    f"constraint of dimension {len(c.coeffs)} in "
                    f"{self.dim}-dimensional polyhedron")


def polyhedron(dim: int, rows: Sequence[Constraint]) -> PolyhedronQ:
    return PolyhedronQ(dim, tuple(rows))


def _combine(lower: Constraint, upper: Constraint, j: int) -> Constraint:
    """Eliminate x_j from a lower row (coeff > 0) and an upper row (< 0)."""
    lo = lower.coeffs[j]
    up = -upper.coeffs[j]
    coeffs = tuple(a * up + b * lo
                   for a, b in zip(lower.coeffs, upper.coeffs))
    return Constraint(coeffs, lower.bound * up + upper.bound * lo,
                      lower.strict or upper.strict)


def _trivial(c: Constraint) -> bool | None:
    """For a row with zero coefficients: True if holds, False if not, else None."""
    if any(c.coeffs):
        return None
    if c.strict:
        return 0 > c.bound
    return 0 >= c.bound


def eliminate_variable(rows: list[Constraint], j: int) -> list[Constraint]:
    zero, lower, upper = [], [], []
    for c in rows:
        if c.coeffs[j] > 0:
            lower.append(c)
        elif c.coeffs[j] < 0:
            upper.append(c)
        else:
            zero.append(c)
    out = list(zero)
    for lo in lower:
        for up in upper:
            out.append(_combine(lo, up, j))
    seen: set[tuple] = set()
    result = []
    for c in out:
        if _trivial(c) is True:
            continue
        n = c.normalized()
        key = (n.coeffs, n.bound, n.strict)
        if key not in seen:
            seen.add(key)
            result.append(n)
    return result


def polyhedron_feasible(poly: PolyhedronQ) -> bool:
    """Exact feasibility over the rationals by full elimination."""
    rows = [c.normalized() for c in poly.constraints]
    for j in range(poly.dim):
        rows = eliminate_variable(rows, j)
    return all(_trivial(c) is not False for c in rows)


def maximize_linear(poly: PolyhedronQ,
                    objective: Sequence[Fraction | int]):
    """Exact max of <objective, x> over the polyhedron.

    Returns the maximum as a Fraction, or UNBOUNDED.  Raises
    InfeasibleError on an empty polyhedron.  With strict upper constraints
    the supremum may not be attained; the supremum is still returned and
    the caller is expected to use non-strict systems when attainment
    matters.
    """
    if len(objective) != poly.dim:
        raise ValueError(
            f"objective of dimension {len(objective)} for "
            f"{poly.dim}-dimensional polyhedron")
    obj = [Fraction(v) for v in objective]
    # Introduce t = <objective, x> as an extra last coordinate.
    rows = []
    for c in poly.constraints:
        rows.append(Constraint(c.coeffs + (Fraction(0),), c.bound,
                               c.strict).normalized())
    rows.append(constraint([-v for v in obj] + [1], 0))
    rows.append(constraint(obj + [-1], 0))
    for j in range(poly.dim):
        rows = eliminate_variable(rows, j)

    best_upper = None
    upper_strict = False
    for c in rows:
        t_coeff = c.coeffs[poly.dim]
        if t_coeff == 0:
            if _trivial(Constraint((), c.bound, c.strict)) is False:
                raise InfeasibleError(
                    "maximize_linear on an empty polyhedron")
        elif t_coeff < 0:
            # t <= bound / t_coeff (sign flip)
            ub = c.bound / t_coeff
            if best_upper is None or ub < best_upper:
                best_upper, upper_strict = ub, c.strict
            elif ub == best_upper and c.strict:
                upper_strict = True
    for c in rows:
        if c.coeffs[poly.dim] > 0 and best_upper is not None:
            lb = c.bound / c.coeffs[poly.dim]
            if lb > best_upper or (lb == best_upper
                                   and (c.strict or upper_strict)):
                raise InfeasibleError(
                    "maximize_linear on an empty polyhedron")
    if best_upper is None:
        return UNBOUNDED
    return best_upper


def newton_polyhedron_facets(
        generators: Sequence[Sequence[int]]) -> list[Constraint]:
    """Inequality description of conv(generators) + R_{>=0}^d.

    Produced from the generator form by exact elimination of the convex
    weights.  Every returned row has nonnegative normal coefficients (the
    recession cone is the nonnegative orthant); rows with positive bound
    are the facets that constrain the scaling threshold.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        raise ValueError("empty generator list")
    d = len(gens[0])
    m = len(gens)
    rows: list[Constraint] = []
    # Coordinates: x_1..x_d, mu_1..mu_m.
    for i in range(d):
        coeffs = [Fraction(0)] * (d + m)
        coeffs[i] = Fraction(1)
        for g_idx, g in enumerate(gens):
            coeffs[d + g_idx] = Fraction(-g[i])
        rows.append(constraint(coeffs, 0))
    for g_idx in range(m):
        coeffs = [Fraction(0)] * (d + m)
        coeffs[d + g_idx] = Fraction(1)
        rows.append(constraint(coeffs, 0))
    ones = [Fraction(0)] * d + [Fraction(1)] * m
    rows.append(constraint(ones, 1))
    rows.append(constraint([-v for v in ones], -1))
    for j in range(d + m - 1, d - 1, -1):
        rows = eliminate_variable(rows, j)
    out = []
    for c in rows:
        trimmed = Constraint(c.coeffs[:d], c.bound, c.strict).normalized()
        if _trivial(trimmed) is True:
            continue
        out.append(trimmed)
    return out
