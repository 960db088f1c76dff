"""Finite-grid zero tests and grid interpolation for polynomials.

Over a Q-algebra, a polynomial of degree at most m in each of its
variables vanishes identically as soon as it vanishes on a product of
m + 1 consecutive integers per variable; consecutive integer differences
are units, so the one-variable factor-and-divide argument applies in any
coefficient algebra.  These helpers decide vanishing on shifted integer
orthants and reconstruct polynomials from grid values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Sequence

from .multipoly import MultiPoly


class GridBoundError(ValueError):
    """Raised when a declared degree bound would make the test unsound."""


def per_var_degree(p: MultiPoly, name: str) -> int:
    return p.degree_in(name)


def grid_zero_test_poly(p: MultiPoly, grid_vars: Sequence[str],
                        bound: int, start: int = 0) -> bool:
    """True iff p vanishes at every point of {start..start+bound}^len(vars).

    Raises GridBoundError when some grid variable has degree exceeding the
    declared bound, since then vanishing on the grid would not certify
    vanishing identically.
    """
    for name in grid_vars:
        deg = p.degree_in(name)
        if deg > bound:
            raise GridBoundError(
                f"degree {deg} in {name} exceeds declared bound {bound}")
    points = iproduct(range(start, start + bound + 1), repeat=len(grid_vars))
    for point in points:
        value = p.eval(dict(zip(grid_vars, point)))
        if isinstance(value, MultiPoly):
            if not value.is_zero():
                return False
        elif value != 0:
            return False
    return True


def vanishes_on_shifted_orthant(
        p: MultiPoly,
        fixed: Mapping[str, int],
        lower: Mapping[str, int]) -> tuple[bool, dict[str, int] | None]:
    """Decide whether p vanishes on {fixed coords} x {v >= lower}.

    Variables of p not listed in ``fixed`` or ``lower`` (s-parameters, for
    instance) are treated as free with lower bound zero.  Returns the
    verdict and, on failure, the lexicographically smallest failing point.
    """
    q = p
    if fixed:
        q = p.eval({k: Fraction(v) for k, v in fixed.items()})
        if isinstance(q, Fraction):
            if q == 0:
                return True, None
            return False, dict(fixed)
    if q.is_zero():
        return True, None
    free = list(q.vars)
    starts = [lower.get(name, 0) for name in free]
    degs = [q.degree_in(name) for name in free]
    ranges = [range(s, s + d + 1) for s, d in zip(starts, degs)]
    for point in iproduct(*ranges):
        value = q.eval(dict(zip(free, point)))
        if value != 0:
            witness = dict(fixed)
            witness.update(dict(zip(free, point)))
            return False, witness
    return True, None


def _lagrange_basis(var: MultiPoly, a: int, m: int, start: int) -> MultiPoly:
    """Product over j != a in {start..start+m} of (s - j)/(a - j)."""
    num = MultiPoly.constant(var.vars, 1)
    denom = Fraction(1)
    for j in range(start, start + m + 1):
        if j == a:
            continue
        num = num * (var - j)
        denom *= a - j
    return num * (Fraction(1) / denom)


def interpolate_from_grid(values: Mapping[tuple[int, ...], object],
                          grid_vars: Sequence[str], bound: int,
                          carrier_vars: Sequence[str] = ()) -> MultiPoly:
    """Unique polynomial of per-variable degree <= bound matching the grid.

    ``values`` must cover all of {0..bound}^len(grid_vars); each value is a
    Fraction, an int, or a MultiPoly over ``carrier_vars``.  The result is
    a polynomial over carrier_vars + grid_vars.
    """
    grid_vars = tuple(grid_vars)
    all_vars = tuple(carrier_vars) + grid_vars
    expected = set(iproduct(range(bound + 1), repeat=len(grid_vars)))
    got = set(tuple(k) for k in values)
    if got != expected:
        missing = sorted(expected - got)[:3]
        raise ValueError(f"incomplete grid; missing points such as {missing}")
    result = MultiPoly.zero(all_vars)
    svars = [MultiPoly.variable(all_vars, name) for name in grid_vars]
    for point, value in sorted(values.items()):
        if isinstance(value, MultiPoly):
            coeff = value.with_vars(all_vars)
        else:
            coeff = MultiPoly.constant(all_vars, Fraction(value))
        if coeff.is_zero():
            continue
        basis = MultiPoly.constant(all_vars, 1)
        for var, a in zip(svars, point):
            basis = basis * _lagrange_basis(var, a, bound, 0)
        result = result + coeff * basis
    return result
