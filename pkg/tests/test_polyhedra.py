import random
from fractions import Fraction

import pytest

from bsfe.polyhedra import (UNBOUNDED, InfeasibleError, constraint,
                            maximize_linear, newton_polyhedron_facets,
                            polyhedron, polyhedron_feasible)
from oracles import lp_maximum_by_vertex_enumeration


def test_unit_interval_feasible():
    poly = polyhedron(1, [constraint([1], 0), constraint([-1], -1)])
    assert polyhedron_feasible(poly)


def test_strict_contradiction_infeasible():
    poly = polyhedron(1, [constraint([1], 0, strict=True),
                          constraint([-1], 0, strict=True)])
    assert not polyhedron_feasible(poly)


def test_boundary_strictness_matters():
    # x >= 1 and x < 1 is empty, but x >= 1 and x <= 1 is a point.
    empty = polyhedron(1, [constraint([1], 1),
                           constraint([-1], -1, strict=True)])
    point = polyhedron(1, [constraint([1], 1), constraint([-1], -1)])
    assert not polyhedron_feasible(empty)
    assert polyhedron_feasible(point)


def test_threshold_lp_for_two_squares():
    # max mu1 + mu2 with 2 mu_i <= 1, mu >= 0 is 1; this is the value at
    # the origin for the ideal (x^2, y^2).
    poly = polyhedron(2, [constraint([-2, 0], -1), constraint([0, -2], -1),
                          constraint([1, 0], 0), constraint([0, 1], 0)])
    assert maximize_linear(poly, [1, 1]) == 1


def test_unbounded_direction():
    poly = polyhedron(2, [constraint([1, 0], 0), constraint([0, 1], 0)])
    assert maximize_linear(poly, [1, 1]) is UNBOUNDED


def test_maximize_on_empty_raises():
    poly = polyhedron(1, [constraint([1], 1), constraint([-1], 0)])
    with pytest.raises(InfeasibleError):
        maximize_linear(poly, [1])


def test_agrees_with_vertex_enumeration_on_corpus():
    rng = random.Random(11)
    checked = 0
    while checked < 30:
        dim = rng.randint(1, 4)
        nrows = rng.randint(dim, 8)
        rows = []
        for _ in range(nrows):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(dim)]
            rows.append((coeffs, Fraction(rng.randint(-4, 1))))
        # Keep the region bounded inside a box so vertices exist.
        for i in range(dim):
            e = [Fraction(0)] * dim
            e[i] = Fraction(1)
            rows.append((list(e), Fraction(0)))
            rows.append(([-x for x in e], Fraction(-5)))
        poly = polyhedron(dim, [constraint(w, c) for w, c in rows])
        if not polyhedron_feasible(poly):
            continue
        objective = [Fraction(rng.randint(-3, 3)) for _ in range(dim)]
        ours = maximize_linear(poly, objective)
        oracle = lp_maximum_by_vertex_enumeration(rows, objective)
        assert ours == oracle
        checked += 1


def test_newton_facets_two_squares():
    facets = newton_polyhedron_facets([(2, 0), (0, 2)])
    positive = [c for c in facets if c.bound > 0]
    assert len(positive) == 1
    (c,) = positive
    # x + y >= 2 after normalization.
    assert list(c.coeffs) == [1, 1] and c.bound == 2


def test_newton_facets_nonnegative_normals():
    facets = newton_polyhedron_facets([(4, 1), (1, 3), (0, 5)])
    for c in facets:
        assert all(w >= 0 for w in c.coeffs)
