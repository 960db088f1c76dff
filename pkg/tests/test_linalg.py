import random
from fractions import Fraction

from bsfe.linalg import solve_linear_exact


def F(x):
    return Fraction(x)


def test_identity_system():
    sol = solve_linear_exact([[F(1), F(0)], [F(0), F(1)]], [F(3), F(-7)])
    assert sol.particular == [F(3), F(-7)]
    assert sol.nullspace == []
    assert sol.unique


def test_underdetermined_nullspace():
    sol = solve_linear_exact([[F(1), F(1)]], [F(0)])
    assert sol.particular == [F(0), F(0)]
    assert len(sol.nullspace) == 1
    v = sol.nullspace[0]
    assert v[0] + v[1] == 0 and v != [F(0), F(0)]


def test_infeasible():
    assert solve_linear_exact([[F(1)], [F(1)]], [F(0), F(1)]) is None


def test_operator_coefficient_system():
    # c * (2s+2)(2s+1) = b2 s^2 + b1 s + b0 with monic normalization
    # b2 = 1 forces c = 1/4, giving b = (s+1)(s+1/2).
    # Unknowns (c, b1, b0); rows are coefficients of s^2, s^1, s^0.
    matrix = [[F(4), F(0), F(0)],
              [F(6), F(-1), F(0)],
              [F(2), F(0), F(-1)]]
    rhs = [F(1), F(0), F(0)]
    sol = solve_linear_exact(matrix, rhs)
    c, b1, b0 = sol.particular
    assert c == F(1, 4)
    assert b1 == F(3, 2) and b0 == F(1, 2)  # (s+1)(s+1/2)


def test_random_solutions_are_exact():
    rng = random.Random(7)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        matrix = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                   for _ in range(cols)] for _ in range(rows)]
        rhs = [Fraction(rng.randint(-6, 6)) for _ in range(rows)]
        sol = solve_linear_exact(matrix, rhs)
        if sol is None:
            continue
        for row, b in zip(matrix, rhs):
            assert sum(a * x for a, x in zip(row, sol.particular)) == b
        for vec in sol.nullspace:
            for row in matrix:
                assert sum(a * x for a, x in zip(row, vec)) == 0


def test_rank_deficient_consistency():
    matrix = [[F(1), F(2)], [F(2), F(4)]]
    assert solve_linear_exact(matrix, [F(1), F(2)]) is not None
    assert solve_linear_exact(matrix, [F(1), F(3)]) is None
