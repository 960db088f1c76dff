"""Independent oracles used to freeze expected values in the tests.

Each oracle recomputes a quantity along a different route than the code
under test: derivatives by repeated formal differentiation instead of
falling-factorial coefficients, linear programs by exhaustive vertex
enumeration instead of elimination, and operator actions on monomial
bases instead of algebraic normal ordering.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from bsfe.multipoly import MultiPoly
from bsfe.weyl import WeylOp


def apply_weyl_by_iterated_derivative(op: WeylOp, p: MultiPoly,
                                      s_values=None) -> MultiPoly:
    """Apply term by term, one formal partial derivative at a time."""
    allvars = op.xvars + op.svars
    p = p.with_vars(allvars)
    total = MultiPoly.zero(allvars)
    for (a, b, g), c in op.terms.items():
        image = p
        for name, power in zip(op.xvars, b):
            for _ in range(power):
                image = image.diff(name)
        mono = MultiPoly.monomial(allvars, a + g, c)
        total = total + mono * image
    if s_values is not None:
        evaluated = total.eval(dict(zip(op.svars, s_values)))
        if isinstance(evaluated, Fraction):
            return MultiPoly.constant(op.xvars, evaluated)
        return evaluated.with_vars(op.xvars)
    return total


def lp_maximum_by_vertex_enumeration(rows, objective):
    """Max of <objective, x> over {<w,x> >= c} by checking all basic points.

    rows are (coeffs, bound) pairs, all non-strict.  Returns None when no
    vertex is feasible (unbounded or empty; callers only use this on
    bounded feasible systems).
    """
    rows = [([Fraction(x) for x in w], Fraction(c)) for w, c in rows]
    dim = len(rows[0][0])
    best = None
    for subset in combinations(range(len(rows)), dim):
        matrix = [rows[i][0] for i in subset]
        rhs = [rows[i][1] for i in subset]
        point = _solve_square(matrix, rhs)
        if point is None:
            continue
        feasible = all(
            sum(w * x for w, x in zip(coeffs, point)) >= bound
            for coeffs, bound in rows)
        if not feasible:
            continue
        value = sum(Fraction(o) * x for o, x in zip(objective, point))
        if best is None or value > best:
            best = value
    return best


def _solve_square(matrix, rhs):
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if aug[i][col]:
                pivot = i
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [u - f * v for u, v in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def random_poly(rng, variables, max_degree=3, max_terms=4,
                coeff_range=6) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = tuple(rng.randint(0, max_degree)
                    for _ in range(len(variables)))
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 3)
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(num, den)
    return MultiPoly(variables, {e: c for e, c in terms.items() if c})


def random_weyl(rng, xvars, svars=(), max_order=2, max_coeff=2,
                max_s=1, max_terms=3) -> WeylOp:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        a = tuple(rng.randint(0, max_coeff) for _ in xvars)
        b = tuple(rng.randint(0, max_order) for _ in xvars)
        if sum(b) > max_order:
            b = tuple(0 for _ in xvars)
        g = tuple(rng.randint(0, max_s) for _ in svars)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            terms[(a, b, g)] = terms.get((a, b, g), Fraction(0)) + c
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        terms = {(tuple(0 for _ in xvars), tuple(0 for _ in xvars),
                  tuple(0 for _ in svars)): Fraction(1)}
    return WeylOp(xvars, svars, terms)
