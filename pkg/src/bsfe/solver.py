"""Linear-ansatz search for functional equations.

Unknown operator coefficients and unknown b-coefficients enter the
candidate equation linearly, so for each target degree of a monic b the
equation reduces to one exact linear system over the rationals.  Degrees
are tried in ascending order; the first solvable degree is minimal within
the declared bounds.  An ansatz term only matters if its multidegree
shift matches the weight of the right-hand side under every grading that
makes the input homogeneous, so the term basis is pruned to those shifts
(a lossless restriction: the graded part of any solution is a solution).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import lcm
from typing import Sequence

from .fs import (B_VAR, FeqSpec, FsContext, b_at_sum, fs_apply,
                 generator_element, verify_feq_formal)
from .linalg import solve_linear_exact
from .multipoly import MultiPoly
from .semigroup import Semigroup, term_preserves_subring
from .weyl import WeylOp

Exponent = tuple[int, ...]


class AnsatzCapError(ValueError):
    """The configured unknown-count cap would be exceeded."""


@dataclass
class AnsatzSpec:
    """Bounds and shape of the search space."""

    max_order: int
    max_coeff_degree: int
    max_s_degree: int
    max_b_degree: int
    kind: str = "principal"
    c_vectors: tuple[Exponent, ...] = ((1,),)
    subring: Semigroup | None = None
    max_unknowns: int = 20000

    def __post_init__(self):
        for bound in (self.max_order, self.max_coeff_degree,
                      self.max_s_degree, self.max_b_degree):
            if bound < 0:
                raise ValueError("ansatz bounds must be nonnegative")
        for c in self.c_vectors:
            if sum(c) != 1:
                raise ValueError(f"c-vector {c} does not sum to 1")


@dataclass
class BsResult:
    b_poly: MultiPoly
    witness: FeqSpec
    certificate_verified: bool
    minimal_within_bounds: bool
    infeasible_degrees: list[int]
    unknown_count: int


@dataclass
class NotFoundWithinBounds:
    """No equation within the declared bounds; not a proof of nonexistence."""

    infeasible_degrees: list[int]
    unknown_count: int
    message: str = ("no functional equation found within the declared "
                    "bounds; this does not certify that none exists")


def _exponents_up_to(dim: int, total: int) -> list[Exponent]:
    out = []
    for e in iproduct(range(total + 1), repeat=dim):
        if sum(e) <= total:
            out.append(e)
    return sorted(out)


def _homogeneity_basis(polys: Sequence[MultiPoly],
                       dim: int) -> list[list[Fraction]]:
    """Basis of the weight vectors making every input homogeneous."""
    rows: list[list[Fraction]] = []
    for p in polys:
        exps = sorted(p.terms)
        if not exps:
            continue
        base = exps[0]
        for e in exps[1:]:
            rows.append([Fraction(a - b) for a, b in zip(e, base)])
    if not rows:
        return [[Fraction(1 if i == j else 0) for j in range(dim)]
                for i in range(dim)]
    solution = solve_linear_exact(rows, [Fraction(0)] * len(rows))
    assert solution is not None
    return solution.nullspace


def _admissible_shifts(w_basis: list[list[Fraction]],
                       c: Exponent, f_tuple: Sequence[MultiPoly],
                       g: MultiPoly | None) -> list[list[Fraction]]:
    """Required values of <w, a-b> for each weight w, per c-vector.

    The g factor appears on both sides, so only the f^c weight matters.
    """
    targets = []
    for w in w_basis:
        total = Fraction(0)
        for ci, f in zip(c, f_tuple):
            exp = sorted(f.terms)[0]
            total += ci * sum(Fraction(wi) * ei for wi, ei in zip(w, exp))
        targets.append(-total)
    return targets


def _term_basis(ansatz: AnsatzSpec, ctx: FsContext,
                c: Exponent, g: MultiPoly | None) -> list[WeylOp]:
    """All normal-ordered ansatz terms compatible with the gradings."""
    d = len(ctx.xvars)
    f_x = [f.drop_vars(ctx.svars) for f in ctx.f_tuple]
    w_basis = _homogeneity_basis(
        list(f_x) + ([g] if g is not None else []), d)
    targets = _admissible_shifts(w_basis, c, f_x, g)
    s_exps = _exponents_up_to(len(ctx.svars), ansatz.max_s_degree)
    terms = []
    for b in _exponents_up_to(d, ansatz.max_order):
        for a in _exponents_up_to(d, ansatz.max_coeff_degree):
            ok = True
            for w, target in zip(w_basis, targets):
                shift = sum(Fraction(wi) * (ai - bi)
                            for wi, ai, bi in zip(w, a, b))
                if shift != target:
                    ok = False
                    break
            if not ok:
                continue
            if ansatz.subring is not None and not term_preserves_subring(
                    ansatz.subring, a, b):
                continue
            for s_exp in s_exps:
                terms.append(WeylOp(ctx.xvars, ctx.svars,
                                    {(a, b, s_exp): Fraction(1)}))
    return terms


def search_feq(f_tuple: Sequence[MultiPoly], g: MultiPoly | None,
               ansatz: AnsatzSpec, xvars: Sequence[str],
               svars: Sequence[str] | None = None):
    """Search for the smallest-degree monic b admitting an equation.

    Returns a BsResult whose certificate is recomputed through the formal
    verifier, or NotFoundWithinBounds.  Raises AnsatzCapError when the
    unknown count would exceed the configured cap.
    """
    xvars = tuple(xvars)
    ell = len(f_tuple)
    if svars is None:
        svars = ("s",) if ell == 1 else tuple(
            f"s{i}" for i in range(1, ell + 1))
    ctx = FsContext(xvars, tuple(f_tuple), svars)
    c_vectors = tuple(sorted(ansatz.c_vectors))
    for c in c_vectors:
        if len(c) != ell:
            raise ValueError(f"c-vector {c} has wrong length")

    columns: list[tuple[Exponent, WeylOp]] = []
    images = {}
    max_k = 0
    for c in c_vectors:
        base = generator_element(ctx, c, g)
        for term in _term_basis(ansatz, ctx, c, g):
            image = fs_apply(term, base).coeff
            if image.num.is_zero():
                continue
            columns.append((c, term))
            images[(c, term)] = image
            max_k = max(max_k, image.k)
    n_unknowns = len(columns) + ansatz.max_b_degree
    if n_unknowns > ansatz.max_unknowns:
        raise AnsatzCapError(
            f"{n_unknowns} unknowns exceed the cap {ansatz.max_unknowns}")

    g_all = (g.with_vars(ctx.allvars) if g is not None
             else MultiPoly.constant(ctx.allvars, 1))
    rhs_polys = []
    for j in range(ansatz.max_b_degree + 1):
        b_j = MultiPoly.monomial((B_VAR,), (j,), 1)
        rhs_polys.append(b_at_sum(b_j, ctx) * g_all
                         * ctx.product ** max_k)

    numerators = {}
    monomials: set[Exponent] = set()
    for key, image in images.items():
        n = image.num * ctx.product ** (max_k - image.k)
        numerators[key] = n
        monomials.update(n.terms)
    for r in rhs_polys:
        monomials.update(r.terms)
    mono_index = {m: i for i, m in enumerate(sorted(monomials))}

    infeasible: list[int] = []
    for k_b in range(ansatz.max_b_degree + 1):
        ncols = len(columns) + k_b
        matrix = [[Fraction(0)] * ncols for _ in range(len(mono_index))]
        rhs = [Fraction(0)] * len(mono_index)
        for col, key in enumerate(columns):
            for e, coeff in numerators[key].terms.items():
                matrix[mono_index[e]][col] = coeff
        for j in range(k_b):
            for e, coeff in rhs_polys[j].terms.items():
                matrix[mono_index[e]][len(columns) + j] = -coeff
        for e, coeff in rhs_polys[k_b].terms.items():
            rhs[mono_index[e]] = coeff
        solution = solve_linear_exact(matrix, rhs)
        if solution is None:
            infeasible.append(k_b)
            continue
        values = solution.particular
        operators: dict[Exponent, WeylOp] = {}
        for (c, term), value in zip(columns, values[:len(columns)]):
            if not value:
                continue
            operators[c] = operators.get(
                c, WeylOp.zero(ctx.xvars, ctx.svars)) + term.scale(value)
        for c in c_vectors:
            operators.setdefault(c, WeylOp.zero(ctx.xvars, ctx.svars))
        b_terms = {(k_b,): Fraction(1)}
        for j, value in enumerate(values[len(columns):]):
            if value:
                b_terms[(j,)] = value
        b_poly = MultiPoly((B_VAR,), b_terms)
        kind = ansatz.kind
        spec = FeqSpec(kind, operators, b_poly,
                       g if kind in ("relative", "bmsMulti") else None)
        check = verify_feq_formal(spec, ctx)
        if not check.verified:
            raise AssertionError(
                "solver produced a witness that fails re-verification")
        return BsResult(b_poly, spec, True, True, infeasible, n_unknowns)
    return NotFoundWithinBounds(infeasible, n_unknowns)


# ---------------------------------------------------------------------------
# The (s+1) reduction for ideals via a generic hyperplane section
# ---------------------------------------------------------------------------


def mustata_lift(f_tuple: Sequence[MultiPoly], xvars: Sequence[str],
                 aux_prefix: str = "y") -> tuple[MultiPoly, tuple[str, ...]]:
    """h = y_1 f_1 + ... + y_l f_l over the ring enlarged by fresh y's.

    The b-polynomial of the tuple equals the b-polynomial of h divided by
    (s + 1); the caller runs the principal search on h and divides.
    """
    if any(f.is_zero() for f in f_tuple):
        raise ValueError("zero entry in the f tuple")
    xvars = tuple(xvars)
    aux = []
    i = 1
    while len(aux) < len(f_tuple):
        name = f"{aux_prefix}{i}"
        if name not in xvars:
            aux.append(name)
        i += 1
    new_vars = xvars + tuple(aux)
    h = MultiPoly.zero(new_vars)
    for name, f in zip(aux, f_tuple):
        h = h + MultiPoly.variable(new_vars, name) * f.with_vars(new_vars)
    return h, new_vars


class NotDivisibleError(ValueError):
    """(s+1) does not divide the given polynomial exactly."""


def divide_by_s_plus_one(b: MultiPoly) -> MultiPoly:
    s_plus_one = MultiPoly((B_VAR,), {(1,): Fraction(1), (0,): Fraction(1)})
    quotient = b.with_vars((B_VAR,)).divide_exact(s_plus_one)
    if quotient is None:
        raise NotDivisibleError(f"(s+1) does not divide {b}")
    return quotient


# ---------------------------------------------------------------------------
# Roots and the minimal exponent
# ---------------------------------------------------------------------------


class NoFiniteRoot:
    """Sentinel: b/(s+1) is constant, so there is no finite largest root."""

    def __repr__(self):
        return "NoFiniteRoot"


NO_FINITE_ROOT = NoFiniteRoot()


class IrrationalRootError(ValueError):
    """A factor with no rational root remains; outside the guaranteed regime."""


def rational_roots(b: MultiPoly) -> list[tuple[Fraction, int]]:
    """All roots with multiplicity; errors if any root is irrational.

    Candidates p/q divide the extreme integer coefficients; roots are
    divided out until a constant remains.
    """
    b = b.with_vars((B_VAR,))
    if b.is_zero():
        raise ValueError("zero polynomial")
    coeffs: dict[int, Fraction] = {e[0]: c for e, c in b.terms.items()}
    roots: list[tuple[Fraction, int]] = []
    zero_mult = 0
    while coeffs and min(coeffs) > 0:
        coeffs = {e - 1: c for e, c in coeffs.items()}
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))

    def poly_of(c: dict[int, Fraction]) -> MultiPoly:
        return MultiPoly((B_VAR,), {(e,): v for e, v in c.items()})

    current = poly_of(coeffs)
    while current.total_degree() > 0:
        degree = current.total_degree()
        scale = lcm(*(c.denominator for c in current.terms.values()))
        int_coeffs = {e[0]: int(c * scale)
                      for e, c in current.terms.items()}
        lead = int_coeffs[degree]
        const = int_coeffs.get(0, 0)
        assert const != 0
        found = None
        for p in _divisors(abs(const)):
            for q in _divisors(abs(lead)):
                for sign in (1, -1):
                    cand = Fraction(sign * p, q)
                    if current.eval({B_VAR: cand}) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise IrrationalRootError(
                f"no rational root of {current}; factor of degree "
                f"{degree} remains")
        mult = 0
        factor = MultiPoly((B_VAR,), {(1,): Fraction(1), (0,): -found})
        while True:
            quotient = current.divide_exact(factor)
            if quotient is None:
                break
            current, mult = quotient, mult + 1
        roots.append((found, mult))
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def minimal_exponent(b: MultiPoly):
    """Negative of the largest root of b/(s+1); NO_FINITE_ROOT if none."""
    reduced = divide_by_s_plus_one(b)
    if reduced.total_degree() == 0:
        return NO_FINITE_ROOT
    roots = rational_roots(reduced)
    largest = max(r for r, _ in roots)
    return -largest
