"""Multiplier ideals, V-filtrations and Hodge ideal I_0 for monomial data.

Everything is driven by the threshold function of the Newton polyhedron:
t(v) is the largest t with v + 1 in t times the polyhedron, computed two
independent ways (exact LP over the convex weights, and a minimum over
the facet inequalities obtained by exact elimination).  The multiplier
ideal at lambda collects the monomials with t(v) > lambda, the
V-filtration on the ring is the non-strict version, and I_0 realizes the
"lambda minus epsilon" rule exactly through that dichotomy, never by a
numeric perturbation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import floor
from typing import Mapping, Sequence

from .monomial import MonomialIdeal, reduce_to_antichain
from .multipoly import MultiPoly
from .polyhedra import (UNBOUNDED, Constraint, constraint, maximize_linear,
                        newton_polyhedron_facets, polyhedron)
from .semigroup import Semigroup, SemigroupError

Exponent = tuple[int, ...]


class Unbounded:
    """Threshold +infinity (the unit ideal)."""

    def __repr__(self):
        return "INFINITE_THRESHOLD"

    def __gt__(self, other):
        return True

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return False


INFINITE_THRESHOLD = Unbounded()


class EmptyIdealError(ValueError):
    pass


@dataclass
class NewtonPolyhedron:
    """conv(generators) + the nonnegative orthant, with cached facets."""

    ideal: MonomialIdeal
    facets: list[Constraint] = field(init=False)

    def __post_init__(self):
        if self.ideal.is_zero():
            raise EmptyIdealError("the zero ideal has no Newton polyhedron")
        self.facets = newton_polyhedron_facets(self.ideal.gens)

    def threshold_facets(self) -> list[Constraint]:
        return [c for c in self.facets if c.bound > 0]

    def threshold(self, v: Exponent) -> Fraction | Unbounded:
        """min over facets of <w, v+1> / bound; +infinity if none binds."""
        best = None
        for c in self.threshold_facets():
            value = sum(w * (x + 1) for w, x in zip(c.coeffs, v)) / c.bound
            if best is None or value < best:
                best = value
        return INFINITE_THRESHOLD if best is None else best

    def scan_box(self, lam: Fraction) -> list[int]:
        """Componentwise bounds containing all minimal exponents with
        threshold beyond lam: a minimal generator has v_i <= lam * c / w_i
        + 1 for some facet with w_i > 0, and 0 where no facet involves i."""
        d = self.ideal.dim
        bounds = [0] * d
        for c in self.threshold_facets():
            for i in range(d):
                if c.coeffs[i] > 0:
                    cap = floor(lam * c.bound / c.coeffs[i]) + 1
                    bounds[i] = max(bounds[i], cap)
        return bounds


def jump_value(ideal: MonomialIdeal, v: Exponent) -> Fraction | Unbounded:
    """t(v) = max { sum mu : mu >= 0, sum mu_g a_g <= v + 1 }, exactly.

    This is the LP route; the facet route in NewtonPolyhedron.threshold is
    an independent computation of the same number.
    """
    if ideal.is_zero():
        raise EmptyIdealError("jump value of the zero ideal")
    if any(x < 0 for x in v):
        raise ValueError(f"negative exponent {v}")
    m = len(ideal.gens)
    rows = []
    for i in range(ideal.dim):
        coeffs = [Fraction(-g[i]) for g in ideal.gens]
        rows.append(constraint(coeffs, -(v[i] + 1)))
    for g_idx in range(m):
        coeffs = [Fraction(1 if j == g_idx else 0) for j in range(m)]
        rows.append(constraint(coeffs, 0))
    result = maximize_linear(polyhedron(m, rows), [Fraction(1)] * m)
    if result is UNBOUNDED:
        return INFINITE_THRESHOLD
    return result


def multiplier_monomial(ideal: MonomialIdeal,
                        lam: Fraction) -> MonomialIdeal:
    """J(I^lambda) = the monomials with threshold strictly beyond lambda."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0 or ideal.is_unit():
        return MonomialIdeal.unit(ideal.dim)
    np = NewtonPolyhedron(ideal)
    box = np.scan_box(lam)
    members = [v for v in iproduct(*(range(b + 1) for b in box))
               if np.threshold(v) > lam]
    return MonomialIdeal.from_generators(ideal.dim,
                                         reduce_to_antichain(members))


def vfil_on_ring(ideal: MonomialIdeal, alpha: Fraction) -> MonomialIdeal:
    """V^alpha R = the monomials with threshold at least alpha."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0 or ideal.is_unit():
        return MonomialIdeal.unit(ideal.dim)
    np = NewtonPolyhedron(ideal)
    box = np.scan_box(alpha)
    members = [v for v in iproduct(*(range(b + 1) for b in box))
               if np.threshold(v) >= alpha]
    return MonomialIdeal.from_generators(ideal.dim,
                                         reduce_to_antichain(members))


def lct(ideal: MonomialIdeal) -> Fraction | Unbounded:
    return jump_value(ideal, (0,) * ideal.dim)


def jumping_numbers(ideal: MonomialIdeal,
                    up_to: Fraction) -> list[Fraction]:
    """All jumping numbers in (0, up_to], sorted.

    Every jumping number is the threshold of some monomial, and the
    minimal monomial realizing it lies in the scan box for up_to.
    """
    up_to = Fraction(up_to)
    if up_to < 0:
        raise ValueError("bound must be nonnegative")
    if ideal.is_unit():
        return []
    np = NewtonPolyhedron(ideal)
    box = np.scan_box(up_to)
    values = set()
    for v in iproduct(*(range(b + 1) for b in box)):
        t = np.threshold(v)
        if t is not INFINITE_THRESHOLD and t <= up_to:
            values.add(t)
    return sorted(values)


class NotSquarefreeError(ValueError):
    """Hodge ideal I_0 is offered in the reduced (squarefree) regime."""


def hodge_ideal_zero(f: MultiPoly, lam: Fraction) -> MonomialIdeal:
    """I_0(f^lambda) = J(f^(lambda - epsilon)), as a non-strict threshold.

    f must be a squarefree monomial (the reduced-divisor regime); the
    epsilon is realized by using >= instead of > on the threshold, never
    by perturbing lambda numerically.
    """
    if not f.is_monomial():
        raise NotSquarefreeError("f must be a monomial")
    exponent = next(iter(f.terms))
    if any(e > 1 for e in exponent):
        raise NotSquarefreeError(
            f"monomial exponent {exponent} is not squarefree")
    ideal = MonomialIdeal.from_generators(len(f.vars), [exponent])
    return vfil_on_ring(ideal, Fraction(lam))


# ---------------------------------------------------------------------------
# V-filtration axioms on sampled windows
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    passed: bool
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def check_v_axioms(sample: Mapping[Fraction, MonomialIdeal],
                   ideal: MonomialIdeal) -> dict[str, AxiomReport]:
    """Check the finitely verifiable filtration axioms on a sample.

    decreasing: larger indices give smaller ideals; compatibility: the
    ideal multiplies V^alpha into V^(alpha+1); tail stability: at the top
    sampled pair the inclusion is an equality; discreteness: the jump
    points on the window form a finite set (reported).
    """
    alphas = sorted(sample)
    report: dict[str, AxiomReport] = {}

    dec = AxiomReport(True)
    for lo, hi in zip(alphas, alphas[1:]):
        if not sample[lo].contains_ideal(sample[hi]):
            dec.passed = False
            dec.failures.append(
                f"V^{hi} is not contained in V^{lo}")
    report["decreasing"] = dec

    compat = AxiomReport(True)
    pairs = [(a, a + 1) for a in alphas if a + 1 in sample]
    if not pairs:
        compat.notes.append("no alpha with alpha+1 sampled")
    for a, b in pairs:
        for g in ideal.gens:
            for v in sample[a].gens:
                shifted = tuple(x + y for x, y in zip(g, v))
                if not sample[b].contains(shifted):
                    compat.passed = False
                    compat.failures.append(
                        f"generator {g} times V^{a} generator {v} "
                        f"is outside V^{b}")
    report["ideal-compatibility"] = compat

    tail = AxiomReport(True)
    if pairs:
        a, b = pairs[-1]
        product_gens = [tuple(x + y for x, y in zip(g, v))
                        for g in ideal.gens for v in sample[a].gens]
        product = MonomialIdeal.from_generators(ideal.dim, product_gens)
        if not (product.contains_ideal(sample[b])
                and sample[b].contains_ideal(product)):
            tail.passed = False
            tail.failures.append(
                f"I * V^{a} differs from V^{b} at the sampled tail")
        else:
            tail.notes.append(f"equality I * V^{a} = V^{b} verified")
    else:
        tail.notes.append("no tail pair sampled")
    report["tail-stability"] = tail

    disc = AxiomReport(True)
    jumps = [hi for lo, hi in zip(alphas, alphas[1:])
             if sample[lo] != sample[hi]]
    disc.notes.append(f"{len(jumps)} jump points on the window: "
                      + ", ".join(str(j) for j in jumps))
    report["discreteness"] = disc
    return report


# ---------------------------------------------------------------------------
# Summand comparisons
# ---------------------------------------------------------------------------


OPEN_QUESTION_NOTE = (
    "whether the intrinsic multiplier ideal always agrees with the "
    "ambient intersection when the extensibility hypotheses fail is an "
    "open question; this report records both computations and takes no "
    "position")


def _semigroup_minimal_gens_of_ideal(semigroup: Semigroup,
                                     ambient: MonomialIdeal,
                                     pad: int = 1) -> tuple[Exponent, ...]:
    bound = (max((x for g in ambient.gens for x in g), default=0)
             + semigroup.index + pad)
    points = [v for v in semigroup.points_in_box([bound] * semigroup.dim)
              if ambient.contains(v)]
    minimal = []
    for v in points:
        reducible = False
        for w in points:
            if w != v and all(a <= b for a, b in zip(w, v)):
                rest = tuple(b - a for a, b in zip(w, v))
                if semigroup.contains(rest):
                    reducible = True
                    break
        if not reducible:
            minimal.append(v)
    return tuple(sorted(minimal))


def vfil_summand(semigroup: Semigroup, ideal_gens: Sequence[Exponent],
                 alpha: Fraction) -> tuple[Exponent, ...]:
    """W^alpha = V^alpha intersected with the summand, as S-generators."""
    gens = tuple(tuple(g) for g in ideal_gens)
    for g in gens:
        if not semigroup.contains(g):
            raise SemigroupError(f"generator {g} is outside the summand")
    ambient = vfil_on_ring(
        MonomialIdeal.from_generators(semigroup.dim, gens), alpha)
    return _semigroup_minimal_gens_of_ideal(semigroup, ambient)


@dataclass
class SummandComparison:
    lam: Fraction
    intersection_gens: tuple[Exponent, ...]
    intrinsic_gens: tuple[Exponent, ...] | None
    intrinsic_route: str
    match: bool | None
    hypotheses_hold: bool
    reasons: list[str]
    note: str


def summand_comparison_report(semigroup: Semigroup,
                              ideal_gens: Sequence[Exponent],
                              lam: Fraction) -> SummandComparison:
    """J_R((IR)^lambda) intersected with A, against the intrinsic J_A.

    The intrinsic route is available when the semigroup is free (a
    polynomial ring on its Hilbert basis); the two agree under the
    differential-extensibility hypotheses, and the report never asserts
    equality outside them.
    """
    lam = Fraction(lam)
    gens = tuple(tuple(g) for g in ideal_gens)
    for g in gens:
        if not semigroup.contains(g):
            raise SemigroupError(f"generator {g} is outside the summand")
    ambient = multiplier_monomial(
        MonomialIdeal.from_generators(semigroup.dim, gens), lam)
    intersection = _semigroup_minimal_gens_of_ideal(semigroup, ambient)

    # The checkable extensibility proxy: every coordinate projection of
    # the lattice must surject (the finite-group hyperplane condition).
    reasons = []
    for i in range(semigroup.dim):
        step = semigroup.projection_step(i)
        if step != 1:
            reasons.append(
                f"projection of the lattice to coordinate {i} is "
                f"{step}*Z, not all of Z")
    hypotheses = not reasons

    intrinsic = None
    route = "unavailable (semigroup is not free)"
    if semigroup.is_free():
        route = "generator-coordinates"
        coords = [semigroup.to_generator_coords(g) for g in gens]
        inner = multiplier_monomial(
            MonomialIdeal.from_generators(semigroup.dim, coords), lam)
        intrinsic = tuple(sorted(semigroup.from_generator_coords(u)
                                 for u in inner.gens))
    match = None if intrinsic is None else intrinsic == intersection
    note = "" if hypotheses else OPEN_QUESTION_NOTE
    if hypotheses and match is False:
        raise AssertionError(
            "intrinsic and intersection multiplier ideals differ although "
            "the extensibility hypotheses hold; this is a bug")
    return SummandComparison(lam, intersection, intrinsic, route, match,
                             hypotheses, reasons, note)
