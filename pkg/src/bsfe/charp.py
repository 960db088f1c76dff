"""Prime-characteristic engine: Frobenius, Cartier operators, test ideals.

Polynomials over a prime field are sparse exponent maps with residues as
coefficients.  The twisted projections psi_u (divide the exponent minus
the twist by p^e when possible, else kill the term) generate the Cartier
operators of a polynomial ring, and test ideals of monomial ideals are
the ascending union over levels e of the images of the ideal powers
I^ceil(p^e lambda) under all of them.

The per-level ideal is computed exactly by an integer feasibility test:
x^u lies in the level-e ideal iff some k-fold generator sum w satisfies
w <= p^e u + (p^e - 1) componentwise, i.e. floor(w / p^e) <= u.  A
brute-force enumeration of twisted projections validates this closed form
on small instances in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import ceil, floor
from typing import Iterable, Sequence

from .monomial import MonomialIdeal, reduce_to_antichain
from .multipoly import MultiPoly
from .semigroup import Semigroup, SemigroupError

Exponent = tuple[int, ...]


class CharacteristicError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeFieldPoly:
    """Sparse polynomial with coefficients in the prime field F_p."""

    p: int
    vars: tuple[str, ...]
    terms: tuple[tuple[Exponent, int], ...]  # sorted, residues in [1, p-1]

    @classmethod
    def make(cls, p: int, variables: Sequence[str],
             term_map: dict[Exponent, int]) -> PrimeFieldPoly:
        if p < 2:
            raise CharacteristicError(f"{p} is not a prime")
        clean = {}
        for e, c in term_map.items():
            r = c % p
            if r:
                clean[tuple(e)] = r
        return cls(p, tuple(variables), tuple(sorted(clean.items())))

    @classmethod
    def from_rational(cls, poly: MultiPoly, p: int) -> PrimeFieldPoly:
        terms = {}
        for e, c in poly.terms.items():
            if c.denominator % p == 0:
                raise CharacteristicError(
                    f"denominator {c.denominator} not invertible mod {p}")
            terms[e] = (c.numerator * pow(c.denominator, -1, p)) % p
        return cls.make(p, poly.vars, terms)

    def term_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _compat(self, other: PrimeFieldPoly):
        if self.p != other.p:
            raise CharacteristicError(
                f"characteristics differ: {self.p} vs {other.p}")
        if self.vars != other.vars:
            raise CharacteristicError("variable lists differ")

    def __add__(self, other: PrimeFieldPoly) -> PrimeFieldPoly:
        self._compat(other)
        out = self.term_dict()
        for e, c in other.terms:
            out[e] = (out.get(e, 0) + c) % self.p
        return PrimeFieldPoly.make(self.p, self.vars, out)

    def __mul__(self, other: PrimeFieldPoly) -> PrimeFieldPoly:
        self._compat(other)
        out: dict[Exponent, int] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                key = tuple(a + b for a, b in zip(ea, eb))
                out[key] = (out.get(key, 0) + ca * cb) % self.p
        return PrimeFieldPoly.make(self.p, self.vars, out)

    def frobenius(self, e: int) -> PrimeFieldPoly:
        """r -> r^(p^e); exponents scale and coefficients are fixed."""
        q = self.p ** e
        return PrimeFieldPoly.make(
            self.p, self.vars,
            {tuple(x * q for x in exp): c for exp, c in self.terms})


@dataclass(frozen=True)
class CartierMap:
    """The twisted projection psi_u at level e over F_p[x]."""

    p: int
    level: int
    twist: Exponent

    def __post_init__(self):
        if self.level < 1:
            raise CharacteristicError("level must be at least 1")
        q = self.p ** self.level
        if any(not (0 <= u < q) for u in self.twist):
            raise CharacteristicError(
                f"twist {self.twist} outside [0, {q})^d")


def apply_cartier(psi: CartierMap, poly: PrimeFieldPoly) -> PrimeFieldPoly:
    """psi_u(x^v) = x^((v-u)/p^e) when v >= u and p^e divides v-u, else 0."""
    if psi.p != poly.p:
        raise CharacteristicError(
            f"characteristics differ: {psi.p} vs {poly.p}")
    q = psi.p ** psi.level
    out: dict[Exponent, int] = {}
    for exp, c in poly.terms:
        diff = tuple(v - u for v, u in zip(exp, psi.twist))
        if any(x < 0 or x % q for x in diff):
            continue
        key = tuple(x // q for x in diff)
        out[key] = (out.get(key, 0) + c) % psi.p
    return PrimeFieldPoly.make(psi.p, poly.vars, out)


# ---------------------------------------------------------------------------
# Test ideals of monomial ideals in the polynomial ring
# ---------------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _feasible_sum(gens: Sequence[Exponent], k: int,
                  caps: Sequence[int]) -> bool:
    """Is there an integer n >= 0 with sum n = k and sum n_g gen_g <= caps?"""
    m = len(gens)
    d = len(caps)
    if k == 0:
        return all(c >= 0 for c in caps)
    if m == 0:
        return False
    if m == 1:
        return all(k * g <= c for g, c in zip(gens[0], caps))
    supports = [frozenset(i for i, x in enumerate(g) if x) for g in gens]
    disjoint = all(not (supports[i] & supports[j])
                   for i in range(m) for j in range(i + 1, m))
    if disjoint:
        total = 0
        for g in gens:
            cap_g = k
            for i, x in enumerate(g):
                if x:
                    if caps[i] < 0:
                        cap_g = 0
                        break
                    cap_g = min(cap_g, caps[i] // x)
            total += max(0, cap_g)
            if total >= k:
                return True
        return total >= k
    if m == 2:
        lo, hi = 0, k
        for i in range(d):
            coeff = gens[0][i] - gens[1][i]
            bound = caps[i] - k * gens[1][i]
            if coeff > 0:
                hi = min(hi, floor(Fraction(bound, coeff)))
            elif coeff < 0:
                lo = max(lo, ceil(Fraction(bound, coeff)))
            elif bound < 0:
                return False
        return lo <= hi
    # General case: branch on the first generator with interval pruning.
    hi = k
    for i, x in enumerate(gens[0]):
        if x:
            if caps[i] < 0:
                return False
            hi = min(hi, caps[i] // x)
    for n0 in range(hi, -1, -1):
        rest = [c - n0 * x for c, x in zip(caps, gens[0])]
        if _feasible_sum(gens[1:], k - n0, rest):
            return True
    return False


def tau_level(ideal: MonomialIdeal, p: int, e: int,
              lam: Fraction) -> MonomialIdeal:
    """Sum of Cartier images of I^ceil(p^e lam) at level e.

    x^u belongs iff floor(w / p^e) <= u for some k-fold generator sum w;
    equivalently the integer program  sum n = k,  sum n_g a_g <= p^e u +
    (p^e - 1)  is feasible.
    """
    if ideal.is_zero():
        return MonomialIdeal.zero(ideal.dim)
    q = p ** e
    k = ceil(q * lam)
    if k == 0:
        return MonomialIdeal.unit(ideal.dim)
    box = [ceil(Fraction(k * max(g[i] for g in ideal.gens), q)) + 1
           for i in range(ideal.dim)]
    members = []
    for u in iproduct(*(range(b + 1) for b in box)):
        caps = [q * ui + q - 1 for ui in u]
        if _feasible_sum(ideal.gens, k, caps):
            members.append(u)
    return MonomialIdeal.from_generators(ideal.dim,
                                         reduce_to_antichain(members))


def tau_level_by_generator_formula(ideal: MonomialIdeal, p: int, e: int,
                                   lam: Fraction) -> MonomialIdeal:
    """Same level ideal through the per-generator closed form.

    Enumerates the k-fold generator sums w of I^k and takes the monomials
    with exponents max(0, ceil((w_i + 1)/p^e) - 1) = floor(w_i / p^e).
    Exponential in the generator count; used for cross-validation.
    """
    q = p ** e
    k = ceil(q * lam)
    if k == 0:
        return MonomialIdeal.unit(ideal.dim)
    floors = {tuple(max(0, ceil(Fraction(w_i + 1, q)) - 1) for w_i in w)
              for w in ideal.power_sums(k)}
    return MonomialIdeal.from_generators(ideal.dim,
                                         reduce_to_antichain(floors))


def cartier_images_brute_force(ideal: MonomialIdeal, p: int, e: int,
                               lam: Fraction,
                               multiple_box: int | None = None
                               ) -> MonomialIdeal:
    """Oracle: enumerate psi_u(x^(w+m)) over twists and bounded multiples."""
    q = p ** e
    k = ceil(q * lam)
    if k == 0:
        return MonomialIdeal.unit(ideal.dim)
    bound = 2 * q if multiple_box is None else multiple_box
    achieved = set()
    gens = list(ideal.power(k).gens)
    for w in gens:
        for m in iproduct(range(bound + 1), repeat=ideal.dim):
            v = tuple(a + b for a, b in zip(w, m))
            for u in iproduct(range(q), repeat=ideal.dim):
                diff = tuple(x - y for x, y in zip(v, u))
                if any(x < 0 or x % q for x in diff):
                    continue
                achieved.add(tuple(x // q for x in diff))
    return MonomialIdeal.from_generators(ideal.dim,
                                         reduce_to_antichain(achieved))


@dataclass
class TestIdealReport:
    ideal: MonomialIdeal
    levels: list[MonomialIdeal]
    stabilized_at: int | None

    @property
    def unstabilized(self) -> bool:
        return self.stabilized_at is None


def test_ideal_monomial(ideal: MonomialIdeal, lam: Fraction, p: int,
                        e_max: int = 4) -> TestIdealReport:
    """Ascending union of level ideals, with a stabilization report.

    Stops as soon as two consecutive levels agree; a result that never
    stabilizes within e_max is flagged.
    """
    if not _is_prime(p):
        raise CharacteristicError(f"{p} is not prime")
    if lam < 0:
        raise ValueError("the exponent must be nonnegative")
    levels = []
    union = MonomialIdeal.zero(ideal.dim)
    stabilized = None
    for e in range(1, e_max + 1):
        level = tau_level(ideal, p, e, lam)
        union = MonomialIdeal.from_generators(
            ideal.dim, union.gens + level.gens)
        levels.append(level)
        if len(levels) >= 2 and levels[-1] == levels[-2]:
            stabilized = e - 1
            break
    return TestIdealReport(union, levels, stabilized)


# ---------------------------------------------------------------------------
# Cartier maps on semigroup summands
# ---------------------------------------------------------------------------


class CartierHypothesisError(ValueError):
    """The level-extensibility hypotheses fail for this prime."""


def cartier_restrict(semigroup: Semigroup, psi: CartierMap):
    """The induced Cartier map on the summand: a -> beta(psi(a)).

    Requires the checkable level-extensibility hypotheses at p (the prime
    must not divide the lattice index); under them the restricted maps
    span the Cartier operators of the summand.
    """
    if semigroup.index % psi.p == 0:
        raise CartierHypothesisError(
            f"prime {psi.p} divides the lattice index {semigroup.index}")

    def restricted(poly: PrimeFieldPoly) -> PrimeFieldPoly:
        for e, _ in poly.terms:
            if not semigroup.contains(e):
                raise SemigroupError(
                    f"monomial exponent {e} is outside the summand")
        image = apply_cartier(psi, poly)
        kept = {e: c for e, c in image.terms if semigroup.contains(e)}
        return PrimeFieldPoly.make(poly.p, poly.vars, kept)

    return restricted


def _semigroup_ideal_exponent_test(semigroup: Semigroup,
                                   gens: Sequence[Exponent]):
    def member(v: Exponent) -> bool:
        if not semigroup.contains(v):
            return False
        for g in gens:
            rest = tuple(a - b for a, b in zip(v, g))
            if all(x >= 0 for x in rest) and semigroup.contains(rest):
                return True
        return False
    return member


def _semigroup_minimal_gens(semigroup: Semigroup, member,
                            box: Sequence[int]) -> tuple[Exponent, ...]:
    """Minimal generators of an upward-closed subset of the semigroup."""
    points = [v for v in semigroup.points_in_box(box) if member(v)]
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


def _power_gens_in_summand(semigroup: Semigroup,
                           gens: Sequence[Exponent], k: int
                           ) -> tuple[Exponent, ...]:
    current = {(0,) * semigroup.dim}
    for _ in range(k):
        current = {tuple(a + b for a, b in zip(p, g))
                   for p in current for g in gens}
    return tuple(sorted(current))


def intrinsic_tau_level_summand(semigroup: Semigroup,
                                gens: Sequence[Exponent], lam: Fraction,
                                p: int, e: int) -> tuple[Exponent, ...]:
    """Level ideal from semigroup Cartier maps, as S-minimal generators.

    Twists run over S in [0, p^e)^d; a monomial x^w of the summand lies in the
    level ideal iff w dominates some quotient (j - u)/p^e with j in the
    ideal power and u a twist.
    """
    q = p ** e
    k = ceil(q * lam)
    power_gens = _power_gens_in_summand(semigroup, gens, k)
    member_power = _semigroup_ideal_exponent_test(semigroup, power_gens)
    twists = [u for u in semigroup.points_in_box([q - 1] * semigroup.dim)]
    max_coord = max((g[i] for g in power_gens for i in range(semigroup.dim)),
                    default=0)
    quot_box = ceil(Fraction(max_coord, q)) + semigroup.index + 1

    quotients = set()
    for kvec in iproduct(range(quot_box + 1), repeat=semigroup.dim):
        for u in twists:
            j = tuple(q * a + b for a, b in zip(kvec, u))
            if member_power(j):
                quotients.add(kvec)
                break

    def member_tau(w: Exponent) -> bool:
        return any(all(a >= b for a, b in zip(w, kv)) for kv in quotients)

    box = [quot_box + semigroup.index + 1] * semigroup.dim
    return _semigroup_minimal_gens(semigroup, member_tau, box)


@dataclass
class SummandTestIdealReport:
    retraction_gens: tuple[Exponent, ...]
    intrinsic_gens: tuple[Exponent, ...] | None
    intrinsic_route: str
    match: bool | None
    hypotheses_hold: bool
    reasons: list[str]


def test_ideal_summand(semigroup: Semigroup, ideal_gens: Sequence[Exponent],
                       lam: Fraction, p: int,
                       e_max: int = 3) -> SummandTestIdealReport:
    """Compare the intrinsic and retraction test ideals on the summand.

    The retraction route computes the polynomial-ring test ideal of the
    expanded ideal and intersects the exponents with the semigroup.  The
    intrinsic route uses the summand's own Cartier theory: through
    generator coordinates when the semigroup is free, else through the
    restricted twisted projections, which span everything exactly when
    the level-extensibility hypotheses hold at p.  Under those hypotheses
    a mismatch is an implementation bug and raises; otherwise the
    comparison is reported without asserting equality.
    """
    gens = tuple(tuple(g) for g in ideal_gens)
    for g in gens:
        if not semigroup.contains(g):
            raise SemigroupError(f"ideal generator {g} is not in the summand")
    ambient = MonomialIdeal.from_generators(semigroup.dim, gens)
    tau_r = test_ideal_monomial(ambient, lam, p, e_max).ideal
    box_bound = (max((g[i] for g in tau_r.gens for i in range(semigroup.dim)),
                     default=0) + semigroup.index + 1)
    retraction = _semigroup_minimal_gens(
        semigroup, lambda v: tau_r.contains(v),
        [box_bound] * semigroup.dim)

    hypotheses, reasons = semigroup.level_extensibility_hypotheses(p)
    intrinsic = None
    route = "unavailable"
    if semigroup.is_free():
        route = "generator-coordinates"
        coords = [semigroup.to_generator_coords(g) for g in gens]
        inner = MonomialIdeal.from_generators(semigroup.dim, coords)
        tau_inner = test_ideal_monomial(inner, lam, p, e_max).ideal
        intrinsic = tuple(sorted(semigroup.from_generator_coords(u)
                                 for u in tau_inner.gens))
    elif hypotheses:
        route = "restricted-cartier"
        levels = []
        for e in range(1, e_max + 1):
            levels.append(intrinsic_tau_level_summand(
                semigroup, gens, lam, p, e))
            if len(levels) >= 2 and levels[-1] == levels[-2]:
                break
        union_members = set()
        for level in levels:
            union_members.update(level)
        member = _semigroup_ideal_exponent_test(semigroup,
                                                tuple(union_members))
        box = (max((x for g in union_members for x in g), default=0)
               + semigroup.index + 1)
        intrinsic = _semigroup_minimal_gens(semigroup, member,
                                            [box] * semigroup.dim)

    match = None if intrinsic is None else (intrinsic == retraction)
    if hypotheses and match is False:
        raise AssertionError(
            "intrinsic and retraction test ideals differ although the "
            "extensibility hypotheses hold; this is a bug")
    return SummandTestIdealReport(retraction, intrinsic, route, match,
                                  hypotheses, reasons)
