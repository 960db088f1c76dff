"""Normally ordered arithmetic in the Weyl algebra D[s_1..s_l].

Operators are finite sums of terms c * x^a d^b s^g stored in normal order
(all multiplications left of all derivatives); the s-parameters are
central.  Products are normal-ordered through the Leibniz rule

    d^n x^m = sum_k C(n, k) * m(m-1)...(m-k+1) * x^(m-k) d^(n-k),

applied coordinatewise.  The module also decides membership in
D(-log I) for monomial ideals I: each graded piece of an operator acts on
monomials through a polynomial coefficient, and the required vanishing on
the staircase complement regions is checked by finite grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .gridcheck import vanishes_on_shifted_orthant
from .monomial import (Box, MonomialIdeal, box_regions, intersect_box_lists,
                       staircase_boxes, staircase_complement_boxes)
from .multipoly import (LaurentLoc, MultiPoly, PolyParseError, Scalar,
                        _Parser, tokenize)

Exponent = tuple[int, ...]
TermKey = tuple[Exponent, Exponent, Exponent]  # (x part, d part, s part)


class ContextMismatchError(ValueError):
    """Raised when combining operators over different ring contexts."""


def falling(n: Scalar, k: int) -> Fraction:
    """n (n-1) ... (n-k+1)."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(n) - i
    return out


def falling_poly(p: MultiPoly, k: int) -> MultiPoly:
    out = MultiPoly.constant(p.vars, 1)
    for i in range(k):
        out = out * (p - i)
    return out


class WeylOp:
    """Element of D_{K[x]}[s], stored in normal order."""

    __slots__ = ("xvars", "svars", "terms")

    def __init__(self, xvars: Sequence[str], svars: Sequence[str],
                 terms: Mapping[TermKey, Scalar] | None = None):
        object.__setattr__(self, "xvars", tuple(xvars))
        object.__setattr__(self, "svars", tuple(svars))
        clean: dict[TermKey, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                xe, de, se = key
                if (len(xe) != len(self.xvars) or len(de) != len(self.xvars)
                        or len(se) != len(self.svars)):
                    raise ValueError(f"bad term key {key}")
                c = Fraction(coeff)
                if c:
                    k = (tuple(xe), tuple(de), tuple(se))
                    acc = clean.get(k)
                    clean[k] = c if acc is None else acc + c
                    if not clean[k]:
                        del clean[k]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("WeylOp is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, xvars, svars=()) -> WeylOp:
        return cls(xvars, svars)

    @classmethod
    def one(cls, xvars, svars=()) -> WeylOp:
        xz = (0,) * len(tuple(xvars))
        sz = (0,) * len(tuple(svars))
        return cls(xvars, svars, {(xz, xz, sz): Fraction(1)})

    @classmethod
    def derivative(cls, xvars, svars, name: str) -> WeylOp:
        xvars, svars = tuple(xvars), tuple(svars)
        i = xvars.index(name)
        de = [0] * len(xvars)
        de[i] = 1
        xz = (0,) * len(xvars)
        sz = (0,) * len(svars)
        return cls(xvars, svars, {(xz, tuple(de), sz): Fraction(1)})

    @classmethod
    def from_poly(cls, p: MultiPoly, xvars, svars=()) -> WeylOp:
        """Order-zero operator: multiplication by a polynomial in x and s."""
        xvars, svars = tuple(xvars), tuple(svars)
        allowed = xvars + svars
        p = p.with_vars(allowed)
        dz = (0,) * len(xvars)
        terms: dict[TermKey, Fraction] = {}
        for e, c in p.terms.items():
            xe = e[:len(xvars)]
            se = e[len(xvars):]
            terms[(xe, dz, se)] = c
        return cls(xvars, svars, terms)

    # -- structure -----------------------------------------------------------

    def _compat(self, other: WeylOp) -> None:
        if self.xvars != other.xvars or self.svars != other.svars:
            raise ContextMismatchError(
                f"contexts differ: ({self.xvars}, {self.svars}) vs "
                f"({other.xvars}, {other.svars})")

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        if not self.terms:
            return 0
        return max(sum(de) for _, de, _ in self.terms)

    def max_s_degree(self) -> int:
        if not self.terms or not self.svars:
            return 0
        return max(sum(se) for _, _, se in self.terms)

    def is_multiplication(self) -> bool:
        return self.order() == 0

    def to_poly(self) -> MultiPoly:
        """The polynomial of an order-zero operator, over xvars + svars."""
        if self.order() != 0:
            raise ValueError("operator has positive order")
        allvars = self.xvars + self.svars
        return MultiPoly(allvars,
                         {xe + se: c for (xe, _, se), c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOp):
            return NotImplemented
        return (self.xvars == other.xvars and self.svars == other.svars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.xvars, self.svars,
                     frozenset(self.terms.items())))

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: WeylOp) -> WeylOp:
        self._compat(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k, Fraction(0)) + c
            if acc:
                out[k] = acc
            else:
                out.pop(k, None)
        return WeylOp(self.xvars, self.svars, out)

    def __neg__(self) -> WeylOp:
        return WeylOp(self.xvars, self.svars,
                      {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: WeylOp) -> WeylOp:
        return self + (-other)

    def scale(self, c: Scalar) -> WeylOp:
        c = Fraction(c)
        if not c:
            return WeylOp.zero(self.xvars, self.svars)
        return WeylOp(self.xvars, self.svars,
                      {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: WeylOp) -> WeylOp:
        """Normal-ordered composition self . other."""
        self._compat(other)
        nx = len(self.xvars)
        out: dict[TermKey, Fraction] = {}
        for (a1, b1, g1), c1 in self.terms.items():
            for (a2, b2, g2), c2 in other.terms.items():
                base = c1 * c2
                gs = tuple(p + q for p, q in zip(g1, g2))
                # Reorder d^b1 x^a2 one coordinate at a time.
                ranges = [range(min(b1[r], a2[r]) + 1) for r in range(nx)]
                stack = [((), Fraction(1))]
                for r in range(nx):
                    new_stack = []
                    for prefix, coeff in stack:
                        for k in ranges[r]:
                            factor = comb(b1[r], k) * falling(a2[r], k)
                            if factor:
                                new_stack.append((prefix + (k,),
                                                  coeff * factor))
                    stack = new_stack
                for kvec, coeff in stack:
                    xe = tuple(a1[r] + a2[r] - kvec[r] for r in range(nx))
                    de = tuple(b1[r] + b2[r] - kvec[r] for r in range(nx))
                    key = (xe, de, gs)
                    acc = out.get(key, Fraction(0)) + base * coeff
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
        return WeylOp(self.xvars, self.svars, out)

    def __pow__(self, n: int) -> WeylOp:
        if n < 0:
            raise ValueError("negative operator power")
        result = WeylOp.one(self.xvars, self.svars)
        for _ in range(n):
            result = result * self
        return result

    def lift_svars(self, svars: Sequence[str]) -> WeylOp:
        """Reindex over a larger s-parameter list (old names must appear)."""
        svars = tuple(svars)
        if svars == self.svars:
            return self
        positions = []
        for name in self.svars:
            if name not in svars:
                raise ContextMismatchError(
                    f"parameter {name} missing from {svars}")
            positions.append(svars.index(name))
        out: dict[TermKey, Fraction] = {}
        for (xe, de, se), c in self.terms.items():
            new_se = [0] * len(svars)
            for pos, e in zip(positions, se):
                new_se[pos] = e
            out[(xe, de, tuple(new_se))] = c
        return WeylOp(self.xvars, svars, out)

    # -- specialization ----------------------------------------------------------

    def at_s(self, t: Sequence[Scalar]) -> WeylOp:
        """Substitute integer (or rational) values for the s-parameters."""
        if len(t) != len(self.svars):
            raise ValueError(
                f"expected {len(self.svars)} parameter values, got {len(t)}")
        values = [Fraction(v) for v in t]
        sz = (0,) * len(self.svars)
        out: dict[TermKey, Fraction] = {}
        for (xe, de, se), c in self.terms.items():
            for v, e in zip(values, se):
                c = c * v ** e
            if not c:
                continue
            key = (xe, de, sz)
            acc = out.get(key, Fraction(0)) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return WeylOp(self.xvars, self.svars, out)

    # -- action --------------------------------------------------------------------

    def apply_xs_poly(self, p: MultiPoly) -> MultiPoly:
        """Act on a polynomial in the x-variables and s-parameters.

        Derivatives see only the x-part; s-monomials multiply through as
        central coefficients.
        """
        allvars = self.xvars + self.svars
        p = p.with_vars(allvars)
        nx = len(self.xvars)
        out: dict[Exponent, Fraction] = {}
        for (a, b, g), c in self.terms.items():
            for e, pc in p.terms.items():
                ve, se = e[:nx], e[nx:]
                coeff = c * pc
                for r in range(nx):
                    if b[r]:
                        coeff *= falling(ve[r], b[r])
                        if not coeff:
                            break
                if not coeff:
                    continue
                xe = tuple(ve[r] - b[r] + a[r] for r in range(nx))
                sse = tuple(se[i] + g[i] for i in range(len(se)))
                key = xe + sse
                acc = out.get(key, Fraction(0)) + coeff
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return MultiPoly(allvars, out)


def weyl_multiply(a: WeylOp, b: WeylOp) -> WeylOp:
    return a * b


def weyl_commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return a * b - b * a


class UnassignedParameterError(ValueError):
    """Raised when applying an s-dependent operator without values for s."""


def apply_weyl(op: WeylOp, p: MultiPoly,
               s_values: Sequence[Scalar] | None = None) -> MultiPoly:
    """Apply an operator to a polynomial in the x-variables.

    The operator must carry no s-parameters, unless values for them are
    supplied.  Order-zero operators act as multiplication.
    """
    if op.max_s_degree() > 0:
        if s_values is None:
            raise UnassignedParameterError(
                f"operator depends on {op.svars}; supply parameter values")
        op = op.at_s(s_values)
    result = op.apply_xs_poly(p)
    if op.svars:
        return result.drop_vars(op.svars)
    return result


def apply_localized(op: WeylOp, v: LaurentLoc) -> LaurentLoc:
    """Apply an operator to num / F^k, by induction on the order.

    The recursion clears one denominator power block at a time:

        delta(h / F^k) = (delta(h) - [delta, F^k](h / F^k)) / F^k,

    whose commutator has strictly smaller order.  The order-zero base case
    is multiplication.  s-parameters ride along as central coefficients.
    The result lives over the operator's full variable list.
    """
    allvars = op.xvars + op.svars
    if v.num.vars != allvars:
        v = LaurentLoc(tuple(f.with_vars(allvars) for f in v.f_tuple),
                       v.num.with_vars(allvars), v.k)
    return _apply_localized_aligned(op, v)


def _apply_localized_aligned(op: WeylOp, v: LaurentLoc) -> LaurentLoc:
    if op.is_zero() or v.is_zero():
        return LaurentLoc(v.f_tuple, MultiPoly.zero(v.num.vars), 0, v.product)
    if op.order() == 0:
        return v.mul_poly(op.to_poly())
    if v.k == 0:
        return LaurentLoc(v.f_tuple, op.apply_xs_poly(v.num), 0, v.product)
    f_power = v.product ** v.k
    rho = weyl_commutator(op, WeylOp.from_poly(f_power, op.xvars, op.svars))
    direct = op.apply_xs_poly(v.num)
    correction = _apply_localized_aligned(rho, v)
    numerator = (LaurentLoc(v.f_tuple, direct, 0, v.product) - correction)
    return numerator.raise_denominator(v.k).reduce()


# ---------------------------------------------------------------------------
# Graded pieces and ideal preservation
# ---------------------------------------------------------------------------


def graded_pieces(op: WeylOp) -> dict[Exponent, MultiPoly]:
    """Decompose by x-degree shift: piece mu sends x^v to c_mu(v) x^(v+mu).

    The returned coefficient polynomials live over xvars + svars, where an
    x-variable name stands for the corresponding exponent value.
    """
    allvars = op.xvars + op.svars
    pieces: dict[Exponent, MultiPoly] = {}
    for (a, b, g), c in op.terms.items():
        mu = tuple(ai - bi for ai, bi in zip(a, b))
        coeff = MultiPoly.monomial(
            allvars, (0,) * len(op.xvars) + tuple(g), c)
        for r, name in enumerate(op.xvars):
            if b[r]:
                coeff = coeff * falling_poly(
                    MultiPoly.variable(allvars, name), b[r])
        pieces[mu] = pieces.get(mu, MultiPoly.zero(allvars)) + coeff
    return {mu: p for mu, p in pieces.items() if not p.is_zero()}


@dataclass
class PreservationCertificate:
    """Outcome of the D(-log I) membership test."""

    preserves: bool
    pieces: list[dict] = field(default_factory=list)
    witness_exponent: Exponent | None = None
    witness_image: MultiPoly | None = None
    witness_s: dict[str, int] | None = None


def preserves_ideal(op: WeylOp, ideal: MonomialIdeal,
                    s_grid: int | None = None) -> PreservationCertificate:
    """Decide whether op maps the monomial ideal into itself.

    Each graded piece (shift mu, coefficient c_mu) must have c_mu vanish on
    Bad(mu) = {v in the staircase : v + mu outside it}.  Bad(mu) decomposes
    into finitely many regions with some coordinates fixed and the rest
    free; vanishing on each region is decided by a finite grid in the free
    coordinates (and in the s-parameters, which must vanish for every
    integer value).
    """
    if ideal.dim != len(op.xvars):
        raise ValueError("ideal dimension does not match operator context")
    cert = PreservationCertificate(True)
    ideal_box_list = staircase_boxes(ideal.gens, ideal.dim)
    pieces = graded_pieces(op)
    for mu in sorted(pieces):
        c_mu = pieces[mu]
        if s_grid is not None:
            for name in op.svars:
                if c_mu.degree_in(name) > s_grid:
                    raise ValueError(
                        f"s-degree of piece {mu} exceeds declared grid "
                        f"{s_grid}")
        good_gens = [tuple(max(0, gi - mi) for gi, mi in zip(g, mu))
                     for g in ideal.gens]
        bad = intersect_box_lists(
            ideal_box_list,
            staircase_complement_boxes(good_gens, ideal.dim))
        regions_checked = 0
        for box in bad:
            for fixed_idx, lower_idx in box_regions(box):
                fixed = {op.xvars[i]: val for i, val in fixed_idx.items()}
                lower = {op.xvars[i]: val for i, val in lower_idx.items()}
                ok, witness = vanishes_on_shifted_orthant(c_mu, fixed, lower)
                regions_checked += 1
                if not ok:
                    v = tuple(witness[name] for name in op.xvars)
                    s_point = {name: witness.get(name, 0)
                               for name in op.svars}
                    image = apply_weyl(
                        op, MultiPoly.monomial(op.xvars, v),
                        [s_point[name] for name in op.svars]
                        if op.svars else None)
                    return PreservationCertificate(
                        False, cert.pieces, v, image,
                        s_point if op.svars else None)
        cert.pieces.append({
            "shift": mu,
            "coefficient": str(c_mu),
            "bad_regions_checked": regions_checked,
        })
    return cert


# ---------------------------------------------------------------------------
# Operator expression parsing: the polynomial grammar plus d_<var> symbols,
# with '*' as composition.
# ---------------------------------------------------------------------------


def parse_weyl(text: str, xvars: Sequence[str],
               svars: Sequence[str] = ()) -> WeylOp:
    xvars, svars = tuple(xvars), tuple(svars)

    def make_const(c: Fraction) -> WeylOp:
        return WeylOp.one(xvars, svars).scale(c)

    def make_name(name: str) -> WeylOp:
        if name.startswith("d_") and name[2:] in xvars:
            return WeylOp.derivative(xvars, svars, name[2:])
        if name in xvars or name in svars:
            return WeylOp.from_poly(
                MultiPoly.variable(xvars + svars, name), xvars, svars)
        raise PolyParseError(
            f"unknown symbol {name!r}; variables {list(xvars)}, "
            f"parameters {list(svars)}, derivatives "
            f"{['d_' + v for v in xvars]}")

    parser = _Parser(tokenize(text), make_const, make_name)
    return parser.parse()


def weyl_to_str(op: WeylOp) -> str:
    """Canonical text form in the operator grammar."""
    if not op.terms:
        return "0"

    def key(item):
        (xe, de, se), _ = item
        return (sum(de), de, sum(xe), xe, se)

    parts = []
    for (xe, de, se), c in sorted(op.terms.items(), key=key, reverse=True):
        factors = []
        for name, e in zip(op.xvars, xe):
            factors.append(name if e == 1 else f"{name}^{e}" if e else "")
        for name, e in zip(op.svars, se):
            factors.append(name if e == 1 else f"{name}^{e}" if e else "")
        for name, e in zip(op.xvars, de):
            factors.append(
                f"d_{name}" if e == 1 else f"d_{name}^{e}" if e else "")
        factors = [f for f in factors if f]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag != 1:
            body = str(mag) + "*" + "*".join(factors)
        else:
            body = "*".join(factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
