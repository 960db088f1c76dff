"""Graded operators on monomial subalgebras, given by Euler-type pieces.

A piece (shift, num, den) acts on a monomial x^v as (num(v)/den(v)) times
x^(v+shift); sums of pieces express operators such as conjugates of
derivative powers by invertible Euler operators, which need not come from
the ambient Weyl algebra.  Denominators must be certified nonvanishing on
the declared domain semigroup before the operator is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Protocol, Sequence

from .multipoly import MultiPoly

Exponent = tuple[int, ...]


class MonomialDomain(Protocol):
    """Membership structure for exponents of a monomial subalgebra."""

    @property
    def dim(self) -> int: ...

    def contains(self, v: Exponent) -> bool: ...

    def points_up_to(self, bound: int) -> Iterable[Exponent]: ...


@dataclass(frozen=True)
class NumericalSemigroup:
    """Cofinite subsemigroup of N given by its finitely many gaps."""

    gaps: tuple[int, ...]

    @property
    def dim(self) -> int:
        return 1

    def contains(self, v: Exponent) -> bool:
        return v[0] >= 0 and v[0] not in self.gaps

    def points_up_to(self, bound: int):
        for n in range(bound + 1):
            if n not in self.gaps:
                yield (n,)


class PoleError(ArithmeticError):
    """A piece denominator vanished at a monomial of the argument."""

    def __init__(self, exponent: Exponent, piece_index: int):
        super().__init__(
            f"denominator of piece {piece_index} vanishes at exponent "
            f"{exponent}")
        self.exponent = exponent
        self.piece_index = piece_index


@dataclass(frozen=True)
class GradedPiece:
    shift: tuple[int, ...]
    num: MultiPoly
    den: MultiPoly


class GradedOperator:
    """Finite sum of Euler pieces over a fixed ambient variable list."""

    __slots__ = ("xvars", "pieces")

    def __init__(self, xvars: Sequence[str], pieces: Iterable[GradedPiece]):
        self.xvars = tuple(xvars)
        cleaned = []
        for p in pieces:
            if len(p.shift) != len(self.xvars):
                raise ValueError(f"piece shift {p.shift} has wrong dimension")
            if p.den.is_zero():
                raise ZeroDivisionError("piece with zero denominator")
            cleaned.append(GradedPiece(tuple(p.shift),
                                       p.num.with_vars(self.xvars),
                                       p.den.with_vars(self.xvars)))
        self.pieces = tuple(cleaned)

    @classmethod
    def euler_rational(cls, xvars: Sequence[str], shift: Sequence[int],
                       num: MultiPoly, den: MultiPoly) -> GradedOperator:
        return cls(xvars, [GradedPiece(tuple(shift), num, den)])

    def compose(self, inner: GradedOperator) -> GradedOperator:
        """self after inner; coefficients of self are shifted by inner."""
        if self.xvars != inner.xvars:
            raise ValueError("composition over different variable lists")
        out = []
        for p1 in self.pieces:
            for p2 in inner.pieces:
                shift = tuple(a + b for a, b in zip(p1.shift, p2.shift))
                num1 = _shift_arguments(p1.num, self.xvars, p2.shift)
                den1 = _shift_arguments(p1.den, self.xvars, p2.shift)
                out.append(GradedPiece(shift, p2.num * num1, p2.den * den1))
        return GradedOperator(self.xvars, out)

    def coefficient_at(self, v: Exponent) -> list[tuple[int, Fraction]]:
        """(piece index, num(v)/den(v)) per piece; raises PoleError."""
        values = []
        assignment = dict(zip(self.xvars, v))
        for idx, p in enumerate(self.pieces):
            den = p.den.eval(assignment)
            if den == 0:
                raise PoleError(tuple(v), idx)
            num = p.num.eval(assignment)
            values.append((idx, Fraction(num) / Fraction(den)))
        return values


def _shift_arguments(p: MultiPoly, xvars: Sequence[str],
                     shift: Sequence[int] | None) -> MultiPoly:
    if shift is None or not any(shift):
        return p
    out = p
    for name, s in zip(xvars, shift):
        if s:
            out = out.subs_poly(name,
                                MultiPoly.variable(p.vars, name) + s)
    return out


class DomainError(ValueError):
    """Argument monomial outside the declared domain semigroup."""


def apply_graded(op: GradedOperator, p: MultiPoly,
                 domain: MonomialDomain) -> MultiPoly:
    """Monomial-by-monomial action; exact, with pole and range checking."""
    p = p.with_vars(op.xvars)
    out = MultiPoly.zero(op.xvars)
    for exp, coeff in sorted(p.terms.items()):
        if not domain.contains(exp):
            raise DomainError(
                f"monomial exponent {exp} is outside the domain semigroup")
        for idx, value in op.coefficient_at(exp):
            if not value:
                continue
            shifted = tuple(e + s
                            for e, s in zip(exp, op.pieces[idx].shift))
            if any(e < 0 for e in shifted):
                raise DomainError(
                    f"piece {idx} sends exponent {exp} to {shifted}, "
                    f"outside the ambient")
            out = out + MultiPoly.monomial(op.xvars, shifted, coeff * value)
    return out


@dataclass
class DenominatorCertificate:
    exact: bool
    checked_up_to: int
    note: str


def certify_denominators(op: GradedOperator, domain: MonomialDomain,
                         fallback_bound: int = 64) -> DenominatorCertificate:
    """Check that no piece denominator vanishes on the domain semigroup.

    In one variable the check is exact: integer roots of the denominator
    are bounded by the Cauchy bound, so scanning domain points up to that
    bound decides nonvanishing everywhere.  In higher dimension the scan
    is bound-limited and reported as such.
    """
    bound = 0
    exact = True
    for p in op.pieces:
        if p.den.is_constant():
            continue
        if len(op.xvars) == 1:
            coeffs: dict[int, Fraction] = {e[0]: c
                                           for e, c in p.den.terms.items()}
            lead = coeffs[max(coeffs)]
            cauchy = 1 + max(abs(c / lead) for c in coeffs.values())
            bound = max(bound, ceil(cauchy))
        else:
            exact = False
            bound = max(bound, fallback_bound)
    for v in domain.points_up_to(bound):
        for idx, p in enumerate(op.pieces):
            if p.den.eval(dict(zip(op.xvars, v))) == 0:
                raise PoleError(tuple(v), idx)
    note = ("integer-root bound covers every domain point" if exact
            else f"denominators scanned up to {bound} only")
    return DenominatorCertificate(exact, bound, note)
