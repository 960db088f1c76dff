"""The localized module on the formal symbol f_1^(s_1) ... f_l^(s_l).

Elements are localized polynomials times the formal symbol; the derivative
action follows the product-rule recipe

    d_r (h f^s) = (d_r h + h * sum_i s_i f_i^(-1) d_r f_i) f^s,

extended through normal-ordered operator terms.  Exponent specialization
substitutes integers for the s-parameters and replaces the symbol by the
actual power.  Functional equations are verified both formally (exact
identity of localized numerators) and in the specialized sense (a finite
integer grid, sound by the vanishing lemma for bounded-degree
polynomials).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import factorial
from typing import Callable, Mapping, Sequence

from .gridcheck import grid_zero_test_poly, interpolate_from_grid
from .multipoly import LaurentLoc, MultiPoly, parse_poly
from .weyl import WeylOp, apply_weyl, falling, falling_poly, parse_weyl

Exponent = tuple[int, ...]


class FsContextError(ValueError):
    pass


class FsContext:
    """Ambient variables, the tuple f, and the s-parameter names."""

    __slots__ = ("xvars", "svars", "f_tuple", "allvars", "product",
                 "_dlog_nums", "_product_diffs")

    def __init__(self, xvars: Sequence[str], f_tuple: Sequence[MultiPoly],
                 svars: Sequence[str]):
        self.xvars = tuple(xvars)
        self.svars = tuple(svars)
        if len(self.svars) < 1:
            raise FsContextError("at least one s-parameter is required")
        if len(f_tuple) != len(self.svars):
            raise FsContextError(
                f"{len(f_tuple)} polynomials but {len(self.svars)} "
                f"s-parameters")
        self.allvars = self.xvars + self.svars
        fs = []
        for f in f_tuple:
            f = f.with_vars(self.allvars)
            if f.is_zero():
                raise FsContextError("zero entry in the f tuple")
            fs.append(f)
        self.f_tuple = tuple(fs)
        product = MultiPoly.constant(self.allvars, 1)
        for f in fs:
            product = product * f
        self.product = product
        # Numerator of sum_i s_i f_i^(-1) d_r f_i over the common
        # denominator F, one polynomial per ambient variable.
        self._dlog_nums = []
        for name in self.xvars:
            total = MultiPoly.zero(self.allvars)
            for i, f in enumerate(fs):
                others = MultiPoly.constant(self.allvars, 1)
                for j, h in enumerate(fs):
                    if j != i:
                        others = others * h
                s_i = MultiPoly.variable(self.allvars, self.svars[i])
                total = total + s_i * f.diff(name) * others
            self._dlog_nums.append(total)
        self._product_diffs = [product.diff(name) for name in self.xvars]

    def ell(self) -> int:
        return len(self.svars)

    def one(self) -> FsElement:
        return FsElement(self, LaurentLoc(
            self.f_tuple, MultiPoly.constant(self.allvars, 1), 0,
            self.product))

    def from_poly(self, p: MultiPoly) -> FsElement:
        return FsElement(self, LaurentLoc(
            self.f_tuple, p.with_vars(self.allvars), 0, self.product))

    def __eq__(self, other):
        if not isinstance(other, FsContext):
            return NotImplemented
        return (self.xvars == other.xvars and self.svars == other.svars
                and self.f_tuple == other.f_tuple)


@dataclass
class FsElement:
    """coeff * f_1^(s_1) ... f_l^(s_l) with localized coefficient."""

    context: FsContext
    coeff: LaurentLoc

    def is_zero(self) -> bool:
        return self.coeff.num.is_zero()

    def __add__(self, other: FsElement) -> FsElement:
        if self.context != other.context:
            raise FsContextError("elements of different f^s modules")
        return FsElement(self.context, self.coeff + other.coeff)

    def __sub__(self, other: FsElement) -> FsElement:
        if self.context != other.context:
            raise FsContextError("elements of different f^s modules")
        return FsElement(self.context, self.coeff - other.coeff)

    def __neg__(self) -> FsElement:
        return FsElement(self.context, -self.coeff)

    def mul_poly(self, p: MultiPoly | int | Fraction) -> FsElement:
        return FsElement(self.context, self.coeff.mul_poly(p))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FsElement):
            return NotImplemented
        if self.context != other.context:
            return False
        return self.coeff == other.coeff

    def s_degree(self, name: str) -> int:
        return self.coeff.num.degree_in(name)

    def __str__(self) -> str:
        symbol = "*".join(f"{f}^{s}" if f.is_monomial() else f"({f})^{s}"
                          for f, s in zip(self.context.f_tuple,
                                          self.context.svars))
        return f"({self.coeff}) * [{symbol}]"


def _derivative_action(ctx: FsContext, r: int, w: LaurentLoc) -> LaurentLoc:
    """One partial derivative applied to (num / F^k) f^s."""
    g, k = w.num, w.k
    num = (g.diff(ctx.xvars[r]) * ctx.product
           - g * ctx._product_diffs[r] * k
           + g * ctx._dlog_nums[r])
    return LaurentLoc(w.f_tuple, num, k + 1, w.product)


def fs_apply(op: WeylOp, v: FsElement) -> FsElement:
    """Action of a normal-ordered operator on an f^s element."""
    ctx = v.context
    if op.xvars == ctx.xvars and op.svars != ctx.svars:
        op = op.lift_svars(ctx.svars)
    if op.xvars != ctx.xvars or op.svars != ctx.svars:
        raise FsContextError(
            f"operator context ({op.xvars}, {op.svars}) does not match "
            f"module context ({ctx.xvars}, {ctx.svars})")
    total = LaurentLoc(ctx.f_tuple, MultiPoly.zero(ctx.allvars), 0,
                       ctx.product)
    for (a, b, g_exp), c in sorted(op.terms.items()):
        w = v.coeff
        for r in range(len(ctx.xvars)):
            for _ in range(b[r]):
                w = _derivative_action(ctx, r, w)
        mono = MultiPoly.monomial(ctx.allvars, a + g_exp, c)
        total = total + w.mul_poly(mono)
    return FsElement(ctx, total.reduce())


def specialize(v: FsElement, t: Sequence[int]) -> LaurentLoc:
    """Exponent specialization: s_i := t_i and the symbol becomes f^t."""
    ctx = v.context
    if len(t) != ctx.ell():
        raise ValueError(f"expected {ctx.ell()} integers, got {len(t)}")
    num = v.coeff.num.eval(dict(zip(ctx.svars, (Fraction(x) for x in t))))
    if isinstance(num, Fraction):
        num = MultiPoly.constant(ctx.xvars, num)
    else:
        num = num.with_vars(ctx.xvars)
    shift = max(0, -min(t))
    f_in_x = [f.drop_vars(ctx.svars) for f in ctx.f_tuple]
    for f, ti in zip(f_in_x, t):
        num = num * f ** (ti + shift)
    product_x = ctx.product.drop_vars(ctx.svars)
    return LaurentLoc(tuple(f_in_x), num, v.coeff.k + shift,
                      product_x).reduce()


def grid_zero_test(h: MultiPoly | LaurentLoc, grid_vars: Sequence[str],
                   bound: int) -> bool:
    """True iff h vanishes on {0..bound}^l; equivalent to h = 0 in bound.

    For a localized carrier only the numerator matters, since the fixed
    denominator is a nonzero constant in the parameters.
    """
    if isinstance(h, LaurentLoc):
        h = h.num
    grid_vars = [name for name in grid_vars if name in h.vars]
    return grid_zero_test_poly(h, grid_vars, bound)


def interpolate_grid_values(values: Mapping[tuple[int, ...], object],
                            grid_vars: Sequence[str], bound: int,
                            carrier_vars: Sequence[str] = ()) -> MultiPoly:
    return interpolate_from_grid(values, grid_vars, bound, carrier_vars)


# ---------------------------------------------------------------------------
# Functional equations
# ---------------------------------------------------------------------------

B_VAR = "s"


class FeqSpecError(ValueError):
    pass


@dataclass
class FeqSpec:
    """A candidate functional equation: operators, optional g, and b."""

    kind: str  # principal | relative | bmsMulti
    operators: dict[Exponent, WeylOp]
    b_poly: MultiPoly  # univariate in s
    g: MultiPoly | None = None

    def __post_init__(self):
        if self.kind not in ("principal", "relative", "bmsMulti"):
            raise FeqSpecError(f"unknown kind {self.kind!r}")
        if self.b_poly.is_zero():
            raise FeqSpecError("b must be nonzero")
        for c in self.operators:
            if sum(c) != 1:
                raise FeqSpecError(
                    f"c-vector {c} has coordinate sum {sum(c)}, expected 1")
        if self.kind in ("principal", "relative"):
            keys = list(self.operators)
            if keys != [(1,)]:
                raise FeqSpecError(
                    f"{self.kind} kind requires the single c-vector (1)")

    def max_order(self) -> int:
        return max((_op_order(op) for op in self.operators.values()),
                   default=0)

    def grid_bound(self) -> int:
        """Degree bound for the specialized check, cleared of denominators."""
        b_deg = self.b_poly.total_degree()
        s_deg = 0
        for c, op in self.operators.items():
            binom_deg = sum(-ci for ci in c if ci < 0)
            s_deg = max(s_deg, _op_s_degree(op) + binom_deg)
        return max(b_deg, s_deg) + self.max_order()


def _op_order(op) -> int:
    """Order bound; for Euler-piece operators the largest shift size."""
    if hasattr(op, "order"):
        return op.order()
    return max((sum(abs(s) for s in p.shift) for p in op.pieces), default=0)


def _op_s_degree(op) -> int:
    """Parameter-degree bound of the specialized coefficients.

    Euler pieces contribute their numerator degree, plus every
    denominator degree from clearing the rational coefficients.
    """
    if hasattr(op, "max_s_degree"):
        return op.max_s_degree()
    num_deg = max((p.num.total_degree() for p in op.pieces), default=0)
    den_deg = sum(p.den.total_degree() for p in op.pieces)
    return num_deg + den_deg


def binom_poly(svar: MultiPoly, k: int) -> MultiPoly:
    """s (s-1) ... (s-k+1) / k! as a polynomial."""
    return falling_poly(svar, k) * Fraction(1, factorial(k))


def b_at_sum(b_poly: MultiPoly, ctx: FsContext) -> MultiPoly:
    """b evaluated at s_1 + ... + s_l, over the context variables."""
    s_sum = MultiPoly.zero(ctx.allvars)
    for name in ctx.svars:
        s_sum = s_sum + MultiPoly.variable(ctx.allvars, name)
    out = MultiPoly.zero(ctx.allvars)
    for e, c in b_poly.terms.items():
        out = out + s_sum ** e[0] * c
    return out


def generator_element(ctx: FsContext, c: Exponent,
                      g: MultiPoly | None = None) -> FsElement:
    """binom(s, -c) * f^c * g * f^s as an element of the module."""
    num = MultiPoly.constant(ctx.allvars, 1)
    if g is not None:
        num = num * g.with_vars(ctx.allvars)
    shift = max(0, -min(c))
    for i, ci in enumerate(c):
        num = num * ctx.f_tuple[i] ** (ci + shift)
        if ci < 0:
            num = num * binom_poly(
                MultiPoly.variable(ctx.allvars, ctx.svars[i]), -ci)
    return FsElement(ctx, LaurentLoc(ctx.f_tuple, num, shift, ctx.product))


@dataclass
class VerifyResult:
    verified: bool
    discrepancy: FsElement | None = None
    witness_t: tuple[int, ...] | None = None
    grid_bound: int | None = None

    def __bool__(self) -> bool:
        return self.verified


def verify_feq_formal(spec: FeqSpec, ctx: FsContext) -> VerifyResult:
    """Check the functional equation as an exact identity in the module."""
    if len(next(iter(spec.operators))) != ctx.ell():
        raise FeqSpecError("c-vector length does not match the f tuple")
    lhs = FsElement(ctx, LaurentLoc(ctx.f_tuple,
                                    MultiPoly.zero(ctx.allvars), 0,
                                    ctx.product))
    for c in sorted(spec.operators):
        lhs = lhs + fs_apply(spec.operators[c],
                             generator_element(ctx, c, spec.g))
    rhs_poly = b_at_sum(spec.b_poly, ctx)
    if spec.g is not None:
        rhs_poly = rhs_poly * spec.g.with_vars(ctx.allvars)
    rhs = ctx.from_poly(rhs_poly)
    diff = lhs - rhs
    if diff.coeff.reduce().num.is_zero():
        return VerifyResult(True)
    return VerifyResult(False, discrepancy=diff)


ApplyCallback = Callable[[object, tuple[int, ...], MultiPoly], MultiPoly]


def _default_apply(op, t, p: MultiPoly) -> MultiPoly:
    return apply_weyl(op, p, list(t))


def verify_feq_specialized(
        spec: FeqSpec, ctx: FsContext,
        apply_at: ApplyCallback | None = None,
        normalize: Callable[[MultiPoly], MultiPoly] | None = None,
        grid_bound: int | None = None) -> VerifyResult:
    """Check the specialized equations on the finite grid {0..m}^l.

    By the vanishing lemma, agreement on the grid certifies the formal
    identity whenever the cleared numerator has parameter degree at most
    m; the default m is conservative for the given operators and b.  The
    callback computes delta(t) applied to a ring element, which lets a
    quotient or summand ring supply its own action; ``normalize`` maps
    ring elements to a normal form before comparison.
    """
    apply_at = apply_at or _default_apply
    normalize = normalize or (lambda p: p)
    m = spec.grid_bound() if grid_bound is None else grid_bound
    ell = ctx.ell()
    f_in_x = [f.drop_vars(ctx.svars) for f in ctx.f_tuple]
    g_in_x = (spec.g.with_vars(ctx.xvars) if spec.g is not None
              else MultiPoly.constant(ctx.xvars, 1))
    for t in iproduct(range(m + 1), repeat=ell):
        lhs = MultiPoly.zero(ctx.xvars)
        for c in sorted(spec.operators):
            scalar = Fraction(1)
            for i, ci in enumerate(c):
                if ci < 0:
                    scalar *= falling(t[i], -ci) / factorial(-ci)
            if not scalar:
                continue
            arg = g_in_x
            for i, ci in enumerate(c):
                power = t[i] + ci
                if power < 0:
                    raise AssertionError(
                        "negative power with nonzero binomial scalar")
                arg = arg * f_in_x[i] ** power
            image = apply_at(spec.operators[c], t, arg)
            lhs = lhs + image * scalar
        b_val = spec.b_poly.eval({B_VAR: Fraction(sum(t))})
        rhs = g_in_x * b_val
        for i, ti in enumerate(t):
            rhs = rhs * f_in_x[i] ** ti
        if normalize(lhs) != normalize(rhs):
            return VerifyResult(False, witness_t=t, grid_bound=m)
    return VerifyResult(True, grid_bound=m)


# ---------------------------------------------------------------------------
# Fixture file format: a line-oriented description of a functional
# equation over a polynomial ring.
# ---------------------------------------------------------------------------


def parse_feq_file(text: str,
                   extra_operators=None) -> tuple[FeqSpec, FsContext]:
    """Parse the structured text format for functional equations.

    Lines (order free, '#' comments): ``ring:``, ``params:``, ``f<i>:``,
    ``kind:``, ``g:``, ``b:``, and one ``op (c1,..,cl):`` per operator.
    ``extra_operators`` lets a caller contribute operators given in
    another representation (keyed by c-vector) before validation.
    """
    ring: list[str] = []
    params: list[str] = []
    f_texts: dict[int, str] = {}
    op_texts: dict[Exponent, str] = {}
    kind = g_text = b_text = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FeqSpecError(f"line {lineno}: expected 'key: value'")
        key, value = (part.strip() for part in line.split(":", 1))
        if key == "ring":
            ring = value.split()
        elif key == "params":
            params = value.split()
        elif key.startswith("f") and key[1:].isdigit():
            f_texts[int(key[1:])] = value
        elif key == "kind":
            kind = value
        elif key == "g":
            g_text = value
        elif key == "b":
            b_text = value
        elif key.startswith("op"):
            vec = key[2:].strip()
            if not (vec.startswith("(") and vec.endswith(")")):
                raise FeqSpecError(
                    f"line {lineno}: operator key needs a c-vector")
            c = tuple(int(part) for part in vec[1:-1].split(","))
            op_texts[c] = value
        else:
            raise FeqSpecError(f"line {lineno}: unknown key {key!r}")
    if not ring or not params or kind is None or b_text is None:
        raise FeqSpecError("missing ring, params, kind, or b")
    if sorted(f_texts) != list(range(1, len(params) + 1)):
        raise FeqSpecError("f entries must be f1..fl matching params")
    f_tuple = tuple(parse_poly(f_texts[i], ring)
                    for i in range(1, len(params) + 1))
    ctx = FsContext(ring, f_tuple, params)
    operators = {c: parse_weyl(text_, ring, params)
                 for c, text_ in op_texts.items()}
    if extra_operators:
        operators.update(extra_operators)
    b_poly = parse_poly(b_text, [B_VAR])
    g = parse_poly(g_text, ring) if g_text is not None else None
    spec = FeqSpec(kind, operators, b_poly, g)
    return spec, ctx
