"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples (one nonnegative int per
variable) to nonzero ``Fraction`` coefficients.  All arithmetic is exact;
there is no floating-point mode.  Terms are kept canonical (no zero
coefficients), and printing uses the graded-lexicographic order with the
declared variable order, so string output is deterministic.

``LaurentLoc`` represents elements of the localization at a fixed product
f_1 * ... * f_l: a numerator polynomial divided by a declared power of the
product.  Equality is decided by cross-multiplication, never by comparing
representations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


class VariableMismatchError(ValueError):
    """Raised when combining polynomials over different variable lists."""

    def __init__(self, left: Sequence[str], right: Sequence[str]):
        super().__init__(
            f"variable lists differ: {list(left)} vs {list(right)}"
        )
        self.left = tuple(left)
        self.right = tuple(right)


class PolyParseError(ValueError):
    """Raised on malformed polynomial or operator expressions."""


def _grlex_key(exp: Exponent) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Mapping[Exponent, Scalar] | None = None):
        object.__setattr__(self, "vars", tuple(variables))
        clean: dict[Exponent, Fraction] = {}
        if terms:
            n = len(self.vars)
            for exp, coeff in terms.items():
                if len(exp) != n:
                    raise ValueError(
                        f"exponent {exp} has length {len(exp)}, expected {n}"
                    )
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = Fraction(coeff)
                if c:
                    key = tuple(exp)
                    acc = clean.get(key)
                    clean[key] = c if acc is None else acc + c
                    if not clean[key]:
                        del clean[key]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> MultiPoly:
        zero = (0,) * len(tuple(variables))
        return cls(variables, {zero: Fraction(value)})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> MultiPoly:
        return cls(variables, {})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> MultiPoly:
        variables = tuple(variables)
        idx = variables.index(name)
        exp = [0] * len(variables)
        exp[idx] = 1
        return cls(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Exponent,
                 coeff: Scalar = 1) -> MultiPoly:
        return cls(variables, {tuple(exp): Fraction(coeff)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def per_var_degrees(self) -> tuple[int, ...]:
        degs = [0] * len(self.vars)
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei > degs[i]:
                    degs[i] = ei
        return tuple(degs)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        """Put two operands over the same variable list.

        A constant operand adapts to the other's variables; any other
        mismatch is an error naming both lists.
        """
        if self.vars == other.vars:
            return self, other
        if self.is_constant():
            return MultiPoly.constant(other.vars, self.constant_value()), other
        if other.is_constant():
            return self, MultiPoly.constant(self.vars, other.constant_value())
        raise VariableMismatchError(self.vars, other.vars)

    def __add__(self, other: MultiPoly | Scalar) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.vars, other)
        a, b = self._coerce(other)
        out = dict(a.terms)
        for exp, c in b.terms.items():
            acc = out.get(exp, Fraction(0)) + c
            if acc:
                out[exp] = acc
            else:
                out.pop(exp, None)
        return MultiPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MultiPoly | Scalar) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other: MultiPoly | Scalar) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars,
                             {e: c * v for e, v in self.terms.items()})
        a, b = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(key, Fraction(0)) + ca * cb
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return MultiPoly(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def diff(self, name: str) -> MultiPoly:
        """Partial derivative with respect to one variable."""
        i = self.vars.index(name)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            new = list(e)
            new[i] -= 1
            out[tuple(new)] = c * e[i]
        return MultiPoly(self.vars, out)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, assignment: Mapping[str, Scalar]) -> Fraction | MultiPoly:
        """Partial evaluation; returns a Fraction iff all variables assigned.

        Keys of ``assignment`` must be a subset of the variable list;
        missing variables simply remain.
        """
        unknown = [k for k in assignment if k not in self.vars]
        if unknown:
            raise ValueError(f"unknown variables in assignment: {unknown}")
        values = {self.vars.index(k): Fraction(v)
                  for k, v in assignment.items()}
        remaining = tuple(v for i, v in enumerate(self.vars)
                          if i not in values)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            factor = c
            for i, val in values.items():
                factor *= val ** e[i]
            if not factor:
                continue
            key = tuple(ei for i, ei in enumerate(e) if i not in values)
            acc = out.get(key, Fraction(0)) + factor
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        if not remaining:
            return out.get((), Fraction(0))
        return MultiPoly(remaining, out)

    def subs_poly(self, name: str, value: MultiPoly) -> MultiPoly:
        """Substitute a polynomial (over the same variables) for a variable."""
        i = self.vars.index(name)
        by_power: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            rest = list(e)
            rest[i] = 0
            by_power.setdefault(e[i], {})[tuple(rest)] = c
        result = MultiPoly.zero(self.vars)
        for power, terms in by_power.items():
            piece = MultiPoly(self.vars, terms)
            result = result + piece * (value ** power)
        return result

    def with_vars(self, variables: Sequence[str]) -> MultiPoly:
        """Reinterpret over a new variable list.

        Every old variable must either appear in the new list or not occur
        in any term; new variables enter with exponent zero.
        """
        variables = tuple(variables)
        if variables == self.vars:
            return self
        idx: list[int | None] = []
        for i, name in enumerate(self.vars):
            if name in variables:
                idx.append(variables.index(name))
            else:
                if any(e[i] for e in self.terms):
                    raise VariableMismatchError(self.vars, variables)
                idx.append(None)
        n = len(variables)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * n
            for j, ei in enumerate(e):
                if idx[j] is not None:
                    new[idx[j]] = ei
            out[tuple(new)] = c
        return MultiPoly(variables, out)

    def drop_vars(self, names: Iterable[str]) -> MultiPoly:
        """Remove variables that do not occur in any term."""
        names = set(names)
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei and self.vars[i] in names:
                    raise ValueError(
                        f"variable {self.vars[i]} occurs; cannot drop")
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        return MultiPoly(
            tuple(self.vars[i] for i in keep),
            {tuple(e[i] for i in keep): c for e, c in self.terms.items()},
        )

    # -- division -----------------------------------------------------------

    def leading_term(self) -> tuple[Exponent, Fraction]:
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def divide_exact(self, divisor: MultiPoly) -> MultiPoly | None:
        """Return self / divisor if the division is exact, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        a, b = self._coerce(divisor)
        lexp, lc = b.leading_term()
        quotient: dict[Exponent, Fraction] = {}
        rem = a
        while rem.terms:
            rexp, rc = rem.leading_term()
            qexp = tuple(r - l for r, l in zip(rexp, lexp))
            if any(q < 0 for q in qexp):
                return None
            qc = rc / lc
            quotient[qexp] = quotient.get(qexp, Fraction(0)) + qc
            rem = rem - b * MultiPoly.monomial(a.vars, qexp, qc)
        return MultiPoly(a.vars, quotient)

    # -- printing ------------------------------------------------------------

    def _term_str(self, exp: Exponent, coeff: Fraction) -> str:
        parts = []
        for name, e in zip(self.vars, exp):
            if e == 1:
                parts.append(name)
            elif e >= 2:
                parts.append(f"{name}^{e}")
        mag = abs(coeff)
        if not parts:
            return str(mag)
        if mag != 1:
            parts.insert(0, str(mag))
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=_grlex_key, reverse=True)
        pieces = []
        for i, exp in enumerate(ordered):
            c = self.terms[exp]
            body = self._term_str(exp, c)
            if i == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"MultiPoly({self.vars!r}, {self!s})"


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Exact +, -, * on polynomials over the same variables.

    One operand may be a constant over different variables; any other
    variable mismatch raises VariableMismatchError.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def eval_poly(p: MultiPoly,
              assignment: Mapping[str, Scalar]) -> Fraction | MultiPoly:
    return p.eval(assignment)


# ---------------------------------------------------------------------------
# Expression grammar
#
#   expr   := term (('+' | '-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ('^' natural)?
#   atom   := rational | name | '(' expr ')' | ('+'|'-') factor
#
# Rational literals are 'p' or 'p/q'; names match [A-Za-z][A-Za-z0-9_]*;
# whitespace is insignificant.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()]))"
)


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyParseError(
                    f"unexpected character {text[pos:].strip()[0]!r} "
                    f"at position {pos}")
            break
        if m.group("rat"):
            tokens.append(("rat", m.group("rat").replace(" ", "")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive-descent parser over an arbitrary coefficient algebra.

    The same grammar serves polynomials and Weyl operators; the caller
    supplies atom constructors and the multiplication to use (commutative
    for polynomials, composition for operators).
    """

    def __init__(self, tokens, make_const, make_name):
        self.tokens = tokens
        self.pos = 0
        self.make_const = make_const
        self.make_name = make_name

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise PolyParseError(f"trailing input at token {self.peek()}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.next()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() == ("op", "*"):
            self.next()
            value = value * self.factor()
        return value

    def factor(self):
        value = self.atom()
        if self.peek() == ("op", "^"):
            self.next()
            kind, text = self.next()
            if kind != "rat" or "/" in text:
                raise PolyParseError("exponent must be a natural number")
            value = value ** int(text)
        return value

    def atom(self):
        kind, text = self.next()
        if kind == "rat":
            return self.make_const(Fraction(text))
        if kind == "name":
            return self.make_name(text)
        if (kind, text) == ("op", "("):
            value = self.expr()
            if self.next() != ("op", ")"):
                raise PolyParseError("expected ')'")
            return value
        if (kind, text) == ("op", "-"):
            return -self.factor()
        if (kind, text) == ("op", "+"):
            return self.factor()
        raise PolyParseError(f"unexpected token {text!r}")


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse a polynomial expression over the declared variables."""
    variables = tuple(variables)

    def make_name(name: str) -> MultiPoly:
        if name not in variables:
            raise PolyParseError(
                f"unknown variable {name!r}; declared: {list(variables)}")
        return MultiPoly.variable(variables, name)

    parser = _Parser(tokenize(text),
                     lambda c: MultiPoly.constant(variables, c),
                     make_name)
    return parser.parse()


# ---------------------------------------------------------------------------
# Localized elements
# ---------------------------------------------------------------------------


class LaurentLoc:
    """num / (f_1 ... f_l)^k relative to a declared tuple f.

    The representation is lazily reduced: ``reduce()`` divides out factors
    of the product when possible, but equality never depends on it.
    """

    __slots__ = ("f_tuple", "product", "num", "k")

    def __init__(self, f_tuple: Sequence[MultiPoly], num: MultiPoly, k: int,
                 product: MultiPoly | None = None):
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        self.f_tuple = tuple(f_tuple)
        if product is None:
            product = MultiPoly.constant(num.vars, 1)
            for f in self.f_tuple:
                product = product * f.with_vars(num.vars)
        self.product = product
        self.num = num
        self.k = k

    def _compat(self, other: LaurentLoc) -> None:
        if self.product != other.product:
            raise ValueError("localized elements over different products")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentLoc):
            return NotImplemented
        self._compat(other)
        # a/F^j == b/F^k  iff  a F^k == b F^j
        return (self.num * other.product ** other.k
                == other.num * self.product ** self.k)

    def __hash__(self):
        raise TypeError("LaurentLoc is unhashable (lazy representation)")

    def __add__(self, other: LaurentLoc) -> LaurentLoc:
        self._compat(other)
        k = max(self.k, other.k)
        num = (self.num * self.product ** (k - self.k)
               + other.num * other.product ** (k - other.k))
        return LaurentLoc(self.f_tuple, num, k, self.product)

    def __sub__(self, other: LaurentLoc) -> LaurentLoc:
        return self + (-other)

    def __neg__(self) -> LaurentLoc:
        return LaurentLoc(self.f_tuple, -self.num, self.k, self.product)

    def mul_poly(self, p: MultiPoly | Scalar) -> LaurentLoc:
        return LaurentLoc(self.f_tuple, self.num * p, self.k, self.product)

    def raise_denominator(self, extra: int) -> LaurentLoc:
        if extra < 0:
            raise ValueError("extra must be nonnegative")
        return LaurentLoc(self.f_tuple, self.num, self.k + extra,
                          self.product)

    def reduce(self) -> LaurentLoc:
        """Divide out the product while the numerator allows it."""
        num, k = self.num, self.k
        if num.is_zero():
            return LaurentLoc(self.f_tuple, num, 0, self.product)
        while k > 0:
            q = num.divide_exact(self.product)
            if q is None:
                break
            num, k = q, k - 1
        return LaurentLoc(self.f_tuple, num, k, self.product)

    def as_poly(self) -> MultiPoly:
        """The numerator of the fully reduced form; requires k to clear."""
        r = self.reduce()
        if r.k != 0:
            raise ValueError(f"not a polynomial: ({r.num}) / F^{r.k}")
        return r.num

    def __str__(self) -> str:
        if self.k == 0:
            return str(self.num)
        return f"({self.num}) / ({self.product})^{self.k}"

    def __repr__(self) -> str:
        return f"LaurentLoc({self!s})"
