"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is a fixed, ordered tuple of variable names together
with a sparse map from exponent tuples to :class:`fractions.Fraction`
coefficients.  Values are immutable; every operation returns a new object.

Text grammar accepted by :func:`parse_polynomial` (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { "*" unary } ;
    unary   = ("+" | "-") unary | power ;
    power   = atom [ "^" integer ] ;
    atom    = number [ "/" integer ] | name | "(" expr ")" ;
    number  = digit { digit } ;
    name    = letter { letter | digit | "_" } ;

Multiplication must be written explicitly with ``*``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from res_kernel import kernels

Exp = tuple

GRLEX_DESC = "grlex"


class PolynomialSyntaxError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def grlex_key(exp: Exp) -> tuple:
    return (sum(exp), exp)


@dataclass(frozen=True)
class Monomial:
    """A power product over a variable list."""

    variables: tuple
    exponents: tuple

    def __post_init__(self):
        if len(self.variables) != len(self.exponents):
            raise ValueError("exponent vector length differs from variable count")
        if any(e < 0 for e in self.exponents):
            raise ValueError("negative exponent")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def as_polynomial(self) -> "Polynomial":
        return Polynomial(self.variables, {tuple(self.exponents): Fraction(1)})

    def as_dict(self) -> dict:
        return {v: e for v, e in zip(self.variables, self.exponents) if e}

    def __str__(self) -> str:
        return str(self.as_polynomial())


class Polynomial:
    """Sparse polynomial with rational coefficients over named variables."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None, *, _trusted=False):
        self.variables = tuple(variables)
        if _trusted:
            self.terms = terms
        else:
            n = len(self.variables)
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError("exponent length mismatch")
                c = _frac(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables, {}, _trusted=True)

    @classmethod
    def constant(cls, c, variables) -> "Polynomial":
        c = _frac(c)
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, name: str, variables) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariableError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], variables, coeff=1) -> "Polynomial":
        variables = tuple(variables)
        for v in powers:
            if v not in variables:
                raise UnknownVariableError(f"unknown variable {v!r}")
        exp = tuple(powers.get(v, 0) for v in variables)
        return cls(variables, {exp: _frac(coeff)})

    # basic queries ----------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v: str) -> int:
        i = self._index(v)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def support(self) -> set:
        """Variables that actually occur."""
        used = set()
        for e in self.terms:
            for v, k in zip(self.variables, e):
                if k:
                    used.add(v)
        return used

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order (variable order = list order)."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            return None
        return self.sorted_terms()[0]

    def _index(self, v: str) -> int:
        try:
            return self.variables.index(v)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {v!r}") from None

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.variables, kernels.poly_add(self.terms, o.terms), _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.variables, kernels.poly_sub(self.terms, o.terms), _trusted=True)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.variables, kernels.poly_mul(self.terms, o.terms), _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial(self.variables, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def monic(self) -> "Polynomial":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term()[1])

    def primitive(self) -> "Polynomial":
        """Integer coefficients with gcd 1 and positive graded-lex leading coefficient."""
        if not self.terms:
            return self
        den = math.lcm(*(c.denominator for c in self.terms.values()))
        nums = [int(c * den) for c in self.terms.values()]
        g = math.gcd(*nums)
        lead = self.leading_term()[1]
        sign = 1 if lead > 0 else -1
        return self.scale(Fraction(den * sign, g))

    def exact_divide(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient if ``other`` divides ``self`` exactly, else ``None``."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        if other.is_monomial():
            (me, mc), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                d = tuple(a - b for a, b in zip(e, me))
                if min(d) < 0:
                    return None
                out[d] = c / mc
            return Polynomial(self.variables, out, _trusted=True)
        # multivariate division by a single polynomial under a lex-like order
        weights = tuple(
            tuple(1 if j == i else 0 for j in range(self.nvars)) for i in range(self.nvars)
        )
        lg = kernels.leading_exp(other.terms, weights)
        quot = {}
        p = dict(self.terms)
        while p:
            lt = kernels.leading_exp(p, weights)
            if not kernels.divides(lg, lt):
                return None
            shift = tuple(a - b for a, b in zip(lt, lg))
            c = p[lt] / other.terms[lg]
            quot[shift] = quot.get(shift, Fraction(0)) + c
            p = kernels.sub_mul_term(p, other.terms, c, shift)
        return Polynomial(self.variables, {e: c for e, c in quot.items() if c}, _trusted=True)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # evaluation / variable handling -----------------------------------------
    def evaluate(self, point: Mapping[str, object] | Sequence) -> Fraction:
        if isinstance(point, Mapping):
            vals = [_frac(point[v]) for v in self.variables]
        else:
            vals = [_frac(x) for x in point]
            if len(vals) != self.nvars:
                raise ValueError("point dimension does not match variable count")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x**k
            total += t
        return total

    def in_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over another variable list (must contain every used variable)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        n = len(variables)
        for e, c in self.terms.items():
            new = [0] * n
            for v, k in zip(self.variables, e):
                if k:
                    if v not in pos:
                        raise UnknownVariableError(f"variable {v!r} not in target list")
                    new[pos[v]] = k
            out[tuple(new)] = c
        return Polynomial(variables, out, _trusted=True)

    def coefficients_in(self, v: str) -> dict:
        """Split as sum of ``coeff_k * v^k``; returns ``{k: coeff_k}`` (same variables)."""
        i = self._index(v)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(k, {})[rest] = c
        return {k: Polynomial(self.variables, t, _trusted=True) for k, t in out.items()}

    # text -------------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, exp) if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={','.join(self.variables)})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch):
        kind, val, pos = self.take()
        if kind != "op" or val != ch:
            raise PolynomialSyntaxError(f"expected {ch!r}", pos)

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if val == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.unary()
            else:
                return result

    def unary(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a non-negative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(int(val))
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "num":
                    raise PolynomialSyntaxError("expected integer denominator", p3)
                if int(v3) == 0:
                    raise PolynomialSyntaxError("zero denominator", p3)
                value = value / int(v3)
            return Polynomial.constant(value, self.variables)
        if kind == "name":
            if val not in self.variables:
                raise UnknownVariableError(f"unknown variable {val!r} at position {pos}")
            return Polynomial.variable(val, self.variables)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", pos)
        raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a canonical polynomial over ``variables``.

    >>> str(parse_polynomial("(x+y)^2", ["x", "y"]))
    'x^2 + 2*x*y + y^2'
    """
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable names")
    parser = _Parser(text, variables)
    result = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)
    return result


# ---------------------------------------------------------------------------
# calculus and substitution

def differentiate(p: Polynomial, v: str, times: int = 1) -> Polynomial:
    """Formal partial derivative of ``p`` with respect to ``v`` (``times`` times)."""
    i = p._index(v)
    terms = p.terms
    for _ in range(times):
        out = {}
        for e, c in terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1 :]] = c * k
        terms = out
    return Polynomial(p.variables, terms, _trusted=True)


def substitute(
    p: Polynomial,
    mapping: Mapping[str, Polynomial],
    target_variables: Sequence[str] | None = None,
) -> Polynomial:
    """Simultaneously replace variables of ``p`` by polynomials.

    Images must live over ``target_variables`` (defaults to the variables of
    the first image, or ``p.variables`` when the mapping is empty).  Variables
    without an image map to the same-named target variable.
    """
    for v in mapping:
        p._index(v)
    if target_variables is None:
        target_variables = (
            next(iter(mapping.values())).variables if mapping else p.variables
        )
    target = tuple(target_variables)
    images = []
    for v in p.variables:
        if v in mapping:
            img = mapping[v]
            if img.variables != target:
                img = img.in_variables(target)
            images.append(img)
        elif v in target:
            images.append(Polynomial.variable(v, target))
        else:
            images.append(None)
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if images[i] is None:
                raise UnknownVariableError(
                    f"variable {p.variables[i]!r} has no image in the target ring"
                )
            if k == 1:
                cache[key] = images[i]
            else:
                half = power(i, k // 2)
                sq = half * half
                cache[key] = sq * images[i] if k % 2 else sq
        return cache[key]

    acc: dict = {}
    for e, c in p.terms.items():
        term = {(0,) * len(target): c}
        for i, k in enumerate(e):
            if k:
                term = kernels.poly_mul(term, power(i, k).terms)
        acc = kernels.poly_add(acc, term)
    return Polynomial(target, acc, _trusted=True)


def translate(p: Polynomial, point: Sequence) -> Polynomial:
    """Return ``p(x + point)`` so that ``point`` moves to the origin."""
    pt = [_frac(x) for x in point]
    if len(pt) != p.nvars:
        raise ValueError("point dimension does not match variable count")
    mapping = {
        v: Polynomial.variable(v, p.variables) + c for v, c in zip(p.variables, pt) if c
    }
    if not mapping:
        return p
    return substitute(p, mapping, p.variables)


def order_at_origin(p: Polynomial):
    """Smallest total degree of a term; ``math.inf`` for the zero polynomial."""
    if not p.terms:
        return math.inf
    return min(sum(e) for e in p.terms)


def variables_from_text(spec: str | Iterable[str]) -> tuple:
    if isinstance(spec, str):
        names = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        names = list(spec)
    for n in names:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", n):
            raise ValueError(f"invalid variable name {n!r}")
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    return tuple(names)
