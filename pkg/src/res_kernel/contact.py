"""Maximal contact, Tschirnhaus straightening, coefficient ideals, homogenization.

Contact hypersurfaces are taken from generators of ``T(I, a)`` of the shape
``c * x_j + g`` with ``c`` a nonzero rational and ``g`` free of ``x_j``.  For
such an element the substitution ``x_j -> x_j - g / c`` is a polynomial
automorphism after which the hypersurface is the coordinate hyperplane
``x_j = 0``.  When no generator has this shape :class:`NoAlgebraicContact`
is raised: contact hypersurfaces exist locally in general, but not always
as polynomial data on a fixed affine chart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from res_kernel.ideal import GREVLEX, Ideal, contains, groebner_basis
from res_kernel.order import MarkedIdeal, derivative_ideal, t_ideal
from res_kernel.poly import Polynomial, substitute

MAX_COEFFICIENT_MARK = 8


class NoAlgebraicContact(ValueError):
    """No element of T(I, a) of the form ``c * x + g`` (g free of x) was found."""


@dataclass(frozen=True)
class CoordinateChange:
    """The substitution ``var -> image`` (an automorphism fixing the other variables)."""

    var: str
    image: Polynomial

    def apply(self, p: Polynomial) -> Polynomial:
        if p.variables != self.image.variables:
            p = p.in_variables(self.image.variables)
        return substitute(p, {self.var: self.image}, self.image.variables)

    def apply_ideal(self, I: Ideal) -> Ideal:
        return Ideal([self.apply(g) for g in I.generators], self.image.variables)

    def is_identity(self) -> bool:
        return self.image == Polynomial.variable(self.var, self.image.variables)

    def __str__(self) -> str:
        return f"{self.var} -> {self.image}"


@dataclass(frozen=True)
class ContactDatum:
    """A maximal contact element ``h`` and the change making it a coordinate."""

    h: Polynomial
    straightening: CoordinateChange
    hypersurface_var: str

    @property
    def needs_straightening(self) -> bool:
        return not self.straightening.is_identity()


def linear_shape(h: Polynomial, var: str):
    """Split ``h = c * var + g`` with ``c`` rational and ``g`` free of ``var``.

    Returns ``(c, g)`` or ``None`` if ``h`` does not have that shape.
    """
    parts = h.coefficients_in(var)
    if set(parts) - {0, 1} or 1 not in parts:
        return None
    c = parts[1]
    if not c.is_constant():
        return None
    g = parts.get(0, Polynomial.zero(h.variables))
    return c.constant_term(), g


def contact_datum(h: Polynomial, var: str) -> ContactDatum:
    shape = linear_shape(h, var)
    if shape is None:
        raise NoAlgebraicContact(f"{h} is not of the form c*{var} + (terms free of {var})")
    c, g = shape
    x = Polynomial.variable(var, h.variables)
    return ContactDatum(h, CoordinateChange(var, x - g.scale(1 / c)), var)


def _grlex_desc(polys: Iterable[Polynomial]) -> list:
    from res_kernel.poly import grlex_key

    return sorted(polys, key=lambda p: grlex_key(p.leading_term()[0]), reverse=True)


def contact_candidates(T: Ideal, exclude: Sequence[str] = ()) -> list:
    """All ``(h, var)`` of contact shape among the generators of ``T``.

    Generators are normalized to be monic and deduplicated, then scanned in
    descending graded-lex order of their leading monomials.  For each
    generator the eligible variables are tried in chart order.
    """
    seen = []
    for g in T.generators:
        m = g.monic()
        if m not in seen:
            seen.append(m)
    out = []
    for h in _grlex_desc(seen):
        for v in T.variables:
            if v in exclude:
                continue
            if linear_shape(h, v) is not None:
                out.append((h, v))
    return out


def find_maximal_contact(
    M: MarkedIdeal,
    force: Polynomial | None = None,
    exclude: Sequence[str] = (),
) -> ContactDatum:
    """Pick a maximal contact element from the generators of ``T(I, a)``.

    With ``force`` the given element is used instead after checking that it
    lies in ``T(I, a)`` and has the required shape.
    """
    T = t_ideal(M)
    if force is not None:
        if force.variables != T.variables:
            force = force.in_variables(T.variables)
        if not contains(T, force):
            raise ValueError(f"{force} does not lie in T(I, {M.mark})")
        for v in T.variables:
            if v not in exclude and linear_shape(force, v) is not None:
                return contact_datum(force, v)
        raise NoAlgebraicContact(f"{force} has no variable it is linear in with constant slope")
    cands = contact_candidates(T, exclude)
    if not cands:
        raise NoAlgebraicContact(
            f"no generator of T(I, {M.mark}) has the form c*x + (terms free of x)"
        )
    h, v = cands[0]
    return contact_datum(h, v)


def tschirnhaus(f: Polynomial, v: str, a: int) -> CoordinateChange:
    """Remove the ``v^(a-1)`` term of ``f`` (monic of degree ``a`` in ``v``)."""
    parts = f.coefficients_in(v)
    lead = parts.get(a)
    if max(parts, default=-1) != a or lead is None or lead != Polynomial.constant(1, f.variables):
        raise ValueError(f"{f} is not monic of degree {a} in {v}")
    g1 = parts.get(a - 1, Polynomial.zero(f.variables))
    x = Polynomial.variable(v, f.variables)
    return CoordinateChange(v, x - g1.scale(Fraction(1, a)))


def restrict_to_hypersurface(I: Ideal, d: ContactDatum | str) -> Ideal:
    """Set the hypersurface variable to zero and drop it from the ring."""
    var = d.hypersurface_var if isinstance(d, ContactDatum) else d
    if var not in I.variables:
        raise ValueError(f"unknown variable {var!r}")
    keep = tuple(v for v in I.variables if v != var)
    i = I.variables.index(var)
    gens = []
    for g in I.generators:
        terms = {e[:i] + e[i + 1 :]: c for e, c in g.terms.items() if e[i] == 0}
        gens.append(Polynomial(keep, terms))
    return Ideal(gens, keep)


# ---------------------------------------------------------------------------
# reduced ideal arithmetic used by the coefficient ideal


def _minimal_monomials(exps: Iterable[tuple]) -> list:
    exps = sorted(set(exps), key=lambda e: (sum(e), e))
    keep = []
    for e in exps:
        if not any(all(a <= b for a, b in zip(k, e)) for k in keep):
            keep.append(e)
    return keep


def _is_monomial_ideal(I: Ideal) -> bool:
    return all(g.is_monomial() for g in I.generators)


def reduced(I: Ideal) -> Ideal:
    """Same ideal with its reduced Gröbner basis as generators."""
    if I.is_zero():
        return I
    if _is_monomial_ideal(I):
        exps = _minimal_monomials(next(iter(g.terms)) for g in I.generators)
        return Ideal([Polynomial(I.variables, {e: 1}) for e in exps], I.variables)
    return Ideal(groebner_basis(I, GREVLEX), I.variables)


def product_reduced(I: Ideal, J: Ideal) -> Ideal:
    if I.is_zero() or J.is_zero():
        return Ideal.zero(I.variables)
    return reduced(Ideal([f * g for f in I.generators for g in J.generators], I.variables))


def power_reduced(I: Ideal, k: int) -> Ideal:
    """``I^k`` by repeated squaring, reducing generators at every step."""
    if k == 0:
        return Ideal.unit(I.variables)
    if I.is_zero():
        return I
    base = reduced(I)
    if len(base.generators) == 1:
        return Ideal([base.generators[0] ** k], I.variables)
    result = None
    while k:
        if k & 1:
            result = base if result is None else product_reduced(result, base)
        k >>= 1
        if k:
            base = product_reduced(base, base)
    return result


def sum_reduced(ideals: Sequence[Ideal], variables) -> Ideal:
    gens = [g for I in ideals for g in I.generators]
    return reduced(Ideal(gens, variables))


def coefficient_ideal(M: MarkedIdeal, restrict: str | None = None) -> MarkedIdeal:
    """``(C(I, a), a!)`` with ``C(I, a) = sum_{i<a} (D^{<=i} I)^(a!/(a-i))``.

    With ``restrict`` the derivative ideals are restricted to the hyperplane
    ``restrict = 0`` before the powers are taken, which yields ``C(I, a)|_H``
    over the remaining variables.
    """
    a = M.mark
    if a > MAX_COEFFICIENT_MARK:
        raise ValueError(f"coefficient ideals are limited to marks <= {MAX_COEFFICIENT_MARK}")
    fact = math.factorial(a)
    variables = M.variables if restrict is None else tuple(v for v in M.variables if v != restrict)
    parts = []
    D = M.ideal
    for i in range(a):
        if i:
            D = reduced(derivative_ideal(D, 1))
        Di = D if restrict is None else restrict_to_hypersurface(D, restrict)
        parts.append(power_reduced(reduced(Di), fact // (a - i)))
    C = sum_reduced(parts, variables)
    exc = tuple(e for e in M.exceptional if (e[0] if isinstance(e, tuple) else e) in variables)
    return MarkedIdeal(C, fact, exc)


def homogenization(M: MarkedIdeal) -> Ideal:
    """``H(I, a) = sum_{i=0}^{a} D^{<=i}(I) * T(I, a)^i``."""
    a = M.mark
    T = reduced(t_ideal(M))
    parts = []
    D = M.ideal
    for i in range(a + 1):
        if i:
            D = derivative_ideal(D, 1)
        parts.append(product_reduced(reduced(D), power_reduced(T, i)))
    return sum_reduced(parts, M.variables)
