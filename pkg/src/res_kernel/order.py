"""Order calculus: derivative ideals, T(I, a), order at a point, maxord.

In characteristic zero the order of an ideal at a point is the smallest
order of a differential operator that does not kill it there.  Globally,
``maxord(I)`` is the least ``k`` with ``D^{<=k} I`` the unit ideal, which is
what :func:`max_order` computes; no point enumeration is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from res_kernel.ideal import Ideal, groebner_basis, is_unit_on
from res_kernel.poly import Monomial, Polynomial, differentiate, order_at_origin, translate


@dataclass(frozen=True)
class MarkedIdeal:
    """A pair ``(I, a)`` together with the exceptional record of its chart."""

    ideal: Ideal
    mark: int
    exceptional: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.mark, int) or self.mark < 1:
            raise ValueError("the mark must be a positive integer")
        names = [e[0] if isinstance(e, tuple) else e for e in self.exceptional]
        for v in names:
            if v not in self.ideal.variables:
                raise ValueError(f"exceptional variable {v!r} is not a chart variable")

    @property
    def variables(self) -> tuple:
        return self.ideal.variables

    @property
    def exceptional_vars(self) -> tuple:
        return tuple(e[0] if isinstance(e, tuple) else e for e in self.exceptional)


def _normalized(p: Polynomial) -> Polynomial:
    return p.monic()


def derivative_ideal(I: Ideal, k: int) -> Ideal:
    """``D^{<=k} I``: all partial derivatives of order at most ``k`` of the generators."""
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    if k == 0 or I.is_zero():
        return I
    seen: dict = {}
    gens: list = []

    def push(p):
        key = _normalized(p)
        if key not in seen:
            seen[key] = None
            gens.append(p)
            return True
        return False

    level = []
    for g in I.generators:
        if push(g):
            level.append(g)
    for _ in range(k):
        nxt = []
        for f in level:
            for v in sorted(f.support(), key=I.variables.index):
                d = differentiate(f, v)
                if d and push(d):
                    nxt.append(d)
        level = nxt
        if not level:
            break
    if any(g.is_constant() for g in gens):
        return Ideal.unit(I.variables)
    return Ideal(gens, I.variables)


def t_ideal(M: MarkedIdeal) -> Ideal:
    """``T(I, a) = D^{<=a-1} I``; its zero set is the locus of order >= a."""
    return derivative_ideal(M.ideal, M.mark - 1)


def _rational(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("point coordinates must be rational numbers")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"only rational points are supported, got {type(x).__name__}")


def ord_at_point(I: Ideal, point: Sequence):
    """Order of ``I`` at a rational point; ``math.inf`` iff ``I`` is zero."""
    pt = [_rational(x) for x in point]
    if len(pt) != len(I.variables):
        raise ValueError(
            f"point has {len(pt)} coordinates but the chart has {len(I.variables)} variables"
        )
    if I.is_zero():
        return math.inf
    return min(order_at_origin(translate(g, pt)) for g in I.generators)


def _shrink(I: Ideal) -> Ideal:
    """A smaller generating set: minimal monomials, or a reduced Gröbner basis."""
    if all(g.is_monomial() for g in I.generators):
        exps = [g.leading_term()[0] for g in I.generators]
        keep = []
        for e in sorted(set(exps), key=sum):
            if not any(all(a <= b for a, b in zip(k, e)) for k in keep):
                keep.append(e)
        return Ideal([Polynomial(I.variables, {e: 1}) for e in keep], I.variables)
    return Ideal(groebner_basis(I), I.variables)


def max_order(I: Ideal, inverted: Sequence[Polynomial] = ()):
    """``maxord(I)``: least ``k`` with ``D^{<=k} I`` the unit ideal (on the patch).

    ``inverted`` restricts to the open set where those polynomials are
    nonzero.  Returns ``math.inf`` for the zero ideal.
    """
    if I.is_zero():
        return math.inf
    bound = min(g.total_degree() for g in I.generators)
    current = I
    for k in range(bound + 1):
        if k:
            # D^{<=1} only depends on the ideal, so differentiate a small basis of it
            current = derivative_ideal(_shrink(current), 1)
        if is_unit_on(current, inverted):
            return k
    raise AssertionError("a generator of degree d has a constant derivative of order d")


def monomial_content(p: Polynomial, names: Iterable[str]) -> dict:
    """Largest power of each named variable dividing ``p``."""
    idx = [p.variables.index(v) for v in names]
    out = {}
    for i in idx:
        out[p.variables[i]] = min(e[i] for e in p.terms) if p.terms else 0
    return out


def monomial_part(I: Ideal, exceptional: Iterable[str]) -> tuple:
    """Factor ``I = M * I'`` with ``M`` the largest exceptional monomial dividing all generators.

    Returns ``(Monomial, Ideal)``.  The monomial uses per-variable minimum
    exponents over all generators.
    """
    names = [e[0] if isinstance(e, tuple) else e for e in exceptional]
    for v in names:
        if v not in I.variables:
            raise ValueError(f"exceptional variable {v!r} is not a chart variable")
    n = len(I.variables)
    exps = [0] * n
    if I.generators:
        for v in names:
            i = I.variables.index(v)
            exps[i] = min(min(e[i] for e in g.terms) for g in I.generators)
    mono = Monomial(I.variables, tuple(exps))
    if not any(exps):
        return mono, I
    m = mono.as_polynomial()
    rest = [g.exact_divide(m) for g in I.generators]
    return mono, Ideal(rest, I.variables)
