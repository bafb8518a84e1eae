"""Ideals in polynomial rings over the rationals, decided by Gröbner bases.

Buchberger's algorithm with the sugar selection strategy, the Gebauer-Möller
pair criteria and full inter-reduction.  Every decision procedure here
(membership, unit test, saturation, elimination) reduces to one call of
:func:`groebner_basis`.

The number of S-pairs processed per basis computation is capped; the default
of 200 000 can be overridden with the environment variable
``RES_KERNEL_SPAIR_CAP``.  Hitting the cap raises
:class:`GroebnerCapExceeded`; no result is ever silently truncated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from res_kernel import kernels
from res_kernel.poly import Polynomial

DEFAULT_SPAIR_CAP = 200_000


class GroebnerCapExceeded(RuntimeError):
    """The S-pair budget was exhausted before the basis was complete."""


def spair_cap() -> int:
    raw = os.environ.get("RES_KERNEL_SPAIR_CAP")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"RES_KERNEL_SPAIR_CAP must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError("RES_KERNEL_SPAIR_CAP must be positive")
        return value
    return DEFAULT_SPAIR_CAP


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by its kind; ``split`` is used by block orders.

    ``block`` compares the first ``split`` variables by graded reverse lex
    and breaks ties with graded reverse lex on the remaining variables, so
    it eliminates the first block.
    """

    kind: str
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 0:
            raise ValueError("block split must be non-negative")

    @staticmethod
    def block(k: int) -> "MonomialOrder":
        return MonomialOrder("block", k)

    def weights(self, n: int) -> tuple:
        """Weight matrix whose row-wise dot products give the sort key."""

        def unit(i, sign=1):
            return tuple(sign if j == i else 0 for j in range(n))

        def grevlex_rows(lo, hi):
            rows = [tuple(1 if lo <= j < hi else 0 for j in range(n))]
            rows.extend(unit(i, -1) for i in range(hi - 1, lo, -1))
            return rows

        if self.kind == "lex":
            rows = [unit(i) for i in range(n)]
        elif self.kind == "grlex":
            rows = [tuple([1] * n)] + [unit(i) for i in range(n)]
        elif self.kind == "grevlex":
            rows = grevlex_rows(0, n)
        else:
            k = min(self.split, n)
            rows = (grevlex_rows(0, k) if k else []) + (grevlex_rows(k, n) if k < n else [])
        return tuple(rows)

    def __str__(self) -> str:
        return f"block({self.split})" if self.kind == "block" else self.kind


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


# ---------------------------------------------------------------------------
# Buchberger core on raw term dicts


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _monic(p, lead):
    c = p[lead]
    if c == 1:
        return p
    inv = 1 / c
    return {e: v * inv for e, v in p.items()}


def _buchberger(polys: list, weights: tuple, cap: int) -> list:
    """Reduced Gröbner basis of the given nonzero term dicts."""
    n = len(weights[0]) if weights else 0
    one = (0,) * n
    key = lambda e: kernels.order_key(e, weights)  # noqa: E731

    basis: list = []  # all polynomials ever added
    leads: list = []
    sugar: list = []
    active: list = []  # indices of the current minimal generators
    pairs: list = []  # (sugar, lcm key, i, j, lcm)

    def update(h):
        nonlocal pairs, active
        lh = leads[h]
        new = []
        for g in active:
            new.append((g, _lcm(leads[g], lh)))
        # chain criterion among the new pairs
        kept = []
        for idx, (g, m) in enumerate(new):
            if _coprime(leads[g], lh):
                kept.append((g, m))
                continue
            redundant = False
            for jdx, (g2, m2) in enumerate(new):
                if jdx == idx:
                    continue
                if kernels.divides(m2, m) and (m2 != m or jdx < idx):
                    redundant = True
                    break
            if not redundant:
                kept.append((g, m))
        # product criterion
        fresh = []
        for g, m in kept:
            if _coprime(leads[g], lh):
                continue
            s = max(sugar[g] + sum(m) - sum(leads[g]), sugar[h] + sum(m) - sum(lh))
            fresh.append((s, key(m), g, h, m))
        # drop old pairs made redundant by h
        survivors = []
        for pr in pairs:
            _, _, i, j, m = pr
            if (
                kernels.divides(lh, m)
                and _lcm(leads[i], lh) != m
                and _lcm(leads[j], lh) != m
            ):
                continue
            survivors.append(pr)
        pairs = survivors + fresh
        active = [g for g in active if not kernels.divides(lh, leads[g])] + [h]

    def add(p, s):
        lp = kernels.leading_exp(p, weights)
        p = _monic(p, lp)
        basis.append(p)
        leads.append(lp)
        sugar.append(s)
        update(len(basis) - 1)

    def current():
        return [basis[i] for i in active], [leads[i] for i in active]

    order_in = sorted(
        ((p, kernels.leading_exp(p, weights)) for p in polys), key=lambda t: key(t[1])
    )
    for p, lp in order_in:
        gs, ls = current()
        r = kernels.normal_form(p, gs, ls, weights)
        if not r:
            continue
        if one in r and len(r) == 1:
            return [{one: Fraction(1)}]
        add(r, max(sum(e) for e in p))

    processed = 0
    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1], pairs[t][2], pairs[t][3]))
        s, _, i, j, _ = pairs.pop(best)
        processed += 1
        if processed > cap:
            raise GroebnerCapExceeded(
                f"Groebner basis computation exceeded the S-pair cap of {cap}"
            )
        sp = kernels.spoly(basis[i], basis[j], leads[i], leads[j])
        gs, ls = current()
        r = kernels.normal_form(sp, gs, ls, weights)
        if not r:
            continue
        if one in r and len(r) == 1:
            return [{one: Fraction(1)}]
        add(r, s)

    # inter-reduction of the minimal basis
    gs, ls = current()
    reduced = []
    for idx, (g, lg) in enumerate(zip(gs, ls)):
        others = [h for k, h in enumerate(gs) if k != idx]
        other_leads = [h for k, h in enumerate(ls) if k != idx]
        tail = dict(g)
        del tail[lg]
        r = kernels.normal_form(tail, others, other_leads, weights)
        r[lg] = g[lg]
        reduced.append(_monic(r, lg))
    reduced.sort(key=lambda p: key(kernels.leading_exp(p, weights)), reverse=True)
    return reduced


# ---------------------------------------------------------------------------
# Ideal value type


class Ideal:
    """A finitely generated ideal in ``Q[variables]``.

    Generators are stored as given (zero generators dropped).  Reduced
    Gröbner bases are cached per monomial order; the cache is filled at most
    once per order and never changes the ideal.
    """

    __slots__ = ("variables", "generators", "_gb")

    def __init__(self, generators: Iterable[Polynomial], variables: Sequence[str] | None = None):
        gens = list(generators)
        if variables is None:
            if not gens:
                raise ValueError("variables are required for an ideal without generators")
            variables = gens[0].variables
        variables = tuple(variables)
        clean = []
        for g in gens:
            if not isinstance(g, Polynomial):
                raise TypeError("generators must be Polynomial values")
            if g.variables != variables:
                raise ValueError(
                    f"generator over {g.variables} does not match ideal variables {variables}"
                )
            if g:
                clean.append(g)
        self.variables = variables
        self.generators = tuple(clean)
        self._gb: dict = {}

    @classmethod
    def unit(cls, variables) -> "Ideal":
        return cls([Polynomial.constant(1, variables)], variables)

    @classmethod
    def zero(cls, variables) -> "Ideal":
        return cls([], variables)

    def is_zero(self) -> bool:
        return not self.generators

    def groebner(self, order: MonomialOrder = GREVLEX, cap: int | None = None) -> tuple:
        cached = self._gb.get(order)
        if cached is None:
            cached = tuple(groebner_basis(self, order, cap=cap))
            self._gb[order] = cached
        return cached

    def in_variables(self, variables: Sequence[str]) -> "Ideal":
        return Ideal([g.in_variables(variables) for g in self.generators], variables)

    def map(self, fn) -> "Ideal":
        gens = [fn(g) for g in self.generators]
        variables = gens[0].variables if gens else self.variables
        return Ideal(gens, variables)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"Ideal{str(self)} over {','.join(self.variables)}"


def _as_terms(I: Ideal) -> list:
    return [dict(g.terms) for g in I.generators]


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, cap: int | None = None) -> list:
    """Reduced Gröbner basis of ``I``, as monic polynomials sorted by leading term."""
    if cap is None:
        cap = spair_cap()
    if I.is_zero():
        return []
    n = len(I.variables)
    if n == 0:
        return [Polynomial.constant(1, ())]
    weights = order.weights(n)
    raw = _buchberger(_as_terms(I), weights, cap)
    return [Polynomial(I.variables, p, _trusted=True) for p in raw]


def normal_form(p: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX) -> Polynomial:
    if p.variables != I.variables:
        raise ValueError("polynomial and ideal live over different variables")
    gb = I.groebner(order)
    if not gb:
        return p
    weights = order.weights(len(I.variables))
    leads = [kernels.leading_exp(g.terms, weights) for g in gb]
    r = kernels.normal_form(p.terms, [g.terms for g in gb], leads, weights)
    return Polynomial(I.variables, r, _trusted=True)


def contains(I: Ideal, p: Polynomial) -> bool:
    """Exact ideal membership ``p in I``."""
    if p.variables != I.variables:
        p = p.in_variables(I.variables)
    if not p:
        return True
    if I.is_zero():
        return False
    return not normal_form(p, I)


def is_unit_ideal(I: Ideal, order: MonomialOrder = GREVLEX) -> bool:
    for g in I.generators:
        if g.is_constant():
            return True
    gb = I.groebner(order)
    return len(gb) == 1 and gb[0].is_constant()


def contains_ideal(I: Ideal, J: Ideal) -> bool:
    """``J ⊆ I``."""
    return all(contains(I, g) for g in J.generators)


def ideals_equal(I: Ideal, J: Ideal) -> bool:
    """Equality by mutual membership of generators."""
    return contains_ideal(I, J) and contains_ideal(J, I)


def combine(I: Ideal, J: Ideal | None = None, mode: str = "sum", k: int | None = None) -> Ideal:
    """Sum, product or ``k``-th power of ideals at the generator level."""
    if mode == "sum":
        _same(I, J)
        return Ideal(list(I.generators) + list(J.generators), I.variables)
    if mode == "product":
        _same(I, J)
        return Ideal([f * g for f in I.generators for g in J.generators], I.variables)
    if mode == "power":
        if k is None or k < 0:
            raise ValueError("power mode needs k >= 0")
        return ideal_power(I, k)
    raise ValueError(f"unknown combine mode {mode!r}")


def _same(I, J):
    if J is None:
        raise ValueError("a second ideal is required")
    if I.variables != J.variables:
        raise ValueError("ideals live over different variables")


def ideal_power(I: Ideal, k: int) -> Ideal:
    """``I^k`` with generators the distinct k-fold products (deduplicated)."""
    if k == 0:
        return Ideal.unit(I.variables)
    gens = [Polynomial.constant(1, I.variables)]
    for _ in range(k):
        seen = {}
        for a in gens:
            for g in I.generators:
                prod = a * g
                seen.setdefault(prod, None)
        gens = list(seen)
    return Ideal(gens, I.variables)


def _fresh_name(taken: Iterable[str], stem: str = "t") -> str:
    taken = set(taken)
    name = f"_{stem}"
    i = 0
    while name in taken:
        i += 1
        name = f"_{stem}{i}"
    return name


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """``I`` intersected with the subring free of the ``drop`` variables.

    The result lives over the remaining variables (original order kept).
    """
    drop = list(dict.fromkeys(drop))
    for v in drop:
        if v not in I.variables:
            raise ValueError(f"variable {v!r} is not a chart variable")
    if not drop:
        return I
    keep = [v for v in I.variables if v not in drop]
    ordered = tuple(drop) + tuple(keep)
    J = I.in_variables(ordered)
    gb = groebner_basis(J, MonomialOrder.block(len(drop)))
    k = len(drop)
    out = []
    for g in gb:
        if all(not any(e[:k]) for e in g.terms):
            out.append(Polynomial(tuple(keep), {e[k:]: c for e, c in g.terms.items()}, _trusted=True))
    return Ideal(out, tuple(keep))


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f^∞)`` via ``I + (1 - t f)`` and elimination of ``t``."""
    if not f:
        raise ValueError("cannot saturate by the zero polynomial")
    if f.variables != I.variables:
        f = f.in_variables(I.variables)
    if f.is_constant() or I.is_zero():
        return I
    t = _fresh_name(I.variables)
    ext = (t,) + I.variables
    gens = [g.in_variables(ext) for g in I.generators]
    gens.append(Polynomial.constant(1, ext) - Polynomial.variable(t, ext) * f.in_variables(ext))
    return eliminate(Ideal(gens, ext), [t])


def radical_member(I: Ideal, f: Polynomial) -> bool:
    """``f`` lies in the radical of ``I`` (so ``I`` is the unit ideal where ``f ≠ 0``)."""
    if f.variables != I.variables:
        f = f.in_variables(I.variables)
    if not f:
        return True
    t = _fresh_name(I.variables)
    ext = (t,) + I.variables
    gens = [g.in_variables(ext) for g in I.generators]
    gens.append(Polynomial.constant(1, ext) - Polynomial.variable(t, ext) * f.in_variables(ext))
    return is_unit_ideal(Ideal(gens, ext))


def _product(polys: Sequence[Polynomial], variables) -> Polynomial:
    out = Polynomial.constant(1, variables)
    for p in polys:
        out = out * p.in_variables(variables)
    return out


def is_unit_on(I: Ideal, inverted: Sequence[Polynomial] = ()) -> bool:
    """Unit test on the open patch where every ``inverted`` polynomial is nonzero."""
    if not inverted:
        return is_unit_ideal(I)
    return radical_member(I, _product(inverted, I.variables))


def localize(I: Ideal, inverted: Sequence[Polynomial] = ()) -> Ideal:
    """The contraction of ``I`` localized at the inverted polynomials."""
    if not inverted:
        return I
    return saturate(I, _product(inverted, I.variables))


def contains_on(I: Ideal, p: Polynomial, inverted: Sequence[Polynomial] = ()) -> bool:
    """Membership after inverting the given polynomials."""
    if not inverted:
        return contains(I, p)
    if is_unit_on(I, inverted):
        return True
    return contains(localize(I, inverted), p)


def ideals_equal_on(I: Ideal, J: Ideal, inverted: Sequence[Polynomial] = ()) -> bool:
    if not inverted:
        return ideals_equal(I, J)
    LI, LJ = localize(I, inverted), localize(J, inverted)
    return contains_ideal(LI, LJ) and contains_ideal(LJ, LI)
