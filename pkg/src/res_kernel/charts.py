"""Blow-up charts for coordinate-subspace centers and the three transforms.

A :class:`Chart` is an affine coordinate patch reached from the root by a
sequence of blow-ups, coordinate changes and localizations.  It records how
each parent variable is expressed in the chart's own variables, so the
total transform of an ideal is a plain substitution.

Three kinds of non-root charts exist:

``blowup``
    One chart of the blow-up of a coordinate subspace ``V(x_i : i in Z)``.
    In the chart of ``x_i`` the other center variables become ``x_i * n_j``
    where ``n_j`` is a fresh name that takes the place of ``x_j``.
``change``
    A coordinate change ``x_j -> (u - B) / A`` valid where ``A`` is a unit.
    ``A = 1`` gives a polynomial automorphism; otherwise the chart is the
    open set ``D(A)`` and pulled-back polynomials are multiplied by the
    appropriate power of ``A`` to stay polynomial.
``patch``
    The open subset where one more polynomial is inverted; coordinates are
    unchanged.

Inverted polynomials are carried along (re-expressed in each new chart) so
that unit and membership questions can be asked on the patch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from res_kernel.ideal import Ideal, contains_on, saturate
from res_kernel.order import MarkedIdeal, t_ideal
from res_kernel.poly import Polynomial, substitute

NAME_CANDIDATES = tuple("zwvutsrqponmlkjihgfedcba")


class InadmissibleCenter(ValueError):
    """The center is not contained in the locus of order >= a, or division was inexact."""


@dataclass(frozen=True)
class Center:
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("a center needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("repeated center variable")

    def __str__(self) -> str:
        return "{" + ",".join(self.vars) + "}"


@dataclass(frozen=True)
class Substitution:
    """One entry of a chart's coordinate-change log.

    ``mapping`` lists ``(parent variable, image text)`` for every variable
    whose image is not the same-named variable; ``denominator`` is the text
    of ``A`` for rational coordinate changes and ``"1"`` otherwise.
    """

    kind: str
    chart_id: str
    mapping: tuple
    denominator: str = "1"
    inverted: str | None = None

    def __str__(self) -> str:
        body = ", ".join(f"{v} -> {img}" for v, img in self.mapping)
        if self.denominator != "1":
            body += f" (divided by {self.denominator})"
        if self.inverted:
            body += f" on D({self.inverted})"
        return f"{self.kind} {self.chart_id}: {body}" if body else f"{self.kind} {self.chart_id}"


@dataclass(frozen=True)
class Chart:
    """An affine patch of the blow-up tree."""

    id: str
    variables: tuple
    exceptional: tuple = ()
    log: tuple = ()
    inverted: tuple = ()
    used_names: frozenset = field(default_factory=frozenset)
    stage: int = 0
    kind: str = "root"
    parent_variables: tuple | None = None
    pullback_map: tuple = ()
    denominator: Polynomial | None = None
    center: Center | None = None
    chart_var: str | None = None

    def __post_init__(self):
        for v, _ in self.exceptional:
            if v not in self.variables:
                raise ValueError(f"exceptional variable {v!r} is not a chart variable")
        if not self.used_names:
            object.__setattr__(self, "used_names", frozenset(self.variables))

    @property
    def exceptional_vars(self) -> tuple:
        return tuple(v for v, _ in self.exceptional)

    def image_of(self, parent_var: str):
        """``(numerator, denominator)`` image of a parent variable, or ``None`` for identity."""
        for v, num in self.pullback_map:
            if v == parent_var:
                return num
        return None


def root_chart(variables: Sequence[str], exceptional: Iterable[str] = ()) -> Chart:
    variables = tuple(variables)
    return Chart(
        id="root",
        variables=variables,
        exceptional=tuple((v, 0) for v in exceptional),
        used_names=frozenset(variables),
    )


def fresh_names(used: Iterable[str], count: int) -> list:
    used = set(used)
    out = []
    if count <= 0:
        return out
    for name in itertools.chain(
        NAME_CANDIDATES,
        (f"{c}{i}" for i in itertools.count(1) for c in NAME_CANDIDATES),
    ):
        if name not in used:
            out.append(name)
            used.add(name)
            if len(out) == count:
                return out
    raise AssertionError("unreachable")


def blow_up_charts(c: Chart, Z: Center | Iterable[str]) -> list:
    """Charts of the blow-up of ``c`` along ``V(Z)``, one per center variable."""
    if not isinstance(Z, Center):
        Z = Center(tuple(Z))
    for v in Z.vars:
        if v not in c.variables:
            raise ValueError(f"center variable {v!r} is not a chart variable")
    zvars = [v for v in c.variables if v in Z.vars]
    stage = c.stage + 1
    charts = []
    for xi in zvars:
        others = [v for v in zvars if v != xi]
        names = fresh_names(c.used_names, len(others))
        rename = dict(zip(others, names))
        new_vars = tuple(rename.get(v, v) for v in c.variables)
        xi_poly = Polynomial.variable(xi, new_vars)
        pmap = tuple(
            (xj, xi_poly * Polynomial.variable(rename[xj], new_vars)) for xj in others
        )
        exc = []
        for e, birth in c.exceptional:
            if e == xi:
                continue
            exc.append((rename.get(e, e), birth))
        exc.append((xi, stage))
        exc.sort(key=lambda t: new_vars.index(t[0]))
        chart_id = f"{c.id}/{xi}-chart"
        record = Substitution(
            "blowup", chart_id, tuple((v, str(p)) for v, p in pmap)
        )
        charts.append(
            Chart(
                id=chart_id,
                variables=new_vars,
                exceptional=tuple(exc),
                log=c.log + (record,),
                inverted=tuple(_pull_raw(g, c.variables, new_vars, pmap, None) for g in c.inverted),
                used_names=c.used_names | frozenset(names),
                stage=stage,
                kind="blowup",
                parent_variables=c.variables,
                pullback_map=pmap,
                center=Z,
                chart_var=xi,
            )
        )
    return charts


def change_chart(
    c: Chart,
    var: str,
    new_name: str,
    numerator: Polynomial,
    denominator: Polynomial | None = None,
    extra_inverted: Sequence[Polynomial] = (),
    chart_id: str | None = None,
) -> Chart:
    """Replace ``var`` by ``numerator / denominator`` with ``new_name`` in its slot.

    ``numerator`` is over the new variables; ``denominator`` must not involve
    ``var`` and is over the parent variables.  ``extra_inverted`` (parent
    variables) are added to the patch's inverted set.  If ``var`` was
    exceptional it must be inverted on the new patch and is dropped from the
    exceptional record.
    """
    if var not in c.variables:
        raise ValueError(f"unknown chart variable {var!r}")
    if new_name in c.variables and new_name != var:
        raise ValueError(f"name {new_name!r} already in use")
    new_vars = tuple(new_name if v == var else v for v in c.variables)
    if numerator.variables != new_vars:
        numerator = numerator.in_variables(new_vars)
    den = None
    if denominator is not None and not (denominator.is_constant() and denominator.constant_term() == 1):
        if var in denominator.support():
            raise ValueError("denominator must not involve the replaced variable")
        den = denominator.in_variables(c.variables)
    pmap = ((var, numerator),)
    inverted = [_pull_raw(g, c.variables, new_vars, pmap, den) for g in c.inverted]
    extra = list(extra_inverted) + ([den] if den is not None else [])
    inverted += [_pull_raw(g.in_variables(c.variables), c.variables, new_vars, pmap, den) for g in extra]
    inverted = _dedupe_inverted(inverted)
    exc = _drop_inverted(tuple((e, b) for e, b in c.exceptional if e != var), inverted)
    if chart_id is None:
        shown = numerator if den is None else f"({numerator})/({den})"
        chart_id = f"{c.id}/[{var}={shown}]"
    record = Substitution(
        "change",
        chart_id,
        ((var, str(numerator)),),
        "1" if den is None else str(den),
        None,
    )
    return Chart(
        id=chart_id,
        variables=new_vars,
        exceptional=exc,
        log=c.log + (record,),
        inverted=tuple(inverted),
        used_names=c.used_names | {new_name},
        stage=c.stage,
        kind="change",
        parent_variables=c.variables,
        pullback_map=pmap,
        denominator=den,
    )


def patch_chart(c: Chart, g: Polynomial, chart_id: str | None = None) -> Chart:
    """The open subset ``D(g)`` of ``c`` (same coordinates)."""
    g = normalize_inverted(g.in_variables(c.variables))
    if chart_id is None:
        chart_id = f"{c.id}/D({g})"
    record = Substitution("patch", chart_id, (), "1", str(g))
    return Chart(
        id=chart_id,
        variables=c.variables,
        exceptional=_drop_inverted(c.exceptional, [g]),
        log=c.log + (record,),
        inverted=tuple(_dedupe_inverted(list(c.inverted) + [g])),
        used_names=c.used_names,
        stage=c.stage,
        kind="patch",
        parent_variables=c.variables,
        pullback_map=(),
    )


def normalize_inverted(g: Polynomial) -> Polynomial:
    """Canonical generator of the same open set: reduced monomial or primitive polynomial."""
    if g.is_monomial():
        (exp, _), = g.terms.items()
        return Polynomial(g.variables, {tuple(1 if k else 0 for k in exp): 1})
    return g.primitive()


def _drop_inverted(exceptional, inverted):
    """Exceptional hyperplanes disjoint from the patch (their variable is a unit) are dropped."""
    units = set()
    for g in inverted:
        if g.is_monomial():
            units |= g.support()
    return tuple((e, b) for e, b in exceptional if e not in units)


def _dedupe_inverted(polys):
    out = []
    for g in polys:
        g = normalize_inverted(g)
        if g.is_constant() or g in out:
            continue
        out.append(g)
    return out


def _pull_raw(p: Polynomial, parent_vars, child_vars, pmap, den) -> Polynomial:
    """Pull ``p`` back along ``pmap`` (with an optional common denominator cleared)."""
    if p.variables != tuple(parent_vars):
        p = p.in_variables(parent_vars)
    if den is None:
        mapping = {v: img for v, img in pmap}
        ident = {v: Polynomial.variable(v, child_vars) for v in parent_vars if v in child_vars and v not in mapping}
        mapping.update(ident)
        return substitute(p, mapping, child_vars)
    (var, num), = pmap
    parts = p.coefficients_in(var)
    d = max(parts) if parts else 0
    den_c = den.in_variables(child_vars)
    total = Polynomial.zero(child_vars)
    for k, coeff in parts.items():
        coeff_c = coeff.in_variables(child_vars)
        total = total + coeff_c * num**k * den_c ** (d - k)
    return total


def pullback(p: Polynomial, parent: Chart, child: Chart) -> Polynomial:
    """Pull a polynomial on ``parent`` back to ``child`` (denominators cleared)."""
    if child.kind == "patch":
        return p.in_variables(child.variables)
    return _pull_raw(p, parent.variables, child.variables, child.pullback_map, child.denominator)


def total_transform(I: Ideal, parent: Chart, child: Chart) -> Ideal:
    """``I O_child``: substitute the chart map into every generator."""
    return Ideal([pullback(g, parent, child) for g in I.generators], child.variables)


def center_ideal(c: Chart, Z: Center) -> Ideal:
    return Ideal([Polynomial.variable(v, c.variables) for v in Z.vars], c.variables)


def is_admissible(M: MarkedIdeal, c: Chart, Z: Center) -> bool:
    """``Z ⊆ V(I, a)`` on the patch: every ``T(I, a)`` generator lies in ``(Z)``."""
    cid = center_ideal(c, Z)
    return all(contains_on(cid, g, c.inverted) for g in t_ideal(M).generators)


def controlled_transform(M: MarkedIdeal, parent: Chart, child: Chart, check: bool = True) -> Ideal:
    """Total transform divided by ``e^a`` where ``e`` is the new exceptional variable."""
    if child.kind != "blowup":
        raise ValueError("controlled transform is defined for blow-up charts only")
    if check and not is_admissible(M, parent, child.center):
        raise InadmissibleCenter(
            f"center {child.center} is not admissible for the marked ideal of order {M.mark}"
        )
    e = Polynomial.variable(child.chart_var, child.variables) ** M.mark
    out = []
    for g in total_transform(M.ideal, parent, child).generators:
        q = g.exact_divide(e)
        if q is None:
            raise InadmissibleCenter(
                f"{g} is not divisible by {child.chart_var}^{M.mark}"
            )
        out.append(q)
    return Ideal(out, child.variables)


def strict_transform(I: Ideal, parent: Chart, child: Chart) -> Ideal:
    """Saturation of the total transform by the new exceptional variable."""
    total = total_transform(I, parent, child)
    if child.kind != "blowup":
        return total
    return saturate(total, Polynomial.variable(child.chart_var, child.variables))
