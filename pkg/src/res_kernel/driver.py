"""Principalization by order reduction, chart by chart.

Every node of the :class:`BlowUpTree` carries three ideals on its chart:

``total``
    the exact pullback of the input ideal (denominators of coordinate
    changes cleared by powers of units);
``monomial``
    the accumulated monomial in exceptional variables;
``residual``
    the ideal ``J`` still to be principalized, so that ``total`` equals
    ``monomial * residual`` up to units on the chart's patch.

A leaf is principalized when its residual is the unit ideal on its patch.
Otherwise the driver computes ``a = maxord(J)`` and asks :func:`choose_step`
for the next move:

* a blow-up of a coordinate subspace that is admissible for ``(J, a)``;
* a cover of the patch by open pieces, each possibly with a coordinate
  change that turns a maximal contact element into a coordinate.

Centers come from the usual induction on dimension.  An element ``h`` of
``T(J, b)`` that is a coordinate gives the hypersurface ``H = V(h)``; if the
coefficient ideal restricted to ``H`` is zero the center is ``H`` itself,
otherwise the center is lifted from the recursive problem
``(C(J, b)|_H, b!)``.  Elements that only become coordinates after a
coordinate change are straightened first.

Exceptional variables are not allowed as contact coordinates, since that
would break the normal-crossings record.  When the only candidates involve
exceptional variables the driver either localizes (when the candidate and
the exceptional variable generate the unit ideal) or separates the locus
from an exceptional hyperplane ``e = 0`` by recursing on ``T|_{e=0}`` with
mark 1 and adding ``e`` to the resulting center.  This is a heuristic
replacement for the general exceptional-divisor separation, which is not
implemented.

Two further covers handle loci the moves above cannot reach.  A locus
cut out by a polynomial in one variable with a rational root ``r`` and
other zeros is split into ``D(v - r)`` and ``D(h / (v - r)^m)``.  A locus
that lies inside a sibling chart of the last blow-up is handed to that
sibling; the graph of such handoffs is kept acyclic so no point is lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from res_kernel.charts import (
    Center,
    Chart,
    InadmissibleCenter,
    blow_up_charts,
    change_chart,
    fresh_names,
    normalize_inverted,
    patch_chart,
    pullback,
    root_chart,
    total_transform,
)
from res_kernel.contact import (
    NoAlgebraicContact,
    coefficient_ideal,
    linear_shape,
    restrict_to_hypersurface,
)
from res_kernel.ideal import (
    GREVLEX,
    LEX,
    Ideal,
    contains_on,
    groebner_basis,
    is_unit_ideal,
    is_unit_on,
    radical_member,
    saturate,
)
from res_kernel.order import MarkedIdeal, derivative_ideal, max_order, monomial_part
from res_kernel.poly import Monomial, Polynomial, differentiate, grlex_key

DEFAULT_BUDGET = 64


class BudgetExhausted(RuntimeError):
    """The blow-up budget ran out before every leaf was finished."""

    def __init__(self, message: str, result: "ResolutionResult | None" = None):
        super().__init__(message)
        self.result = result


class DriverFailure(RuntimeError):
    """A leaf could not be processed; ``result`` holds the partial tree."""

    def __init__(self, message: str, result: "ResolutionResult | None" = None):
        super().__init__(message)
        self.result = result


# ---------------------------------------------------------------------------
# steps


@dataclass(frozen=True)
class BlowUpStep:
    center: tuple
    reason: str = ""


@dataclass(frozen=True)
class Piece:
    """One open piece of a cover: ``D(inverted)`` with an optional coordinate change.

    The change replaces ``var`` by ``numerator / denominator`` where
    ``numerator`` is over the variables with ``var`` renamed to ``new_name``.
    """

    inverted: Polynomial | None = None
    var: str | None = None
    new_name: str | None = None
    numerator: Polynomial | None = None
    denominator: Polynomial | None = None
    handoff: str | None = None

    def lift(self, variables: tuple) -> "Piece":
        inv = None if self.inverted is None else self.inverted.in_variables(variables)
        if self.var is None:
            return Piece(inv, handoff=self.handoff)
        new_vars = tuple(self.new_name if v == self.var else v for v in variables)
        den = None if self.denominator is None else self.denominator.in_variables(variables)
        return Piece(inv, self.var, self.new_name, self.numerator.in_variables(new_vars), den)


@dataclass(frozen=True)
class CoverStep:
    pieces: tuple
    reason: str = ""


@dataclass(frozen=True)
class FinishStep:
    """The residual is a smooth hypersurface crossing the exceptional hyperplanes normally."""

    reason: str = "smooth residual with normal crossings"


@dataclass(frozen=True)
class StepContext:
    variables: tuple
    exceptional: tuple
    inverted: tuple
    used_names: frozenset
    handoff: tuple = ()


def _strip_inverted(p: Polynomial, inverted: Sequence[Polynomial]) -> Polynomial:
    for g in inverted:
        if g.is_constant():
            continue
        while True:
            q = p.exact_divide(g)
            if q is None or q.is_zero():
                break
            p = q
    return p


def strip_units(J: Ideal, inverted: Sequence[Polynomial]) -> Ideal:
    """Divide every generator by inverted polynomials as often as possible."""
    if not inverted:
        return J
    return Ideal([_strip_inverted(g, inverted) for g in J.generators], J.variables)


def _candidate_pool(T: Ideal) -> list:
    """Generators of ``T`` then its reduced bases, monic, deduplicated, grlex-descending per group."""
    groups = [list(T.generators)]
    groups.append(groebner_basis(T, GREVLEX))
    groups.append(groebner_basis(T, LEX))
    pool = []
    for grp in groups:
        normalized = []
        for g in grp:
            m = g.monic()
            if m not in normalized and m not in pool:
                normalized.append(m)
        normalized.sort(key=lambda p: grlex_key(p.leading_term()[0]), reverse=True)
        pool.extend(normalized)
    return pool


def _restricted_inverted(inverted, var, h_vars=None):
    out = []
    for g in inverted:
        r = restrict_to_hypersurface(Ideal([g], g.variables), var)
        if not r.generators:
            return None
        out.append(r.generators[0])
    return tuple(out)


def snc_hypersurface(J: Ideal, exceptional: Sequence[str], inverted: Sequence[Polynomial] = ()) -> bool:
    """``J`` is principal, smooth, and meets every stratum of the exceptional hyperplanes transversally.

    For every subset ``S`` of the exceptional variables the restriction of
    the generator to ``S = 0`` must define a smooth (possibly empty)
    hypersurface of that coordinate subspace on the patch.
    """
    from itertools import combinations

    from res_kernel.contact import reduced

    R = reduced(strip_units(J, inverted))
    if len(R.generators) != 1:
        return False
    g = R.generators[0]
    for k in range(len(exceptional) + 1):
        for S in combinations(exceptional, k):
            gs, inv = g, list(inverted)
            ok = True
            for e in S:
                gs = restrict_to_hypersurface(Ideal([gs], gs.variables), e)
                gs = gs.generators[0] if gs.generators else None
                if gs is None:
                    return False
                inv = _restricted_inverted(inv, e, None)
                if inv is None:
                    ok = False
                    break
            if not ok:
                continue
            gens = [gs] + [differentiate(gs, v) for v in gs.variables]
            if not is_unit_on(Ideal(gens, gs.variables), inv):
                return False
    return True


def choose_step(
    J: Ideal,
    a: int,
    ctx: StepContext,
    force: Polynomial | None = None,
    depth: int = 0,
    allow_finish: bool = False,
):
    """Next move for the marked ideal ``(J, a)`` on the patch described by ``ctx``.

    With ``allow_finish`` a smooth principal residual of order 1 that
    crosses the exceptional hyperplanes normally, but is not a coordinate
    after any available polynomial change, is reported as
    :class:`FinishStep`.
    """
    if depth > 2 * len(ctx.variables) + 2:
        raise NoAlgebraicContact("recursion on contact hypersurfaces did not terminate")
    exc = tuple(v for v in ctx.exceptional if v in ctx.variables)
    Js = strip_units(J, ctx.inverted)
    if a == 1 and exc:
        mono, J2 = monomial_part(Js, exc)
        if is_unit_on(J2, ctx.inverted):
            exps = mono.as_dict()
            if not exps:
                raise DriverFailure("asked to reduce a unit ideal")
            best = max(exps.values())
            e = next(v for v in ctx.variables if exps.get(v) == best)
            return BlowUpStep((e,), "monomial")
        Js = J2
    b = max(a, max_order(Js, ctx.inverted))
    if b == 0 or b == math.inf:
        raise DriverFailure(f"cannot reduce an ideal of maximal order {b}")
    T = derivative_ideal(Js, b - 1)

    if force is not None:
        pool = [force.in_variables(ctx.variables)]
    else:
        pool = _candidate_pool(T)

    # class (i): c * x + B with x a free (non-exceptional) coordinate
    simple, straighten = [], []
    for h in pool:
        for v in ctx.variables:
            if v in exc:
                continue
            shape = linear_shape(h, v)
            if shape is None:
                continue
            (simple if shape[1].is_zero() else straighten).append((h, v, shape))
    for h, v, (c, B) in simple:
        h_vars = tuple(x for x in ctx.variables if x != v)
        if not h_vars:
            return BlowUpStep((v,), "contact hypersurface")
        inv_h = _restricted_inverted(ctx.inverted, v, h_vars)
        if inv_h is None:
            continue
        C = coefficient_ideal(MarkedIdeal(Js, b), restrict=v).ideal
        if C.is_zero():
            return BlowUpStep((v,), "contact hypersurface")
        sub_ctx = StepContext(h_vars, tuple(x for x in exc if x != v), inv_h, ctx.used_names, ctx.handoff)
        sub = choose_step(C, math.factorial(b), sub_ctx, depth=depth + 1)
        return _lift(sub, v, ctx)
    for h, v, (c, B) in straighten:
        (new,) = fresh_names(ctx.used_names, 1)
        new_vars = tuple(new if x == v else x for x in ctx.variables)
        u = Polynomial.variable(new, new_vars)
        num = (u - B.in_variables(new_vars)).scale(1 / c)
        return CoverStep((Piece(None, v, new, num, None),), f"straighten {h}")

    # class (ii): h = A * x + B with A a unit where needed
    for h in pool:
        for v in ctx.variables:
            parts = h.coefficients_in(v)
            if set(parts) - {0, 1} or 1 not in parts:
                continue
            A = parts[1]
            B = parts.get(0, Polynomial.zero(h.variables))
            if A.is_constant() and v not in exc:
                continue
            guard = A * Polynomial.variable(v, ctx.variables) if v in exc else A
            if not is_unit_on(Ideal([h, guard], ctx.variables), ctx.inverted):
                continue
            (new,) = fresh_names(ctx.used_names, 1)
            new_vars = tuple(new if x == v else x for x in ctx.variables)
            u = Polynomial.variable(new, new_vars)
            num = u - B.in_variables(new_vars)
            den = None
            if A.is_constant():
                num = num.scale(1 / A.constant_term())
            else:
                den = A
            pieces = (
                Piece(normalize_inverted(guard), v, new, num, den),
                Piece(normalize_inverted(h)),
            )
            return CoverStep(pieces, f"localize at {h}")

    if allow_finish and b == 1 and snc_hypersurface(Js, exc, ctx.inverted):
        return FinishStep()

    # class (iii): separate the locus from an exceptional hyperplane
    for e in exc:
        if is_unit_on(Ideal(list(T.generators) + [Polynomial.variable(e, ctx.variables)], ctx.variables), ctx.inverted):
            continue
        h_vars = tuple(x for x in ctx.variables if x != e)
        TH = restrict_to_hypersurface(T, e)
        if TH.is_zero() or not h_vars:
            return BlowUpStep((e,), "exceptional hypersurface")
        inv_h = _restricted_inverted(ctx.inverted, e, h_vars)
        if inv_h is None:
            continue
        sub_ctx = StepContext(h_vars, tuple(x for x in exc if x != e), inv_h, ctx.used_names, ctx.handoff)
        sub = choose_step(TH, 1, sub_ctx, depth=depth + 1)
        return _lift(sub, e, ctx)

    # split a locus made of several points along one coordinate
    for h in pool:
        split = _root_split(h, ctx)
        if split is not None:
            return split

    # hand the locus to a sibling chart where it lives, keep the rest
    for n in ctx.handoff:
        if n not in ctx.variables:
            continue
        nv = Polynomial.variable(n, ctx.variables)
        if is_unit_on(Ideal(list(Js.generators) + [nv], ctx.variables), ctx.inverted):
            rest = tuple(Piece(normalize_inverted(g)) for g in Js.generators if not g.is_constant())
            return CoverStep((Piece(nv, handoff=n),) + rest, f"hand off D({n})")

    raise NoAlgebraicContact(
        f"no usable maximal contact element for an ideal of order {b} on {ctx.variables}"
    )


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(h: Polynomial, v: str) -> list:
    """Rational roots of ``h`` when it involves only the variable ``v``."""
    if h.is_zero() or h.support() - {v}:
        return []
    i = h.variables.index(v)
    coeffs = {e[i]: c for e, c in h.terms.items()}
    low = min(coeffs)
    roots = [Fraction(0)] if low > 0 else []
    scale = math.lcm(*(c.denominator for c in coeffs.values()))
    ints = {k - low: int(c * scale) for k, c in coeffs.items()}
    top = max(ints)
    if top == 0:
        return roots
    for p in _divisors(ints[0]):
        for q in _divisors(ints[top]):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r not in roots and sum(c * r**k for k, c in ints.items()) == 0:
                    roots.append(r)
    return sorted(roots)


def _root_split(h: Polynomial, ctx: StepContext):
    """Cover ``D(v - r)`` and ``D(h / (v - r)^m)`` when ``h(v)`` has a root ``r`` and other zeros."""
    for v in ctx.variables:
        for r in rational_roots(h, v):
            lin = Polynomial.variable(v, ctx.variables) - r
            q, m = h, 0
            while True:
                nxt = q.exact_divide(lin)
                if nxt is None:
                    break
                q, m = nxt, m + 1
            if q.is_constant():
                continue
            if any(is_unit_on(Ideal([g], ctx.variables), ctx.inverted) for g in (lin, q)):
                continue
            return CoverStep((Piece(normalize_inverted(lin)), Piece(normalize_inverted(q))), f"split {h} at {v} = {r}")
    return None


def _lift(sub, var: str, ctx: StepContext):
    """Lift a step found on the hyperplane ``var = 0`` back to the ambient chart."""
    if isinstance(sub, BlowUpStep):
        center = tuple(v for v in ctx.variables if v in sub.center or v == var)
        return BlowUpStep(center, sub.reason)
    pieces = tuple(p.lift(ctx.variables) for p in sub.pieces)
    if any(p.inverted is not None for p in pieces):
        pieces = pieces + (Piece(Polynomial.variable(var, ctx.variables)),)
    return CoverStep(pieces, sub.reason)


# ---------------------------------------------------------------------------
# tree


@dataclass
class BlowUpNode:
    chart: Chart
    parent: str | None
    edge: str
    total: Ideal
    monomial: Monomial
    residual: Ideal
    strict: Ideal
    center: tuple | None = None
    mark: int | None = None
    pulled: Ideal | None = None
    controlled: Ideal | None = None
    change: dict | None = None
    maxord: object = None
    children: list = field(default_factory=list)
    status: str = "open"
    note: str = ""
    delegate: str | None = None
    finish: str | None = None
    handoff: dict = field(default_factory=dict)

    @property
    def id(self) -> str:
        return self.chart.id


@dataclass
class BlowUpTree:
    root: str
    nodes: dict = field(default_factory=dict)

    def add(self, node: BlowUpNode):
        if node.id in self.nodes:
            raise ValueError(f"duplicate chart id {node.id}")
        self.nodes[node.id] = node
        if node.parent is not None:
            self.nodes[node.parent].children.append(node.id)
        return node

    def leaves(self) -> list:
        return [n for n in self.nodes.values() if not n.children]

    def path(self, node_id: str) -> list:
        out = []
        cur = node_id
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out[::-1]

    def blowup_nodes(self) -> list:
        """Nodes at which a center was blown up (the parents of blow-up edges)."""
        return [n for n in self.nodes.values() if n.center is not None]

    def blowup_count(self) -> int:
        return len(self.blowup_nodes())

    def depth(self) -> int:
        return max((n.chart.stage for n in self.nodes.values()), default=0)

    def center_sequence(self, node_id: str) -> list:
        """``(chart id, center)`` for every blow-up on the path to ``node_id``."""
        return [(n.id, n.center) for n in self.path(node_id) if n.center is not None]


@dataclass
class ResolutionResult:
    tree: BlowUpTree
    outcome: str
    reason: str = ""
    mark: int | None = None
    embedded_stage: int | None = None

    @property
    def leaf_ideals(self) -> dict:
        return {n.id: (n.monomial, n.residual) for n in self.tree.leaves()}

    @property
    def principalized(self) -> bool:
        return self.outcome == "principalized"


# ---------------------------------------------------------------------------
# driver loop


def _pull_monomial(mono: Monomial, parent: Chart, child: Chart) -> Monomial:
    keep = set(child.exceptional_vars)
    if child.kind == "change":
        changed = child.pullback_map[0][0]
        exps = {v: k for v, k in mono.as_dict().items() if v != changed}
        exps = {v: k for v, k in exps.items() if v in keep}
        return Monomial(child.variables, tuple(exps.get(v, 0) for v in child.variables))
    if child.kind == "patch":
        exps = {v: k for v, k in mono.as_dict().items() if v in keep}
        return Monomial(child.variables, tuple(exps.get(v, 0) for v in child.variables))
    p = pullback(mono.as_polynomial(), parent, child)
    (exp, _), = p.terms.items()
    return Monomial(child.variables, exp)


def _mono_mul(m: Monomial, other: Monomial) -> Monomial:
    return Monomial(m.variables, tuple(a + b for a, b in zip(m.exponents, other.exponents)))


def _settle(J: Ideal, chart: Chart, strip: bool):
    """Factor the exceptional monomial out of ``J`` and remove inverted factors."""
    J = strip_units(J, chart.inverted)
    if strip:
        mono, J = monomial_part(J, chart.exceptional_vars)
    else:
        mono = Monomial(J.variables, (0,) * len(J.variables))
    return mono, J


class _Driver:
    def __init__(self, budget: int, mark: int | None, strip: bool, force=None, change_cap=None):
        self.budget = budget
        self.mark = mark
        self.strip = strip
        self.force = force
        self.change_cap = change_cap if change_cap is not None else 8 * budget + 16
        self.blowups = 0
        self.changes = 0
        self.handoff_edges: dict = {}

    def finished(self, node: BlowUpNode) -> bool:
        inv = node.chart.inverted
        if is_unit_on(node.residual, inv):
            node.maxord = 0
            return True
        a = max_order(node.residual, inv)
        node.maxord = a
        return self.mark is not None and a < self.mark

    def run(self, tree: BlowUpTree):
        stack = [tree.root]
        while stack:
            node = tree.nodes[stack.pop()]
            if self.finished(node):
                node.status = "done"
                node.finish = "unit"
                continue
            kids = self.expand(tree, node)
            stack.extend(reversed(kids))

    def expand(self, tree: BlowUpTree, node: BlowUpNode) -> list:
        chart = node.chart
        a = node.maxord if self.mark is None else self.mark
        ctx = StepContext(
            chart.variables, chart.exceptional_vars, chart.inverted, chart.used_names, self.open_handoffs(tree, node)
        )
        force = self.force(node) if self.force else None
        step = choose_step(node.residual, a, ctx, force=force, allow_finish=self.mark is None)
        if isinstance(step, FinishStep):
            node.status = "done"
            node.finish = "snc"
            node.note = step.reason
            return []
        if isinstance(step, BlowUpStep):
            return self.blow_up(tree, node, step, a)
        return self.cover(tree, node, step)

    def blow_up(self, tree, node, step: BlowUpStep, a: int) -> list:
        if self.blowups >= self.budget:
            raise BudgetExhausted(f"blow-up budget of {self.budget} exhausted")
        chart = node.chart
        Z = Center(step.center)
        cid = Ideal([Polynomial.variable(v, chart.variables) for v in Z.vars], chart.variables)
        if is_unit_on(cid, chart.inverted):
            raise InadmissibleCenter(f"center {Z} does not meet the patch {chart.id}")
        T = derivative_ideal(node.residual, a - 1)
        for g in T.generators:
            if not contains_on(cid, g, chart.inverted):
                raise InadmissibleCenter(f"center {Z} is not admissible for order {a} on {chart.id}")
        self.blowups += 1
        node.center = Z.vars
        node.mark = a
        node.status = "blown-up"
        node.note = step.reason
        kids = []
        for child in blow_up_charts(chart, Z):
            e = Polynomial.variable(child.chart_var, child.variables) ** a
            pulled = total_transform(node.residual, chart, child)
            controlled = []
            for g in pulled.generators:
                q = g.exact_divide(e)
                if q is None:
                    raise InadmissibleCenter(f"{g} is not divisible by {child.chart_var}^{a}")
                controlled.append(q)
            controlled = Ideal(controlled, child.variables)
            new_mono, J = _settle(controlled, child, self.strip)
            mono = _pull_monomial(node.monomial, chart, child)
            mono = _mono_mul(mono, Monomial(child.variables, tuple(a if v == child.chart_var else 0 for v in child.variables)))
            mono = _mono_mul(mono, new_mono)
            strict = total_transform(node.strict, chart, child)
            if not strict.is_zero() and not is_unit_ideal(strict):
                strict = saturate(strict, Polynomial.variable(child.chart_var, child.variables))
            tree.add(
                BlowUpNode(
                    chart=child,
                    parent=node.id,
                    edge="blowup",
                    total=total_transform(node.total, chart, child),
                    monomial=mono,
                    residual=J,
                    strict=strict,
                    pulled=pulled,
                    controlled=controlled,
                )
            )
            kids.append(child.id)
        self.delegate(tree, node, kids)
        return [k for k in kids if tree.nodes[k].delegate is None]

    def open_handoffs(self, tree, node) -> tuple:
        """Handoff variables whose use keeps the sibling handoff graph acyclic.

        Without this two siblings could each hand the same points to the
        other and nobody would process them.
        """
        out = []
        for n, (origin, target) in node.handoff.items():
            edges = self.handoff_edges.get(tree.nodes[origin].parent, set())
            seen, todo = set(), [target]
            while todo:
                cur = todo.pop()
                if cur in seen:
                    continue
                seen.add(cur)
                todo.extend(b for a, b in edges if a == cur)
            if origin not in seen:
                out.append(n)
        return tuple(out)

    def locus(self, node: BlowUpNode) -> Ideal:
        """Ideal whose zero set still needs work on this chart."""
        if self.mark is None:
            return node.residual
        return derivative_ideal(node.residual, self.mark - 1)

    def delegate(self, tree, node, kids):
        """Hand charts whose remaining locus lies in a sibling's domain to that sibling.

        In the chart of ``x_i`` the variable ``n_j`` that replaced ``x_j``
        is the ratio ``x_j / x_i``; where it is nonzero the point also lies
        in the chart of ``x_j``.  A chart whose remaining locus avoids
        ``n_j = 0`` is therefore entirely visible in the sibling, which
        processes it.  Delegation only targets siblings that keep their own
        work, so no cycles arise.
        """
        if len(kids) < 2:
            return
        parent_vars = node.chart.variables
        options = {}
        for k in kids:
            child = tree.nodes[k]
            L = self.locus(child)
            opts = []
            if is_unit_on(L, child.chart.inverted):
                options[k] = opts
                continue
            for j in kids:
                if j == k:
                    continue
                sib = tree.nodes[j].chart
                n = child.chart.variables[parent_vars.index(sib.chart_var)]
                test = Ideal(list(L.generators) + [Polynomial.variable(n, child.chart.variables)], child.chart.variables)
                if is_unit_on(test, child.chart.inverted):
                    opts.append((j, n))
            options[k] = opts
        kept = [k for k in kids if not options[k]]
        for k in kids:
            if not options[k]:
                continue
            target = next(((j, n) for j, n in options[k] if j in kept), None)
            if target is None:
                kept.append(k)
                continue
            child = tree.nodes[k]
            child.delegate = target[0]
            child.status = "delegated"
            child.note = f"remaining locus lies where {target[1]} != 0, inside {target[0]}"
        # a kept chart may later hand pieces of its patch to a kept sibling
        for k in kept:
            child = tree.nodes[k]
            for j in kept:
                if j != k:
                    n = child.chart.variables[parent_vars.index(tree.nodes[j].chart.chart_var)]
                    child.handoff[n] = (k, j)

    def cover(self, tree, node, step: CoverStep) -> list:
        chart = node.chart
        kids = []
        for piece in step.pieces:
            self.changes += 1
            if self.changes > self.change_cap:
                raise BudgetExhausted(f"coordinate-change cap of {self.change_cap} exhausted")
            if piece.var is None:
                child = patch_chart(chart, piece.inverted)
                change = {"kind": "patch", "inverted": str(normalize_inverted(piece.inverted))}
            else:
                extra = [piece.inverted] if piece.inverted is not None else []
                cid = f"{chart.id}/D({normalize_inverted(piece.inverted)})" if piece.inverted is not None else None
                child = change_chart(chart, piece.var, piece.new_name, piece.numerator, piece.denominator, extra, cid)
                change = {
                    "kind": "change",
                    "var": piece.var,
                    "new": piece.new_name,
                    "numerator": str(piece.numerator),
                    "denominator": "1" if piece.denominator is None else str(piece.denominator),
                    "inverted": None if piece.inverted is None else str(normalize_inverted(piece.inverted)),
                }
            pulled = total_transform(node.residual, chart, child)
            new_mono, J = _settle(pulled, child, self.strip)
            mono = _mono_mul(_pull_monomial(node.monomial, chart, child), new_mono)
            kid = tree.add(
                BlowUpNode(
                    chart=child,
                    parent=node.id,
                    edge=change["kind"],
                    total=total_transform(node.total, chart, child),
                    monomial=mono,
                    residual=J,
                    strict=total_transform(node.strict, chart, child),
                    pulled=pulled,
                    change=change,
                    handoff={n: j for n, j in node.handoff.items() if n in child.variables and n != piece.var},
                )
            )
            if piece.handoff is not None:
                origin, kid.delegate = node.handoff[piece.handoff]
                self.handoff_edges.setdefault(tree.nodes[origin].parent, set()).add((origin, kid.delegate))
                kid.status = "delegated"
                kid.note = f"{piece.handoff} != 0 here, inside {kid.delegate}"
                continue
            kids.append(child.id)
        node.status = "covered"
        node.note = step.reason
        return kids


def _start(I: Ideal, chart: Chart | None, strip: bool) -> BlowUpTree:
    if chart is None:
        chart = root_chart(I.variables)
    if I.variables != chart.variables:
        I = I.in_variables(chart.variables)
    mono, J = _settle(I, chart, strip)
    tree = BlowUpTree(chart.id)
    tree.add(
        BlowUpNode(chart=chart, parent=None, edge="root", total=I, monomial=mono, residual=J, strict=I)
    )
    return tree


def _execute(driver: _Driver, tree: BlowUpTree, success: str, mark=None) -> ResolutionResult:
    result = ResolutionResult(tree, "running", mark=mark)
    try:
        driver.run(tree)
    except BudgetExhausted as exc:
        result.outcome = "budget-exhausted"
        result.reason = str(exc)
        exc.result = result
        raise
    except (NoAlgebraicContact, InadmissibleCenter, DriverFailure) as exc:
        result.outcome = "failed"
        result.reason = f"{type(exc).__name__}: {exc}"
        raise DriverFailure(result.reason, result) from exc
    result.outcome = success
    return result


def order_reduce(
    M: MarkedIdeal,
    chart: Chart | None = None,
    budget: int = DEFAULT_BUDGET,
    strip_monomials: bool = False,
    force=None,
) -> BlowUpTree:
    """Blow up admissible centers until ``maxord`` of the controlled transform drops below ``a``."""
    tree = _start(M.ideal, chart, strip_monomials)
    root = tree.nodes[tree.root]
    a0 = max_order(root.residual, root.chart.inverted)
    if a0 > M.mark:
        raise ValueError(f"maximal order {a0} exceeds the mark {M.mark}")
    driver = _Driver(budget, M.mark, strip_monomials, force=force)
    _execute(driver, tree, "order-reduced", mark=M.mark)
    return tree


def principalize(
    I: Ideal,
    chart: Chart | None = None,
    budget: int = DEFAULT_BUDGET,
    force=None,
) -> ResolutionResult:
    """Blow up until the pullback of ``I`` is a monomial in exceptional variables on every leaf.

    ``force`` may be a callable taking a node and returning a polynomial to
    use as the maximal contact element at that node (or ``None``).
    """
    if I.is_zero():
        raise ValueError("cannot principalize the zero ideal")
    tree = _start(I, chart, True)
    driver = _Driver(budget, None, True, force=force)
    return _execute(driver, tree, "principalized")


def detect_embedded_resolution(R: ResolutionResult, X_ideal: Ideal | None = None):
    """Stage by which the strict transform of ``X`` has been blown up as a center.

    On each root-to-leaf path take the earliest blow-up whose center
    contains the strict transform of ``X`` (as sets, on the patch).  The
    result is the largest such stage over all paths.  It is ``None`` when no
    center ever contains ``X``, or when some leaf still carries a nonempty
    strict transform of ``X`` that was never blown up.
    """
    tree = R.tree
    if X_ideal is not None:
        root = tree.nodes[tree.root]
        if X_ideal.variables != root.chart.variables:
            X_ideal = X_ideal.in_variables(root.chart.variables)
        _recompute_strict(tree, X_ideal)
    stages = []
    for leaf in tree.leaves():
        if leaf.delegate is not None:
            continue
        found = None
        for node in tree.path(leaf.id):
            if node.center is None:
                continue
            centers = [Polynomial.variable(v, node.chart.variables) for v in node.center]
            if _strict_inside(node, centers):
                found = node.chart.stage + 1
                break
        if found is None and leaf.finish == "snc":
            # the last codimension-one blow-up along the smooth residual is implicit
            if _strict_inside(leaf, list(strip_units(leaf.residual, leaf.chart.inverted).generators)):
                found = leaf.chart.stage + 1
        if found is not None:
            stages.append(found)
        elif not leaf.strict.is_zero() and not is_unit_on(leaf.strict, leaf.chart.inverted):
            # the strict transform survives on this leaf without ever being a center
            return None
    if not stages:
        return None
    stage = max(stages)
    R.embedded_stage = stage
    return stage


def _strict_inside(node: BlowUpNode, center_gens) -> bool:
    """The strict transform is nonempty on the patch and lies inside ``V(center_gens)``."""
    inv = node.chart.inverted
    if node.strict.is_zero() or is_unit_on(node.strict, inv):
        return False
    unit = Polynomial.constant(1, node.chart.variables)
    for g in inv:
        unit = unit * g
    return all(radical_member(node.strict, c * unit) for c in center_gens)


def _recompute_strict(tree: BlowUpTree, X: Ideal):
    for node in tree.nodes.values():
        if node.parent is None:
            node.strict = X
            continue
        parent = tree.nodes[node.parent]
        strict = total_transform(parent.strict, parent.chart, node.chart)
        if node.edge == "blowup" and not strict.is_zero() and not is_unit_ideal(strict):
            strict = saturate(strict, Polynomial.variable(node.chart.chart_var, node.chart.variables))
        node.strict = strict


def is_smooth_hypersurface(f: Polynomial) -> bool:
    """``V(f)`` is regular: ``f`` and its partials generate the unit ideal."""
    if f.is_zero():
        raise ValueError("the zero polynomial does not define a hypersurface")
    gens = [f] + [differentiate(f, v) for v in f.variables]
    return is_unit_ideal(Ideal(gens, f.variables))
