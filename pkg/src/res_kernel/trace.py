"""Trace documents: a JSON record of a blow-up tree and an independent checker.

A trace is a single JSON object::

    {
      "version": "res-trace/1",
      "command": "principalize",
      "input": {"variables": ["x", "y"], "ideal": ["-x^3 + y^2"], "mark": null, "budget": 64},
      "outcome": "principalized",
      "reason": "",
      "blowups": 4,
      "embedded_stage": 4,
      "nodes": [ {node}, ... ]
    }

Each node records its chart (``id``, ``parent``, ``edge``, ``stage``,
``variables``, ``exceptional`` as ``[name, birth stage]`` pairs,
``inverted``, the coordinate map ``map`` from parent variables to
expressions in the chart variables, ``denominator``), the ideals
``total``, ``pulled``, ``controlled``, ``residual``, ``strict`` as lists of
generator strings, the exceptional ``monomial``, and the step taken there
(``center``, ``mark``, ``maxord``, ``status``, ``finish``, ``delegate``,
``note``).  Nodes appear in creation order, parents before children.

:func:`check_trace` re-derives every edge from the parent's data with plain
substitution and ideal membership; it does not call the driver.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from res_kernel.ideal import Ideal, contains_on, ideals_equal_on, is_unit_on
from res_kernel.order import derivative_ideal
from res_kernel.poly import Polynomial, parse_polynomial, substitute

VERSION = "res-trace/1"


class TraceError(ValueError):
    """A trace document is malformed."""


def _gens(I: Ideal | None):
    if I is None:
        return None
    return [str(g) for g in I.generators]


@dataclass
class TraceNode:
    id: str
    parent: str | None
    edge: str
    stage: int
    variables: list
    exceptional: list
    inverted: list
    map: dict
    denominator: str
    chart_var: str | None
    total: list
    pulled: list | None
    controlled: list | None
    monomial: str
    residual: list
    strict: list
    center: list | None
    mark: int | None
    maxord: int | None
    status: str
    finish: str | None
    delegate: str | None
    note: str


@dataclass
class TraceDocument:
    command: str
    input: dict
    outcome: str
    reason: str = ""
    blowups: int = 0
    embedded_stage: int | None = None
    nodes: list = field(default_factory=list)
    version: str = VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "input": self.input,
            "outcome": self.outcome,
            "reason": self.reason,
            "blowups": self.blowups,
            "embedded_stage": self.embedded_stage,
            "nodes": [asdict(n) for n in self.nodes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "TraceDocument":
        if not isinstance(data, dict):
            raise TraceError("a trace must be a JSON object")
        if data.get("version") != VERSION:
            raise TraceError(f"unsupported trace version {data.get('version')!r}")
        try:
            nodes = [TraceNode(**n) for n in data["nodes"]]
            return cls(
                command=data["command"],
                input=data["input"],
                outcome=data["outcome"],
                reason=data.get("reason", ""),
                blowups=data.get("blowups", 0),
                embedded_stage=data.get("embedded_stage"),
                nodes=nodes,
                version=data["version"],
            )
        except (KeyError, TypeError) as exc:
            raise TraceError(f"malformed trace: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "TraceDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TraceError(f"not JSON: {exc}") from None
        return cls.from_dict(data)

    def node(self, node_id: str) -> TraceNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def children(self, node_id: str) -> list:
        return [n for n in self.nodes if n.parent == node_id]

    def shape(self) -> list:
        """Parent links, edges and centers: enough to compare tree isomorphism."""
        return [(n.id, n.parent, n.edge, None if n.center is None else tuple(n.center)) for n in self.nodes]


def _int_or_none(x):
    if x is None or x == math.inf:
        return None
    return int(x)


def document_from_tree(
    tree,
    command: str,
    I: Ideal,
    outcome: str,
    reason: str = "",
    mark: int | None = None,
    budget: int | None = None,
    embedded_stage: int | None = None,
) -> TraceDocument:
    nodes = []
    for n in tree.nodes.values():
        c = n.chart
        nodes.append(
            TraceNode(
                id=n.id,
                parent=n.parent,
                edge=n.edge,
                stage=c.stage,
                variables=list(c.variables),
                exceptional=[[v, b] for v, b in c.exceptional],
                inverted=[str(g) for g in c.inverted],
                map={v: str(p) for v, p in c.pullback_map},
                denominator="1" if c.denominator is None else str(c.denominator),
                chart_var=c.chart_var,
                total=_gens(n.total),
                pulled=_gens(n.pulled),
                controlled=_gens(n.controlled),
                monomial=str(n.monomial),
                residual=_gens(n.residual),
                strict=_gens(n.strict),
                center=None if n.center is None else list(n.center),
                mark=n.mark,
                maxord=_int_or_none(n.maxord),
                status=n.status,
                finish=n.finish,
                delegate=n.delegate,
                note=n.note,
            )
        )
    return TraceDocument(
        command=command,
        input={
            "variables": list(I.variables),
            "ideal": [str(g) for g in I.generators],
            "mark": mark,
            "budget": budget,
        },
        outcome=outcome,
        reason=reason,
        blowups=sum(1 for n in tree.nodes.values() if n.center is not None),
        embedded_stage=embedded_stage,
        nodes=nodes,
    )


def document_from_result(result, command: str, I: Ideal, budget: int | None = None) -> TraceDocument:
    return document_from_tree(
        result.tree,
        command,
        I,
        result.outcome,
        result.reason,
        result.mark,
        budget,
        result.embedded_stage,
    )


# ---------------------------------------------------------------------------
# independent verification


def _ideal(gens: Sequence[str], variables: tuple) -> Ideal:
    return Ideal([parse_polynomial(g, variables) for g in gens], variables)


def _pull(p: Polynomial, parent_vars: tuple, child_vars: tuple, mapping: dict, den: Polynomial | None):
    if den is None:
        full = {v: mapping[v] if v in mapping else Polynomial.variable(v, child_vars) for v in parent_vars}
        return substitute(p, full, child_vars)
    ((var, num),) = mapping.items()
    parts = p.coefficients_in(var)
    d = max(parts) if parts else 0
    den_c = den.in_variables(child_vars)
    out = Polynomial.zero(child_vars)
    for k, coeff in parts.items():
        out = out + coeff.in_variables(child_vars) * num**k * den_c ** (d - k)
    return out


def _monomial(text: str, variables: tuple) -> Polynomial:
    m = parse_polynomial(text, variables)
    if not m.is_monomial():
        raise TraceError(f"{text!r} is not a monomial")
    return m


def check_trace(doc: TraceDocument) -> list:
    """Re-verify a trace; returns a list of violations (empty when the trace is sound)."""
    problems = []
    seen = {}
    mark_mode = doc.input.get("mark")
    for node in doc.nodes:
        try:
            problems.extend(_check_node(doc, node, seen, mark_mode))
        except Exception as exc:  # malformed data is reported, not raised
            problems.append(f"{node.id}: cannot verify ({type(exc).__name__}: {exc})")
        seen[node.id] = node
    if doc.outcome in ("principalized", "order-reduced", "embedded-resolution-detected"):
        for node in doc.nodes:
            if not doc.children(node.id) and node.status not in ("done", "delegated"):
                problems.append(f"{node.id}: leaf left in status {node.status!r}")
    counted = sum(1 for n in doc.nodes if n.center is not None)
    if counted != doc.blowups:
        problems.append(f"blow-up count {doc.blowups} does not match {counted} centers")
    return problems


def _check_node(doc, node: TraceNode, seen: dict, mark_mode) -> list:
    out = []
    V = tuple(node.variables)
    inverted = [parse_polynomial(g, V) for g in node.inverted]
    exc_names = {e for e, _ in node.exceptional}
    total = _ideal(node.total, V)
    residual = _ideal(node.residual, V)
    mono = _monomial(node.monomial, V)
    if not mono.support() <= exc_names:
        out.append(f"{node.id}: monomial {node.monomial} is not supported on exceptional variables")
    if not ideals_equal_on(total, Ideal([mono * g for g in residual.generators], V), inverted):
        out.append(f"{node.id}: total transform differs from monomial * residual")

    if node.parent is None:
        given = _ideal(doc.input["ideal"], tuple(doc.input["variables"]))
        if tuple(doc.input["variables"]) != V or [str(g) for g in given.generators] != [
            str(g) for g in total.generators
        ]:
            out.append("root: total transform is not the input ideal")
    else:
        parent = seen.get(node.parent)
        if parent is None:
            return out + [f"{node.id}: parent {node.parent} missing or listed later"]
        out.extend(_check_edge(node, parent, V, inverted, total, mono))

    out.extend(_check_leaf(doc, node, V, inverted, residual, mark_mode))
    return out


def _check_edge(node, parent, V, inverted, total, mono) -> list:
    out = []
    PV = tuple(parent.variables)
    p_inv = [parse_polynomial(g, PV) for g in parent.inverted]
    mapping = {v: parse_polynomial(t, V) for v, t in node.map.items()}
    den = None if node.denominator == "1" else parse_polynomial(node.denominator, PV)

    if node.edge == "blowup":
        if parent.center is None:
            return [f"{node.id}: parent {parent.id} has no center"]
        center = list(parent.center)
        xi = node.chart_var
        if xi not in center or any(v not in PV for v in center):
            return [f"{node.id}: chart variable {xi} is not in the center {center}"]
        if node.stage != parent.stage + 1:
            out.append(f"{node.id}: stage does not advance by one")
        for k, v in enumerate(PV):
            if v in center and v != xi:
                n = V[k]
                if n in PV:
                    out.append(f"{node.id}: {v} must be replaced by a fresh name")
                expect = Polynomial.variable(xi, V) * Polynomial.variable(n, V)
                if mapping.get(v) != expect:
                    out.append(f"{node.id}: {v} must map to {xi}*{n}")
            elif V[k] != v or v in mapping:
                out.append(f"{node.id}: {v} is outside the center and must be unchanged")
        if set(mapping) - (set(center) - {xi}):
            out.append(f"{node.id}: map touches variables outside the center")
        if den is not None:
            out.append(f"{node.id}: blow-up charts have no denominator")
        a = parent.mark
        if not isinstance(a, int) or a < 1:
            return out + [f"{node.id}: parent mark {a!r} is not a positive integer"]
        # admissibility on the parent patch
        p_res = _ideal(parent.residual, PV)
        cid = Ideal([Polynomial.variable(v, PV) for v in center], PV)
        T = derivative_ideal(p_res, a - 1)
        for g in T.generators:
            if not contains_on(cid, g, p_inv):
                out.append(f"{parent.id}: center {center} is not admissible ({g} not in the center ideal)")
                break
        if is_unit_on(cid, p_inv):
            out.append(f"{parent.id}: center {center} misses the patch")
        # total = e^a * controlled, generator by generator
        pulled = [_pull(g, PV, V, mapping, None) for g in p_res.generators]
        e = Polynomial.variable(xi, V) ** a
        controlled = [parse_polynomial(g, V) for g in (node.controlled or [])]
        if len(controlled) != len(pulled):
            out.append(f"{node.id}: controlled transform has the wrong number of generators")
        else:
            for p, c in zip(pulled, controlled):
                if p != e * c:
                    out.append(f"{node.id}: {p} != {xi}^{a} * ({c})")
        base = Ideal(controlled, V)
        extra_mono = Polynomial.variable(xi, V) ** a
    elif node.edge in ("change", "patch"):
        if node.stage != parent.stage:
            out.append(f"{node.id}: coordinate changes keep the stage")
        if node.edge == "patch":
            if V != PV or mapping or den is not None:
                out.append(f"{node.id}: a patch keeps the coordinates")
        else:
            if len(mapping) != 1:
                return out + [f"{node.id}: a change replaces exactly one variable"]
            (var,) = mapping
            k = PV.index(var)
            if V[:k] + V[k + 1 :] != PV[:k] + PV[k + 1 :]:
                out.append(f"{node.id}: only {var} may be renamed")
            image = mapping[var]
            if V[k] not in image.support():
                out.append(f"{node.id}: the image of {var} does not involve the new coordinate")
            if den is not None:
                if var in den.support():
                    out.append(f"{node.id}: denominator involves {var}")
                if not is_unit_on(Ideal([_pull(den, PV, V, mapping, None)], V), inverted):
                    out.append(f"{node.id}: denominator is not inverted on the patch")
        p_res = _ideal(parent.residual, PV)
        pulled = [_pull(g, PV, V, mapping, den) for g in p_res.generators]
        given = [parse_polynomial(g, V) for g in (node.pulled or [])]
        if given != pulled:
            out.append(f"{node.id}: pulled residual does not match the substitution")
    else:
        return [f"{node.id}: unknown edge kind {node.edge!r}"]

    # the patch lies over the parent's patch
    for g in p_inv:
        if not is_unit_on(Ideal([_pull(g, PV, V, mapping, den)], V), inverted):
            out.append(f"{node.id}: parent unit {g} is not a unit here")
    # total transform is the pullback of the parent's total transform
    p_total = _ideal(parent.total, PV)
    pulled_total = [str(_pull(g, PV, V, mapping, den)) for g in p_total.generators]
    if pulled_total != [str(g) for g in total.generators]:
        out.append(f"{node.id}: total transform is not the pullback of the parent's")
    # on a blow-up the new exceptional monomial and the residual account for
    # the controlled transform (other edges are covered by the total check)
    if node.edge == "blowup":
        p_mono = _pull(_monomial(parent.monomial, PV), PV, V, mapping, None)
        rest = mono.exact_divide(p_mono * extra_mono)
        if rest is None or not rest.is_monomial():
            out.append(f"{node.id}: monomial does not extend the parent's")
        else:
            residual = _ideal(node.residual, V)
            if not ideals_equal_on(base, Ideal([rest * g for g in residual.generators], V), inverted):
                out.append(f"{node.id}: residual times new monomial differs from the controlled transform")
    return out


def _check_leaf(doc, node: TraceNode, V, inverted, residual, mark_mode) -> list:
    if doc.children(node.id):
        if node.center is None and node.status != "covered":
            return [f"{node.id}: children without a center or a cover"]
        return []
    if node.center is not None:
        return [f"{node.id}: blown up but has no charts"]
    if node.status == "done":
        if node.finish == "unit":
            if mark_mode:
                D = derivative_ideal(residual, mark_mode - 1)
                if not is_unit_on(D, inverted):
                    return [f"{node.id}: order has not dropped below {mark_mode}"]
            elif not is_unit_on(residual, inverted):
                return [f"{node.id}: residual is not a unit"]
        elif node.finish == "snc":
            from res_kernel.driver import snc_hypersurface

            exc = [e for e, _ in node.exceptional]
            if not snc_hypersurface(residual, exc, inverted):
                return [f"{node.id}: residual is not a smooth hypersurface crossing E normally"]
        else:
            return [f"{node.id}: unknown finish {node.finish!r}"]
        return []
    if node.status == "delegated":
        return _check_delegation(doc, node, V, inverted, residual, mark_mode)
    return []


def _check_delegation(doc, node, V, inverted, residual, mark_mode) -> list:
    try:
        target = doc.node(node.delegate)
    except KeyError:
        return [f"{node.id}: delegate {node.delegate!r} does not exist"]
    if target.edge != "blowup" or target.id == node.id:
        return [f"{node.id}: delegate {target.id} is not a blow-up chart"]
    # find our ancestor that is a sibling of the target
    cur = node
    while cur.parent is not None and cur.parent != target.parent:
        cur = doc.node(cur.parent)
    if cur.parent != target.parent or cur.id == target.id or cur.edge != "blowup":
        return [f"{node.id}: delegate {target.id} is not a sibling chart"]
    base = doc.node(target.parent)
    n = cur.variables[base.variables.index(target.chart_var)]
    if n not in V:
        return [f"{node.id}: ratio coordinate {n} is no longer a coordinate"]
    locus = residual if not mark_mode else derivative_ideal(residual, mark_mode - 1)
    test = Ideal(list(locus.generators) + [Polynomial.variable(n, V)], V)
    if not is_unit_on(test, inverted):
        return [f"{node.id}: remaining locus meets {n} = 0, so it is not inside {target.id}"]
    return []
