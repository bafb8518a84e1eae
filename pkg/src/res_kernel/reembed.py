"""Compare principalization of ``I`` with that of ``I + (z)`` one dimension up.

Charts are matched structurally: every edge of a root-to-node path is
labeled by what it does to variable *positions* (blow-up chart index,
localizing polynomial, coordinate change), with variable names replaced by
``p0, p1, ...``.  The adjoined variable sits in the last position, so a
label from the small ambient space reads identically in the large one.

Charts of the big tree whose path uses the chart of the adjoined variable
are skipped: there the new coordinate divides out and the ideal becomes the
unit ideal, which is the statement that those charts miss the strict
transform of the original space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from res_kernel.driver import BlowUpTree, ResolutionResult, principalize
from res_kernel.ideal import Ideal
from res_kernel.poly import Polynomial


def _positional(p: Polynomial) -> str:
    names = tuple(f"p{i}" for i in range(len(p.variables)))
    return str(Polynomial(names, p.terms, _trusted=True))


def _text_positional(text: str, variables: tuple) -> str:
    from res_kernel.poly import parse_polynomial

    return _positional(parse_polynomial(text, variables))


def edge_label(tree: BlowUpTree, node_id: str):
    node = tree.nodes[node_id]
    if node.parent is None:
        return ()
    parent = tree.nodes[node.parent]
    pv = parent.chart.variables
    cv = node.chart.variables
    if node.edge == "blowup":
        return ("B", pv.index(node.chart.chart_var))
    if node.edge == "patch":
        return ("D", _text_positional(node.change["inverted"], pv))
    ch = node.change
    inv = None if ch["inverted"] is None else _text_positional(ch["inverted"], pv)
    return (
        "C",
        pv.index(ch["var"]),
        _text_positional(ch["numerator"], cv),
        _text_positional(ch["denominator"], pv),
        inv,
    )


def labels(tree: BlowUpTree) -> dict:
    """Map from positional path label to node id."""
    out = {}
    for node_id in tree.nodes:
        path = tuple(edge_label(tree, n.id) for n in tree.path(node_id)[1:])
        out[path] = node_id
    return out


@dataclass
class ReembeddingReport:
    matched: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    trailing: list = field(default_factory=list)
    small: ResolutionResult | None = None
    big: ResolutionResult | None = None

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _step(tree: BlowUpTree, node_id: str):
    node = tree.nodes[node_id]
    if node.center is not None:
        pv = node.chart.variables
        return ("blowup", frozenset(pv.index(v) for v in node.center))
    if node.children:
        return ("cover", frozenset(edge_label(tree, c) for c in node.children))
    if node.delegate is not None:
        return ("delegate", edge_label(tree, node.delegate))
    return ("leaf",)


def compare_reembedding(I: Ideal, new_var: str = "z", budget: int = 64) -> ReembeddingReport:
    """Principalize ``I`` and ``I + (new_var)`` and compare the lifted center sequences."""
    if new_var in I.variables:
        raise ValueError(f"{new_var!r} is already a variable")
    small = principalize(I, budget=budget)
    big_vars = I.variables + (new_var,)
    z = Polynomial.variable(new_var, big_vars)
    big_ideal = Ideal([g.in_variables(big_vars) for g in I.generators] + [z], big_vars)
    big = principalize(big_ideal, budget=budget)
    report = ReembeddingReport(small=small, big=big)
    zpos = len(I.variables)

    small_labels = labels(small.tree)
    big_labels = labels(big.tree)
    finished = {lab for lab, nid in small_labels.items() if not small.tree.nodes[nid].children}

    for lab, nid in small_labels.items():
        step = _step(small.tree, nid)
        if step[0] in ("leaf", "delegate"):
            continue
        if lab not in big_labels:
            report.mismatches.append((lab, step, None))
            continue
        other = _step(big.tree, big_labels[lab])
        if step[0] == "blowup":
            expected = ("blowup", step[1] | {zpos})
        elif step[0] == "cover":
            expected = step
        else:
            expected = step
        if other[0] == "cover" and step[0] == "cover":
            # pieces found on the hypersurface lift with one extra piece D(z)
            extra = other[1] - step[1]
            if step[1] <= other[1] and all(e[0] == "D" for e in extra):
                report.matched.append(lab)
                continue
        if other == expected:
            report.matched.append(lab)
        else:
            report.mismatches.append((lab, step, other))

    for lab, nid in big_labels.items():
        if any(e == ("B", zpos) for e in lab):
            continue
        node = big.tree.nodes[nid]
        if not node.children or lab in small_labels and small.tree.nodes[small_labels[lab]].children:
            continue
        if any(lab[:k] in finished for k in range(len(lab) + 1)):
            report.trailing.append((lab, _step(big.tree, nid)))
        else:
            report.mismatches.append((lab, None, _step(big.tree, nid)))
    return report
