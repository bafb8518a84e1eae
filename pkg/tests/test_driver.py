from fractions import Fraction

import pytest

from corpus import load_corpus
from res_kernel.charts import root_chart
from res_kernel.driver import (
    BudgetExhausted,
    detect_embedded_resolution,
    is_smooth_hypersurface,
    order_reduce,
    principalize,
    rational_roots,
)
from res_kernel.ideal import Ideal, ideals_equal_on, is_unit_on
from res_kernel.order import MarkedIdeal, max_order
from res_kernel.poly import Polynomial, parse_polynomial
from res_kernel.trace import check_trace, document_from_result, document_from_tree

V = ("x", "y")


def I(*gens, variables=V):
    return Ideal([parse_polynomial(g, variables) for g in gens], variables)


def same_on(node, *gens):
    J = Ideal([parse_polynomial(g, node.chart.variables) for g in gens], node.chart.variables)
    return ideals_equal_on(node.total, J, node.chart.inverted)


def test_cusp_tree():
    R = principalize(I("y^2 - x^3"))
    tree = R.tree
    assert R.principalized
    assert tree.blowup_count() == 4
    nodes = tree.nodes
    assert same_on(nodes["root/x-chart"], "x^2*(z^2 - x)")
    assert same_on(nodes["root/x-chart/z-chart"], "z^3*w^2*(z - w)")
    assert same_on(nodes["root/x-chart/z-chart/w-chart"], "v^3*w^6*(v - 1)")
    leaf = nodes["root/x-chart/z-chart/w-chart/D(v)/u-chart"]
    assert same_on(leaf, "w^6*u")
    assert [c for _, c in tree.center_sequence(leaf.id)] == [("x", "y"), ("x", "z"), ("w", "z"), ("u",)]


def test_cusp_leaves_are_monomial():
    R = principalize(I("y^2 - x^3"))
    for leaf in R.tree.leaves():
        if leaf.delegate is None:
            assert is_unit_on(leaf.residual, leaf.chart.inverted)


def test_two_squares_need_one_blow_up():
    R = principalize(I("x^2", "y^2"))
    assert R.tree.blowup_count() == 1


def test_exceptional_monomial_needs_nothing():
    R = principalize(I("x^2*y^3"), chart=root_chart(V, ("x", "y")))
    assert R.tree.blowup_count() == 0
    assert R.principalized


def test_zero_ideal_rejected():
    with pytest.raises(ValueError):
        principalize(Ideal.zero(V))


def test_budget():
    with pytest.raises(BudgetExhausted) as info:
        principalize(I("y^2 - x^5"), budget=2)
    assert info.value.result.outcome == "budget-exhausted"
    assert info.value.result.tree.blowup_count() == 2


def test_order_reduce_cusp():
    tree = order_reduce(MarkedIdeal(I("y^2 - x^3"), 2))
    assert tree.blowup_count() == 1
    x_chart = tree.nodes["root/x-chart"]
    assert max_order(x_chart.residual, x_chart.chart.inverted) == 1
    assert str(x_chart.residual) == "(z^2 - x)"


def test_order_reduce_rejects_small_mark():
    with pytest.raises(ValueError):
        order_reduce(MarkedIdeal(I("y^2 - x^3"), 1))


def test_order_reduce_hyperplane():
    tree = order_reduce(MarkedIdeal(I("x"), 1))
    assert tree.blowup_count() == 1


@pytest.mark.parametrize(
    "curve, blowups, stage",
    [
        ("y - x^2", 1, 1),
        ("x*y", 3, 2),
        ("y^2 - x^3", 4, 4),
        ("y^2 - x^5", 5, 5),
        ("x^2*y^3", 3, 2),
    ],
)
def test_detection(curve, blowups, stage):
    R = principalize(I(curve))
    assert R.tree.blowup_count() == blowups
    assert detect_embedded_resolution(R, I(curve)) == stage
    assert R.embedded_stage == stage


def test_detection_of_unit_ideal():
    assert detect_embedded_resolution(principalize(I("1"))) is None


def test_smoothness():
    W = ("x", "z")
    assert is_smooth_hypersurface(parse_polynomial("z^2 - x", W))
    assert not is_smooth_hypersurface(parse_polynomial("y^2 - x^3", V))
    assert is_smooth_hypersurface(parse_polynomial("1", V))
    with pytest.raises(ValueError):
        is_smooth_hypersurface(Polynomial.zero(V))


def test_rational_roots():
    x = lambda t: parse_polynomial(t, V)
    assert rational_roots(x("x^3 - x"), "x") == [-1, 0, 1]
    assert rational_roots(x("2*x^2 - 3*x + 1"), "x") == [Fraction(1, 2), 1]
    assert rational_roots(x("x^2 + 1"), "x") == []
    assert rational_roots(x("x*y"), "x") == []


def test_split_cover_of_two_points():
    R = principalize(I("x^3", "y^2 - x*y"))
    notes = [n.note for n in R.tree.nodes.values()]
    assert any(note.startswith("split") for note in notes)
    assert check_trace(document_from_result(R, "principalize", I("x^3", "y^2 - x*y"))) == []


@pytest.mark.parametrize("line, ideal", load_corpus(), ids=[c[0] for c in load_corpus()])
def test_corpus_traces_verify(line, ideal):
    R = principalize(ideal)
    detect_embedded_resolution(R, ideal)
    assert check_trace(document_from_result(R, "principalize", ideal, 64)) == []


def test_order_reduction_trace_verifies():
    M = MarkedIdeal(I("y^2 - x^3"), 2)
    tree = order_reduce(M)
    doc = document_from_tree(tree, "order-reduce", M.ideal, "order-reduced", mark=2)
    assert check_trace(doc) == []
