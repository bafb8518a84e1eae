import pytest
from hypothesis import given
from hypothesis import strategies as st

from res_kernel.charts import (
    Center,
    InadmissibleCenter,
    blow_up_charts,
    change_chart,
    controlled_transform,
    fresh_names,
    is_admissible,
    patch_chart,
    pullback,
    root_chart,
    strict_transform,
    total_transform,
)
from res_kernel.ideal import Ideal, ideals_equal, is_unit_ideal
from res_kernel.order import MarkedIdeal
from res_kernel.poly import Polynomial, parse_polynomial

V = ("x", "y")


def I(*gens, variables=V):
    return Ideal([parse_polynomial(g, variables) for g in gens], variables)


def charts_of(c, center):
    return {ch.chart_var: ch for ch in blow_up_charts(c, center)}


def test_origin_blow_up_of_plane():
    root = root_chart(V)
    ch = charts_of(root, ("x", "y"))
    x, y = ch["x"], ch["y"]
    assert x.variables == ("x", "z") and y.variables == ("z", "y")
    assert x.id == "root/x-chart" and x.stage == 1
    assert x.exceptional == (("x", 1),)
    assert dict((v, str(p)) for v, p in x.pullback_map) == {"y": "x*z"}
    assert dict((v, str(p)) for v, p in y.pullback_map) == {"x": "z*y"}


def test_cusp_transforms_in_x_chart():
    root = root_chart(V)
    x = charts_of(root, ("x", "y"))["x"]
    cusp = I("y^2 - x^3")
    W = x.variables
    assert ideals_equal(total_transform(cusp, root, x), I("x^2*z^2 - x^3", variables=W))
    assert ideals_equal(strict_transform(cusp, root, x), I("z^2 - x", variables=W))
    controlled = controlled_transform(MarkedIdeal(cusp, 2), root, x)
    assert ideals_equal(controlled, I("z^2 - x", variables=W))


def test_cusp_strict_transform_misses_y_chart_exceptional_divisor():
    root = root_chart(V)
    y = charts_of(root, ("x", "y"))["y"]
    strict = strict_transform(I("y^2 - x^3"), root, y)
    assert ideals_equal(strict, I("1 - z^3*y", variables=y.variables))
    assert is_unit_ideal(Ideal(list(strict.generators) + [parse_polynomial("y", y.variables)], y.variables))


def test_admissibility():
    root = root_chart(V)
    M = MarkedIdeal(I("y^2 - x^3"), 2)
    assert is_admissible(M, root, Center(("x", "y")))
    assert not is_admissible(M, root, Center(("x",)))
    bad = charts_of(root, ("x",))["x"]
    with pytest.raises(InadmissibleCenter):
        controlled_transform(M, root, bad)


def test_center_validation():
    with pytest.raises(ValueError):
        Center(())
    with pytest.raises(ValueError):
        Center(("x", "x"))
    with pytest.raises(ValueError):
        blow_up_charts(root_chart(V), ("t",))


def test_codimension_one_blow_up_is_identity_on_coordinates():
    root = root_chart(V)
    (ch,) = blow_up_charts(root, ("y",))
    assert ch.variables == V and ch.pullback_map == ()
    assert ch.exceptional == (("y", 1),)


def test_exceptional_record_follows_renaming():
    root = root_chart(V)
    x = charts_of(root, ("x", "y"))["x"]
    z = charts_of(x, ("x", "z"))["z"]
    assert z.variables == ("w", "z")
    assert dict(z.exceptional) == {"w": 1, "z": 2}


def test_change_and_patch_charts():
    root = root_chart(V, exceptional=("x",))
    ch = change_chart(root, "y", "u", parse_polynomial("u + x^2", ("x", "u")))
    assert ch.variables == ("x", "u")
    f = pullback(parse_polynomial("y - x^2", V), root, ch)
    assert f == parse_polynomial("u", ch.variables)
    p = patch_chart(root, parse_polynomial("x^3", V))
    assert [str(g) for g in p.inverted] == ["x"]
    assert p.exceptional == ()
    with pytest.raises(ValueError):
        change_chart(root, "t", "u", parse_polynomial("u", ("x", "u")))


def test_rational_change_clears_denominator():
    root = root_chart(V)
    A = parse_polynomial("1 + x", V)
    ch = change_chart(root, "y", "u", parse_polynomial("u - x", ("x", "u")), A)
    assert [str(g) for g in ch.inverted] == ["x + 1"]
    # y = (u - x)/(1 + x); the linear polynomial is multiplied by (1 + x)
    f = pullback(parse_polynomial("y*(1 + x) + x", V), root, ch)
    assert f == parse_polynomial("(1 + x)*u", ch.variables)


def test_fresh_names():
    assert fresh_names({"x", "y"}, 2) == ["z", "w"]
    assert fresh_names(set("zwvutsrqponmlkjihgfedcba"), 1) == ["z1"]
    assert fresh_names({"x"}, 0) == []


centers = st.sampled_from([("x", "y"), ("x", "y", "z"), ("y", "z"), ("x", "z")])


@given(centers, st.integers(1, 3), st.data())
def test_total_is_exceptional_power_times_controlled(center, a, data):
    W = ("x", "y", "z")
    # build f in (center)^a
    gens = []
    for _ in range(data.draw(st.integers(1, 3))):
        exp = [0, 0, 0]
        for _ in range(a):
            exp[W.index(data.draw(st.sampled_from(center)))] += 1
        extra = data.draw(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)))
        exp = tuple(e + k for e, k in zip(exp, extra))
        gens.append(Polynomial(W, {exp: data.draw(st.integers(1, 3))}))
    f = gens[0]
    for g in gens[1:]:
        f = f + g
    root = root_chart(W)
    M = MarkedIdeal(Ideal([f], W), a)
    for ch in blow_up_charts(root, center):
        e = Polynomial.variable(ch.chart_var, ch.variables) ** a
        (c,) = controlled_transform(M, root, ch, check=False).generators
        (t,) = total_transform(M.ideal, root, ch).generators
        assert t == e * c
