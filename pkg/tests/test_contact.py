import pytest

from res_kernel.contact import (
    NoAlgebraicContact,
    coefficient_ideal,
    contact_candidates,
    find_maximal_contact,
    homogenization,
    linear_shape,
    reduced,
    restrict_to_hypersurface,
    tschirnhaus,
)
from res_kernel.ideal import Ideal, ideals_equal
from res_kernel.order import MarkedIdeal, t_ideal
from res_kernel.poly import parse_polynomial

V = ("x", "y")


def I(*gens, variables=V):
    return Ideal([parse_polynomial(g, variables) for g in gens], variables)


def P(text, variables=V):
    return parse_polynomial(text, variables)


def test_coefficient_ideal_of_node():
    C = coefficient_ideal(MarkedIdeal(I("x*y"), 2))
    assert C.mark == 2
    assert ideals_equal(C.ideal, I("x^2", "x*y", "y^2"))


def test_coefficient_ideal_restricted_to_contact_hypersurface():
    C = coefficient_ideal(MarkedIdeal(I("y^2 - x^3"), 2), restrict="y")
    assert C.ideal.variables == ("x",)
    assert ideals_equal(C.ideal, I("x^3", variables=("x",)))


def test_coefficient_ideal_mark_one():
    C = coefficient_ideal(MarkedIdeal(I("x^2 + y"), 1))
    assert C.mark == 1
    assert ideals_equal(C.ideal, I("x^2 + y"))


def test_homogenization_of_node():
    assert ideals_equal(homogenization(MarkedIdeal(I("x*y"), 2)), I("x^2", "x*y", "y^2"))


def test_linear_shape():
    assert linear_shape(P("3*y + x^2"), "y") == (3, P("x^2"))
    assert linear_shape(P("x*y + 1"), "y") is None
    assert linear_shape(P("y^2"), "y") is None
    assert linear_shape(P("x"), "y") is None


def test_maximal_contact_for_cusp():
    d = find_maximal_contact(MarkedIdeal(I("y^2 - x^3"), 2))
    assert d.hypersurface_var == "y"
    assert d.h == P("y")
    assert not d.needs_straightening


def test_maximal_contact_needs_straightening():
    d = find_maximal_contact(MarkedIdeal(I("(y - x^2)^2 + x^5"), 2))
    assert d.hypersurface_var == "y"
    assert d.needs_straightening
    c, _ = linear_shape(d.h, "y")
    assert d.straightening.apply(d.h) == P("y") * c


def test_forced_contact_element():
    M = MarkedIdeal(I("x*y"), 2)
    assert find_maximal_contact(M, force=P("x")).hypersurface_var == "x"
    assert find_maximal_contact(M, force=P("y")).hypersurface_var == "y"
    with pytest.raises(ValueError):
        find_maximal_contact(M, force=P("x + 1"))


def test_no_contact():
    with pytest.raises(NoAlgebraicContact):
        find_maximal_contact(MarkedIdeal(I("y^2 - x^3"), 1))


def test_exclusion_of_exceptional_variables():
    T = t_ideal(MarkedIdeal(I("x*y"), 2))
    assert {v for _, v in contact_candidates(T)} == {"x", "y"}
    assert {v for _, v in contact_candidates(T, exclude=("x",))} == {"y"}


def test_tschirnhaus():
    f = P("y^2 + 2*x*y + x^3")
    change = tschirnhaus(f, "y", 2)
    g = change.apply(f)
    assert g == P("y^2 - x^2 + x^3")
    assert g.coefficients_in("y").get(1) is None
    with pytest.raises(ValueError):
        tschirnhaus(P("2*y^2"), "y", 2)


def test_restrict_to_hypersurface():
    R = restrict_to_hypersurface(I("y^2 - x^3", "x*y + x"), "y")
    assert R.variables == ("x",)
    assert ideals_equal(R, I("x^3", "x", variables=("x",)))
    with pytest.raises(ValueError):
        restrict_to_hypersurface(I("x"), "t")


def test_reduced_monomial_ideal():
    R = reduced(I("x^2", "x^3*y", "x*y^2", "y^3"))
    assert sorted(str(g) for g in R.generators) == ["x*y^2", "x^2", "y^3"]
