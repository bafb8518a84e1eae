import pytest
from hypothesis import given
from hypothesis import strategies as st

from res_kernel import kernels
from res_kernel.ideal import (
    GREVLEX,
    GRLEX,
    LEX,
    GroebnerCapExceeded,
    Ideal,
    MonomialOrder,
    combine,
    contains,
    contains_on,
    eliminate,
    groebner_basis,
    ideals_equal,
    ideals_equal_on,
    is_unit_ideal,
    is_unit_on,
    normal_form,
    radical_member,
    saturate,
    spair_cap,
)
from res_kernel.poly import Polynomial, parse_polynomial

V = ("x", "y")


def I(*gens, variables=V):
    return Ideal([parse_polynomial(g, variables) for g in gens], variables)


def P(text, variables=V):
    return parse_polynomial(text, variables)


def test_textbook_lex_basis():
    gb = groebner_basis(I("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"), LEX)
    assert set(gb) == {P("x - 2*y^2"), P("y^3")}


def test_reduced_basis_is_monic_and_interreduced():
    for order in (LEX, GRLEX, GREVLEX):
        W = order.weights(2)
        gb = groebner_basis(I("x^2 + y", "x*y - 1"), order)
        leads = [kernels.leading_exp(g.terms, W) for g in gb]
        for g, lead in zip(gb, leads):
            assert g.terms[lead] == 1
            for other in leads:
                if other != lead:
                    assert not any(kernels.divides(other, e) for e in g.terms)


def test_membership():
    J = I("x^2 - y", "y^2")
    assert contains(J, P("x^4"))
    assert not contains(J, P("x"))
    assert contains(J, P("0"))


def test_unit_and_zero():
    assert is_unit_ideal(I("x", "x - 1"))
    assert not is_unit_ideal(I("x*y"))
    assert Ideal.zero(V).is_zero()
    assert is_unit_ideal(Ideal.unit(V))


def test_ideals_equal():
    assert ideals_equal(I("x", "y"), I("x + y", "x - y"))
    assert not ideals_equal(I("x"), I("x^2"))


def test_combine_modes():
    a, b = I("x"), I("y")
    assert ideals_equal(combine(a, b), I("x", "y"))
    assert ideals_equal(combine(a, b, "product"), I("x*y"))
    assert ideals_equal(combine(I("x", "y"), mode="power", k=2), I("x^2", "x*y", "y^2"))
    with pytest.raises(ValueError):
        combine(a, None)
    with pytest.raises(ValueError):
        combine(a, b, "meet")


def test_eliminate():
    W = ("t", "x", "y")
    # the parametrised cusp x = t^2, y = t^3
    J = eliminate(I("x - t^2", "y - t^3", variables=W), ["t"])
    assert J.variables == V
    assert ideals_equal(J, I("y^2 - x^3"))


def test_saturate():
    J = saturate(I("x^2*y", "x^3"), P("x"))
    assert is_unit_ideal(J)
    J = saturate(I("x*y", "x*z", variables=("x", "y", "z")), parse_polynomial("x", ("x", "y", "z")))
    assert ideals_equal(J, I("y", "z", variables=("x", "y", "z")))
    with pytest.raises(ValueError):
        saturate(I("x"), Polynomial.zero(V))


def test_radical_membership():
    assert radical_member(I("x^3", "y^2"), P("x + y"))
    assert not radical_member(I("x*y"), P("x"))


def test_localized_predicates():
    x = P("x")
    assert is_unit_on(I("x*y - 1"), ())  is False
    assert is_unit_on(I("x*y"), [P("x*y")])
    assert contains_on(I("x*y"), P("y"), [x])
    assert not contains(I("x*y"), P("y"))
    assert ideals_equal_on(I("x^2*y"), I("y"), [x])


def test_order_validation():
    with pytest.raises(ValueError):
        MonomialOrder("weird")


def test_spair_cap(monkeypatch):
    monkeypatch.setenv("RES_KERNEL_SPAIR_CAP", "1")
    assert spair_cap() == 1
    with pytest.raises(GroebnerCapExceeded):
        groebner_basis(I("x^3 - 2*x*y", "x^2*y - 2*y^2 + x"), GREVLEX)
    monkeypatch.setenv("RES_KERNEL_SPAIR_CAP", "zero")
    with pytest.raises(ValueError):
        spair_cap()


small = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3), min_size=1, max_size=3
).map(lambda d: Polynomial(V, d))


@given(st.lists(small, min_size=1, max_size=3), small, small)
def test_combinations_are_members(gens, h1, h2):
    J = Ideal(gens, V)
    f = h1 * gens[0] + h2 * gens[-1]
    assert contains(J, f)
    assert normal_form(f, J) == Polynomial.zero(V)


@given(st.lists(small, min_size=1, max_size=3))
def test_basis_generates_same_ideal(gens):
    J = Ideal(gens, V)
    for order in (LEX, GREVLEX):
        B = Ideal(groebner_basis(J, order), V)
        assert all(contains(B, g) for g in gens)
        assert all(contains(J, b) for b in B.generators)
