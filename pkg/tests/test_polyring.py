import pytest
from hypothesis import given, strategies as st

from algebra.errors import ContractViolation, ParseError
from algebra.polyring import (
    IntPoly,
    MonomialOrder,
    PolyRing,
    frobenius_power,
    power_p_minus_one_chain,
    reduce_mod_p,
)
from algebra.polytext import format_int_poly, parse_int_poly


def polys(ring, max_terms=4, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    return st.dictionaries(exps, st.integers(1, ring.p - 1), max_size=max_terms).map(ring.from_terms)


RINGS = [PolyRing(2, 2), PolyRing(2, 3), PolyRing(3, 5)]


def test_grevlex_orders_terms():
    R = PolyRing(3, 7)
    f = R.parse("x3^2 + x1*x2 + x1^2 + x2^2*x3 + 1")
    assert [e for e, _ in f] == [(0, 2, 1), (2, 0, 0), (1, 1, 0), (0, 0, 2), (0, 0, 0)]
    assert f.leading_term() == ((0, 2, 1), 1)
    assert f.total_degree() == 3


def test_lex_order():
    R = PolyRing(2, 5, MonomialOrder.LEX)
    f = R.parse("x2^3 + x1")
    assert f.leading_term() == ((1, 0), 1)


def test_arithmetic_mod_p():
    R = PolyRing(2, 3)
    x1, x2 = R.gens()
    assert (x1 + x2).pow(3) == x1.pow(3) + x2.pow(3)
    assert (x1 + x1 + x1).is_zero()
    assert (x1 - x2) * (x1 + x2) == x1 * x1 - x2 * x2
    assert 2 * x1 == -x1
    assert (x1 + 1) - 1 == x1


def test_zero_polynomial():
    R = PolyRing(2, 2)
    zero = R.zero()
    assert zero.is_zero()
    assert zero.total_degree() == 0
    assert str(zero) == "0"
    with pytest.raises(ContractViolation):
        zero.leading_term()


def test_ring_mismatch():
    with pytest.raises(ContractViolation):
        PolyRing(2, 2).var(0) + PolyRing(2, 3).var(0)
    with pytest.raises(ContractViolation):
        PolyRing(2, 2).var(2)


def test_composite_characteristic_rejected():
    with pytest.raises(ContractViolation, match="4 is not prime"):
        PolyRing(1, 4)


@pytest.mark.parametrize("R", RINGS, ids=lambda R: f"p{R.p}n{R.nvars}")
@given(data=st.data())
def test_frobenius_is_pth_power(R, data):
    f = data.draw(polys(R))
    assert frobenius_power(f, R.p) == f.pow(R.p)
    assert f.frobenius_power(R.p**2) == f.pow(R.p).pow(R.p)


@pytest.mark.parametrize("R", [PolyRing(2, 2), PolyRing(2, 3)], ids=["p2", "p3"])
@given(data=st.data(), j=st.integers(0, 2))
def test_power_chain_matches_direct_power(R, data, j):
    f = data.draw(polys(R, max_terms=3, max_exp=2))
    assert power_p_minus_one_chain(f, j) == f.pow(R.p**j - 1)


def test_frobenius_power_needs_a_power_of_p():
    R = PolyRing(1, 3)
    with pytest.raises(ContractViolation):
        frobenius_power(R.var(0), 2)


def test_reduce_mod_p_drops_multiples_of_p():
    f = IntPoly(1, {(1,): 3, (0,): 4})
    assert reduce_mod_p(f, 3) == PolyRing(1, 3).one()
    assert reduce_mod_p(IntPoly(1, {(1,): 3}), 3).is_zero()


# ---------- text ----------

def test_parse_example():
    f = parse_int_poly("3*x1^2*x2 - 5", ("x1", "x2"))
    assert f == IntPoly(2, {(2, 1): 3, (0, 0): -5})
    assert len(f.terms) == 2
    assert format_int_poly(f) == "3*x1^2*x2 - 5"


def test_parse_whitespace_and_implicit_products():
    names = ("x1", "x2")
    assert parse_int_poly(" 2 x1 x2 +x2 ", names) == parse_int_poly("2*x1*x2+x2", names)
    assert parse_int_poly("-x1 + x1", names) == IntPoly(2, {})


def test_parse_unknown_variable():
    with pytest.raises(ParseError, match="unknown variable"):
        parse_int_poly("x1 + x7", ("x1", "x2"))


def test_parse_exponent_overflow():
    with pytest.raises(ParseError, match="exponent overflow"):
        parse_int_poly("x1^99999999999", ("x1", "x2"))


def test_product_overflow_points_at_its_term():
    with pytest.raises(ParseError, match="exponent overflow in product") as info:
        parse_int_poly("x2 + x1^2147483647*x1", ("x1", "x2"))
    assert info.value.col == 6


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_int_poly("x1 + * x2", ("x1", "x2"), line=4)
    assert info.value.line == 4
    assert info.value.col is not None


def test_custom_names():
    R = PolyRing(1, 5, names=("x",))
    assert R.parse("x^2 - 1") == R.var(0).pow(2) + 4
    assert str(R.parse("x^2 - 1")) == "x^2 + 4"


@pytest.mark.parametrize("R", RINGS, ids=lambda R: f"p{R.p}n{R.nvars}")
@given(data=st.data())
def test_text_roundtrip(R, data):
    f = data.draw(polys(R))
    text = str(f)
    assert R.parse(text) == f
    assert str(R.parse(text)) == text
