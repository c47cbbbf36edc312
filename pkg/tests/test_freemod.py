import pytest
from hypothesis import given, strategies as st

from algebra.errors import ContractViolation
from algebra.freemod import (
    INFINITE,
    FreeElem,
    PolyMatrix,
    buchberger,
    collect_gb_stats,
    is_member,
    kernel_gens,
    normal_form,
    preimage_kernel,
    quotient_dim,
    spair_certificate,
    submodule_contains,
    submodule_equal,
)
from algebra.polyring import PolyRing
from oracles import sympy_groebner, term_set, truncated_kernel


def ideal(ring, *texts):
    return [FreeElem.from_list(ring, [ring.parse(t)]) for t in texts]


def small_polys(ring, max_terms=3, max_exp=2):
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    return st.dictionaries(exps, st.integers(1, ring.p - 1), min_size=1, max_size=max_terms).map(ring.from_terms)


RINGS = [PolyRing(2, 2), PolyRing(2, 3), PolyRing(3, 2), PolyRing(3, 5)]


@pytest.mark.parametrize("R", RINGS, ids=lambda R: f"p{R.p}n{R.nvars}")
@given(data=st.data())
def test_ideal_basis_matches_sympy(R, data):
    gens = data.draw(st.lists(small_polys(R), min_size=1, max_size=3))
    gb = buchberger([FreeElem.from_list(R, [g]) for g in gens])
    ours = {term_set(b.component(0)) for b in gb.basis}
    assert ours == sympy_groebner(gens, R)
    assert spair_certificate(gb)
    for g in gens:
        assert gb.contains(FreeElem.from_list(R, [g]))


def test_reduced_basis_is_monic_and_sorted():
    R = PolyRing(2, 5)
    gb = buchberger(ideal(R, "2*x1^2 + x2", "3*x1*x2"))
    for (comp, exp), b in zip(gb.leads, gb.basis):
        assert b.component(comp).coeff(exp) == 1
    keys = [(-c, R.key(e)) for c, e in gb.leads]
    assert keys == sorted(keys, reverse=True)


def test_membership_and_normal_form():
    R = PolyRing(2, 3)
    gb = buchberger(ideal(R, "x1^2", "x2^2"))
    x1, x2 = R.gens()
    inside = FreeElem.from_list(R, [x1 * x1 * x2 + 2 * x2 * x2])
    outside = FreeElem.from_list(R, [x1 * x2 + x1 * x1])
    assert is_member(inside, gb)
    assert inside in gb
    assert not is_member(outside, gb)
    assert normal_form(outside, gb) == FreeElem.from_list(R, [x1 * x2])


def test_module_order_puts_first_component_first():
    R = PolyRing(2, 2)
    x1, x2 = R.gens()
    v = FreeElem.from_list(R, [x2, x1 * x1 * x1])
    gb = buchberger([v])
    assert gb.leads == [(0, (0, 1))]


def test_rank_mismatch():
    R = PolyRing(1, 2)
    gb = buchberger(ideal(R, "x1"))
    with pytest.raises(ContractViolation):
        gb.contains(FreeElem.zero(R, 2))
    with pytest.raises(ContractViolation):
        buchberger([])


def test_empty_generators_give_zero_module():
    R = PolyRing(2, 2)
    gb = buchberger([], ring=R, rank=3)
    assert gb.is_zero_module()
    assert not gb.contains(FreeElem.basis(R, 3, 1))
    assert gb.contains(FreeElem.zero(R, 3))


def test_koszul_syzygies_of_the_variables():
    R = PolyRing(3, 3)
    x1, x2, x3 = R.gens()
    m = PolyMatrix.from_rows(R, [[x1, x2, x3]])
    ker = kernel_gens(m)
    assert all(m.apply(v).is_zero() for v in ker)
    expected = [
        FreeElem.from_list(R, [x2, -x1, 0]),
        FreeElem.from_list(R, [x3, 0, -x1]),
        FreeElem.from_list(R, [0, x3, -x2]),
    ]
    assert submodule_equal(ker, expected)


def test_injective_map_has_no_kernel():
    R = PolyRing(2, 2)
    m = PolyMatrix.diagonal(R, R.gens())
    assert kernel_gens(m) == []


def test_kernel_of_zero_map_is_everything():
    R = PolyRing(1, 2)
    m = PolyMatrix(R, 0, 2)
    assert submodule_equal(kernel_gens(m), [FreeElem.basis(R, 2, 0), FreeElem.basis(R, 2, 1)])


def test_preimage_of_a_submodule():
    R = PolyRing(1, 3)
    x = R.var(0)
    m = PolyMatrix.from_rows(R, [[x]])
    target = buchberger([FreeElem.from_list(R, [x.pow(3)])])
    pre = preimage_kernel(m, target)
    assert submodule_equal(pre, [FreeElem.from_list(R, [x.pow(2)])])


@pytest.mark.parametrize("R", [PolyRing(2, 2), PolyRing(2, 3)], ids=["p2", "p3"])
@given(data=st.data())
def test_kernel_contains_every_truncated_syzygy(R, data):
    cols = data.draw(st.integers(2, 3))
    rows = data.draw(st.integers(1, 2))
    entries = data.draw(st.lists(st.lists(small_polys(R, max_terms=2), min_size=cols, max_size=cols),
                                 min_size=rows, max_size=rows))
    m = PolyMatrix.from_rows(R, entries)
    ker = kernel_gens(m)
    for v in ker:
        assert m.apply(v).is_zero()
    gb = buchberger(ker, ring=R, rank=cols)
    for v in truncated_kernel(m, 2):
        assert gb.contains(v)


def test_submodule_comparisons():
    R = PolyRing(2, 2)
    x1, x2 = R.gens()
    a = [FreeElem.from_list(R, [x1, x2])]
    b = [FreeElem.from_list(R, [x1 * x2, x2 * x2]), FreeElem.from_list(R, [x1, x2])]
    assert submodule_equal(a, b)
    assert submodule_contains(a, [FreeElem.from_list(R, [x1 * x1, x1 * x2])])
    assert not submodule_contains(a, [FreeElem.from_list(R, [x1, 0])])
    assert submodule_equal([], [])
    assert not submodule_equal([], a)


def test_quotient_dimension():
    R = PolyRing(2, 3)
    assert quotient_dim(1, buchberger(ideal(R, "x1^2", "x2^3"))) == 6
    assert quotient_dim(1, buchberger(ideal(R, "x1", "x2"))) == 1
    assert quotient_dim(1, buchberger(ideal(R, "1"))) == 0
    assert quotient_dim(1, buchberger(ideal(R, "x1"))) == INFINITE
    x1, x2 = R.gens()
    sub = buchberger([
        FreeElem.from_list(R, [x1, 0]), FreeElem.from_list(R, [x2, 0]),
        FreeElem.from_list(R, [0, x1 * x1]), FreeElem.from_list(R, [0, x2]),
    ])
    assert quotient_dim(2, sub) == 3
    assert quotient_dim(2, buchberger([], ring=R, rank=2)) == INFINITE


def test_matrix_composition():
    R = PolyRing(2, 5)
    x1, x2 = R.gens()
    A = PolyMatrix.from_rows(R, [[x1, 1], [0, x2]])
    B = PolyMatrix.from_rows(R, [[x2, x1], [2, 0]])
    v = FreeElem.from_list(R, [x1 + 1, x2])
    assert (A @ B).apply(v) == A.apply(B.apply(v))
    with pytest.raises(ContractViolation):
        A @ PolyMatrix(R, 3, 1)


def test_statistics_are_collected():
    R = PolyRing(2, 2)
    with collect_gb_stats() as stats:
        buchberger(ideal(R, "x1^2 + x2", "x1*x2"))
        buchberger(ideal(R, "x1"))
    assert stats.bases == 2
    assert stats.largest_basis >= 2
    assert stats.spairs_reduced >= 1
