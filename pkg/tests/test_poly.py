"""Tests for sparse polynomial arithmetic over F_p and the mixed pi-adic model."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_lab.poly import (
    MixedPoly,
    SparsePolyFp,
    WeightedMonomialIdeal,
    mul_truncated,
    pow_mixed,
    pth_root_mod_fp,
    reduce_mod_pi,
    weighted_membership,
)


def sp(p, vars, terms):
    return SparsePolyFp(p, tuple(vars), dict(terms))


# -- SparsePolyFp ----------------------------------------------------------


def test_coefficients_normalized_mod_p():
    f = sp(3, ("x",), {(1,): 4, (0,): -1})
    assert f.terms == {(1,): 1, (0,): 2}
    assert sp(2, ("x",), {(1,): 2}).is_zero()


def test_add_mul_basic():
    x_plus_y = sp(5, ("x", "y"), {(1, 0): 1, (0, 1): 1})
    sq = x_plus_y * x_plus_y
    assert sq.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert (sq + sq + sq + sq + sq).is_zero()     # 5 = 0 in F_5
    assert (x_plus_y + x_plus_y).terms == {(1, 0): 2, (0, 1): 2}


def test_truncate_is_componentwise():
    """truncate(cap) keeps exactly the terms with every exponent below cap."""
    f = sp(2, ("x", "y"), {(1, 0): 1, (0, 1): 1})
    assert (f * f).truncate(2).is_zero()          # x^2 + y^2, both cut at cap 2
    g = sp(3, ("x", "y"), {(1, 0): 1, (0, 1): 1})
    assert (g * g).truncate(3).terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}


def test_mul_truncated_example():
    f = sp(5, ("x", "y"), {(2, 0): 1, (1, 1): 1})
    g = sp(5, ("x", "y"), {(1, 0): 1, (0, 1): 1})
    h = mul_truncated(f, g, 3)
    assert h.terms == {(2, 1): 2, (1, 2): 1}      # x^3 exceeds the cap in x


def test_pow_and_evaluate():
    f = sp(7, ("x",), {(1,): 1, (0,): 3})
    assert (f**2).terms == {(2,): 1, (1,): 6, (0,): 2}
    assert f.evaluate((4,)) == 0
    assert f.evaluate((1,)) == 4
    assert (f**0).terms == {(0,): 1}


def test_degree_and_str():
    g = sp(3, ("x", "y"), {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert g.degree() == 2
    assert str(g) == "x^2 + 2*x*y + y^2"
    assert str(SparsePolyFp.zero(3, ("x",))) == "0"


def test_sparse_json_round_trip():
    g = sp(3, ("x", "y"), {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    text = g.to_json()
    assert text == (
        '{"p":3,"vars":["x","y"],"terms":'
        '[{"exps":[2,0],"coeff":"1"},{"exps":[1,1],"coeff":"2"},{"exps":[0,2],"coeff":"1"}]}'
    )
    assert SparsePolyFp.from_json(text) == g


@pytest.mark.parametrize("p, terms, root_terms", [
    (2, {(2, 0): 1, (0, 2): 1}, {(1, 0): 1, (0, 1): 1}),
    (3, {(3, 0): 1, (0, 3): 2}, {(1, 0): 1, (0, 1): 2}),
    (5, {(0, 0): 4}, {(0, 0): 4}),
])
def test_pth_root_exists(p, terms, root_terms):
    f = sp(p, ("x", "y"), terms)
    h = pth_root_mod_fp(f)
    assert h is not None
    assert h.terms == root_terms
    assert h**p == f


@pytest.mark.parametrize("p, terms", [
    (2, {(1, 0): 1}),
    (3, {(3, 0): 1, (1, 0): 1}),
])
def test_pth_root_absent(p, terms):
    assert pth_root_mod_fp(sp(p, ("x", "y"), terms)) is None


@st.composite
def sparse_polys(draw, max_vars=3, max_exp=4, max_terms=5):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, max_vars))
    vars = tuple("xyz"[:n])
    n_terms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n_terms):
        key = tuple(draw(st.integers(0, max_exp)) for _ in range(n))
        terms[key] = draw(st.integers(1, p - 1)) if p > 2 else 1
    return SparsePolyFp(p, vars, terms)


@given(data=st.data(), cap=st.integers(1, 6))
@settings(max_examples=80, deadline=None)
def test_mul_truncated_matches_full_product(data, cap):
    f = data.draw(sparse_polys())
    g = data.draw(sparse_polys())
    if f.p != g.p or f.vars != g.vars:
        return
    assert mul_truncated(f, g, cap) == (f * g).truncate(cap)


@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_pth_power_has_pth_root(data):
    h = data.draw(sparse_polys(max_exp=2, max_terms=3))
    f = h ** h.p
    r = pth_root_mod_fp(f)
    assert r is not None and r == h


# -- MixedPoly -------------------------------------------------------------


def test_mixed_effective_pi_order():
    h = MixedPoly(3, 1, ("x",), {(0, (2,)): 6, (1, (0,)): 1})
    assert h.effective_pi_order((0, (2,))) == 3   # v_3(6) = 1, times p^a = 3
    assert h.effective_pi_order((1, (0,))) == 1
    assert str(h) == "6*x^2 + pi"


def test_mixed_rejects_bad_input():
    with pytest.raises(ValueError):
        MixedPoly(4, 0, ("x",), {(0, (1,)): 1})
    with pytest.raises(ValueError):
        MixedPoly(3, -1, ("x",), {(0, (1,)): 1})
    with pytest.raises(ValueError):
        MixedPoly(3, 0, ("x",), {(0, (1, 0)): 1})  # exps/vars length mismatch
    with pytest.raises(ValueError):
        MixedPoly(3, 0, ("x",), {(-1, (1,)): 1})


def test_mixed_drops_zero_coefficients():
    f = MixedPoly(3, 0, ("x",), {(0, (1,)): 0, (2, (0,)): 3})
    assert set(f.terms) == {(2, (0,))}


def test_mixed_json_round_trip():
    f = MixedPoly(2, 0, ("x", "y"), {(3, (0, 0)): 1, (0, (3, 0)): 1, (0, (0, 3)): 1})
    text = f.to_json()
    assert text == (
        '{"p":2,"ram_level":0,"vars":["x","y"],"terms":'
        '[{"pi":3,"exps":[0,0],"coeff":"1"},{"pi":0,"exps":[3,0],"coeff":"1"},'
        '{"pi":0,"exps":[0,3],"coeff":"1"}]}'
    )
    assert MixedPoly.from_json(text) == f
    assert str(f) == "pi^3 + x^3 + y^3"


def test_pow_mixed_matches_repeated_product():
    f = MixedPoly(2, 0, ("x", "y"), {(3, (0, 0)): 1, (0, (3, 0)): 1, (0, (0, 3)): 1})
    assert pow_mixed(f, 0) == MixedPoly(2, 0, ("x", "y"), {(0, (0, 0)): 1})
    assert pow_mixed(f, 1) == f
    assert pow_mixed(f, 3) == f * f * f


def test_reduce_mod_pi():
    f = MixedPoly(3, 0, ("x", "y"), {(1, (0, 0)): 1, (0, (2, 0)): 4, (0, (0, 1)): 3})
    g = reduce_mod_pi(f)
    assert g.p == 3 and g.vars == ("x", "y")
    # pi-term and the p-divisible coefficient both vanish mod pi
    assert g.terms == {(2, 0): 1}


def test_reduce_commutes_with_pow():
    f = MixedPoly(2, 0, ("x", "y"), {(1, (0, 0)): 1, (0, (1, 0)): 1, (0, (0, 1)): 3})
    for n in range(5):
        assert reduce_mod_pi(pow_mixed(f, n)) == reduce_mod_pi(f) ** n


@given(
    n=st.integers(0, 4),
    c1=st.integers(1, 9),
    c2=st.integers(1, 9),
    pi=st.integers(0, 2),
)
@settings(max_examples=60, deadline=None)
def test_eval_at_one_is_multiplicative(n, c1, c2, pi):
    f = MixedPoly(5, 0, ("x",), {(pi, (0,)): c1, (0, (2,)): c2})
    assert pow_mixed(f, n).eval_at_one() == f.eval_at_one() ** n


# -- weighted ideals and membership ---------------------------------------


def test_ideal_minimal_generators():
    ideal = WeightedMonomialIdeal(
        2, 0, ("x", "y"),
        [(2, (0, 0)), (0, (2, 0)), (2, (2, 0)), (0, (0, 2))],
    )
    assert ideal.gens == ((0, (0, 2)), (0, (2, 0)), (2, (0, 0)))


def test_membership_positive():
    # (pi^2 + x^2)^2 lies termwise in (x^2, pi^2)
    f = MixedPoly(2, 0, ("x",), {(2, (0,)): 1, (0, (2,)): 1})
    ideal = WeightedMonomialIdeal(2, 0, ("x",), [(2, (0,)), (0, (2,))])
    res = weighted_membership(pow_mixed(f, 2), ideal)
    assert res
    assert res.contained is True
    assert res.failure is None
    assert {k for k, _ in res.matches} == set(pow_mixed(f, 2).terms)


def test_membership_failure_witness():
    f = MixedPoly(2, 0, ("x",), {(1, (1,)): 1})
    ideal = WeightedMonomialIdeal(2, 0, ("x",), [(2, (0,))])
    res = weighted_membership(f, ideal)
    assert not res
    assert res.failure == (1, (1,))


def test_membership_uses_effective_order():
    # 3*x has effective pi-order 1 at p = 3, so it lies in (pi)
    f = MixedPoly(3, 0, ("x",), {(0, (1,)): 3})
    ideal = WeightedMonomialIdeal(3, 0, ("x",), [(1, (0,))])
    assert weighted_membership(f, ideal).contained is True


@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_membership_monotone_under_multiplication(data):
    """If f is in I termwise then so is g*f, for monomial g."""
    p = data.draw(st.sampled_from([2, 3, 5]))
    f = MixedPoly(p, 0, ("x",), {
        (data.draw(st.integers(0, 3)), (data.draw(st.integers(0, 3)),)):
            data.draw(st.integers(1, p**2))
        for _ in range(data.draw(st.integers(1, 3)))
    })
    ideal = WeightedMonomialIdeal(
        p, 0, ("x",),
        [(data.draw(st.integers(0, 2)), (data.draw(st.integers(0, 2)),))],
    )
    if not weighted_membership(f, ideal):
        return
    g = MixedPoly(p, 0, ("x",), {(1, (1,)): 1})
    assert weighted_membership(g * f, ideal).contained is True
