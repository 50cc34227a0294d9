import pytest
from hypothesis import given, strategies as st

from sternct.laurent import (
    LaurentPoly, TPoly, lp_add, lp_ct, lp_mul, lp_reverse, lp_shift,
    mul_kronecker, mul_schoolbook,
)
from sternct.stern import g_poly, row_poly

P = LaurentPoly.from_dict

big = st.integers(min_value=-(1 << 256), max_value=1 << 256)
small = st.integers(min_value=-50, max_value=50)


@st.composite
def polys(draw, max_terms=40, coeffs=small):
    n = draw(st.integers(0, max_terms))
    off = draw(st.integers(-30, 30))
    return LaurentPoly([draw(coeffs) for _ in range(n)], off)


def naive_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return P(out)


def test_add_examples():
    assert lp_add(P({0: 1, 1: 1}), P({-1: 1, 1: -1})) == P({-1: 1, 0: 1})
    p = P({2: 5, -3: 1})
    assert lp_add(p, LaurentPoly.zero()) == p
    assert lp_add(P({0: 1, 2: 1, 3: 1}), P({0: 1, 3: 1, 5: 1})) == P({0: 2, 2: 1, 3: 2, 5: 1})


def test_mul_examples():
    prod = lp_mul(P({0: 1, 2: 1, 3: 1}), P({0: 1, 3: 1, 5: 1}))
    assert prod == P({0: 1, 2: 1, 3: 2, 5: 2, 6: 1, 7: 1, 8: 1})
    assert prod == row_poly(g_poly(2))
    p = P({-4: 3, 1: -2})
    assert lp_mul(p, LaurentPoly.one()) == p
    assert lp_mul(P({-2: 1}), P({2: 1})) == LaurentPoly.one()


def test_ct_examples():
    assert lp_ct(P({-1: 1, 0: 2, 1: 1})) == 2
    assert lp_ct(P({3: 1})) == 0
    g = row_poly(g_poly(2))
    assert lp_ct(g * g.reverse()) == 13


def test_reverse_and_shift_examples():
    p = P({0: 1, 2: 1, 3: 1})
    assert lp_reverse(p) == P({0: 1, -2: 1, -3: 1})
    assert lp_reverse(lp_reverse(p)) == p
    q = P({-1: 3, 0: 7, 5: 1})
    assert lp_ct(lp_reverse(q)) == lp_ct(q) == 7
    assert lp_shift(P({0: 1, 1: 1}), 2) == P({2: 1, 3: 1})
    assert lp_shift(q, 0) == q
    assert lp_shift(lp_shift(q, 3), -3) == q


def test_canonical_form_and_zero_errors():
    p = LaurentPoly([0, 0, 5, 0, 7, 0], -3)
    assert (p.ldeg, p.deg) == (-1, 1)
    assert all(c for _, c in p.items())
    z = LaurentPoly([0, 0], 4)
    assert z.is_zero() and z == LaurentPoly.zero()
    with pytest.raises(ValueError):
        z.deg
    with pytest.raises(ValueError):
        z.ldeg
    assert (P({1: 1}) - P({1: 1})).is_zero()


def test_power_and_prune():
    assert P({-1: -1}) ** -1 == P({1: -1})
    with pytest.raises(ValueError):
        P({1: 2}) ** -1
    assert P({3: -1}) ** -2 == P({-6: 1})
    assert P({0: 1, 1: 1}) ** 3 == P({0: 1, 1: 3, 2: 3, 3: 1})
    p = P({-5: 1, -1: 2, 0: 3, 2: 4, 6: 5})
    assert p.prune(2) == P({-1: 2, 0: 3, 2: 4})


@given(polys(), polys())
def test_ct_laws(p, q):
    s = p * q
    # P1
    assert lp_ct(lp_reverse(s)) == lp_ct(s)
    # P2
    if not s.is_zero() and (s.ldeg > 0 or s.deg < 0):
        assert lp_ct(s) == 0


@given(polys(max_terms=200, coeffs=big), polys(max_terms=200, coeffs=big))
def test_mul_matches_naive(a, b):
    expect = naive_mul(a, b)
    assert mul_schoolbook(a, b) == expect
    assert mul_kronecker(a, b) == expect
    assert lp_mul(a, b) == expect


@given(polys(max_terms=120), polys(max_terms=120))
def test_mul_support(a, b):
    prod = a * b
    if a.is_zero() or b.is_zero():
        assert prod.is_zero()
    else:
        assert prod.ldeg >= a.ldeg + b.ldeg and prod.deg <= a.deg + b.deg


@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a * b).reverse() == a.reverse() * b.reverse()
    assert (a - a).is_zero()


def test_kronecker_large_operands():
    import random
    rng = random.Random(7)
    a = LaurentPoly([rng.randrange(-10**40, 10**40) for _ in range(3000)], -1500)
    b = LaurentPoly([rng.randrange(-10**5, 10**5) for _ in range(2000)], 17)
    assert mul_kronecker(a, b) == mul_schoolbook(a, b)


def test_tpoly_basics():
    t0 = TPoly([P({0: 1}), P({1: 1}), LaurentPoly.zero()])
    assert t0.degree == 1
    assert t0.reverse_x() == TPoly([P({0: 1}), P({-1: 1})])
    prod = t0 * t0
    assert prod == TPoly([P({0: 1}), P({1: 2}), P({2: 1})])
    assert (t0 - t0).is_zero()
    with pytest.raises(ValueError):
        TPoly().degree
