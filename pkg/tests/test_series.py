from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from sternct.gf import QUADRATIC, x_series
from sternct.series import TruncSeries, TruncationError, quadratic_series_root, ts_inv, ts_mul

T = TruncSeries


def poly(coeffs, order, start=0):
    return T.polynomial(coeffs, order, start)


def test_mul_examples():
    a = poly([0, 1, 2], 5)
    assert ts_mul(a, poly([1], 5)).coefficients(0, 5) == [0, 1, 2, 0, 0, 0]
    one = ts_mul(T.monomial(-1, 3), T.monomial(1, 5))
    assert one.valuation == 0 and one[0] == 1
    X = x_series(4)
    assert (X * X).coefficients(0, 4) == [0, 0, 1, 4, 16]


def test_inv_examples():
    geo = ts_inv(poly([1, -1], 10))
    assert geo.coefficients(0, 10) == [1] * 11
    a = poly([3, 1, -4, 1, 5], 8)
    assert ts_inv(ts_inv(a)) == a
    b = ts_inv(poly([0, 0, 2], 6))
    assert b.valuation == -2 and b[-2] == F(1, 2)
    with pytest.raises(ZeroDivisionError):
        ts_inv(T([], 0, 5))


def test_truncation_contract():
    a = T([1, 2, 3], 0, 2)
    with pytest.raises(TruncationError):
        a[3]
    b = T([1, 1, 1, 1, 1, 1], 0, 5)
    prod = a * b
    assert prod.order == 2
    with pytest.raises(TruncationError):
        prod[3]
    # the shifted operand keeps more relative precision
    c = a * T.monomial(1, 100)
    assert c.order == 3
    with pytest.raises(TruncationError):
        a.truncate(4)


def test_quadratic_root_examples():
    A, B, C = QUADRATIC
    assert quadratic_series_root(A, B, C, 2).coefficients(0, 2) == [0, 1, 2]
    assert quadratic_series_root(A, B, C, 4).coefficients(0, 4) == [0, 1, 2, 6, 21]
    lin = quadratic_series_root([0], [1], [0, -1], 6)
    assert lin.coefficients(0, 6) == [0, 1, 0, 0, 0, 0, 0]


def test_quadratic_root_errors():
    with pytest.raises(ValueError):
        quadratic_series_root([1], [1], [1], 5)  # C(0) != 0: no root of positive valuation
    with pytest.raises(ValueError):
        quadratic_series_root([1], [0, 1], [0, 1], 5)  # B(0) == 0: branch not determined


def test_x_satisfies_quadratic_to_200():
    prec = 200
    X = x_series(prec)
    A, B, C = (poly(p, prec) for p in QUADRATIC)
    res = A * X * X + B * X + C
    assert res.order >= prec and res.is_zero()
    assert all(c.denominator == 1 for c in X.coefficients())
    # A = C, so the other root is 1/X and A X (1/X) = C
    assert (A * X * ts_inv(X) - C).is_zero()


@st.composite
def series(draw):
    start = draw(st.integers(-3, 3))
    n = draw(st.integers(1, 12))
    c = [F(draw(st.integers(-20, 20)), draw(st.integers(1, 5))) for _ in range(n)]
    return T(c, start, start + n - 1 + draw(st.integers(0, 3)))


@given(series(), series())
def test_valuation_laws(a, b):
    p = a * b
    if not a.is_zero() and not b.is_zero():
        assert p.is_zero() or p.valuation == a.valuation + b.valuation or p.valuation > p.order
    s = a + b
    assert s.order == min(a.order, b.order)
    if not s.is_zero():
        assert s.valuation >= min(a.valuation, b.valuation)


@given(series())
def test_inverse_roundtrip(a):
    if a.is_zero():
        return
    inv = ts_inv(a)
    assert inv.valuation == -a.valuation
    prod = a * inv
    assert prod[0] == 1
    assert all(prod[k] == 0 for k in range(1, prod.order + 1))


def test_derivative_and_shift():
    a = poly([1, 2, 3], 4)
    assert a.derivative().coefficients(0, 3) == [2, 6, 0, 0]
    assert a.shift(2).valuation == 2 and a.shift(2).order == 6
