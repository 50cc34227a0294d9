from fractions import Fraction as F

import pytest

from sternct.gf import (H_FACTORS, BivariateRational, build_coeff_table, ct_h, ct_x_irrelevant,
                        h_series, omega_gf, omega_series, partial_fraction_residual, product_rows,
                        resolvent_matrix, solve_component, tpoly_det, u_direct, v_direct)
from sternct.laurent import LaurentPoly, TPoly
from sternct.stern import OMEGA_TABLE
from sternct.transfer import choose_split, omega_transfer


def test_det_equals_factor_product():
    det = tpoly_det(resolvent_matrix())
    assert det == H_FACTORS.product()
    assert det[0] == LaurentPoly.one()


@pytest.mark.parametrize("n_seed", [1, 2, 3, 5])
def test_solved_component_shape(n_seed):
    comp = solve_component(n_seed)
    assert comp.denominator == H_FACTORS.product()
    # t = 0: the identity acts on the seed vector, middle entry 1
    assert comp.numerator[0] == LaurentPoly.one()
    assert comp.numerator.degree == 4
    assert comp.is_x_symmetric()
    assert comp.numerator == comp.numerator.reverse_x()


def test_bivariate_rational_rejects_zero():
    with pytest.raises(ZeroDivisionError):
        BivariateRational(TPoly([1]), TPoly())


def test_h_rows_support_and_symmetry():
    rows = h_series(200)
    assert rows[0] == LaurentPoly.one()
    for n, h in enumerate(rows):
        assert h == h.reverse()
        if not h.is_zero():
            assert -n <= h.ldeg and h.deg <= n
    # h_n is the t^n coefficient of 1/det
    ser = BivariateRational(TPoly([1]), H_FACTORS.product()).series(30)
    assert ser == rows[:31]


def test_coeff_table_small_case():
    table = build_coeff_table(3, 5)
    assert table.n_seed == 3 and table.m == 5
    assert omega_gf(8, n_seed=3, table=table) == 101931
    assert omega_gf(8, n_seed=3, table=table, source="direct") == 101931
    assert omega_gf(8, n_seed=3, table=table, source="hseries") == 101931
    for i, row in enumerate(table.rows):
        assert len(row) == table.m - i + 1
    with pytest.raises(ValueError):
        build_coeff_table(3, 10)


def test_fold_doubles_off_centre_terms():
    table = build_coeff_table(3, 5)
    prods = product_rows(3)
    for i, j, a in table.entries():
        p = prods[i]
        assert a == (p[0] if j == 0 else p[j] + p[-j])
        if j:
            assert p[j] == p[-j]


def test_u_direct_examples():
    u0 = u_direct(0, 5)
    assert u0.valuation == -1 and u0[-1] == F(1, 2)
    u1 = u_direct(-1, 5)
    assert u1.valuation == 0 and u1[0] == F(1, 2)
    for j in range(0, -8, -1):
        u = u_direct(j, 10)
        assert all(u[k] == 0 for k in range(-j - 5, -j - 1))
        assert u[-j - 1] == F(1, 2)


def test_v_direct_examples():
    v = v_direct(5)
    assert v.valuation == -1 and v[-1] == F(-1, 2)
    u0 = u_direct(0, 5)
    assert u0[-1] + v[-1] == 0
    assert u0[0] + v[0] == 1


def test_ct_h_examples():
    assert ct_h(0, 0, "direct") == ct_h(0, 0, "recurrence") == 1
    for k in range(2):
        assert u_direct(-3, 4)[k] == 0
    h5 = h_series(5)[5]
    assert ct_h(0, 5, "direct") == ct_h(0, 5, "recurrence") == ct_h(0, 5, "hseries") == h5.ct()
    for j in range(0, -8, -1):
        for k in range(0, 12):
            want = h_series(k)[k][j]
            assert ct_h(j, k, "direct") == ct_h(j, k, "recurrence") == want
    with pytest.raises(ValueError):
        ct_h(1, 0)


def test_partial_fractions():
    assert all(r.is_zero() for r in partial_fraction_residual(50))


@pytest.mark.parametrize("j", [0, -1, -2, -7])
def test_c1_c3_do_not_reach_constant_term(j):
    a, b = ct_x_irrelevant(j, 30)
    assert a.is_zero() and b.is_zero()


def test_omega_gf_examples():
    assert omega_gf(10) == 2088687
    assert omega_gf(9) == 460877
    assert omega_gf(20) == 8011450183181


@pytest.mark.parametrize("N", range(2, 21))
def test_omega_gf_table(N):
    assert omega_gf(N) == OMEGA_TABLE[N]


@pytest.mark.parametrize("N", range(2, 31))
def test_series_expansion_reproduces_omega(N):
    assert omega_series(N) == omega_transfer(N)


@pytest.mark.parametrize("N", [30, 50, 100])
def test_gf_matches_transfer(N):
    assert omega_gf(N) == omega_transfer(N)


def test_source_and_thread_invariance():
    N = 60
    want = omega_transfer(N)
    assert omega_gf(N, source="direct") == want
    assert omega_gf(N, source="hseries") == want
    assert {omega_gf(N, threads=k) for k in (1, 2, 3, 5)} == {want}


def test_omega_gf_errors():
    with pytest.raises(ValueError):
        omega_gf(1)
    with pytest.raises(ValueError):
        omega_gf(30, source="nope")
    with pytest.raises(ValueError):
        omega_gf(30, table=build_coeff_table(3, 5))


@pytest.fixture(scope="module")
def seed14():
    comp = solve_component(14)
    m, n = choose_split(10000)
    return comp, build_coeff_table(n, m, comp.numerator)


def test_seed14_numerator(seed14):
    comp, _ = seed14
    L = comp.numerator
    assert L.degree == 4 and L[0] == LaurentPoly.one()
    spans = [(p.ldeg, p.deg) for p in L.coeffs[1:]]
    assert all(32769 <= hi <= 32771 and lo == -hi for lo, hi in spans)


def test_seed14_table(seed14):
    _, table = seed14
    assert choose_split(10000) == (9986, 14)
    assert table.support == (-65551, 65551)
    assert len(table.rows) == 5
    assert table.count() <= 5 * 9987
