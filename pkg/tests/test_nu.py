import pytest
import sympy

from sternct.nu import TRANSITION, NuState, nu_by_steps, nu_fast, nu_gf_coeffs, nu_step
from sternct.stern import f_poly, nu_def, row_poly


def test_step_examples():
    assert nu_step(NuState(1, 0)) == (3, 1)
    assert nu_step(NuState(3, 1)) == (13, 5)
    assert nu_step(NuState(0, 0)) == (0, 0)


def test_fast_examples():
    assert [nu_fast(n) for n in (0, 1, 3)] == [1, 3, 59]
    with pytest.raises(ValueError):
        nu_fast(-1)


def test_gf_coeffs_examples():
    assert nu_gf_coeffs(1) == [1]
    assert nu_gf_coeffs(2) == [1, 3]
    assert nu_gf_coeffs(4) == [1, 3, 13, 59]
    with pytest.raises(ValueError):
        nu_gf_coeffs(0)


def test_fast_matches_definition():
    assert [nu_fast(n) for n in range(21)] == [nu_def(n) for n in range(21)]


def test_gf_coeffs_match_fast():
    assert nu_gf_coeffs(200) == [nu_fast(n) for n in range(200)]


def test_matrix_route_to_1000():
    s = NuState(1, 0)
    for n in range(1, 1001):
        s = nu_step(s)
        assert s.nu == nu_fast(n)
        assert s.nu >= s.nu1 >= 0
    assert nu_by_steps(1000) == nu_fast(1000)


@pytest.mark.parametrize("n", range(0, 12))
def test_nu1_is_shifted_constant_term(n):
    f = row_poly(f_poly(n))
    s = nu_by_steps(n), (f * f.reverse()).shift(1 << n).ct()
    state = NuState(1, 0)
    for _ in range(n):
        state = nu_step(state)
    assert (state.nu, state.nu1) == s


def test_transition_denominator():
    t = sympy.symbols("t")
    M = sympy.Matrix(TRANSITION)
    assert sympy.expand((sympy.eye(2) - t * M).det()) == 1 - 5 * t + 2 * t ** 2
    gf = ((sympy.eye(2) - t * M).inv() * sympy.Matrix([1, 0]))[0]
    assert sympy.simplify(gf - (1 - 2 * t) / (1 - 5 * t + 2 * t ** 2)) == 0
