"""Acceptance criteria 1 to 8, one PASS/FAIL line each.

Run with pytest (the lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py [--slow]``.
"""

import sys
import time
from importlib import resources

import pytest

from sternct.gf import (QUADRATIC, h_series, omega_gf, omega_series, partial_fraction_residual,
                        solve_component, build_coeff_table, u_direct, v_direct, x_series,
                        _assemble_holonomic)
from sternct.holonomic import u_values, v_values
from sternct.laurent import LaurentPoly
from sternct.nu import nu_fast, nu_gf_coeffs
from sternct.series import TruncSeries
from sternct.stern import OMEGA_TABLE, nu_def, omega_def
from sternct.transfer import choose_split, omega_transfer

RESULTS = {}

W10000_DIGITS = 6591
W10000_HEAD = "675076678550698"
W10000_TAIL = "425131"


def record(n, label):
    def deco(fn):
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                if isinstance(exc, pytest.skip.Exception):
                    RESULTS[n] = ("SKIP", label, str(exc))
                else:
                    RESULTS[n] = ("FAIL", label, f"{type(exc).__name__}: {exc}"[:200])
                raise
            RESULTS[n] = ("PASS", label, f"{time.perf_counter() - t0:.1f} s")
        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper
    return deco


@record(1, "golden table by every applicable method")
def test_criterion_1():
    for n, want in enumerate(OMEGA_TABLE):
        assert omega_def(n) == want, n
        if n >= 2:
            assert omega_transfer(n) == want, n
            assert omega_gf(n) == want, n


@record(2, "nu pipeline")
def test_criterion_2():
    assert [nu_fast(n) for n in range(21)] == [nu_def(n) for n in range(21)]
    assert nu_gf_coeffs(10) == [nu_fast(n) for n in range(10)]


@record(3, "transfer equals gf at N = 30, 50, 100, 300")
def test_criterion_3():
    for N in (30, 50, 100, 300):
        assert omega_transfer(N) == omega_gf(N), N


@record(4, "t-series expansion of the solved component for N <= 30")
def test_criterion_4():
    for N in range(2, 31):
        want = OMEGA_TABLE[N] if N < len(OMEGA_TABLE) else omega_transfer(N)
        assert omega_series(N) == want, N


@record(5, "series and recurrence oracles")
def test_criterion_5():
    prec = 200
    X = x_series(prec)
    A, B, C = (TruncSeries.polynomial(p, prec) for p in QUADRATIC)
    res = A * X * X + B * X + C
    assert res.is_zero() and res.order >= prec
    for j in (0, -1, -2, -5, -10, -20):
        d = u_direct(j, 100)
        for k, (n, e) in u_values(j, range(-j - 1, 101)).items():
            assert d[k] * (1 << e) == n, (j, k)
    d = v_direct(100)
    for k, (n, e) in enumerate(v_values(100)):
        assert d[k] * (1 << e) == n, k
    assert all(r.is_zero() for r in partial_fraction_residual(50))


@record(6, "structure at n_seed = 14")
def test_criterion_6():
    assert choose_split(10000) == (9986, 14)
    L = solve_component(14).numerator
    assert L.degree == 4 and L[0] == LaurentPoly.one()
    table = build_coeff_table(14, 9986, L)
    assert table.support == (-65551, 65551)


@pytest.mark.slow
@record(7, "omega(10000) by gf")
def test_criterion_7():
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    s = str(omega_gf(10000))
    assert len(s) == W10000_DIGITS
    assert s.startswith(W10000_HEAD) and s.endswith(W10000_TAIL)
    bundled = resources.files("sternct").joinpath("data/omega10000.txt")
    if bundled.is_file():
        assert s == bundled.read_text().strip()


@record(8, "property suite")
def test_criterion_8():
    import random
    rng = random.Random(8)
    for _ in range(200):
        lo = rng.randint(-20, 20)
        p = LaurentPoly([rng.randint(-9, 9) for _ in range(rng.randint(0, 15))], lo)
        assert p.ct() == p.reverse().ct()
        if not p.is_zero() and (p.ldeg > 0 or p.deg < 0):
            assert p.ct() == 0
    for N in range(2, 61):
        assert omega_transfer(N, prune=True) == omega_transfer(N, prune=False), N
    for n_seed in (1, 2, 3, 6):
        assert solve_component(n_seed).is_x_symmetric()
    for n, h in enumerate(h_series(200)):
        assert h == h.reverse()
        assert h.is_zero() or (-n <= h.ldeg and h.deg <= n)
    for N in (7, 12, 25, 64, 129):
        m, n = choose_split(N)
        value = _assemble_holonomic(build_coeff_table(n, m), 1, None)
        assert value.denominator == 1 and value >= 0, N


if __name__ == "__main__":
    slow = "--slow" in sys.argv
    tests = [(1, test_criterion_1), (2, test_criterion_2), (3, test_criterion_3),
             (4, test_criterion_4), (5, test_criterion_5), (6, test_criterion_6),
             (7, test_criterion_7), (8, test_criterion_8)]
    failed = False
    for n, fn in tests:
        if n == 7 and not slow:
            RESULTS[n] = ("SKIP", "omega(10000) by gf", "pass --slow")
        else:
            try:
                fn()
            except BaseException:
                failed = True
        status, label, detail = RESULTS[n]
        print(f"criterion {n}: {status}  {label} ({detail})", flush=True)
    sys.exit(1 if failed else 0)
