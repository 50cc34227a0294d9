"""Cross-validation suites used by ``sternct verify``.

Each suite yields :class:`Check` records; nothing here raises on a
mismatch, the caller decides what a failure means.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, List, NamedTuple

from .stern import OMEGA_TABLE, nu_def, omega_def

__all__ = ["Check", "SUITES", "run_suites", "oracle_suite", "cross_suite", "series_suite"]


class Check(NamedTuple):
    suite: str
    case: str
    ok: bool
    detail: str = ""


def _guard(suite: str, case: str, fn: Callable[[], tuple]) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed case, not a crashed run
        return Check(suite, case, False, f"{type(exc).__name__}: {exc}")
    return Check(suite, case, bool(ok), detail)


def oracle_suite(max_n: int) -> Iterator[Check]:
    """Definition against the listed omega values, and nu's two pipelines."""
    from .nu import nu_fast

    for n in range(0, min(max_n, len(OMEGA_TABLE) - 1) + 1):
        yield _guard("oracle", f"omega_def({n})",
                     lambda n=n: (omega_def(n) == OMEGA_TABLE[n], f"expected {OMEGA_TABLE[n]}"))
    for n in range(0, min(max_n, 20) + 1):
        yield _guard("oracle", f"nu_fast({n})",
                     lambda n=n: (nu_fast(n) == nu_def(n), ""))


def cross_suite(max_n: int) -> Iterator[Check]:
    """transfer == gf for 2 <= n <= max_n, and == definition where listed."""
    from .gf import omega_gf
    from .transfer import omega_transfer

    for n in range(2, max_n + 1):
        def case(n=n):
            a = omega_transfer(n)
            b = omega_gf(n)
            ok = a == b
            if ok and n < len(OMEGA_TABLE):
                ok = a == OMEGA_TABLE[n]
            return ok, f"transfer={a} gf={b}"
        yield _guard("cross", f"omega({n})", case)


def series_suite(order: int = 100) -> Iterator[Check]:
    """X(t), the U/V recurrences against direct expansion, partial fractions."""
    from .gf import QUADRATIC, partial_fraction_residual, u_direct, v_direct, x_series
    from .holonomic import u_values, v_values
    from .series import TruncSeries

    def quad():
        prec = 2 * order
        X = x_series(prec)
        A, B, C = (TruncSeries.polynomial(p, prec) for p in QUADRATIC)
        res = A * X * X + B * X + C
        return res.is_zero() and res.order >= prec, f"checked to t^{prec}"

    yield _guard("series", "X quadratic", quad)
    for j in (0, -1, -2, -5, -10, -20):
        def urec(j=j):
            d = u_direct(j, order)
            got = u_values(j, range(-j - 1, order + 1))
            bad = [k for k, (n, e) in got.items() if d[k] * (1 << e) != n]
            return not bad, f"first mismatch k={bad[0]}" if bad else f"k <= {order}"
        yield _guard("series", f"u recurrence j={j}", urec)

    def vrec():
        d = v_direct(order)
        got = v_values(order)
        bad = [k for k, (n, e) in enumerate(got) if d[k] * (1 << e) != n]
        return not bad and d[-1] == Fraction(-1, 2), f"first mismatch k={bad[0]}" if bad else f"k <= {order}"

    yield _guard("series", "v recurrence", vrec)
    pf_order = min(order, 50)
    yield _guard("series", "partial fractions",
                 lambda: (all(r.is_zero() for r in partial_fraction_residual(pf_order)),
                          f"to t^{pf_order}"))


SUITES = ("oracle", "cross", "series")


def run_suites(names: List[str], max_n: int, order: int = 100) -> Iterator[Check]:
    if "all" in names:
        names = list(SUITES)
    for name in names:
        if name == "oracle":
            yield from oracle_suite(max_n)
        elif name == "cross":
            yield from cross_suite(max_n)
        elif name == "series":
            yield from series_suite(order)
        else:
            raise ValueError(f"unknown suite {name!r}")
