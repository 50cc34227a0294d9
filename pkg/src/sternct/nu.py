"""nu(n) by the two-state constant-term recurrence.

The state is ``(nu(n), nu1(n))`` with ``nu1(n) = CT F_n(x) F_n(1/x) x^(2^n)``
and one step applies ``M = [[3, 4], [1, 2]]``.  Eliminating ``nu1`` gives
``nu(n) = 5 nu(n-1) - 2 nu(n-2)``, the denominator ``1 - 5x + 2x^2`` of the
generating function ``(1 - 2x) / (1 - 5x + 2x^2)``.
"""

from __future__ import annotations

from typing import NamedTuple

__all__ = ["NuState", "TRANSITION", "nu_step", "nu_fast", "nu_gf_coeffs", "nu_by_steps"]

TRANSITION = ((3, 4), (1, 2))


class NuState(NamedTuple):
    nu: int
    nu1: int


def nu_step(s: NuState) -> NuState:
    (a, b), (c, d) = TRANSITION
    return NuState(a * s.nu + b * s.nu1, c * s.nu + d * s.nu1)


def nu_by_steps(n: int) -> int:
    s = NuState(1, 0)
    for _ in range(n):
        s = nu_step(s)
    return s.nu


def nu_fast(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = 1, 3
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 5 * cur - 2 * prev
    return cur


def nu_gf_coeffs(N: int) -> list:
    """First ``N`` Taylor coefficients of ``(1 - 2x) / (1 - 5x + 2x^2)``."""
    if N < 1:
        raise ValueError("N must be positive")
    num = (1, -2)
    den = (1, -5, 2)
    out = []
    for k in range(N):
        v = num[k] if k < len(num) else 0
        for r in range(1, len(den)):
            if k - r >= 0:
                v -= den[r] * out[k - r]
        out.append(v)
    return out
