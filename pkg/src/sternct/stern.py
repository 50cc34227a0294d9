"""Brute-force rows of Stern's triangle and its perturbed twin.

``F_n(x) = prod_{i<n} (1 + x^(2^i) + x^(2^(i+1)))`` and
``G_n(x) = prod_{i<n} (1 + x^(2^i + 1) + x^(2^(i+1) + 1))``.  The sums of
squared coefficients are nu(n) and omega(n).  These are the ground truth
for every faster method in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .laurent import LaurentPoly

__all__ = [
    "CoeffRow",
    "f_poly",
    "g_poly",
    "nu_def",
    "omega_def",
    "u_alpha_def",
    "row_poly",
    "OMEGA_TABLE",
]

# omega(0..20) as listed in the literature (computed there from the definition).
OMEGA_TABLE = (
    1, 3, 13, 55, 249, 1121, 5025, 22607, 101931, 460877, 2088687, 9482763,
    43109307, 196163983, 893222041, 4069162197, 18543631161, 84525140297,
    385343891847, 1756959373157, 8011450183181,
)

# int64 rows stay exact while 3^n fits; beyond that we fall back to objects.
_INT64_MAX_N = 39


@dataclass(frozen=True)
class CoeffRow:
    n: int
    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_list(self) -> list:
        return [int(v) for v in self.coeffs]

    def __len__(self) -> int:
        return len(self.coeffs)


def _row(n: int, eps1: int, eps2: int) -> np.ndarray:
    if n < 0:
        raise ValueError("row index must be nonnegative")
    dtype = np.int64 if n <= _INT64_MAX_N else object
    row = np.ones(1, dtype=dtype)
    for i in range(n):
        s1 = (1 << i) + eps1
        s2 = (1 << (i + 1)) + eps2
        L = len(row)
        new = np.zeros(L + s2, dtype=dtype)
        new[:L] += row
        new[s1:s1 + L] += row
        new[s2:s2 + L] += row
        row = new
    return row


def f_poly(n: int) -> CoeffRow:
    """Coefficient row a(n, 0..2^(n+1)-2) of F_n."""
    return CoeffRow(n, _row(n, 0, 0))


def g_poly(n: int) -> CoeffRow:
    """Coefficient row b(n, 0..2^(n+1)-2+n) of G_n."""
    return CoeffRow(n, _row(n, 1, 1))


def row_poly(row: CoeffRow) -> LaurentPoly:
    return LaurentPoly(row.as_list(), 0)


def _sum_squares(row: np.ndarray) -> int:
    if row.dtype != object and len(row) and int(row.max()) < (1 << 31):
        total = 0
        chunk = 1 << 20  # each chunk sum stays below 2^62
        for s in range(0, len(row), chunk):
            part = row[s:s + chunk]
            total += int(np.dot(part, part))
        return total
    return sum(int(v) * int(v) for v in row)


def nu_def(n: int) -> int:
    return _sum_squares(f_poly(n).coeffs)


def omega_def(n: int) -> int:
    return _sum_squares(g_poly(n).coeffs)


def u_alpha_def(alpha: Sequence[int], n: int) -> int:
    """``sum_k prod_i a(n, k+i)^alpha_i`` over the row of F_n.

    Out-of-range entries are zero, with ``0^0 = 1``.
    """
    alpha = [int(a) for a in alpha]
    if not alpha:
        raise ValueError("alpha must be nonempty")
    if any(a < 0 for a in alpha):
        raise ValueError("alpha entries must be nonnegative")
    if not any(alpha):
        raise ValueError("alpha = 0 gives a divergent sum")
    row = [int(v) for v in f_poly(n).coeffs]
    m = len(alpha)
    L = len(row)
    # pad so that every k in [-(m-1), L-1] can read k..k+m-1
    padded = [0] * (m - 1) + row + [0] * (m - 1)
    arr = np.array(padded, dtype=object)
    span = L + m - 1
    prod = np.ones(span, dtype=object)
    for i, a in enumerate(alpha):
        if a == 0:
            continue
        window = arr[i:i + span]
        prod = prod * (window ** a)
    return int(prod.sum())
