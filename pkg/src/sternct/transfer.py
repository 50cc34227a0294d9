"""omega(N) by the conditional transfer matrix.

With ``Psi_n[i] = x^(i 2^n) G_n(x) G_n(1/x)`` for ``i = -2..2`` we have
``CT Psi_{m+n} = CT B^m Psi_n`` whenever ``m < 2^n + 2 - n``, and omega(N)
is the constant term of the middle entry.  ``B`` moves exponents by at most
one per step, so after ``r`` remaining steps nothing outside ``[-r, r]`` can
reach ``x^0``; pruning to that window keeps mid-size N cheap.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from . import kernels
from .laurent import LaurentPoly
from .stern import g_poly, row_poly

__all__ = [
    "SplitChoice",
    "TRANSFER_B",
    "StateVec",
    "choose_split",
    "split_admissible",
    "psi_init",
    "gg_product",
    "transfer_step",
    "omega_transfer",
    "MAX_SEED",
]

# G_n G_n(1/x) has 2^(n+2) + 2n - 3 terms; n = 16 is ~2.6e5 of them.
MAX_SEED = 16


def _p(terms: dict) -> LaurentPoly:
    return LaurentPoly.from_dict(terms)


_Z = LaurentPoly.zero()
_X = _p({1: 1})
_XI = _p({-1: 1})
_THREE = _p({0: 3})
_X1 = _p({0: 1, 1: 1})
_XI1 = _p({-1: 1, 0: 1})

TRANSFER_B = (
    (_X, _Z, _Z, _Z, _Z),
    (_THREE, _X1, _X, _Z, _Z),
    (_XI, _XI1, _THREE, _X1, _X),
    (_Z, _Z, _XI, _XI1, _THREE),
    (_Z, _Z, _Z, _Z, _XI),
)

StateVec = tuple  # five LaurentPoly entries, indices -2..2


class SplitChoice(NamedTuple):
    m: int
    n: int


def split_admissible(m: int, n: int) -> bool:
    return m >= 0 and n >= 1 and m < (1 << n) + 2 - n


def choose_split(N: int) -> SplitChoice:
    """Smallest seed ``n`` with ``N - n < 2^n + 2 - n``; ``m = N - n``."""
    if N < 2:
        raise ValueError("choose_split needs N >= 2")
    n = 1
    while (1 << n) <= N - 2:
        n += 1
    return SplitChoice(N - n, n)


def gg_product(n: int) -> LaurentPoly:
    """``G_n(x) G_n(1/x)``."""
    g = row_poly(g_poly(n))
    return g * g.reverse()


def psi_init(n: int) -> StateVec:
    if n < 1:
        raise ValueError("seed index must be positive")
    base = gg_product(n)
    s = 1 << n
    return tuple(base.shift(i * s) for i in range(-2, 3))


def transfer_step(s: Sequence[LaurentPoly], prune_window: Optional[int] = None) -> StateVec:
    """One product ``B s``, optionally dropping terms with ``|e| > prune_window``."""
    return kernels.transfer_steps(tuple(s), 1, prune_window)


def omega_transfer(N: int, prune: bool = True, n_seed: Optional[int] = None) -> int:
    if N < 2:
        raise ValueError("omega_transfer needs N >= 2")
    if n_seed is None:
        m, n = choose_split(N)
    else:
        n, m = n_seed, N - n_seed
        if not split_admissible(m, n):
            raise ValueError(f"split m={m}, n={n} violates m < 2^n + 2 - n")
    if n > MAX_SEED:
        raise ValueError(f"seed n={n} is too large to materialize (max {MAX_SEED})")
    state = psi_init(n)
    if prune:
        state = tuple(p.prune(m) for p in state)
    state = kernels.transfer_steps(state, m, 0 if prune else None)
    return state[2].ct()
