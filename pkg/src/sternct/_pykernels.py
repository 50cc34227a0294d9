"""Pure-Python implementations of the hot loops.

Two kernels live here and in the compiled twin ``_ckernels``:

* ``matrix_steps`` iterates ``s <- M s`` where ``M`` has small Laurent
  polynomial entries and ``s`` is a vector of Laurent polynomials with big
  integer coefficients (transfer matrix, t-series of 1/det).
* ``rec_run`` runs a linear recurrence with integer polynomial coefficients
  over dyadic rationals ``N / 2^E``, stripping powers of two as it goes.
"""

from __future__ import annotations

from operator import mul
from typing import Optional, Sequence

import numpy as np

from .laurent import LaurentPoly

__all__ = ["matrix_steps", "rec_run", "NonDyadicError"]


class NonDyadicError(ArithmeticError):
    """A recurrence step produced a value outside Z[1/2]."""


def _dense(p: LaurentPoly, lo: int, hi: int) -> list:
    out = [0] * (hi - lo + 1)
    if not p.is_zero():
        c = p.coeff_list()
        a = max(p.ldeg, lo)
        b = min(p.deg, hi)
        if a <= b:
            out[a - lo:b - lo + 1] = c[a - p.ldeg:b - p.ldeg + 1]
    return out


def matrix_steps(state: Sequence[LaurentPoly], matrix: Sequence[Sequence[dict]],
                 steps: int, final_window: Optional[int] = None) -> tuple:
    """Apply ``state <- matrix * state`` ``steps`` times.

    ``matrix[i][j]`` maps exponent -> small int.  With ``final_window = w``
    the result of step ``s`` keeps only exponents in ``[-(w + steps - s),
    w + steps - s]``.
    """
    size = len(state)
    spread_hi = max((max(d) for row in matrix for d in row if d), default=0)
    spread_lo = min((min(d) for row in matrix for d in row if d), default=0)
    terms = [[sorted((e, c) for e, c in d.items() if c) for d in row] for row in matrix]
    nz = [p for p in state if not p.is_zero()]
    if not nz:
        return tuple(LaurentPoly.zero() for _ in range(size))
    lo = min(p.ldeg for p in nz)
    hi = max(p.deg for p in nz)
    if final_window is not None:
        w0 = final_window + steps
        lo, hi = max(lo, -w0), min(hi, w0)
        if lo > hi:
            return tuple(LaurentPoly.zero() for _ in range(size))
    vecs = [_dense(p, lo, hi) for p in state]
    for step in range(1, steps + 1):
        nlo, nhi = lo + spread_lo, hi + spread_hi
        if final_window is not None:
            w = final_window + steps - step
            nlo, nhi = max(nlo, -w), min(nhi, w)
        width = nhi - nlo + 1
        new = []
        for i in range(size):
            acc = [0] * width
            for j in range(size):
                src = vecs[j]
                for e, c in terms[i][j]:
                    # source index q lands at q + lo + e - nlo
                    d = lo + e - nlo
                    a = max(0, -d)
                    b = min(len(src), width - d)
                    if a >= b:
                        continue
                    seg = acc[a + d:b + d]
                    part = src[a:b]
                    if c == 1:
                        acc[a + d:b + d] = [x + y for x, y in zip(seg, part)]
                    elif c == -1:
                        acc[a + d:b + d] = [x - y for x, y in zip(seg, part)]
                    else:
                        acc[a + d:b + d] = [x + c * y for x, y in zip(seg, part)]
            new.append(acc)
        vecs, lo, hi = new, nlo, nhi
    return tuple(LaurentPoly._trimmed(v, lo) for v in vecs)


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def _poly_eval(coeffs: Sequence[int], k: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * k + c
    return v


def _poly_values(coeffs: Sequence[int], k0: int, count: int) -> list:
    """``p(k0), p(k0+1), ...``: Horner applied elementwise over the range."""
    top = max(abs(k0), abs(k0 + count - 1), 1)
    bound = sum(abs(c) for c in coeffs) * top ** (len(coeffs) - 1)
    if bound < 1 << 62:
        ks = np.arange(k0, k0 + count, dtype=np.int64)
        out = np.full(count, coeffs[-1], dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            out = out * ks + c
        return out.tolist()
    ks = range(k0, k0 + count)
    vals = [coeffs[-1]] * count
    for c in reversed(coeffs[:-1]):
        vals = [o * k + c for o, k in zip(vals, ks)]
    return vals


# stripping common powers of two from the window costs a pass over it;
# doing it every few steps is enough to keep E near minimal
_STRIP_EVERY = 16


def rec_run(coeffs: Sequence[Sequence[int]], window: Sequence[tuple],
            k_start: int, k_end: int, targets: Sequence[int] = ()) -> tuple:
    """Run ``sum_r c_r(k) w_{k-r} = 0`` forward over dyadic rationals.

    ``coeffs[r]`` lists the integer coefficients of ``c_r`` as a polynomial
    in ``k`` (constant term first).  ``window`` holds ``(N, E)`` pairs for
    ``w_{k_start-R} .. w_{k_start-1}`` meaning ``N / 2^E`` (R = order).
    Returns ``(final_window, {k: (N, E)} for k in targets)`` with every
    returned pair reduced (``N`` odd or ``E = 0``).
    """
    R = len(coeffs) - 1
    if R < 1:
        raise ValueError("recurrence order must be positive")
    if len(window) != R:
        raise ValueError(f"window must hold {R} values")
    E = max(e for _, e in window)
    win = [n << (E - e) for n, e in window]  # oldest first
    want = set(targets)
    found = {}
    steps = k_end - k_start + 1
    if steps > 0:
        cols = [_poly_values(c, k_start, steps) if any(c) else [0] * steps for c in coeffs]
        c0s = cols[0]
        # row for step i, aligned with the window (oldest first): c_R .. c_1
        rows = list(zip(*cols[:0:-1]))
    k = k_start
    for i in range(steps):
        c0 = c0s[i]
        if c0 == 0:
            raise ZeroDivisionError(f"leading coefficient vanishes at k={k}")
        s = -sum(map(mul, rows[i], win))
        a = _v2(c0)
        odd = c0 >> a
        if a and s:
            b = _v2(s)
            if b < a:
                win = [v << (a - b) for v in win]
                E += a - b
                s >>= b
            else:
                s >>= a
        elif a:
            pass  # s == 0
        q, rem = divmod(s, odd)
        if rem:
            raise NonDyadicError(f"value at k={k} is not dyadic")
        del win[0]
        win.append(q)
        if E and i % _STRIP_EVERY == _STRIP_EVERY - 1:
            g = 0
            for v in win:
                g |= v
            t = min(_v2(g), E) if g else E
            if t:
                win = [v >> t for v in win]
                E -= t
        if k in want:
            found[k] = _reduce(win[-1], E)
        k += 1
    return [_reduce(v, E) for v in win], found


def _reduce(n: int, e: int) -> tuple:
    if n == 0:
        return (0, 0)
    t = min(_v2(n), e)
    return (n >> t, e - t)
