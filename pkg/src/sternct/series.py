"""Truncated Laurent series in ``t`` with exact rational coefficients.

Every :class:`TruncSeries` carries the highest exponent it knows
(``order``); operations propagate the smallest reliable order of their
inputs and reading past it raises :class:`TruncationError`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "TruncSeries",
    "TruncationError",
    "ts_mul",
    "ts_inv",
    "quadratic_series_root",
]


class TruncationError(ValueError):
    """A coefficient beyond the reliable order was requested."""


def _fr(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class TruncSeries:
    """``sum_{k=valuation}^{order} c_k t^k + O(t^(order+1))``."""

    __slots__ = ("_c", "_val", "_order")

    def __init__(self, coeffs: Iterable = (), start: int = 0, order: int | None = None):
        c = [_fr(v) for v in coeffs]
        if order is None:
            order = start + len(c) - 1
        if len(c) > order - start + 1:
            c = c[:max(order - start + 1, 0)]
        lo = 0
        while lo < len(c) and c[lo] == 0:
            lo += 1
        if lo == len(c):
            self._c = []
            self._val = order + 1
        else:
            self._c = c[lo:]
            self._val = start + lo
            # pad with explicit zeros up to order
            self._c.extend([Fraction(0)] * (order - self._val + 1 - len(self._c)))
        self._order = order

    @classmethod
    def _raw(cls, c: list, val: int, order: int) -> "TruncSeries":
        s = object.__new__(cls)
        s._c, s._val, s._order = c, val, order
        return s

    @classmethod
    def polynomial(cls, coeffs: Sequence, order: int, start: int = 0) -> "TruncSeries":
        """An exactly known polynomial, viewed to ``order``."""
        c = list(coeffs)[:max(order - start + 1, 0)]
        return cls(c + [0] * (order - start + 1 - len(c)), start, order)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1) -> "TruncSeries":
        if k > order:
            return cls([], order + 1, order)
        return cls([coeff], k, order)

    @property
    def valuation(self) -> int:
        return self._val

    @property
    def order(self) -> int:
        return self._order

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, k: int) -> Fraction:
        if k > self._order:
            raise TruncationError(
                f"coefficient t^{k} requested but series is known only to t^{self._order}")
        i = k - self._val
        if 0 <= i < len(self._c):
            return self._c[i]
        return Fraction(0)

    def coefficients(self, lo: int | None = None, hi: int | None = None) -> list:
        lo = self._val if lo is None else lo
        hi = self._order if hi is None else hi
        return [self[k] for k in range(lo, hi + 1)]

    def leading(self) -> Fraction:
        if not self._c:
            raise ValueError("zero series has no leading coefficient")
        return self._c[0]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self._order:
            raise TruncationError(f"cannot extend order {self._order} to {order}")
        if order < self._val:
            return TruncSeries([], order + 1, order)
        return TruncSeries(self._c[:order - self._val + 1], self._val, order)

    def __repr__(self) -> str:
        terms = [f"{v}*t^{self._val + i}" for i, v in enumerate(self._c) if v]
        body = " + ".join(terms[:8]) + (" + ..." if len(terms) > 8 else "")
        return f"TruncSeries({body or '0'} + O(t^{self._order + 1}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self._order == other._order and self._val == other._val
                and self._c == other._c)

    # -- arithmetic -----------------------------------------------------

    def __neg__(self) -> "TruncSeries":
        return TruncSeries._raw([-v for v in self._c], self._val, self._order)

    def __add__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        order = min(self._order, other._order)
        lo = min(self._val, other._val)
        if lo > order:
            return TruncSeries([], order + 1, order)
        c = [self[k] + other[k] for k in range(lo, order + 1)]
        return TruncSeries(c, lo, order)

    __radd__ = __add__

    def __sub__(self, other) -> "TruncSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncSeries":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "TruncSeries":
        if isinstance(other, (int, Fraction)):
            other = _fr(other)
            if other == 0:
                return TruncSeries([], self._order + 1, self._order)
            return TruncSeries._raw([v * other for v in self._c], self._val, self._order)
        other = self._coerce(other)
        return ts_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TruncSeries":
        if isinstance(other, (int, Fraction)):
            return self * (1 / _fr(other))
        return ts_mul(self, ts_inv(self._coerce(other)))

    def __rtruediv__(self, other) -> "TruncSeries":
        return ts_mul(self._coerce(other), ts_inv(self))

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return ts_inv(self) ** (-k)
        if k == 0:
            if self.is_zero():
                raise ZeroDivisionError("0**0 of a truncated series")
            return TruncSeries.monomial(0, self._order - self._val)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else ts_mul(result, base)
            k >>= 1
            if k:
                base = ts_mul(base, base)
        return result

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction)):
            # an exact constant, made precise enough never to limit a product
            return TruncSeries.polynomial(
                [other], max(self._order, self._order - self._val, 0))
        raise TypeError(f"cannot combine TruncSeries with {type(other).__name__}")

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``t^k``."""
        return TruncSeries._raw(list(self._c), self._val + k, self._order + k)

    def derivative(self) -> "TruncSeries":
        c = [(self._val + i) * v for i, v in enumerate(self._c)]
        return TruncSeries(c, self._val - 1, self._order - 1)


def ts_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Product; reliable to ``min(a.order + val b, b.order + val a)``."""
    if a.is_zero() or b.is_zero():
        # zero up to its order; the product is known wherever the other factor is
        va = a._val if a._c else a._order + 1
        vb = b._val if b._c else b._order + 1
        order = min(a._order + vb, b._order + va)
        return TruncSeries([], order + 1, order)
    order = min(a._order + b._val, b._order + a._val)
    val = a._val + b._val
    n = order - val + 1
    if n <= 0:
        return TruncSeries([], order + 1, order)
    ac = a._c[:n]
    bc = b._c[:n]
    c = [Fraction(0)] * n
    for i, x in enumerate(ac):
        if not x:
            continue
        lim = n - i
        for k, y in enumerate(bc[:lim]):
            if y:
                c[i + k] += x * y
    return TruncSeries(c, val, order)


def ts_inv(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; relative precision is preserved."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of a series that is zero to its order")
    v = a._val
    n = a._order - v + 1  # number of reliable relative coefficients
    ac = a._c[:n]
    inv0 = 1 / ac[0]
    out = [inv0]
    for k in range(1, n):
        s = Fraction(0)
        for i in range(1, min(k, len(ac) - 1) + 1):
            if ac[i]:
                s += ac[i] * out[k - i]
        out.append(-s * inv0)
    return TruncSeries(out, -v, -v + n - 1)


def _poly_series(p: Sequence, order: int) -> TruncSeries:
    return TruncSeries.polynomial([_fr(v) for v in p], order)


def quadratic_series_root(A: Sequence, B: Sequence, C: Sequence, order: int) -> TruncSeries:
    """Power-series root of ``A X^2 + B X + C = 0`` with positive valuation.

    ``A``, ``B``, ``C`` are coefficient lists of polynomials in ``t``
    (lowest degree first).  Newton iteration from zero, doubling precision
    each step; requires ``C(0) = 0`` and ``B(0) != 0`` so that the root is
    unique.  Raises ``ValueError`` otherwise.
    """
    A = [_fr(v) for v in A]
    B = [_fr(v) for v in B]
    C = [_fr(v) for v in C]
    c0 = C[0] if C else Fraction(0)
    b0 = B[0] if B else Fraction(0)
    if c0 != 0:
        raise ValueError("no power-series root with positive valuation (C(0) != 0)")
    if b0 == 0:
        raise ValueError("root branch is ambiguous at low order (B(0) == 0)")
    if order < 1:
        return TruncSeries([], order + 1, order)
    if not any(A):
        return -(_poly_series(C, order) / _poly_series(B, order)).truncate(order)

    X = TruncSeries([], 1, 0)  # zero, known to t^0
    prec = 0
    while prec < order:
        prec = min(2 * prec + 1, order)
        Xp = TruncSeries(X._c, X._val, prec) if not X.is_zero() else TruncSeries([], prec + 1, prec)
        a, b, c = (_poly_series(p, prec) for p in (A, B, C))
        F = a * Xp * Xp + b * Xp + c
        dF = a * Xp * 2 + b
        X = (Xp - (F / dF)).truncate(prec)
    if not X.is_zero() and X.valuation <= 0:
        raise ValueError("root does not have positive valuation")
    return X
