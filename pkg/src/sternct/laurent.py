"""Laurent polynomials in one variable with big-integer coefficients.

A :class:`LaurentPoly` is stored densely: a list of coefficients plus the
exponent of the first slot.  Every polynomial in the omega pipeline has
(nearly) contiguous support, so shifts are O(1) and additions are linear.

:class:`TPoly` is a polynomial in ``t`` whose coefficients are Laurent
polynomials in ``x``; it is the ring in which ``det(I - Bt)`` and the
resolvent numerator live.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "LaurentPoly",
    "TPoly",
    "lp_add",
    "lp_mul",
    "lp_ct",
    "lp_reverse",
    "lp_shift",
    "mul_schoolbook",
    "mul_kronecker",
]

# Above this many coefficient pairs the Kronecker route is used.
KRONECKER_THRESHOLD = 4096


class LaurentPoly:
    """Immutable Laurent polynomial ``sum c_i x^(offset + i)``.

    The coefficient list never starts or ends with a zero; the zero
    polynomial has an empty list.
    """

    __slots__ = ("_c", "_off", "_hash")

    def __init__(self, coeffs: Iterable[int] = (), offset: int = 0):
        c = [int(v) for v in coeffs]
        lo = 0
        while lo < len(c) and c[lo] == 0:
            lo += 1
        hi = len(c)
        while hi > lo and c[hi - 1] == 0:
            hi -= 1
        self._c = c[lo:hi]
        self._off = offset + lo if self._c else 0
        self._hash = None

    @classmethod
    def _raw(cls, c: list, off: int) -> "LaurentPoly":
        # Caller guarantees c is trimmed and holds ints.
        p = object.__new__(cls)
        p._c = c
        p._off = off if c else 0
        p._hash = None
        return p

    @classmethod
    def _trimmed(cls, c: list, off: int) -> "LaurentPoly":
        lo = 0
        n = len(c)
        while lo < n and not c[lo]:
            lo += 1
        if lo == n:
            return cls._raw([], 0)
        hi = n
        while not c[hi - 1]:
            hi -= 1
        if lo or hi != n:
            c = c[lo:hi]
        return cls._raw(c, off + lo)

    @classmethod
    def from_dict(cls, terms: Mapping[int, int]) -> "LaurentPoly":
        terms = {e: v for e, v in terms.items() if v}
        if not terms:
            return cls._raw([], 0)
        lo, hi = min(terms), max(terms)
        c = [0] * (hi - lo + 1)
        for e, v in terms.items():
            c[e - lo] = int(v)
        return cls._raw(c, lo)

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw([int(coeff)], exponent) if coeff else cls._raw([], 0)

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw([], 0)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._raw([1], 0)

    # -- inspection -----------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return tuple(self._c)

    @property
    def offset(self) -> int:
        return self._off

    def coeff_list(self) -> list:
        """Copy of the dense coefficient list, starting at ``ldeg``."""
        return list(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def deg(self) -> int:
        if not self._c:
            raise ValueError("deg of the zero Laurent polynomial is undefined")
        return self._off + len(self._c) - 1

    @property
    def ldeg(self) -> int:
        if not self._c:
            raise ValueError("ldeg of the zero Laurent polynomial is undefined")
        return self._off

    def __len__(self) -> int:
        return len(self._c)

    def nterms(self) -> int:
        return sum(1 for v in self._c if v)

    def __getitem__(self, e: int) -> int:
        i = e - self._off
        if 0 <= i < len(self._c):
            return self._c[i]
        return 0

    def items(self) -> Iterator[tuple]:
        off = self._off
        for i, v in enumerate(self._c):
            if v:
                yield off + i, v

    def to_dict(self) -> dict:
        return dict(self.items())

    def ct(self) -> int:
        return self[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._off == other._off and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._off, tuple(self._c)))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    def __repr__(self) -> str:
        if not self._c:
            return "LaurentPoly(0)"
        terms = []
        for e, v in self.items():
            if e == 0:
                terms.append(f"{v}")
            else:
                terms.append(f"{v}*x^{e}" if v != 1 else f"x^{e}")
        return "LaurentPoly(" + " + ".join(terms) + ")"

    # -- arithmetic -----------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw([-v for v in self._c], self._off)

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._raw([v * other for v in self._c], self._off)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return lp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._c) == 1 and self._c[0] in (1, -1):
                return LaurentPoly._raw([self._c[0] ** -k], k * self._off)
            raise ValueError("only unit monomials have Laurent inverses")
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``x^k``."""
        return LaurentPoly._raw(self._c, self._off + k) if self._c else self

    def reverse(self) -> "LaurentPoly":
        """Substitute ``x -> 1/x``."""
        if not self._c:
            return self
        return LaurentPoly._raw(self._c[::-1], -self.deg)

    def prune(self, window: int) -> "LaurentPoly":
        """Drop every term with ``|exponent| > window``."""
        if not self._c:
            return self
        lo = max(self._off, -window)
        hi = min(self.deg, window)
        if lo > hi:
            return LaurentPoly.zero()
        if lo == self._off and hi == self.deg:
            return self
        return LaurentPoly._trimmed(self._c[lo - self._off: hi - self._off + 1], lo)

    def evaluate(self, x):
        """Evaluate at a number (``Fraction`` recommended for x != +-1)."""
        total = 0
        for e, v in self.items():
            total += v * x ** e
        return total

    def max_abs(self) -> int:
        return max((abs(v) for v in self._c), default=0)


def _add(a: LaurentPoly, b: LaurentPoly, sign: int) -> LaurentPoly:
    if not b._c:
        return a
    if not a._c:
        return b if sign == 1 else -b
    lo = min(a._off, b._off)
    hi = max(a._off + len(a._c), b._off + len(b._c))
    c = [0] * (hi - lo)
    i = a._off - lo
    c[i:i + len(a._c)] = a._c
    i = b._off - lo
    bc = b._c
    if sign == 1:
        c[i:i + len(bc)] = [x + y for x, y in zip(c[i:i + len(bc)], bc)]
    else:
        c[i:i + len(bc)] = [x - y for x, y in zip(c[i:i + len(bc)], bc)]
    return LaurentPoly._trimmed(c, lo)


def mul_schoolbook(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Plain convolution; the reference every faster product must match."""
    if not a._c or not b._c:
        return LaurentPoly.zero()
    if len(a._c) < len(b._c):
        a, b = b, a
    ac = a._c
    n = len(ac)
    c = [0] * (n + len(b._c) - 1)
    for k, bk in enumerate(b._c):
        if not bk:
            continue
        seg = c[k:k + n]
        if bk == 1:
            c[k:k + n] = [x + y for x, y in zip(seg, ac)]
        elif bk == -1:
            c[k:k + n] = [x - y for x, y in zip(seg, ac)]
        else:
            c[k:k + n] = [x + bk * y for x, y in zip(seg, ac)]
    return LaurentPoly._trimmed(c, a._off + b._off)


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    # Signed Kronecker packing: value = sum c_i * 2^(8*nbytes*i).
    pos = b"".join(
        (v if v > 0 else 0).to_bytes(nbytes, "little") for v in coeffs)
    val = int.from_bytes(pos, "little")
    if any(v < 0 for v in coeffs):
        neg = b"".join(
            (-v if v < 0 else 0).to_bytes(nbytes, "little") for v in coeffs)
        val -= int.from_bytes(neg, "little")
    return val


def mul_kronecker(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Product via one big-integer multiplication (Kronecker substitution).

    Bit-identical to :func:`mul_schoolbook`; the slot width is chosen from a
    rigorous bound on the output coefficients.
    """
    if not a._c or not b._c:
        return LaurentPoly.zero()
    n = len(a._c) + len(b._c) - 1
    bound = a.max_abs() * b.max_abs() * min(len(a._c), len(b._c))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    width = 8 * nbytes
    prod = _pack(a._c, nbytes) * _pack(b._c, nbytes)
    half = 1 << (width - 1)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * n, "little")
    raw = (prod + bias).to_bytes(nbytes * n, "little")
    c = [int.from_bytes(raw[i:i + nbytes], "little") - half
         for i in range(0, nbytes * n, nbytes)]
    return LaurentPoly._trimmed(c, a._off + b._off)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return _add(a, b, 1)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if min(len(a._c), len(b._c)) <= 8 or len(a._c) * len(b._c) < KRONECKER_THRESHOLD:
        return mul_schoolbook(a, b)
    return mul_kronecker(a, b)


def lp_ct(a: LaurentPoly) -> int:
    return a.ct()


def lp_reverse(a: LaurentPoly) -> LaurentPoly:
    return a.reverse()


def lp_shift(a: LaurentPoly, k: int) -> LaurentPoly:
    return a.shift(k)


def _lp(v) -> LaurentPoly:
    if isinstance(v, LaurentPoly):
        return v
    return LaurentPoly.monomial(0, int(v))


class TPoly:
    """Polynomial in ``t`` with :class:`LaurentPoly` coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_lp(v) for v in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, p) -> "TPoly":
        return cls([p])

    @property
    def coeffs(self) -> tuple:
        return self._c

    def __getitem__(self, i: int) -> LaurentPoly:
        if 0 <= i < len(self._c):
            return self._c[i]
        return LaurentPoly.zero()

    @property
    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero TPoly is undefined")
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other) -> bool:
        if not isinstance(other, TPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"TPoly({list(self._c)!r})"

    def __neg__(self) -> "TPoly":
        return TPoly([-p for p in self._c])

    def __add__(self, other) -> "TPoly":
        other = other if isinstance(other, TPoly) else TPoly([other])
        n = max(len(self._c), len(other._c))
        return TPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "TPoly":
        other = other if isinstance(other, TPoly) else TPoly([other])
        return self + (-other)

    def __mul__(self, other) -> "TPoly":
        if isinstance(other, (int, LaurentPoly)):
            return TPoly([p * other for p in self._c])
        if not isinstance(other, TPoly):
            return NotImplemented
        if not self._c or not other._c:
            return TPoly()
        out = [LaurentPoly.zero()] * (len(self._c) + len(other._c) - 1)
        for i, p in enumerate(self._c):
            if p.is_zero():
                continue
            for k, q in enumerate(other._c):
                if not q.is_zero():
                    out[i + k] = out[i + k] + p * q
        return TPoly(out)

    __rmul__ = __mul__

    def reverse_x(self) -> "TPoly":
        """Substitute ``x -> 1/x`` in every coefficient."""
        return TPoly([p.reverse() for p in self._c])

    def shift_x(self, k: int) -> "TPoly":
        return TPoly([p.shift(k) for p in self._c])

    def x_range(self) -> tuple:
        """``(min ldeg, max deg)`` over nonzero coefficients."""
        nz = [p for p in self._c if not p.is_zero()]
        if not nz:
            raise ValueError("x-range of the zero TPoly is undefined")
        return min(p.ldeg for p in nz), max(p.deg for p in nz)

    def evaluate_t(self, t):
        """Substitute a number for ``t`` (result: LaurentPoly when t is int)."""
        total = LaurentPoly.zero()
        for i, p in enumerate(self._c):
            total = total + p * (t ** i)
        return total
