"""omega(N) as a constant term of a bivariate rational function.

The generating series ``sum_m B^m Psi_n t^m`` has middle component
``G_n(x) G_n(1/x) L(x, t) H(x, t)`` with ``H = 1 / det(I - B t)`` and
``L`` the Cramer numerator.  Writing ``L G G* = sum c_{k,e} t^k x^e`` and
using ``H(x, t) = H(1/x, t)`` folds every exponent onto ``x^{-|e|}``:

    omega(N) = sum_{i,j} a_{i,j} CT_{x,t} t^{-(m-i)} x^j H(x, t),   j <= 0.

Each constant term is the ``t^(m-i)`` coefficient of ``U_j + V_j``, two
algebraic series built from the quadratic root ``X(t)`` of the
denominator of ``H``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import kernels
from .laurent import LaurentPoly, TPoly
from .series import TruncSeries, quadratic_series_root
from .transfer import MAX_SEED, TRANSFER_B, choose_split, gg_product, split_admissible

__all__ = [
    "BivariateRational",
    "CoeffTable",
    "HFactorization",
    "H_FACTORS",
    "QUADRATIC",
    "resolvent_matrix",
    "tpoly_det",
    "solve_component",
    "h_series",
    "build_coeff_table",
    "product_rows",
    "h_tail",
    "x_series",
    "u_direct",
    "v_direct",
    "residue_c2",
    "residue_c4",
    "partial_fraction_residual",
    "ct_x_irrelevant",
    "ct_h",
    "omega_gf",
    "omega_series",
    "DyadicSum",
]

log = logging.getLogger(__name__)

# A X^2 + B X + C with A = C = t(t^2 - 3t + 1), B = 2t^3 - 6t^2 + 5t - 1.
QUADRATIC = ((0, 1, -3, 1), (-1, 5, -6, 2), (0, 1, -3, 1))


def _lp(d: dict) -> LaurentPoly:
    return LaurentPoly.from_dict(d)


@dataclass(frozen=True)
class HFactorization:
    """``det(I - Bt) = -factor1 * factor2 * factor3`` (so ``H = 1/det``)."""

    factor1: TPoly = TPoly([_lp({0: -1}), _lp({-1: 1})])             # t/x - 1
    factor2: TPoly = TPoly([_lp({0: -1}), _lp({1: 1})])              # t x - 1
    factor3: TPoly = TPoly([_lp({0: -1}),                            # (t^3-3t^2+t)(x+1/x)
                            _lp({-1: 1, 0: 5, 1: 1}),                # + 2t^3-6t^2+5t-1
                            _lp({-1: -3, 0: -6, 1: -3}),
                            _lp({-1: 1, 0: 2, 1: 1})])
    sign: int = -1

    def product(self) -> TPoly:
        return (self.factor1 * self.factor2 * self.factor3) * self.sign


H_FACTORS = HFactorization()


def resolvent_matrix() -> List[List[TPoly]]:
    """Entries of ``I - B t`` as TPoly."""
    one = LaurentPoly.one()
    zero = LaurentPoly.zero()
    return [[TPoly([one if i == k else zero, -TRANSFER_B[i][k]]) for k in range(5)]
            for i in range(5)]


def tpoly_det(mat: Sequence[Sequence[TPoly]]) -> TPoly:
    """Determinant by Laplace expansion along rows, memoised on column sets."""
    n = len(mat)
    memo: Dict[Tuple[int, int], TPoly] = {}

    def minor(row: int, cols: int) -> TPoly:
        if row == n:
            return TPoly([1])
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = TPoly()
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = mat[row][c]
            if not entry.is_zero():
                sub = minor(row + 1, cols & ~(1 << c))
                if not sub.is_zero():
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


@dataclass(frozen=True)
class BivariateRational:
    """``numerator / denominator`` with both in ``Z[x, 1/x][t]``."""

    numerator: TPoly
    denominator: TPoly

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator")

    def reverse_x(self) -> "BivariateRational":
        return BivariateRational(self.numerator.reverse_x(), self.denominator.reverse_x())

    def is_x_symmetric(self) -> bool:
        """value(x) == value(1/x), checked by cross-multiplication."""
        return (self.numerator * self.denominator.reverse_x()
                == self.numerator.reverse_x() * self.denominator)

    def series(self, order: int) -> List[LaurentPoly]:
        """t-coefficients ``y_0 .. y_order`` of the expansion in ``t``."""
        d0 = self.denominator[0]
        if len(d0) != 1 or abs(d0.coeffs[0]) != 1:
            raise ValueError("denominator constant term must be a unit monomial")
        d0_inv = d0 ** -1
        den = self.denominator.coeffs
        out: List[LaurentPoly] = []
        for n in range(order + 1):
            acc = self.numerator[n]
            for r in range(1, min(n, len(den) - 1) + 1):
                if not den[r].is_zero():
                    acc = acc - den[r] * out[n - r]
            out.append(acc * d0_inv)
        return out


def _seed_vector(n_seed: int) -> List[LaurentPoly]:
    s = 1 << n_seed
    return [LaurentPoly.monomial(i * s) for i in range(-2, 3)]


@lru_cache(maxsize=None)
def _det_and_cofactors() -> Tuple[TPoly, Tuple[TPoly, ...]]:
    mat = resolvent_matrix()
    det = tpoly_det(mat)
    cof = []
    col = 2
    for r in range(5):
        sub = [[mat[i][k] for k in range(5) if k != col] for i in range(5) if i != r]
        c = tpoly_det(sub)
        cof.append(c if (r + col) % 2 == 0 else -c)
    return det, tuple(cof)


def solve_component(n_seed: int) -> BivariateRational:
    """Middle entry of ``(I - Bt)^{-1} (x^{-2s}, x^{-s}, 1, x^s, x^{2s})``, ``s = 2^n``.

    Cramer's rule: the numerator is the determinant with the middle column
    replaced by the seed vector, expanded along that column.
    """
    if n_seed < 1:
        raise ValueError("n_seed must be positive")
    det, cof = _det_and_cofactors()
    v = _seed_vector(n_seed)
    num = TPoly()
    for r in range(5):
        num = num + cof[r] * v[r]
    return BivariateRational(num, det)


def _companion_terms() -> tuple:
    """Companion matrix of ``h_n = -sum_{r>=1} D_r h_{n-r}``, ``D = det(I - Bt)``."""
    det, _ = _det_and_cofactors()
    d = det.coeffs
    if d[0] != LaurentPoly.one():
        raise ValueError("det(I - Bt) must have constant term 1")
    R = len(d) - 1
    first = tuple({e: -c for e, c in d[r].items()} for r in range(1, R + 1))
    rows = [first]
    for i in range(1, R):
        rows.append(tuple({0: 1} if k == i - 1 else {} for k in range(R)))
    return tuple(rows)


def _h_initial() -> list:
    R = len(_companion_terms())
    return [LaurentPoly.one()] + [LaurentPoly.zero()] * (R - 1)


def h_series(order: int, backend: Optional[str] = None) -> List[LaurentPoly]:
    """Rows ``h_0 .. h_order`` of ``H(x, t) = sum h_n(x) t^n``."""
    if order < 0:
        return []
    terms = _companion_terms()
    state = _h_initial()
    rows = [state[0]]
    for _ in range(order):
        state = kernels.matrix_steps(state, terms, 1, None, backend)
        rows.append(state[0])
    return rows


def h_tail(last: int, backend: Optional[str] = None) -> Dict[int, LaurentPoly]:
    """``{n: h_n}`` for the (up to five) rows ``n = last-4 .. last``."""
    terms = _companion_terms()
    state = kernels.matrix_steps(_h_initial(), terms, last, None, backend) if last else _h_initial()
    return {last - i: p for i, p in enumerate(state) if last - i >= 0}


@dataclass
class CoeffTable:
    """Folded coefficients ``a_{i,j}`` for ``i = 0..4`` and ``j = -(m-i)..0``.

    ``rows[i][d]`` holds ``a_{i,-d}``.  ``support`` is the x-range of the
    unfolded product ``L G G*``.
    """

    n_seed: int
    m: int
    rows: List[List[int]]
    support: Tuple[int, int]

    def entries(self):
        for i, row in enumerate(self.rows):
            for d, a in enumerate(row):
                if a:
                    yield i, -d, a

    def count(self) -> int:
        """Number of nonzero subproblems."""
        return sum(1 for _ in self.entries())

    def get(self, i: int, j: int) -> int:
        d = -j
        if 0 <= i < len(self.rows) and 0 <= d < len(self.rows[i]):
            return self.rows[i][d]
        return 0


def product_rows(n_seed: int, numerator: Optional[TPoly] = None) -> List[LaurentPoly]:
    """t-coefficients of ``L(x, t) G_n(x) G_n(1/x)``."""
    if numerator is None:
        numerator = solve_component(n_seed).numerator
    gg = gg_product(n_seed)
    return [p * gg for p in numerator.coeffs]


def build_coeff_table(n_seed: int, m: int, numerator: Optional[TPoly] = None) -> CoeffTable:
    if not split_admissible(m, n_seed):
        raise ValueError(f"split m={m}, n={n_seed} violates m < 2^n + 2 - n")
    prods = product_rows(n_seed, numerator)
    nz = [p for p in prods if not p.is_zero()]
    support = (min(p.ldeg for p in nz), max(p.deg for p in nz))
    rows = []
    for i, p in enumerate(prods):
        K = m - i
        if K < 0:
            rows.append([])
            continue
        row = [p[0]]
        for d in range(1, K + 1):
            row.append(p[-d] + p[d])
        rows.append(row)
    return CoeffTable(n_seed, m, rows, support)


# -- the algebraic series X, U_j, V_j -------------------------------------

@lru_cache(maxsize=8)
def x_series(order: int) -> TruncSeries:
    """The power-series root ``X = t + 2t^2 + ...`` known to ``t^order``."""
    A, B, C = QUADRATIC
    return quadratic_series_root(A, B, C, order)


def _tpoly(coeffs, order: int) -> TruncSeries:
    return TruncSeries.polynomial(coeffs, order)


def _with_slack(build, order: int) -> TruncSeries:
    slack = 8
    while True:
        s = build(order + slack)
        if s.order >= order:
            return s.truncate(order)
        slack *= 2


def _w_series(prec: int) -> TruncSeries:
    # X^2 / (t (t^2-3t+1) (X - t) (X^2 - 1) (X t - 1))
    X = x_series(prec)
    t = _tpoly([0, 1], prec)
    q = _tpoly([1, -3, 1], prec)
    den = t * q * (X - t) * (X * X - 1) * (X.shift(1) - 1)
    return X * X / den


def u_direct(j: int, order: int) -> TruncSeries:
    """``U_j = X^(2-j) / (t (t^2-3t+1) (X-t) (X^2-1) (Xt-1))`` to ``t^order``."""
    if j > 0:
        raise ValueError("u_direct needs j <= 0")
    return _with_slack(lambda p: x_series(p) ** (-j) * _w_series(p) if j else _w_series(p),
                       order)


def v_direct(order: int) -> TruncSeries:
    """``V_0 = -X / ((t^2-3t+1) (X-t) (Xt-1) (t^2-1))`` to ``t^order``."""
    def build(p):
        X = x_series(p)
        t = _tpoly([0, 1], p)
        den = _tpoly([1, -3, 1], p) * (X - t) * (X.shift(1) - 1) * _tpoly([-1, 0, 1], p)
        return -X / den
    return _with_slack(build, order)


def residue_c2(order: int) -> TruncSeries:
    """``C_2 = X / ((1 - t^2) (X - t) (X t - 1))``."""
    def build(p):
        X = x_series(p)
        t = _tpoly([0, 1], p)
        return X / (_tpoly([1, 0, -1], p) * (X - t) * (X.shift(1) - 1))
    return _with_slack(build, order)


def residue_c4(order: int) -> TruncSeries:
    """``C_4 = X^2 / (t (X - t) (X^2 - 1) (X t - 1))``."""
    def build(p):
        X = x_series(p)
        t = _tpoly([0, 1], p)
        return X * X / (t * (X - t) * (X * X - 1) * (X.shift(1) - 1))
    return _with_slack(build, order)


def _xpoly_mul(a: List[TruncSeries], b: List[TruncSeries]) -> List[TruncSeries]:
    out = [None] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for k, v in enumerate(b):
            term = u * v
            out[i + k] = term if out[i + k] is None else out[i + k] + term
    return out


def partial_fraction_residual(order: int) -> List[TruncSeries]:
    """x-coefficients of ``LHS - RHS`` after clearing the partial-fraction denominators.

    With ``q = t^2 - 3t + 1``, ``q H`` equals ``C1/(x-t) + C2/(1-tx) + C3/(x-X) +
    C4/(1-xX)`` with ``H = 1/det(I - Bt) = x^2 / (t q (x-t)(x-X)(x-1/X)(tx-1))``.
    Multiplying by ``(x-t)(1-tx)(x-X)(1-xX)`` turns the left side into
    ``X x^2 / t``.  ``C2`` and ``C4`` are the closed forms; ``C1`` and ``C3``
    are the residues at ``x = t`` and ``x = X``.  Every returned series is
    zero when the decomposition holds.
    """
    def build(p):
        X = x_series(p)
        t = _tpoly([0, 1], p)
        one = _tpoly([1], p)
        Xi = 1 / X
        c1 = t / ((t - X) * (t - Xi) * _tpoly([-1, 0, 1], p))
        c2 = X / (_tpoly([1, 0, -1], p) * (X - t) * (X * t - 1))
        c3 = X * X / (t * (X - t) * (X - Xi) * (t * X - 1))
        c4 = X * X / (t * (X - t) * (X * X - 1) * (X * t - 1))
        f1 = [-t, one]          # x - t
        f2 = [one, -t]          # 1 - t x
        f3 = [-X, one]          # x - X
        f4 = [one, -X]          # 1 - x X
        rhs = None
        for c, rest in ((c1, (f2, f3, f4)), (c2, (f1, f3, f4)),
                        (c3, (f1, f2, f4)), (c4, (f1, f2, f3))):
            poly = [c]
            for f in rest:
                poly = _xpoly_mul(poly, f)
            rhs = poly if rhs is None else [u + v for u, v in zip(rhs, poly)]
        lhs = [_tpoly([0], p), _tpoly([0], p), X / t, _tpoly([0], p)]
        return [u - v for u, v in zip(lhs, rhs)]

    slack = 8
    while True:
        res = build(order + slack)
        if min(r.order for r in res) >= order:
            return [r.truncate(order) for r in res]
        slack *= 2


def ct_x_irrelevant(j: int, order: int) -> Tuple[TruncSeries, TruncSeries]:
    """``CT_x x^j/(x - t)`` and ``CT_x x^j/(x - X)`` as t-series, ``j <= 0``.

    ``1/(x - a) = sum_{k>=0} a^k x^(-k-1)`` for ``a`` of positive t-valuation,
    so only ``x^(-k-1)`` appear and ``x^j`` with ``j <= 0`` never reaches ``x^0``.
    The sums are formed term by term up to ``t^order``.
    """
    if j > 0:
        raise ValueError("j must be nonpositive")
    X = x_series(order)
    t = _tpoly([0, 1], order)
    out = []
    for a in (t, X):
        acc = _tpoly([0], order)
        power = _tpoly([1], order)
        for k in range(order + 1):
            if j - k - 1 == 0:  # x^j * x^(-k-1) = x^0 needs k = j - 1 < 0
                acc = acc + power
            power = power * a
        out.append(acc)
    return out[0], out[1]


def ct_h(j: int, k: int, method: str = "recurrence"):
    """``CT_x [t^k] H(x, t) x^j = u_{j,k} + v_{k+j}`` for ``j <= 0``.

    ``method`` is ``"direct"`` (series oracle), ``"recurrence"``
    (holonomic) or ``"hseries"`` (t-expansion of ``1/det``).
    """
    if j > 0:
        raise ValueError("ct_h needs j <= 0")
    if method == "direct":
        u = u_direct(j, max(k, -j - 1))[k] if k >= -j - 1 else Fraction(0)
        v = v_direct(max(k + j, -1))[k + j] if k + j >= -1 else Fraction(0)
        return u + v
    if method == "recurrence":
        from .holonomic import run_rec_u, run_rec_v
        u = run_rec_u(j, k) if k >= -j - 1 else Fraction(0)
        v = run_rec_v(k + j) if k + j >= -1 else Fraction(0)
        return u + v
    if method == "hseries":
        if k < 0:
            return Fraction(0)
        return Fraction(h_tail(k)[k][j])
    raise ValueError(f"unknown method {method!r}")


class DyadicSum:
    """Exact accumulator for numbers ``N / 2^E``."""

    __slots__ = ("num", "exp")

    def __init__(self):
        self.num, self.exp = 0, 0

    def add(self, n: int, e: int) -> None:
        if not n:
            return
        if e > self.exp:
            self.num <<= e - self.exp
            self.exp = e
            self.num += n
        else:
            self.num += n << (self.exp - e)

    def value(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)


def _resolve_split(N: int, n_seed: Optional[int]) -> Tuple[int, int]:
    if N < 2:
        raise ValueError("omega needs N >= 2 on this path")
    if n_seed is None:
        m, n = choose_split(N)
    else:
        n, m = n_seed, N - n_seed
        if not split_admissible(m, n):
            raise ValueError(f"split m={m}, n={n} violates m < 2^n + 2 - n")
    if n > MAX_SEED:
        raise ValueError(f"seed n={n} is too large to materialize (max {MAX_SEED})")
    return m, n


def _assemble_hseries(table: CoeffTable, backend: Optional[str]) -> Fraction:
    m = table.m
    rows = h_tail(m, backend)
    total = 0
    for i, j, a in table.entries():
        total += a * rows[m - i][j]
    return Fraction(total)


def _assemble_direct(table: CoeffTable) -> Fraction:
    m = table.m
    u_cache = {}
    V = v_direct(max(m, 0))
    total = Fraction(0)
    for i, j, a in table.entries():
        K = m - i
        if j not in u_cache:
            u_cache[j] = u_direct(j, max(m, -j - 1))
        total += a * (u_cache[j][K] + V[K + j])
    return total


def _assemble_holonomic(table: CoeffTable, threads: int, backend: Optional[str],
                        rec_u=None, rec_v=None) -> Fraction:
    from .holonomic import u_values, v_values

    m = table.m
    acc = DyadicSum()
    vs = v_values(m, rec=rec_v, backend=backend)
    for i, j, a in table.entries():
        n, e = vs[m - i + j]
        acc.add(a * n, e)

    js = sorted({j for _, j, _ in table.entries()})
    if not js:
        return acc.value()
    lo = min(js)

    def work(chunk: List[int]) -> List[Tuple[int, int]]:
        parts = []
        for j in chunk:
            needed = [m - i for i in range(len(table.rows)) if table.get(i, j)]
            vals = u_values(j, needed, rec=rec_u, backend=backend)
            sub = DyadicSum()
            for i in range(len(table.rows)):
                a = table.get(i, j)
                if a and (m - i) in vals:
                    n, e = vals[m - i]
                    sub.add(a * n, e)
            parts.append((sub.num, sub.exp))
        return parts

    # interleave so chunks carry similar work (cost grows with m + j)
    threads = max(1, threads)
    nchunks = threads * 8 if threads > 1 else 1
    chunks = [js[c::nchunks] for c in range(nchunks)]
    chunks = [c for c in chunks if c]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
    else:
        results = [work(c) for c in chunks]
    for parts in results:
        for n, e in parts:
            acc.add(n, e)
    log.debug("assembled %d j-values down to j=%d", len(js), lo)
    return acc.value()


def omega_gf(N: int, source: str = "holonomic", n_seed: Optional[int] = None,
             threads: int = 1, backend: Optional[str] = None,
             table: Optional[CoeffTable] = None, rec_u=None, rec_v=None) -> int:
    """omega(N) from the folded table and the constant terms of ``H``.

    ``source`` picks how ``CT_x [t^K] x^j H`` is obtained: ``"holonomic"``
    (P-recurrences for ``u`` and ``v``), ``"direct"`` (series oracle) or
    ``"hseries"`` (rows of the t-expansion of ``1/det``).  ``table``,
    ``rec_u`` and ``rec_v`` let callers pass cached artifacts.
    """
    m, n = _resolve_split(N, n_seed)
    if table is None:
        table = build_coeff_table(n, m)
    elif (table.n_seed, table.m) != (n, m):
        raise ValueError("coefficient table does not match the split")
    if source == "holonomic":
        value = _assemble_holonomic(table, threads, backend, rec_u, rec_v)
    elif source == "direct":
        value = _assemble_direct(table)
    elif source == "hseries":
        value = _assemble_hseries(table, backend)
    else:
        raise ValueError(f"unknown source {source!r}")
    if value.denominator != 1:
        raise ArithmeticError(f"assembled omega({N}) is not an integer: {value}")
    if value < 0:
        raise ArithmeticError(f"assembled omega({N}) is negative")
    return int(value)


def omega_series(N: int, n_seed: Optional[int] = None) -> int:
    """omega(N) by expanding the solved rational function as a t-series."""
    m, n = _resolve_split(N, n_seed)
    comp = solve_component(n)
    y = comp.series(m)[m]
    gg = gg_product(n)
    return sum(c * y[-e] for e, c in gg.items())
