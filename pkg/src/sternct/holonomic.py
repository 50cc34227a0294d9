"""P-recurrences for the coefficients of U_j and V_0.

``X(t)`` is algebraic of degree two, so ``U_j = X^(-j) W(t, X)`` and its
first two derivatives all live in the two-dimensional space
``Q(t, j) X + Q(t, j)`` once the factor ``X^(-j)`` is pulled out
(``d/dt X^(-j) = -j X^(-j) X'/X``).  Three vectors in a plane are linearly
dependent; the dependency is a second-order ODE, and reading it off
coefficient-wise gives a recurrence in ``k`` with ``j`` kept symbolic.

The symbolic field arithmetic in ``Q(t, j)`` uses :mod:`sympy.polys`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import kernels

__all__ = [
    "OdeOperator",
    "RecurrenceOp",
    "QuadraticModel",
    "derive_ode_u",
    "derive_ode_v",
    "ode_to_rec",
    "derive_rec_u",
    "derive_rec_v",
    "run_rec_u",
    "run_rec_v",
    "u_values",
    "v_values",
    "fit_recurrence",
    "FitError",
]

Poly2 = Dict[Tuple[int, int], int]  # (exponent of t or k, exponent of j) -> coefficient


def _eval2(p: Mapping[Tuple[int, int], object], a, b):
    return sum(c * a ** e1 * b ** e2 for (e1, e2), c in p.items())


@dataclass(frozen=True)
class OdeOperator:
    """``sum_s f_s W^(s) = 0`` with ``f_s`` integer polynomials in (t, j)."""

    f: Tuple[Poly2, ...]

    def __post_init__(self):
        if not any(self.f):
            raise ValueError("all ODE coefficients are zero")
        if not self.f[-1]:
            raise ValueError("leading ODE coefficient is zero")

    @property
    def order(self) -> int:
        return len(self.f) - 1

    def t_degree(self) -> int:
        return max(e for fs in self.f for (e, _) in fs)

    def j_degree(self) -> int:
        return max((e for fs in self.f for (_, e) in fs), default=0)

    def coefficient_series(self, s: int, j: int, order: int):
        """``f_s(t, j)`` as an exact polynomial series."""
        from .series import TruncSeries
        by_t: Dict[int, int] = {}
        for (te, je), c in self.f[s].items():
            by_t[te] = by_t.get(te, 0) + c * j ** je
        deg = max(by_t, default=0)
        return TruncSeries.polynomial([by_t.get(i, 0) for i in range(deg + 1)], order)

    def apply(self, w, j: int = 0):
        """Residual ``sum_s f_s w^(s)`` for a TruncSeries ``w``."""
        total = None
        deriv = w
        for s in range(len(self.f)):
            if s:
                deriv = deriv.derivative()
            # polynomial coefficients are exact; give them ample order
            term = self.coefficient_series(s, j, deriv.order - min(deriv.valuation, 0) + 1) * deriv
            total = term if total is None else total + term
        return total


@dataclass(frozen=True)
class RecurrenceOp:
    """``sum_{r=0}^{order} c_r(k, j) w_{k-r} = 0`` with integer coefficients."""

    coeffs: Tuple[Poly2, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Poly2:
        return dict(self.coeffs[0])

    def trailing(self) -> Poly2:
        return dict(self.coeffs[-1])

    def evaluate(self, r: int, k, j=0):
        return _eval2(self.coeffs[r], k, j)

    def specialize(self, j: int) -> List[List[int]]:
        """Coefficient lists in ``k`` (constant first) with ``j`` fixed."""
        out = []
        for c in self.coeffs:
            deg = max((e for e, _ in c), default=0)
            row = [0] * (deg + 1)
            for (ke, je), v in c.items():
                row[ke] += v * j ** je
            out.append(row)
        return out

    def residuals(self, seq: Mapping[int, Fraction], j: int, ks: Iterable[int]) -> List:
        return [sum(self.evaluate(r, k, j) * seq.get(k - r, 0) for r in range(self.order + 1))
                for k in ks]

    def normalized(self) -> "RecurrenceOp":
        return RecurrenceOp(_normalize(self.coeffs))

    def same_up_to_scaling(self, other: "RecurrenceOp") -> bool:
        return self.normalized() == other.normalized()

    def leading_roots(self, j: int, lo: int, hi: int) -> List[int]:
        """Integers ``k`` in ``[lo, hi]`` where ``c_0(k, j)`` vanishes."""
        poly = self.specialize(j)[0]
        return [k for k in _integer_roots(poly) if lo <= k <= hi]


def _integer_roots(poly: Sequence[int]) -> List[int]:
    """Integer roots of an integer polynomial (constant term first)."""
    p = list(poly)
    while p and p[-1] == 0:
        p.pop()
    if not p:
        raise ValueError("zero polynomial")
    roots = []
    shift = 0
    while p[0] == 0:
        roots.append(0)
        p = p[1:]
        shift += 1
    if len(p) == 1:
        return sorted(set(roots))
    c = abs(p[0])
    divs = set()
    d = 1
    while d * d <= c:
        if c % d == 0:
            divs.update((d, c // d))
        d += 1
    for d in divs:
        for cand in (d, -d):
            v = 0
            for a in reversed(p):
                v = v * cand + a
            if v == 0:
                roots.append(cand)
    return sorted(set(roots))


def _normalize(coeffs: Sequence[Mapping]) -> Tuple[Poly2, ...]:
    """Integer content 1 and a fixed sign: the top k-power of ``c_0`` is negative."""
    fr = [{key: Fraction(v) for key, v in c.items() if v} for c in coeffs]
    den = 1
    for c in fr:
        for v in c.values():
            den = den * v.denominator // gcd(den, v.denominator)
    ints = [{key: int(v * den) for key, v in c.items()} for c in fr]
    g = 0
    for c in ints:
        for v in c.values():
            g = gcd(g, v)
    if g == 0:
        raise ValueError("zero recurrence")
    ints = [{key: v // g for key, v in c.items()} for c in ints]
    lead = ints[0] or next(c for c in ints if c)
    top = max(lead, key=lambda e: (e[0], e[1]))
    if lead[top] > 0:
        ints = [{key: -v for key, v in c.items()} for c in ints]
    return tuple(dict(sorted(c.items())) for c in ints)


# -- symbolic derivation -------------------------------------------------

class QuadraticModel:
    """Arithmetic in ``Q(t, j)[X] / (A X^2 + B X + C)``.

    Elements are pairs ``(p, q)`` meaning ``p X + q``.
    """

    def __init__(self, A=(0, 1, -3, 1), B=(-1, 5, -6, 2), C=(0, 1, -3, 1)):
        from sympy import QQ
        from sympy.polys.fields import field

        self.K, self.t, self.j = field("t,j", QQ)
        t = self.t
        self.A = sum(c * t ** i for i, c in enumerate(A))
        self.B = sum(c * t ** i for i, c in enumerate(B))
        self.C = sum(c * t ** i for i, c in enumerate(C))
        self.X = (self.K(1), self.K(0))
        A_, B_, C_ = self.A, self.B, self.C
        dA, dB, dC = (self.K(v).diff(t) for v in (A_, B_, C_))
        X = self.X
        X2 = self.mul(X, X)
        num = self.add(self.add(self.scale(X2, dA), self.scale(X, dB)), (self.K(0), dC))
        den = self.add(self.scale(X, 2 * A_), (self.K(0), B_))
        self.dX = self.scale(self.div(num, den), -1)

    def lift(self, v) -> tuple:
        return v if isinstance(v, tuple) else (self.K(0), self.K(v))

    def add(self, a, b) -> tuple:
        a, b = self.lift(a), self.lift(b)
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b) -> tuple:
        a, b = self.lift(a), self.lift(b)
        return (a[0] - b[0], a[1] - b[1])

    def scale(self, a, c) -> tuple:
        a = self.lift(a)
        return (a[0] * c, a[1] * c)

    def mul(self, a, b) -> tuple:
        a, b = self.lift(a), self.lift(b)
        pp = a[0] * b[0]
        pq = a[0] * b[1] + a[1] * b[0]
        qq = a[1] * b[1]
        # X^2 = -(B X + C) / A
        return (pq - pp * self.B / self.A, qq - pp * self.C / self.A)

    def conj(self, a) -> tuple:
        # the other root is -B/A - X
        a = self.lift(a)
        return (-a[0], a[1] - a[0] * self.B / self.A)

    def inv(self, a) -> tuple:
        c = self.conj(a)
        norm = self.mul(a, c)
        if norm[0] != 0:
            raise ArithmeticError("norm is not in the base field")
        return (c[0] / norm[1], c[1] / norm[1])

    def div(self, a, b) -> tuple:
        return self.mul(a, self.inv(b))

    def d(self, a) -> tuple:
        """Total derivative in ``t``."""
        a = self.lift(a)
        t = self.t
        return self.add((a[0].diff(t), a[1].diff(t)), self.scale(self.dX, a[0]))

    def d_power(self, a, jcoef) -> tuple:
        """Derivative of ``X^(-jcoef) a`` divided by ``X^(-jcoef)``."""
        lam = self.div(self.dX, self.X)
        return self.sub(self.d(a), self.scale(self.mul(lam, a), jcoef))

    def poly(self, coeffs) -> object:
        return sum(c * self.t ** i for i, c in enumerate(coeffs))


def _dependency(model: QuadraticModel, R0, jcoef) -> OdeOperator:
    R1 = model.d_power(R0, jcoef)
    minor = R0[0] * R1[1] - R1[0] * R0[1]
    if minor == 0:
        # R1 = lam R0: first order (happens when R0 lies in the base field)
        lam = R1[0] / R0[0] if R0[0] != 0 else R1[1] / R0[1]
        return OdeOperator(_clear_field(model, (-lam, model.K(1))))
    R2 = model.d_power(R1, jcoef)
    # kernel of the 2x3 system [[P0 P1 P2], [Q0 Q1 Q2]]
    f0 = R1[0] * R2[1] - R2[0] * R1[1]
    f1 = R2[0] * R0[1] - R0[0] * R2[1]
    return OdeOperator(_clear_field(model, (f0, f1, minor)))


def _clear_field(model: QuadraticModel, fs) -> Tuple[Poly2, ...]:
    nums = [f.numer for f in fs]
    dens = [f.denom for f in fs]
    L = dens[0]
    for d in dens[1:]:
        L = L.lcm(d)
    polys = [n * L.exquo(d) for n, d in zip(nums, dens)]
    g = None
    for p in polys:
        if p:
            g = p if g is None else g.gcd(p)
    polys = [p.exquo(g) if p else p for p in polys]
    out = []
    for p in polys:
        out.append({(int(m[0]), int(m[1])): Fraction(int(c.numerator), int(c.denominator))
                    for m, c in p.terms()})
    # integer content 1, leading coefficient with positive lowest t-term
    den = 1
    for d in out:
        for v in d.values():
            den = den * v.denominator // gcd(den, v.denominator)
    ints = [{k: int(v * den) for k, v in d.items()} for d in out]
    cg = 0
    for d in ints:
        for v in d.values():
            cg = gcd(cg, v)
    ints = [{k: v // cg for k, v in d.items()} for d in ints]
    low = min(ints[-1])
    if ints[-1][low] < 0:
        ints = [{k: -v for k, v in d.items()} for d in ints]
    return tuple(dict(sorted(d.items())) for d in ints)


@lru_cache(maxsize=None)
def _model() -> QuadraticModel:
    return QuadraticModel()


@lru_cache(maxsize=None)
def derive_ode_u(j: Optional[int] = None) -> OdeOperator:
    """Second-order ODE annihilating ``U_j``; ``j=None`` keeps ``j`` symbolic."""
    M = _model()
    X = M.X
    t = M.t
    q = M.poly((1, -3, 1))
    # W = X^2 / (t (t^2-3t+1) (X - t) (X^2 - 1) (X t - 1))
    den = M.mul(M.mul(M.sub(X, t), M.sub(M.mul(X, X), 1)), M.sub(M.scale(X, t), 1))
    W = M.div(M.mul(X, X), M.scale(den, t * q))
    return _dependency(M, W, M.j if j is None else j)


@lru_cache(maxsize=None)
def derive_ode_v() -> OdeOperator:
    """Second-order ODE annihilating ``V_0``."""
    M = _model()
    X = M.X
    t = M.t
    q = M.poly((1, -3, 1))
    den = M.mul(M.sub(X, t), M.sub(M.scale(X, t), 1))
    V = M.scale(M.div(X, M.scale(den, q * (t * t - 1))), -1)
    return _dependency(M, V, 0)


def _falling(shift: int, b: int) -> List[int]:
    """Coefficients in ``k`` of ``(k - shift)(k - shift - 1)...`` (b factors)."""
    poly = [1]
    for i in range(b):
        root = shift + i
        new = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d + 1] += c
            new[d] -= root * c
        poly = new
    return poly


def ode_to_rec(op: OdeOperator) -> RecurrenceOp:
    """Coefficient extraction: ``t^a D^b`` sends ``w_k t^k`` to ``k^(b falling) w_k t^(k-b+a)``.

    Collecting ``t^(k - smax)`` gives ``sum_r c_r(k) w_{k-r} = 0`` with
    ``r = smax - (b - a)`` and ``c_r`` gaining ``f_{b,a}(j) (k - r)^(b falling)``.
    """
    shifts = [b - te for b, fb in enumerate(op.f) for (te, _) in fb]
    smax, smin = max(shifts), min(shifts)
    order = smax - smin
    coeffs: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(order + 1)]
    for b, fb in enumerate(op.f):
        for (te, je), c in fb.items():
            r = smax - (b - te)
            for d, kc in enumerate(_falling(r, b)):
                if kc:
                    key = (d, je)
                    coeffs[r][key] = coeffs[r].get(key, 0) + c * kc
    coeffs = [{k: v for k, v in c.items() if v} for c in coeffs]
    return RecurrenceOp(_normalize(coeffs))


@lru_cache(maxsize=None)
def derive_rec_u(j: Optional[int] = None) -> RecurrenceOp:
    return ode_to_rec(derive_ode_u(j))


@lru_cache(maxsize=None)
def derive_rec_v() -> RecurrenceOp:
    return ode_to_rec(derive_ode_v())


# -- running the recurrences ------------------------------------------------

def _to_fraction(pair: Tuple[int, int]) -> Fraction:
    n, e = pair
    return Fraction(n, 1 << e)


def u_values(j: int, targets: Iterable[int], rec: Optional[RecurrenceOp] = None,
             backend: Optional[str] = None) -> Dict[int, Tuple[int, int]]:
    """``{k: (N, E)}`` with ``u_{j,k} = N / 2^E`` for the requested ``k``.

    Seeds: ``u_{j,-j-1} = 1/2`` and zeros below it.
    """
    if j > 0:
        raise ValueError("u recurrence needs j <= 0")
    rec = rec or derive_rec_u()
    val = -j - 1
    targets = sorted(set(targets))
    out: Dict[int, Tuple[int, int]] = {}
    above = [k for k in targets if k > val]
    if val in targets:
        out[val] = (1, 1)
    for k in targets:
        if k < val:
            out[k] = (0, 0)
    if not above:
        return out
    R = rec.order
    window = [(0, 0)] * (R - 1) + [(1, 1)]
    _, found = kernels.rec_run(rec.specialize(j), window, val + 1, above[-1], above,
                               backend=backend)
    out.update(found)
    return out


def run_rec_u(j: int, k_target: int, rec: Optional[RecurrenceOp] = None,
              backend: Optional[str] = None) -> Fraction:
    return _to_fraction(u_values(j, [k_target], rec, backend)[k_target])


def v_values(k_max: int, rec: Optional[RecurrenceOp] = None,
             backend: Optional[str] = None) -> List[Tuple[int, int]]:
    """``[(N, E)]`` for ``v_0 .. v_{k_max}``; ``v_{-1} = -1/2`` seeds the run."""
    rec = rec or derive_rec_v()
    if k_max < 0:
        return []
    R = rec.order
    window = [(0, 0)] * (R - 1) + [(-1, 1)]
    _, found = kernels.rec_run(rec.specialize(0), window, 0, k_max, range(k_max + 1),
                               backend=backend)
    return [found[k] for k in range(k_max + 1)]


def run_rec_v(k_target: int, rec: Optional[RecurrenceOp] = None,
              backend: Optional[str] = None) -> Fraction:
    if k_target < -1:
        return Fraction(0)
    if k_target == -1:
        return Fraction(-1, 2)
    rec = rec or derive_rec_v()
    R = rec.order
    window = [(0, 0)] * (R - 1) + [(-1, 1)]
    _, found = kernels.rec_run(rec.specialize(0), window, 0, k_target, [k_target],
                               backend=backend)
    return _to_fraction(found[k_target])


# -- guess and verify ----------------------------------------------------

class FitError(ValueError):
    """The ansatz has no unique solution or the fitted recurrence fails validation."""


# 2^127 - 1 is prime
_PRIME = (1 << 127) - 1


def _ratrec(a: int, p: int) -> Fraction:
    """Rational reconstruction of ``a mod p`` (Wang's bound)."""
    bound = int((p // 2) ** 0.5)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise FitError("rational reconstruction failed")
    return Fraction(r1, s1)


def _nullspace_mod(rows: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    rows = [r[:] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = [(v * inv) % p for v in rows[rank]]
        rows[rank] = prow
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rows[r][fc]) % p
        basis.append(vec)
    return basis


def fit_recurrence(data: Mapping, ansatz: Tuple[int, int, int],
                   extra: Optional[Mapping] = None, min_holdout: int = 50,
                   margin: int = 50) -> RecurrenceOp:
    """Guess ``sum_r c_r(k, j) w_{j,k-r} = 0`` from sampled sequences, then verify.

    ``data`` maps a parameter value ``j`` to ``(k0, [w_{k0}, w_{k0+1}, ...])``.
    ``ansatz = (order, k-degree, j-degree)``.  Fitting uses
    ``unknowns + margin`` equations; every sampled sequence must keep at
    least ``min_holdout`` further equations for validation, and when the
    ansatz depends on ``j`` at least two unsampled sequences in ``extra``
    must also satisfy the result.
    """
    order, kdeg, jdeg = ansatz
    monos = [(r, d, e) for r in range(order + 1) for d in range(kdeg + 1) for e in range(jdeg + 1)]
    nunk = len(monos)
    seqs = {}
    for j, (k0, vals) in data.items():
        seqs[j] = (k0, [Fraction(v) for v in vals])

    def equations(j, k0, vals, ks):
        jj = 0 if j is None else j
        rows = []
        for k in ks:
            rows.append([(k ** d) * (jj ** e) * vals[k - r - k0] for (r, d, e) in monos])
        return rows

    avail = {j: list(range(k0 + order, k0 + len(vals))) for j, (k0, vals) in seqs.items()}
    need = nunk + margin
    total = sum(len(v) for v in avail.values())
    if total - min_holdout * len(avail) < need:
        raise FitError(f"under-determined: {total} equations for {nunk} unknowns "
                       f"(+{margin} margin, {min_holdout} held out per sequence)")
    # take fitting equations round-robin from the start of every sequence
    fit_ks = {j: [] for j in avail}
    taken = 0
    idx = 0
    while taken < need:
        for j in avail:
            if idx < len(avail[j]) - min_holdout and taken < need:
                fit_ks[j].append(avail[j][idx])
                taken += 1
        idx += 1
    rows = []
    for j, (k0, vals) in seqs.items():
        rows.extend(equations(j, k0, vals, fit_ks[j]))
    p = _PRIME
    mod_rows = [[(v.numerator * pow(v.denominator, -1, p)) % p for v in row] for row in rows]
    basis = _nullspace_mod(mod_rows, nunk, p)
    if not basis:
        raise FitError("no recurrence of this shape fits the data")
    if len(basis) > 1:
        raise FitError(f"ansatz admits a {len(basis)}-dimensional family of recurrences")
    vec = [_ratrec(v, p) for v in basis[0]]
    coeffs: List[Dict[Tuple[int, int], Fraction]] = [dict() for _ in range(order + 1)]
    for (r, d, e), v in zip(monos, vec):
        if v:
            coeffs[r][(d, e)] = v
    if not any(coeffs):
        raise FitError("degenerate fit")
    rec = RecurrenceOp(_normalize(coeffs))

    def check(j, k0, vals, ks):
        seq = {k0 + i: v for i, v in enumerate(vals)}
        jj = 0 if j is None else j
        if any(rec.residuals(seq, jj, ks)):
            raise FitError(f"validation failed for j={j}")

    for j, (k0, vals) in seqs.items():
        check(j, k0, vals, avail[j])  # fitting rows were exact mod p only
        if len(avail[j]) - len(fit_ks[j]) < min_holdout:
            raise FitError(f"fewer than {min_holdout} held-out terms for j={j}")
    if jdeg > 0 or len(seqs) > 1:
        extra = extra or {}
        if len([j for j in extra if j not in seqs]) < 2:
            raise FitError("validation needs at least two unsampled parameter values")
        for j, (k0, vals) in extra.items():
            vals = [Fraction(v) for v in vals]
            check(j, k0, vals, range(k0 + order, k0 + len(vals)))
    return rec
