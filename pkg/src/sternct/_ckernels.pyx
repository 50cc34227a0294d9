# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""GMP versions of the kernels in ``_pykernels`` (same signatures, same results)."""

from libc.stdlib cimport malloc, free
from libc.limits cimport LONG_MAX

from ._pykernels import NonDyadicError, _poly_values
from . import _pykernels
from .laurent import LaurentPoly


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct *mpz_ptr
    ctypedef unsigned long mp_bitcnt_t

    void mpz_init(mpz_ptr) nogil
    void mpz_clear(mpz_ptr) nogil
    void mpz_set(mpz_ptr, mpz_ptr) nogil
    void mpz_set_ui(mpz_ptr, unsigned long) nogil
    void mpz_swap(mpz_ptr, mpz_ptr) nogil
    void mpz_add(mpz_ptr, mpz_ptr, mpz_ptr) nogil
    void mpz_sub(mpz_ptr, mpz_ptr, mpz_ptr) nogil
    void mpz_neg(mpz_ptr, mpz_ptr) nogil
    void mpz_addmul_ui(mpz_ptr, mpz_ptr, unsigned long) nogil
    void mpz_submul_ui(mpz_ptr, mpz_ptr, unsigned long) nogil
    void mpz_mul_2exp(mpz_ptr, mpz_ptr, mp_bitcnt_t) nogil
    void mpz_tdiv_q_2exp(mpz_ptr, mpz_ptr, mp_bitcnt_t) nogil
    int mpz_divisible_ui_p(mpz_ptr, unsigned long) nogil
    void mpz_divexact_ui(mpz_ptr, mpz_ptr, unsigned long) nogil
    int mpz_sgn(mpz_ptr) nogil
    mp_bitcnt_t mpz_scan1(mpz_ptr, mp_bitcnt_t) nogil
    size_t mpz_sizeinbase(mpz_ptr, int) nogil
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void *) nogil
    void *mpz_export(void *, size_t *, int, size_t, int, size_t, mpz_ptr) nogil


cdef mpz_ptr _alloc(Py_ssize_t n) except NULL:
    cdef mpz_ptr p = <mpz_ptr>malloc((n if n > 0 else 1) * sizeof(__mpz_struct))
    cdef Py_ssize_t i
    if p == NULL:
        raise MemoryError()
    for i in range(n):
        mpz_init(&p[i])
    return p


cdef void _release(mpz_ptr p, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    if p == NULL:
        return
    for i in range(n):
        mpz_clear(&p[i])
    free(p)


cdef int _from_py(mpz_ptr z, object n) except -1:
    cdef bytes b
    cdef const char *buf
    if not n:
        mpz_set_ui(z, 0)
        return 0
    a = -n if n < 0 else n
    b = a.to_bytes((a.bit_length() + 7) // 8, "little")
    buf = b
    mpz_import(z, len(b), -1, 1, 0, 0, buf)
    if n < 0:
        mpz_neg(z, z)
    return 0


cdef object _to_py(mpz_ptr z):
    cdef size_t count = 0
    cdef int sgn = mpz_sgn(z)
    if sgn == 0:
        return 0
    cdef size_t nbytes = (mpz_sizeinbase(z, 2) + 7) // 8
    cdef bytearray buf = bytearray(nbytes)
    cdef char *p = buf
    mpz_export(p, &count, -1, 1, 0, 0, z)
    v = int.from_bytes(buf[:count], "little")
    return -v if sgn < 0 else v


cdef extern from *:
    int __builtin_ctzl(unsigned long) nogil


cdef inline unsigned long _ctz(unsigned long v) noexcept nogil:
    return __builtin_ctzl(v)


def matrix_steps(state, matrix, long steps, final_window=None):
    """Apply ``state <- matrix * state`` ``steps`` times (see ``_pykernels``)."""
    cdef Py_ssize_t size = len(state)
    cdef Py_ssize_t nterms, t, q, a, b, i, width, nwidth, srclen
    cdef long lo, hi, nlo, nhi, w, step, spread_lo, spread_hi, d
    cdef bint windowed = final_window is not None
    cdef long fw = final_window if windowed else 0
    cdef long *ti
    cdef long *tj
    cdef long *te
    cdef long *tc
    cdef mpz_ptr cur = NULL
    cdef mpz_ptr nxt = NULL
    cdef Py_ssize_t nxt_n = 0
    cdef mpz_ptr src
    cdef mpz_ptr dst
    cdef long c

    terms = [(i_, j_, e_, c_) for i_, row in enumerate(matrix) for j_, dct in enumerate(row)
             for e_, c_ in sorted(dct.items()) if c_]
    nz = [p for p in state if not p.is_zero()]
    if not nz:
        return tuple(LaurentPoly.zero() for _ in range(size))
    if any(abs(c_) > LONG_MAX // 2 for *_, c_ in terms):
        return _pykernels.matrix_steps(state, matrix, steps, final_window)
    spread_hi = max([e_ for _, _, e_, _ in terms] + [0])
    spread_lo = min([e_ for _, _, e_, _ in terms] + [0])
    lo = min(p.ldeg for p in nz)
    hi = max(p.deg for p in nz)
    if windowed:
        lo = max(lo, -(fw + steps))
        hi = min(hi, fw + steps)
        if lo > hi:
            return tuple(LaurentPoly.zero() for _ in range(size))
    width = hi - lo + 1
    nterms = len(terms)
    ti = <long *>malloc((nterms + 1) * sizeof(long))
    tj = <long *>malloc((nterms + 1) * sizeof(long))
    te = <long *>malloc((nterms + 1) * sizeof(long))
    tc = <long *>malloc((nterms + 1) * sizeof(long))
    try:
        for t, (i_, j_, e_, c_) in enumerate(terms):
            ti[t] = i_
            tj[t] = j_
            te[t] = e_
            tc[t] = c_
        cur = _alloc(size * width)
        for i, p in enumerate(state):
            if p.is_zero():
                continue
            off = p.ldeg
            for e_, v in zip(range(off, off + len(p.coeff_list())), p.coeff_list()):
                if lo <= e_ <= hi and v:
                    _from_py(&cur[i * width + (e_ - lo)], v)
        for step in range(1, steps + 1):
            nlo = lo + spread_lo
            nhi = hi + spread_hi
            if windowed:
                w = fw + steps - step
                if nlo < -w:
                    nlo = -w
                if nhi > w:
                    nhi = w
            nwidth = nhi - nlo + 1
            if nwidth < 1:
                nwidth = 0
            nxt_n = size * nwidth
            nxt = _alloc(nxt_n)
            with nogil:
                for t in range(nterms):
                    src = &cur[tj[t] * width]
                    dst = &nxt[ti[t] * nwidth]
                    d = lo + te[t] - nlo
                    a = -d if d < 0 else 0
                    b = width if width < nwidth - d else nwidth - d
                    c = tc[t]
                    if c == 1:
                        for q in range(a, b):
                            mpz_add(&dst[q + d], &dst[q + d], &src[q])
                    elif c == -1:
                        for q in range(a, b):
                            mpz_sub(&dst[q + d], &dst[q + d], &src[q])
                    elif c > 0:
                        for q in range(a, b):
                            mpz_addmul_ui(&dst[q + d], &src[q], <unsigned long>c)
                    else:
                        for q in range(a, b):
                            mpz_submul_ui(&dst[q + d], &src[q], <unsigned long>(-c))
            _release(cur, size * width)
            cur, width, lo, hi = nxt, nwidth, nlo, nhi
            nxt = NULL
            nxt_n = 0
            if width == 0:
                break
        out = []
        for i in range(size):
            out.append(LaurentPoly._trimmed([_to_py(&cur[i * width + q]) for q in range(width)], lo))
        return tuple(out)
    finally:
        _release(cur, size * width)
        _release(nxt, nxt_n)
        free(ti)
        free(tj)
        free(te)
        free(tc)


def _reduce(n, e):
    if n == 0:
        return (0, 0)
    t = min((n & -n).bit_length() - 1, e)
    return (n >> t, e - t)


cdef enum:
    STRIP_EVERY = 16


def rec_run(coeffs, window, long k_start, long k_end, targets=()):
    """Run ``sum_r c_r(k) w_{k-r} = 0`` forward over dyadic rationals (see ``_pykernels``)."""
    cdef Py_ssize_t R = len(coeffs) - 1
    cdef Py_ssize_t steps = k_end - k_start + 1
    cdef Py_ssize_t i, p, head, nt, ti_
    cdef long c0, c
    cdef unsigned long a, b, odd, tmin, tv
    cdef unsigned long E
    cdef int err = 0
    cdef long errk = 0
    cdef long *cr = NULL
    cdef long *c0s = NULL
    cdef char *want = NULL
    cdef mpz_ptr win = NULL
    cdef mpz_ptr res = NULL
    cdef mpz_ptr s = NULL
    cdef unsigned long *res_e = NULL

    if R < 1:
        raise ValueError("recurrence order must be positive")
    if len(window) != R:
        raise ValueError(f"window must hold {R} values")
    if steps <= 0:
        return [_reduce(n_, e_) for n_, e_ in window], {}
    cols = [_poly_values(list(cp), k_start, steps) if any(cp) else [0] * steps for cp in coeffs]
    if any(abs(v) > LONG_MAX - 1 for col in cols for v in col):
        return _pykernels.rec_run(coeffs, window, k_start, k_end, targets)
    Emax = max(e_ for _, e_ in window)
    E = Emax
    tlist = sorted(k_ - k_start for k_ in set(targets) if k_start <= k_ <= k_end)
    nt = len(tlist)
    try:
        cr = <long *>malloc(steps * R * sizeof(long))
        c0s = <long *>malloc(steps * sizeof(long))
        want = <char *>malloc(steps)
        res_e = <unsigned long *>malloc((nt + 1) * sizeof(unsigned long))
        if cr == NULL or c0s == NULL or want == NULL or res_e == NULL:
            raise MemoryError()
        for i in range(steps):
            c0s[i] = cols[0][i]
            want[i] = 0
            for p in range(R):
                cr[i * R + p] = cols[R - p][i]
        for ti_ in tlist:
            want[ti_] = 1
        win = _alloc(R)
        res = _alloc(nt)
        s = _alloc(1)
        for p, (n_, e_) in enumerate(window):
            _from_py(&win[p], n_ << (Emax - e_))
        head = 0
        ti_ = 0
        with nogil:
            for i in range(steps):
                c0 = c0s[i]
                if c0 == 0:
                    err = 1
                    errk = k_start + i
                    break
                mpz_set_ui(s, 0)
                for p in range(R):
                    c = cr[i * R + p]
                    if c > 0:
                        mpz_submul_ui(s, &win[(head + p) % R], <unsigned long>c)
                    elif c < 0:
                        mpz_addmul_ui(s, &win[(head + p) % R], <unsigned long>(-c))
                odd = <unsigned long>(c0 if c0 > 0 else -c0)
                a = _ctz(odd)
                odd >>= a
                if a and mpz_sgn(s) != 0:
                    b = mpz_scan1(s, 0)
                    if b < a:
                        for p in range(R):
                            mpz_mul_2exp(&win[p], &win[p], a - b)
                        E += a - b
                        mpz_tdiv_q_2exp(s, s, b)
                    else:
                        mpz_tdiv_q_2exp(s, s, a)
                if odd != 1:
                    if not mpz_divisible_ui_p(s, odd):
                        err = 2
                        errk = k_start + i
                        break
                    mpz_divexact_ui(s, s, odd)
                if c0 < 0:
                    mpz_neg(s, s)
                mpz_swap(&win[head], s)
                head = (head + 1) % R
                if E and i % STRIP_EVERY == STRIP_EVERY - 1:
                    tmin = E
                    for p in range(R):
                        if mpz_sgn(&win[p]) != 0:
                            tv = mpz_scan1(&win[p], 0)
                            if tv < tmin:
                                tmin = tv
                    if tmin:
                        for p in range(R):
                            mpz_tdiv_q_2exp(&win[p], &win[p], tmin)
                        E -= tmin
                if want[i]:
                    mpz_set(&res[ti_], &win[(head + R - 1) % R])
                    res_e[ti_] = E
                    ti_ += 1
        if err == 1:
            raise ZeroDivisionError(f"leading coefficient vanishes at k={errk}")
        if err == 2:
            raise NonDyadicError(f"value at k={errk} is not dyadic")
        found = {}
        for p in range(nt):
            found[k_start + tlist[p]] = _reduce(_to_py(&res[p]), res_e[p])
        final = [_reduce(_to_py(&win[(head + p) % R]), E) for p in range(R)]
        return final, found
    finally:
        _release(win, R)
        _release(res, nt)
        _release(s, 1)
        free(cr)
        free(c0s)
        free(want)
        free(res_e)
