# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled elimination kernel over Z_p (p < 2^31).

Rows are processed in staircase order by an OpenMP worker pool.  Each worker
owns a dense int64 buffer; pivot registration is a compare-and-swap on the
shared ``piv`` array.  Published pivot rows are never modified afterwards.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.stdint cimport int32_t, int64_t, uint32_t, uint64_t
from libc.stdlib cimport calloc, free, malloc

cnp.import_array()

cdef extern from *:
    """
    static inline int ncf4_cas(long long *slot, long long expected, long long desired) {
        return __atomic_compare_exchange_n(slot, &expected, desired, 1,
                                           __ATOMIC_ACQ_REL, __ATOMIC_ACQUIRE);
    }
    static inline long long ncf4_load(long long *slot) {
        return __atomic_load_n(slot, __ATOMIC_ACQUIRE);
    }
    """
    int ncf4_cas(long long *slot, long long expected, long long desired) nogil
    long long ncf4_load(long long *slot) nogil


cdef struct Ctx:
    int64_t n
    int64_t p
    int64_t pp
    int b
    int32_t **rc
    uint32_t **rv
    int64_t *rl
    long long *piv
    char *zero


cdef inline uint64_t _mersenne(uint64_t v, int b, uint64_t p) noexcept nogil:
    cdef uint64_t v1 = v + 1
    cdef uint64_t z = ((v1 >> b) + v1) >> b
    return (v + z) & p


cdef inline int64_t _mod(Ctx *ctx, int64_t x) noexcept nogil:
    if ctx.b:
        return <int64_t> _mersenne(<uint64_t> x, ctx.b, <uint64_t> ctx.p)
    return x % ctx.p


cdef int64_t _inverse(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef void _normalize(Ctx *ctx, int64_t r) noexcept nogil:
    cdef uint32_t *v = ctx.rv[r]
    cdef int64_t k, inv
    if v[0] == 1:
        return
    inv = _inverse(v[0], ctx.p)
    for k in range(ctx.rl[r]):
        v[k] = <uint32_t> ((<int64_t> v[k] * inv) % ctx.p)


cdef void _sweep(Ctx *ctx, int64_t *buf, int64_t start, int64_t keep) noexcept nogil:
    # reduce buf over [start, n) against registered pivots; column ``keep`` is left alone
    cdef int64_t j, k, x, y, pr, c, pl
    cdef int32_t *pc
    cdef uint32_t *pv
    for j in range(start, ctx.n):
        x = buf[j]
        if x == 0:
            continue
        x = _mod(ctx, x)
        if x == 0 or j == keep:
            buf[j] = x
            continue
        pr = ncf4_load(&ctx.piv[j])
        if pr < 0:
            buf[j] = x
            continue
        buf[j] = 0
        pc = ctx.rc[pr]
        pv = ctx.rv[pr]
        pl = ctx.rl[pr]
        for k in range(1, pl):
            c = pc[k]
            y = buf[c] - x * <int64_t> pv[k]
            y += (y >> 63) & ctx.pp
            buf[c] = y


cdef int64_t _write_back(Ctx *ctx, int64_t *buf, int64_t start,
                         int32_t **out_c, uint32_t **out_v) noexcept nogil:
    cdef int64_t j, cnt = 0, k = 0
    for j in range(start, ctx.n):
        if buf[j] != 0:
            cnt += 1
    if cnt == 0:
        out_c[0] = NULL
        out_v[0] = NULL
        return 0
    out_c[0] = <int32_t *> malloc(cnt * sizeof(int32_t))
    out_v[0] = <uint32_t *> malloc(cnt * sizeof(uint32_t))
    for j in range(start, ctx.n):
        if buf[j] != 0:
            out_c[0][k] = <int32_t> j
            out_v[0][k] = <uint32_t> buf[j]
            buf[j] = 0
            k += 1
    return cnt


cdef void _forward_row(Ctx *ctx, int64_t r, int64_t *buf) noexcept nogil:
    cdef int64_t lead, start, k, cnt
    cdef int32_t *nc
    cdef uint32_t *nv
    if ctx.rl[r] == 0:
        ctx.zero[r] = 1
        return
    lead = ctx.rc[r][0]
    if ncf4_load(&ctx.piv[lead]) == -1:
        _normalize(ctx, r)
        if ncf4_cas(&ctx.piv[lead], -1, r):
            return
    start = lead
    while True:
        for k in range(ctx.rl[r]):
            buf[ctx.rc[r][k]] = ctx.rv[r][k]
        _sweep(ctx, buf, start, -1)
        cnt = _write_back(ctx, buf, start, &nc, &nv)
        free(ctx.rc[r])
        free(ctx.rv[r])
        ctx.rc[r] = nc
        ctx.rv[r] = nv
        ctx.rl[r] = cnt
        if cnt == 0:
            ctx.zero[r] = 1
            return
        _normalize(ctx, r)
        lead = nc[0]
        if ncf4_cas(&ctx.piv[lead], -1, r):
            return
        # lost the race for this column (or spurious weak-CAS failure): keep reducing
        start = lead


def rref(rows, int64_t ncols, int64_t p, int nthreads=1):
    """Reduced row echelon form of ``rows`` (staircase order) over Z_p.

    Returns ``(out_rows, zero_rows)`` like the pure-Python kernel.
    """
    cdef Ctx ctx
    cdef int64_t m = len(rows)
    cdef int64_t i, k, r, npiv, j
    cdef int64_t *buf
    cdef int64_t[:] cols_mv
    cdef int64_t[:] vals_mv
    cdef int64_t *pcol
    cdef int32_t **oc
    cdef uint32_t **ov
    cdef int64_t *ol

    from .primes import mersenne_exponent
    if nthreads < 1:
        nthreads = 1
    ctx.n = ncols
    ctx.p = p
    ctx.pp = p * p
    ctx.b = mersenne_exponent(p)
    ctx.rc = <int32_t **> calloc(m + 1, sizeof(int32_t *))
    ctx.rv = <uint32_t **> calloc(m + 1, sizeof(uint32_t *))
    ctx.rl = <int64_t *> calloc(m + 1, sizeof(int64_t))
    ctx.piv = <long long *> malloc((ncols + 1) * sizeof(long long))
    ctx.zero = <char *> calloc(m + 1, sizeof(char))
    for j in range(ncols):
        ctx.piv[j] = -1

    for i in range(m):
        cs, vs = rows[i]
        cols_mv = np.asarray(cs, dtype=np.int64)
        vals_mv = np.asarray(vs, dtype=np.int64)
        ctx.rl[i] = cols_mv.shape[0]
        if ctx.rl[i]:
            ctx.rc[i] = <int32_t *> malloc(ctx.rl[i] * sizeof(int32_t))
            ctx.rv[i] = <uint32_t *> malloc(ctx.rl[i] * sizeof(uint32_t))
            for k in range(ctx.rl[i]):
                ctx.rc[i][k] = <int32_t> cols_mv[k]
                ctx.rv[i][k] = <uint32_t> vals_mv[k]

    with nogil, parallel(num_threads=nthreads):
        buf = <int64_t *> calloc(ncols + 1, sizeof(int64_t))
        for i in prange(m, schedule="dynamic", chunksize=1):
            _forward_row(&ctx, i, buf)
        free(buf)

    npiv = 0
    for j in range(ncols):
        if ctx.piv[j] >= 0:
            npiv += 1
    pcol = <int64_t *> malloc((npiv + 1) * sizeof(int64_t))
    oc = <int32_t **> calloc(npiv + 1, sizeof(int32_t *))
    ov = <uint32_t **> calloc(npiv + 1, sizeof(uint32_t *))
    ol = <int64_t *> calloc(npiv + 1, sizeof(int64_t))
    k = 0
    for j in range(ncols):
        if ctx.piv[j] >= 0:
            pcol[k] = j
            k += 1

    # backward phase: every row is reduced against the fixed forward rows
    with nogil, parallel(num_threads=nthreads):
        buf = <int64_t *> calloc(ncols + 1, sizeof(int64_t))
        for i in prange(npiv, schedule="dynamic", chunksize=1):
            r = ctx.piv[pcol[i]]
            for k in range(ctx.rl[r]):
                buf[ctx.rc[r][k]] = ctx.rv[r][k]
            _sweep(&ctx, buf, pcol[i], pcol[i])
            ol[i] = _write_back(&ctx, buf, pcol[i], &oc[i], &ov[i])
        free(buf)

    out = []
    for i in range(npiv):
        out.append(([oc[i][k] for k in range(ol[i])], [ov[i][k] for k in range(ol[i])]))
        free(oc[i])
        free(ov[i])
    zero = [i for i in range(m) if ctx.zero[i]]

    for i in range(m):
        free(ctx.rc[i])
        free(ctx.rv[i])
    free(ctx.rc)
    free(ctx.rv)
    free(ctx.rl)
    free(ctx.piv)
    free(ctx.zero)
    free(pcol)
    free(oc)
    free(ov)
    free(ol)
    return out, zero


def mersenne_reduce_array(cnp.ndarray values, int b):
    """Vectorized Mersenne reduction of a uint64 array (values < 2^(2b))."""
    cdef uint64_t[:] v = np.ascontiguousarray(values, dtype=np.uint64)
    cdef cnp.ndarray out = np.empty(v.shape[0], dtype=np.uint64)
    cdef uint64_t[:] o = out
    cdef uint64_t p = (1ULL << b) - 1
    cdef Py_ssize_t i
    with nogil:
        for i in range(v.shape[0]):
            o[i] = _mersenne(v[i], b, p)
    return out


def bench_reduce(uint64_t lo, uint64_t hi, int repeats, int b, bint fast):
    """Reduce every integer in ``[lo, hi)`` modulo ``2^b - 1``, ``repeats`` times.

    Returns a checksum so the loop cannot be optimized away.
    """
    cdef uint64_t p = (1ULL << b) - 1
    cdef uint64_t acc = 0, v
    cdef int k
    with nogil:
        for k in range(repeats):
            v = lo
            if fast:
                while v < hi:
                    acc += _mersenne(v * (k + 1), b, p)
                    v += 1
            else:
                while v < hi:
                    acc += (v * (k + 1)) % p
                    v += 1
    return acc
