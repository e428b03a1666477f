# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 versions of the kernels in ``_pykernels``.

Every arithmetic step is overflow-checked; on overflow the kernel raises
``OverflowError`` and the dispatcher in ``kernels`` reruns the pure-Python
version on arbitrary-precision ints.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64

cdef extern from *:
    """
    static inline int tp_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int tp_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int tp_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    /* (a*b - c*d) / e in 128 bits; the exact quotient must fit in 64 */
    static inline int tp_bareiss(long long a, long long b, long long c, long long d,
                                 long long e, long long *r) {
        if (a == LLONG_MIN || b == LLONG_MIN || c == LLONG_MIN || d == LLONG_MIN)
            return 1;
        __int128 t = (__int128)a * b - (__int128)c * d;
        t /= e;
        if (t > LLONG_MAX || t < LLONG_MIN)
            return 1;
        *r = (long long)t;
        return 0;
    }
    """
    int tp_mul(i64 a, i64 b, i64 *r) nogil
    int tp_sub(i64 a, i64 b, i64 *r) nogil
    int tp_add(i64 a, i64 b, i64 *r) nogil
    int tp_bareiss(i64 a, i64 b, i64 c, i64 d, i64 e, i64 *r) nogil


cdef inline i64 _floordiv(i64 a, i64 b) nogil:
    cdef i64 q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline i64 _iabs(i64 a) nogil:
    return -a if a < 0 else a


cdef i64 _LIMIT = (<i64>1) << 61


cdef i64* _load(rows, int m, int n) except NULL:
    cdef i64* a = <i64*> malloc(max(m * n, 1) * sizeof(i64))
    if a == NULL:
        raise MemoryError()
    cdef int i, j
    cdef object v
    for i in range(m):
        r = rows[i]
        for j in range(n):
            v = r[j]
            if v >= _LIMIT or v <= -_LIMIT:
                free(a)
                raise OverflowError("entry exceeds int64 fast path")
            a[i * n + j] = v
    return a


cdef object _dump(i64* a, int m, int n):
    return [[a[i * n + j] for j in range(n)] for i in range(m)]


cdef int _axpy(i64* dst, i64* src, i64 q, int len_, int stride) nogil:
    # dst[k*stride] -= q * src[k*stride]; returns 1 on overflow
    cdef int k
    cdef i64 t
    for k in range(len_):
        if tp_mul(q, src[k * stride], &t):
            return 1
        if tp_sub(dst[k * stride], t, &dst[k * stride]):
            return 1
    return 0


cdef inline i64 _nearest(i64 a, i64 p) nogil:
    # round(a / p) for p > 0 without forming 2a
    cdef i64 q = _floordiv(a, p)
    cdef i64 r = a - q * p
    if r >= p - r:
        q += 1
    return q


def smith(rows, int m, int n):
    cdef i64* a = _load(rows, m, n)
    cdef i64* U = <i64*> malloc(max(m * m, 1) * sizeof(i64))
    cdef i64* V = <i64*> malloc(max(n * n, 1) * sizeof(i64))
    cdef int i, j, t, bi, bj, bad, kind
    cdef i64 p, v, best, tmp, q
    cdef int ovf = 0
    for i in range(m):
        for j in range(m):
            U[i * m + j] = 1 if i == j else 0
    for i in range(n):
        for j in range(n):
            V[i * n + j] = 1 if i == j else 0
    try:
        for t in range(min(m, n)):
            best = 0
            bi = -1
            bj = -1
            for i in range(t, m):
                for j in range(t, n):
                    v = _iabs(a[i * n + j])
                    if v and (best == 0 or v < best):
                        best = v
                        bi = i
                        bj = j
            if bi < 0:
                break
            _swap_rows(a, U, m, n, t, bi)
            _swap_cols(a, V, m, n, t, bj)
            while True:
                p = a[t * n + t]
                if p < 0:
                    p = -p
                    for j in range(n):
                        a[t * n + j] = -a[t * n + j]
                    for j in range(m):
                        U[t * m + j] = -U[t * m + j]
                for i in range(t + 1, m):
                    q = _nearest(a[i * n + t], p)
                    if q:
                        ovf |= _axpy(&a[i * n], &a[t * n], q, n, 1)
                        ovf |= _axpy(&U[i * m], &U[t * m], q, m, 1)
                for j in range(t + 1, n):
                    q = _nearest(a[t * n + j], p)
                    if q:
                        ovf |= _axpy(&a[j], &a[t], q, m, n)
                        ovf |= _axpy(&V[j], &V[t], q, n, n)
                if ovf:
                    raise OverflowError("smith: int64 overflow")
                best = 0
                bi = -1
                kind = 0
                for i in range(t + 1, m):
                    v = _iabs(a[i * n + t])
                    if v and (best == 0 or v < best):
                        best = v
                        bi = i
                        kind = 1
                for j in range(t + 1, n):
                    v = _iabs(a[t * n + j])
                    if v and (best == 0 or v < best):
                        best = v
                        bi = j
                        kind = 2
                if kind == 1:
                    _swap_rows(a, U, m, n, t, bi)
                    continue
                if kind == 2:
                    _swap_cols(a, V, m, n, t, bi)
                    continue
                bad = -1
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i * n + j] % p:
                            bad = i
                            break
                    if bad >= 0:
                        break
                if bad < 0:
                    break
                ovf |= _axpy(&a[t * n], &a[bad * n], -1, n, 1)
                ovf |= _axpy(&U[t * m], &U[bad * m], -1, m, 1)
                if ovf:
                    raise OverflowError("smith: int64 overflow")
        return _dump(U, m, m), _dump(a, m, n), _dump(V, n, n)
    finally:
        free(a)
        free(U)
        free(V)


cdef void _swap_rows(i64* a, i64* U, int m, int n, int i, int j) nogil:
    cdef int k
    cdef i64 tmp
    if i == j:
        return
    for k in range(n):
        tmp = a[i * n + k]
        a[i * n + k] = a[j * n + k]
        a[j * n + k] = tmp
    for k in range(m):
        tmp = U[i * m + k]
        U[i * m + k] = U[j * m + k]
        U[j * m + k] = tmp


cdef void _swap_cols(i64* a, i64* V, int m, int n, int i, int j) nogil:
    cdef int k
    cdef i64 tmp
    if i == j:
        return
    for k in range(m):
        tmp = a[k * n + i]
        a[k * n + i] = a[k * n + j]
        a[k * n + j] = tmp
    for k in range(n):
        tmp = V[k * n + i]
        V[k * n + i] = V[k * n + j]
        V[k * n + j] = tmp


cdef int _rank_inplace(i64* a, int m, int n, int* rank_out) nogil:
    # fraction-free elimination; returns 1 on overflow
    cdef int r = 0, c, i, j, piv
    cdef i64 prev = 1, pc, f, t1, tmp
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i * n + c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = a[r * n + j]
                a[r * n + j] = a[piv * n + j]
                a[piv * n + j] = tmp
        pc = a[r * n + c]
        for i in range(r + 1, m):
            f = a[i * n + c]
            for j in range(c + 1, n):
                if tp_bareiss(pc, a[i * n + j], f, a[r * n + j], prev, &t1):
                    return 1
                a[i * n + j] = t1
            a[i * n + c] = 0
        prev = pc
        r += 1
    rank_out[0] = r
    return 0


def bareiss_rank(rows):
    cdef int m = len(rows)
    if m == 0:
        return 0
    cdef int n = len(rows[0])
    cdef i64* a = _load(rows, m, n)
    cdef int r = 0
    cdef int ovf
    try:
        ovf = _rank_inplace(a, m, n, &r)
        if ovf:
            raise OverflowError("rank: int64 overflow")
        return r
    finally:
        free(a)


def min_partition(classes, weights, unit):
    cdef int k = len(classes)
    cdef int width = len(classes[0]) if k else 0
    if k == 0:
        return (), 0
    cdef i64* cls = _load(classes, k, width)
    cdef i64* w = NULL
    cdef i64* sums = <i64*> malloc(max(k * width, 1) * sizeof(i64))
    cdef i64* mins = <i64*> malloc(k * sizeof(i64))
    cdef int* rgs = <int*> malloc(k * sizeof(int))
    cdef int* maxes = <int*> malloc(k * sizeof(int))
    cdef int* best_rgs = <int*> malloc(k * sizeof(int))
    cdef i64 u
    cdef int i, j, t, b, nb, r, better
    cdef int best_nb = 0, best_r = 0, have_best = 0
    cdef i64 obj, best_obj = 0, tot, tmp
    try:
        w = _load([weights], 1, k)
        if unit >= _LIMIT:
            raise OverflowError("unit exceeds int64 fast path")
        u = unit
        for i in range(k):
            rgs[i] = 0
            maxes[i] = 0
        while True:
            nb = maxes[k - 1] + 1
            for i in range(nb * width):
                sums[i] = 0
            for i in range(nb):
                mins[i] = 0
            for i in range(k):
                b = rgs[i]
                for t in range(width):
                    if tp_add(sums[b * width + t], cls[i * width + t], &sums[b * width + t]):
                        raise OverflowError("block sum overflow")
                if mins[b] == 0 or w[i] < mins[b]:
                    mins[b] = w[i]
            r = 0
            if width:
                if _rank_inplace(sums, nb, width, &r):
                    raise OverflowError("rank: int64 overflow")
            if tp_mul(<i64> r, u, &obj):
                raise OverflowError("objective overflow")
            tot = 0
            for i in range(nb):
                if tp_add(tot, mins[i], &tot):
                    raise OverflowError("objective overflow")
            if tp_sub(obj, tot, &obj):
                raise OverflowError("objective overflow")
            better = 0
            if not have_best or obj < best_obj:
                better = 1
            elif obj == best_obj and nb < best_nb:
                better = 1
            # equal objective and block count: enumeration order is lex, keep the first
            if better:
                have_best = 1
                best_obj = obj
                best_nb = nb
                best_r = r
                for i in range(k):
                    best_rgs[i] = rgs[i]
            i = k - 1
            while i > 0 and rgs[i] == maxes[i - 1] + 1:
                i -= 1
            if i == 0:
                break
            rgs[i] += 1
            maxes[i] = maxes[i - 1] if maxes[i - 1] > rgs[i] else rgs[i]
            for j in range(i + 1, k):
                rgs[j] = 0
                maxes[j] = maxes[i]
        return tuple(best_rgs[i] for i in range(k)), best_r
    finally:
        free(cls)
        if w != NULL:
            free(w)
        free(sums)
        free(mins)
        free(rgs)
        free(maxes)
        free(best_rgs)
