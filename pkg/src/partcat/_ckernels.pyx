# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels.  Every multiply/add is overflow-checked; on
overflow ``OverflowError`` is raised and the caller retries in exact Python."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64

cdef i64 INT64_MIN = -9223372036854775807 - 1

cdef extern from *:
    """
    static inline int pc_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int pc_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int pc_mul(i64 a, i64 b, i64 *r) nogil
    int pc_add(i64 a, i64 b, i64 *r) nogil


cdef inline i64 _ipow(i64 base, int e):
    cdef i64 r = 1
    cdef int i
    for i in range(e):
        r *= base
    return r


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def realize_codes(labels, int nblocks, i64 N):
    cdef const cnp.int64_t[:] lab = np.asarray(labels, dtype=np.int64)
    cdef int legs = lab.shape[0]
    cdef i64 total = _ipow(N, nblocks)
    cdef cnp.int64_t[:] weights = np.array([N**j for j in range(legs)], dtype=np.int64)
    cdef cnp.int64_t[:] value = np.zeros(max(nblocks, 1), dtype=np.int64)
    out = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[:] o = out
    cdef i64 idx, code
    cdef int b, leg
    for idx in range(total):
        code = 0
        for leg in range(legs):
            code += value[lab[leg]] * weights[leg]
        o[idx] = code
        # odometer increment over block values
        b = 0
        while b < nblocks:
            value[b] += 1
            if value[b] < N:
                break
            value[b] = 0
            b += 1
    out.sort()
    return out


def outer(const cnp.int64_t[:] ca, const cnp.int64_t[:] va, const cnp.int64_t[:] cb, const cnp.int64_t[:] vb, i64 shift):
    cdef Py_ssize_t na = ca.shape[0], nb = cb.shape[0], i, j, t = 0
    codes = np.empty(na * nb, dtype=np.int64)
    vals = np.empty(na * nb, dtype=np.int64)
    cdef cnp.int64_t[:] oc = codes
    cdef cnp.int64_t[:] ov = vals
    cdef i64 prod
    for j in range(nb):
        for i in range(na):
            if pc_mul(va[i], vb[j], &prod):
                raise OverflowError("outer product overflow")
            oc[t] = ca[i] + shift * cb[j]
            ov[t] = prod
            t += 1
    return codes, vals


def permute(const cnp.int64_t[:] codes, const cnp.int64_t[:] vals, i64 N, perm):
    cdef const cnp.int64_t[:] pm = np.asarray(perm, dtype=np.int64)
    cdef int legs = pm.shape[0], j
    cdef Py_ssize_t n = codes.shape[0], i
    cdef cnp.int64_t[:] digits = np.zeros(max(legs, 1), dtype=np.int64)
    new = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[:] nc = new
    cdef i64 c, acc
    for i in range(n):
        c = codes[i]
        for j in range(legs):
            digits[j] = c % N
            c = c // N
        acc = 0
        for j in range(legs - 1, -1, -1):
            acc = acc * N + digits[pm[j]]
        nc[i] = acc
    order = np.argsort(new, kind="stable")
    return new[order], np.asarray(vals)[order]


def sort_reduce(codes, vals):
    order = np.argsort(codes, kind="stable")
    cdef cnp.int64_t[:] c = np.ascontiguousarray(codes[order])
    cdef cnp.int64_t[:] v = np.ascontiguousarray(vals[order])
    cdef Py_ssize_t n = c.shape[0], i, t = 0
    oc_arr = np.empty(n, dtype=np.int64)
    ov_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[:] oc = oc_arr
    cdef cnp.int64_t[:] ov = ov_arr
    cdef i64 cur, s
    i = 0
    while i < n:
        cur = c[i]
        s = 0
        while i < n and c[i] == cur:
            if pc_add(s, v[i], &s):
                raise OverflowError("accumulation overflow")
            i += 1
        if s != 0:
            oc[t] = cur
            ov[t] = s
            t += 1
    return oc_arr[:t].copy(), ov_arr[:t].copy()


cdef _csr(keys, vals, other, i64 size):
    """Group (key, other, val) triples by key into CSR form over 0..size-1."""
    order = np.argsort(keys, kind="stable")
    k = np.asarray(keys)[order]
    indptr = np.searchsorted(k, np.arange(size + 1, dtype=np.int64)).astype(np.int64)
    return indptr, np.ascontiguousarray(np.asarray(other)[order]), np.ascontiguousarray(np.asarray(vals)[order])


def apply_local(const cnp.int64_t[:] codes, const cnp.int64_t[:] vals, i64 N, int pos, int w_in,
                local_in, local_out, local_vals, int w_out):
    cdef i64 low = _ipow(N, pos), mid_size = _ipow(N, w_in), out_size = _ipow(N, w_out)
    indptr_a, lout_a, lval_a = _csr(np.asarray(local_in, dtype=np.int64), np.asarray(local_vals, dtype=np.int64),
                                    np.asarray(local_out, dtype=np.int64), mid_size)
    cdef cnp.int64_t[:] indptr = indptr_a
    cdef cnp.int64_t[:] lout = lout_a
    cdef cnp.int64_t[:] lval = lval_a
    cdef Py_ssize_t n = codes.shape[0], i, t = 0, total = 0
    cdef i64 lo, rest, mid, hi, prod
    cdef Py_ssize_t r
    for i in range(n):
        mid = (codes[i] // low) % mid_size
        total += indptr[mid + 1] - indptr[mid]
    oc_arr = np.empty(total, dtype=np.int64)
    ov_arr = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[:] oc = oc_arr
    cdef cnp.int64_t[:] ov = ov_arr
    for i in range(n):
        lo = codes[i] % low
        rest = codes[i] // low
        mid = rest % mid_size
        hi = rest // mid_size
        for r in range(indptr[mid], indptr[mid + 1]):
            if pc_mul(vals[i], lval[r], &prod):
                raise OverflowError("local contraction overflow")
            oc[t] = lo + low * (lout[r] + out_size * hi)
            ov[t] = prod
            t += 1
    return sort_reduce(oc_arr, ov_arr)


def matmul(const cnp.int64_t[:] ac, const cnp.int64_t[:] av, const cnp.int64_t[:] bc, const cnp.int64_t[:] bv,
           i64 N, int l, int m, int k):
    cdef i64 out_a = _ipow(N, l), mid_b = _ipow(N, m)
    a_codes = np.asarray(ac)
    indptr_a, aout_a, aval_a = _csr(a_codes // out_a, np.asarray(av), a_codes % out_a, mid_b)
    cdef cnp.int64_t[:] indptr = indptr_a
    cdef cnp.int64_t[:] aout = aout_a
    cdef cnp.int64_t[:] aval = aval_a
    cdef Py_ssize_t n = bc.shape[0], i, t = 0, total = 0, r
    cdef i64 mid, inn, prod
    for i in range(n):
        mid = bc[i] % mid_b
        total += indptr[mid + 1] - indptr[mid]
    oc_arr = np.empty(total, dtype=np.int64)
    ov_arr = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[:] oc = oc_arr
    cdef cnp.int64_t[:] ov = ov_arr
    for i in range(n):
        mid = bc[i] % mid_b
        inn = bc[i] // mid_b
        for r in range(indptr[mid], indptr[mid + 1]):
            if pc_mul(aval[r], bv[i], &prod):
                raise OverflowError("composition overflow")
            oc[t] = aout[r] + out_a * inn
            ov[t] = prod
            t += 1
    return sort_reduce(oc_arr, ov_arr)


cdef Py_ssize_t _find(cnp.int64_t[:] keys, Py_ssize_t n, i64 key) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < n and keys[lo] == key:
        return lo
    return -1


cdef Py_ssize_t _make_primitive(cnp.int64_t[:] v, Py_ssize_t n) nogil:
    cdef i64 g = 0
    cdef Py_ssize_t i
    for i in range(n):
        g = _gcd(g, v[i])
    if n and v[0] < 0:
        g = -g
    if g != 1 and g != 0:
        for i in range(n):
            v[i] = v[i] // g
    return n


def reduce_vector(keys, vals, rows):
    """Reduce an integer vector against reduced-echelon integer rows; result is primitive."""
    cdef Py_ssize_t cap = keys.shape[0]
    for rk, rv in rows:
        cap += rk.shape[0]
    ka = np.empty(cap, dtype=np.int64)
    va = np.empty(cap, dtype=np.int64)
    kb = np.empty(cap, dtype=np.int64)
    vb = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[:] k1 = ka
    cdef cnp.int64_t[:] v1 = va
    cdef cnp.int64_t[:] k2 = kb
    cdef cnp.int64_t[:] v2 = vb
    cdef const cnp.int64_t[:] kin = np.ascontiguousarray(keys, dtype=np.int64)
    cdef const cnp.int64_t[:] vin = np.ascontiguousarray(vals, dtype=np.int64)
    cdef Py_ssize_t n = kin.shape[0], i, j, t, m, where
    cdef const cnp.int64_t[:] rk_v
    cdef const cnp.int64_t[:] rv_v
    cdef cnp.int64_t[:] tk
    cdef cnp.int64_t[:] tv
    cdef i64 a, b, x, y
    for i in range(n):
        k1[i] = kin[i]
        v1[i] = vin[i]
    for rk, rv in rows:
        if n == 0:
            break
        rk_v = rk
        rv_v = rv
        m = rk_v.shape[0]
        where = _find(k1, n, rk_v[0])
        if where < 0:
            continue
        b = v1[where]
        a = rv_v[0]
        if b == INT64_MIN or a == INT64_MIN:
            raise OverflowError("reduction overflow")
        # v <- a*v - b*row, merged by key
        i = 0
        j = 0
        t = 0
        while i < n or j < m:
            if j >= m or (i < n and k1[i] < rk_v[j]):
                if pc_mul(a, v1[i], &x):
                    raise OverflowError("reduction overflow")
                k2[t] = k1[i]
                i += 1
            elif i >= n or rk_v[j] < k1[i]:
                if pc_mul(-b, rv_v[j], &x):
                    raise OverflowError("reduction overflow")
                k2[t] = rk_v[j]
                j += 1
            else:
                if pc_mul(a, v1[i], &x) or pc_mul(-b, rv_v[j], &y) or pc_add(x, y, &x):
                    raise OverflowError("reduction overflow")
                k2[t] = k1[i]
                i += 1
                j += 1
            if x != 0:
                v2[t] = x
                t += 1
        n = _make_primitive(v2, t)
        tk = k1
        k1 = k2
        k2 = tk
        tv = v1
        v1 = v2
        v2 = tv
    _make_primitive(v1, n)
    return np.asarray(k1)[:n].copy(), np.asarray(v1)[:n].copy()
