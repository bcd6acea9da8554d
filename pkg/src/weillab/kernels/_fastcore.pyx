# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see kernels.pure for the reference semantics."""

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memset


cdef inline void _mul_into(int *y, int *x, long *tmp, int *mod, int p, int K) nogil:
    cdef int i, j, c
    for i in range(2 * K - 1):
        tmp[i] = 0
    for i in range(K):
        if y[i]:
            for j in range(K):
                tmp[i + j] += y[i] * x[j]
    for i in range(2 * K - 2, K - 1, -1):
        c = <int> (tmp[i] % p)
        if c:
            for j in range(K):
                tmp[i - K + j] -= (<long> c) * mod[j]
    for i in range(K):
        c = <int> (tmp[i] % p)
        if c < 0:
            c += p
        y[i] = c


cdef int *_to_ints(object seq, int n) except NULL:
    cdef int *out = <int *> malloc(n * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef int i
    for i in range(n):
        out[i] = seq[i]
    return out


def trace_histogram(int p, int K, mod, fdig, Lrows):
    cdef int j = len(Lrows)
    cdef int deg = len(fdig) - 1
    cdef long long total = 1
    cdef int i, t, r, ci, s, idx
    for i in range(K):
        total *= p
    cdef long long hsize = 1
    for i in range(j):
        hsize *= p
    cdef long long *hist = <long long *> calloc(hsize, sizeof(long long))
    if hist == NULL:
        raise MemoryError()
    cdef int *cmod = _to_ints(mod, K)
    cdef int *cf = <int *> malloc((deg + 1) * K * sizeof(int))
    cdef int jal = j if j > 0 else 1
    cdef int *cl = <int *> malloc(jal * K * sizeof(int))
    cdef int *x = <int *> calloc(K, sizeof(int))
    cdef int *y = <int *> malloc(K * sizeof(int))
    cdef long *tmp = <long *> malloc((2 * K) * sizeof(long))
    if cf == NULL or cl == NULL or x == NULL or y == NULL or tmp == NULL:
        raise MemoryError()
    for i in range(deg + 1):
        for t in range(K):
            cf[i * K + t] = fdig[i][t]
    for r in range(j):
        for t in range(K):
            cl[r * K + t] = Lrows[r][t]
    cdef long long step
    with nogil:
        for step in range(total):
            for t in range(K):
                y[t] = cf[deg * K + t]
            for ci in range(deg - 1, -1, -1):
                _mul_into(y, x, tmp, cmod, p, K)
                for t in range(K):
                    s = y[t] + cf[ci * K + t]
                    if s >= p:
                        s -= p
                    y[t] = s
            idx = 0
            for r in range(j - 1, -1, -1):
                s = 0
                for t in range(K):
                    s += cl[r * K + t] * y[t]
                idx = idx * p + s % p
            hist[idx] += 1
            for t in range(K):
                x[t] += 1
                if x[t] == p:
                    x[t] = 0
                else:
                    break
    out = [hist[i] for i in range(hsize)]
    free(hist); free(cmod); free(cf); free(cl); free(x); free(y); free(tmp)
    return out


def zero_count(int p, int K, mod, fdig, Lrows):
    cdef int j = len(Lrows)
    cdef int deg = len(fdig) - 1
    cdef long long total = 1
    cdef int i, t, r, ci, s
    for i in range(K):
        total *= p
    cdef int *cmod = _to_ints(mod, K)
    cdef int *cf = <int *> malloc((deg + 1) * K * sizeof(int))
    cdef int jal = j if j > 0 else 1
    cdef int *cl = <int *> malloc(jal * K * sizeof(int))
    cdef int *x = <int *> calloc(K, sizeof(int))
    cdef int *y = <int *> malloc(K * sizeof(int))
    cdef long *tmp = <long *> malloc((2 * K) * sizeof(long))
    if cf == NULL or cl == NULL or x == NULL or y == NULL or tmp == NULL:
        raise MemoryError()
    for i in range(deg + 1):
        for t in range(K):
            cf[i * K + t] = fdig[i][t]
    for r in range(j):
        for t in range(K):
            cl[r * K + t] = Lrows[r][t]
    cdef long long count = 0
    cdef long long step
    cdef bint ok
    with nogil:
        for step in range(total):
            for t in range(K):
                y[t] = cf[deg * K + t]
            for ci in range(deg - 1, -1, -1):
                _mul_into(y, x, tmp, cmod, p, K)
                for t in range(K):
                    s = y[t] + cf[ci * K + t]
                    if s >= p:
                        s -= p
                    y[t] = s
            ok = True
            for r in range(j):
                s = 0
                for t in range(K):
                    s += cl[r * K + t] * y[t]
                if s % p:
                    ok = False
                    break
            if ok:
                count += 1
            for t in range(K):
                x[t] += 1
                if x[t] == p:
                    x[t] = 0
                else:
                    break
    free(cmod); free(cf); free(cl); free(x); free(y); free(tmp)
    return count
