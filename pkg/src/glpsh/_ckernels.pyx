# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_pykernels`` for the reference versions."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef Py_ssize_t _bsearch(const long long[:] keys, long long k) nogil:
    cdef Py_ssize_t lo = 0, hi = keys.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < k:
            lo = mid + 1
        else:
            hi = mid
    return lo


def mul_table(mats, keys, long long q, add, mul, int n):
    cdef const long long[:, :] M = np.ascontiguousarray(mats, dtype=np.int64)
    cdef const long long[:] K = np.ascontiguousarray(keys, dtype=np.int64)
    cdef const long long[:, :] A = np.ascontiguousarray(add, dtype=np.int64)
    cdef const long long[:, :] U = np.ascontiguousarray(mul, dtype=np.int64)
    cdef Py_ssize_t m = M.shape[0]
    out = np.zeros((m, m), dtype=np.int32)
    cdef int[:, :] T = out
    cdef Py_ssize_t i, j, r, c, t
    cdef long long s, key
    if n == 0:
        return out
    with nogil:
        for i in range(m):
            for j in range(m):
                key = 0
                for r in range(n):
                    for c in range(n):
                        s = 0
                        for t in range(n):
                            s = A[s, U[M[i, r * n + t], M[j, t * n + c]]]
                        key = key * q + s
                T[i, j] = <int>_bsearch(K, key)
    return out


def closure(table, gens, Py_ssize_t identity):
    cdef const int[:, :] T = np.ascontiguousarray(table, dtype=np.int32)
    cdef const long long[:] G = np.ascontiguousarray(gens, dtype=np.int64)
    cdef Py_ssize_t m = T.shape[0], ng = G.shape[0]
    seen_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[:] seen = seen_arr
    queue_arr = np.empty(m, dtype=np.int64)
    cdef long long[:] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 1, k
    cdef long long x, y
    seen[identity] = 1
    queue[0] = identity
    with nogil:
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(ng):
                y = T[x, G[k]]
                if not seen[y]:
                    seen[y] = 1
                    queue[tail] = y
                    tail += 1
    return np.flatnonzero(seen_arr).astype(np.int64)


def double_cosets(table, left, right):
    cdef const int[:, :] T = np.ascontiguousarray(table, dtype=np.int32)
    cdef const long long[:] L = np.ascontiguousarray(left, dtype=np.int64)
    cdef const long long[:] R = np.ascontiguousarray(right, dtype=np.int64)
    cdef Py_ssize_t m = T.shape[0], nl = L.shape[0], nr = R.shape[0]
    labels_arr = np.full(m, -1, dtype=np.int64)
    cdef long long[:] labels = labels_arr
    reps = []
    cdef Py_ssize_t g, a, b
    cdef long long kg, lab = 0
    for g in range(m):
        if labels[g] >= 0:
            continue
        with nogil:
            for a in range(nl):
                kg = T[L[a], g]
                for b in range(nr):
                    labels[T[kg, R[b]]] = lab
        reps.append(g)
        lab += 1
    return labels_arr, np.array(reps, dtype=np.int64)


def orbit_labels(perms):
    cdef const long long[:, :] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t k = P.shape[0], m = P.shape[1]
    labels_arr = np.full(m, -1, dtype=np.int64)
    cdef long long[:] labels = labels_arr
    queue_arr = np.empty(max(m, 1), dtype=np.int64)
    cdef long long[:] queue = queue_arr
    cdef Py_ssize_t x, head, tail, i
    cdef long long y, z
    with nogil:
        for x in range(m):
            if labels[x] >= 0:
                continue
            labels[x] = x
            queue[0] = x
            head = 0
            tail = 1
            while head < tail:
                y = queue[head]
                head += 1
                for i in range(k):
                    z = P[i, y]
                    if labels[z] < 0:
                        labels[z] = x
                        queue[tail] = z
                        tail += 1
    return labels_arr
