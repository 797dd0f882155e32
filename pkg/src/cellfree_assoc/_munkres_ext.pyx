# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Munkres kernel; mirrors ``_munkres_py.munkres_min`` step for step."""

import numpy as np


def munkres_min(cost):
    """Minimum-cost assignment of every row of a ``K x J`` matrix, ``K <= J``."""
    cdef double[:, ::1] C = np.array(cost, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t K = C.shape[0]
    cdef Py_ssize_t J = C.shape[1]
    out = np.full(K, -1, dtype=np.int64)
    if K == 0:
        return out

    cdef long long[::1] star_col = out
    cdef long long[::1] star_row = np.full(J, -1, dtype=np.int64)
    cdef long long[::1] prime_col = np.full(K, -1, dtype=np.int64)
    cdef unsigned char[::1] row_cov = np.zeros(K, dtype=np.uint8)
    cdef unsigned char[::1] col_cov = np.zeros(J, dtype=np.uint8)
    cdef Py_ssize_t i, j, r, zi, zj, ncov
    cdef double f, v
    cdef bint found

    for i in range(K):
        f = C[i, 0]
        for j in range(1, J):
            if C[i, j] < f:
                f = C[i, j]
        for j in range(J):
            C[i, j] = C[i, j] - f
    if K == J:
        for j in range(J):
            f = C[0, j]
            for i in range(1, K):
                if C[i, j] < f:
                    f = C[i, j]
            for i in range(K):
                C[i, j] = C[i, j] - f

    for i in range(K):
        for j in range(J):
            if C[i, j] == 0.0 and star_row[j] < 0:
                star_col[i] = j
                star_row[j] = i
                break

    ncov = 0
    for j in range(J):
        if star_row[j] >= 0:
            col_cov[j] = 1
            ncov += 1

    while ncov < K:
        while True:
            found = False
            for i in range(K):
                if row_cov[i]:
                    continue
                for j in range(J):
                    if not col_cov[j] and C[i, j] == 0.0:
                        zi = i
                        zj = j
                        found = True
                        break
                if found:
                    break
            if not found:
                f = 0.0
                found = False
                for i in range(K):
                    if row_cov[i]:
                        continue
                    for j in range(J):
                        if not col_cov[j]:
                            v = C[i, j]
                            if not found or v < f:
                                f = v
                                found = True
                for i in range(K):
                    for j in range(J):
                        if row_cov[i]:
                            if col_cov[j]:
                                C[i, j] = C[i, j] + f
                        elif not col_cov[j]:
                            C[i, j] = C[i, j] - f
                continue
            prime_col[zi] = zj
            if star_col[zi] >= 0:
                row_cov[zi] = 1
                col_cov[star_col[zi]] = 0
            else:
                break

        i = zi
        j = zj
        while True:
            r = star_row[j]
            star_row[j] = i
            star_col[i] = j
            if r < 0:
                break
            i = r
            j = prime_col[r]

        ncov = 0
        for i in range(K):
            prime_col[i] = -1
            row_cov[i] = 0
        for j in range(J):
            if star_row[j] >= 0:
                col_cov[j] = 1
                ncov += 1
            else:
                col_cov[j] = 0
    return out
