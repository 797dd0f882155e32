"""Pure-Python Munkres kernel, used when the compiled extension is unavailable.

Must stay step-for-step identical to ``_munkres_ext.pyx`` so both backends
return the same assignment, including on ties.
"""

import numpy as np


def munkres_min(cost):
    """Minimum-cost assignment of every row of a ``K x J`` matrix, ``K <= J``.

    Returns an int64 array holding the column assigned to each row.
    """
    C = np.array(cost, dtype=np.float64, order="C", copy=True)
    K, J = C.shape
    if K == 0:
        return np.empty(0, dtype=np.int64)

    C -= C.min(axis=1, keepdims=True)
    if K == J:
        # column reduction only preserves the optimum when every column is used
        C -= C.min(axis=0, keepdims=True)

    star_col = np.full(K, -1, dtype=np.int64)
    star_row = np.full(J, -1, dtype=np.int64)
    prime_col = np.full(K, -1, dtype=np.int64)
    for i in range(K):
        for j in np.flatnonzero(C[i] == 0.0):
            if star_row[j] < 0:
                star_col[i] = j
                star_row[j] = i
                break

    row_cov = np.zeros(K, dtype=bool)
    col_cov = star_row >= 0
    while col_cov.sum() < K:
        while True:
            free = (C == 0.0) & ~row_cov[:, None] & ~col_cov[None, :]
            hits = np.flatnonzero(free)
            if hits.size == 0:
                rows = ~row_cov
                cols = ~col_cov
                f = C[np.ix_(rows, cols)].min()
                C[np.ix_(rows, cols)] -= f
                C[np.ix_(row_cov, col_cov)] += f
                continue
            i, j = divmod(int(hits[0]), J)
            prime_col[i] = j
            if star_col[i] >= 0:
                row_cov[i] = True
                col_cov[star_col[i]] = False
            else:
                break
        # flip the alternating prime/star path starting at the unmatched prime
        while True:
            r = star_row[j]
            star_row[j] = i
            star_col[i] = j
            if r < 0:
                break
            i, j = r, prime_col[r]
        prime_col[:] = -1
        row_cov[:] = False
        col_cov = star_row >= 0
    return star_col
