"""Compiled coordinate-descent sweeps (dense and CSC storage)."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def dense_sweep(X, beta, resid, sq_norms, cols):
    for k in range(cols.shape[0]):
        j = cols[k]
        nj = sq_norms[j]
        if nj == 0.0:
            continue
        old = beta[j]
        u = old * nj
        for i in range(X.shape[0]):
            u += X[i, j] * resid[i]
        mag = abs(u) - 1.0
        new = 0.0
        if mag > 0.0:
            new = np.sign(u) * mag / nj
        if new != old:
            step = old - new
            for i in range(X.shape[0]):
                resid[i] += step * X[i, j]
            beta[j] = new


@njit(cache=True, nogil=True)
def sparse_sweep(indptr, indices, data, beta, resid, sq_norms, cols):
    for k in range(cols.shape[0]):
        j = cols[k]
        nj = sq_norms[j]
        if nj == 0.0:
            continue
        old = beta[j]
        u = old * nj
        for p in range(indptr[j], indptr[j + 1]):
            u += data[p] * resid[indices[p]]
        mag = abs(u) - 1.0
        new = 0.0
        if mag > 0.0:
            new = np.sign(u) * mag / nj
        if new != old:
            step = old - new
            for p in range(indptr[j], indptr[j + 1]):
                resid[indices[p]] += step * data[p]
            beta[j] = new
