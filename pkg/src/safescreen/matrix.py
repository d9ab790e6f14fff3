"""Column-oriented design matrix shared by the solver and the screening rules.

Two storages are supported: a dense column-major array and compressed sparse
columns (``indptr``/``indices``/``data``, row indices strictly increasing in
each column).  Only column access is offered; coordinate descent and the
screening tests both iterate over features.
"""

from collections import Counter

import numpy as np
import scipy.sparse as sp


class DesignMatrix:
    """Immutable feature matrix with cached squared column norms.

    Build it with :meth:`from_dense`, :meth:`from_columns` or
    :meth:`from_scipy`.  ``kernel_calls`` counts the full matrix-vector
    products performed (``mat_vec`` and ``mat_t_vec``); it exists so callers
    can audit the cost of a screening event.
    """

    def __init__(self, n_rows, n_cols, dense=None, indptr=None, indices=None, data=None):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.kernel_calls = Counter()
        if dense is not None:
            dense = np.asfortranarray(dense, dtype=np.float64)
            if dense.shape != (self.n_rows, self.n_cols):
                raise ValueError(f"dense block has shape {dense.shape}, expected {(self.n_rows, self.n_cols)}")
            dense.setflags(write=False)
            self._dense = dense
            self.indptr = self.indices = self.data = None
            self.col_sq_norms = np.einsum("ij,ij->j", dense, dense)
        else:
            indptr = np.ascontiguousarray(indptr, dtype=np.int64)
            indices = np.ascontiguousarray(indices, dtype=np.int64)
            data = np.ascontiguousarray(data, dtype=np.float64)
            _check_csc(self.n_rows, self.n_cols, indptr, indices, data)
            for arr in (indptr, indices, data):
                arr.setflags(write=False)
            self._dense = None
            self.indptr, self.indices, self.data = indptr, indices, data
            self._col_ids = np.repeat(np.arange(self.n_cols), np.diff(indptr))
            self.col_sq_norms = np.bincount(self._col_ids, weights=data * data, minlength=self.n_cols).astype(np.float64)
        self.col_sq_norms.setflags(write=False)
        self.col_norms = np.sqrt(self.col_sq_norms)
        self.col_norms.setflags(write=False)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dense(cls, array):
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError("design matrix must be two-dimensional")
        return cls(array.shape[0], array.shape[1], dense=array)

    @classmethod
    def from_columns(cls, n_rows, columns):
        """Build sparse storage from ``[(row_indices, values), ...]``, one pair per column."""
        indptr = [0]
        rows, vals = [], []
        for r, v in columns:
            r = np.asarray(r, dtype=np.int64)
            v = np.asarray(v, dtype=np.float64)
            if r.shape != v.shape:
                raise ValueError("row index and value lists differ in length")
            rows.append(r)
            vals.append(v)
            indptr.append(indptr[-1] + len(r))
        indices = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        data = np.concatenate(vals) if vals else np.zeros(0)
        return cls(n_rows, len(columns), indptr=indptr, indices=indices, data=data)

    @classmethod
    def from_scipy(cls, matrix):
        csc = sp.csc_matrix(matrix, dtype=np.float64)
        csc.sum_duplicates()
        csc.sort_indices()
        return cls(csc.shape[0], csc.shape[1], indptr=csc.indptr, indices=csc.indices, data=csc.data)

    # -- properties -------------------------------------------------------

    @property
    def is_sparse(self):
        return self._dense is None

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        if self.is_sparse:
            return int(self.indptr[-1])
        return int(np.count_nonzero(self._dense))

    def to_dense(self):
        if not self.is_sparse:
            return np.array(self._dense)
        out = np.zeros((self.n_rows, self.n_cols), order="F")
        out[self.indices, self._col_ids] = self.data
        return out

    def to_sparse(self):
        return DesignMatrix.from_scipy(sp.csc_matrix(self.to_dense()))

    def column(self, j):
        """Column ``j`` as a dense vector (a copy)."""
        j = self._check_col(j)
        if not self.is_sparse:
            return np.array(self._dense[:, j])
        out = np.zeros(self.n_rows)
        lo, hi = self.indptr[j], self.indptr[j + 1]
        out[self.indices[lo:hi]] = self.data[lo:hi]
        return out

    # -- kernels ----------------------------------------------------------

    def col_dot(self, j, v):
        """Return ``x_j^T v``."""
        j = self._check_col(j)
        v = self._check_rows(v)
        if not self.is_sparse:
            return float(self._dense[:, j] @ v)
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return float(self.data[lo:hi] @ v[self.indices[lo:hi]])

    def axpy_col(self, j, a, v):
        """In place ``v += a * x_j``; sparse storage touches only the support of column j."""
        j = self._check_col(j)
        if len(v) != self.n_rows:
            raise ValueError(f"vector has length {len(v)}, expected {self.n_rows}")
        if a == 0.0:
            return
        if not self.is_sparse:
            v += a * self._dense[:, j]
        else:
            lo, hi = self.indptr[j], self.indptr[j + 1]
            v[self.indices[lo:hi]] += a * self.data[lo:hi]

    def mat_t_vec(self, v):
        """Return ``X^T v``."""
        v = self._check_rows(v)
        self.kernel_calls["mat_t_vec"] += 1
        if not self.is_sparse:
            return self._dense.T @ v
        return np.bincount(self._col_ids, weights=self.data * v[self.indices], minlength=self.n_cols)

    def mat_vec(self, beta):
        """Return ``X beta``."""
        beta = np.asarray(beta, dtype=np.float64)
        if beta.shape != (self.n_cols,):
            raise ValueError(f"coefficient vector has shape {beta.shape}, expected ({self.n_cols},)")
        self.kernel_calls["mat_vec"] += 1
        if not self.is_sparse:
            return self._dense @ beta
        return np.bincount(self.indices, weights=self.data * beta[self._col_ids], minlength=self.n_rows)

    def _check_col(self, j):
        j = int(j)
        if not 0 <= j < self.n_cols:
            raise IndexError(f"column {j} out of range for {self.n_cols} columns")
        return j

    def _check_rows(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n_rows,):
            raise ValueError(f"vector has shape {v.shape}, expected ({self.n_rows},)")
        return v

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"DesignMatrix({self.n_rows}x{self.n_cols}, {kind}, nnz={self.nnz})"


def _check_csc(n_rows, n_cols, indptr, indices, data):
    if indptr.shape != (n_cols + 1,) or indptr[0] != 0:
        raise ValueError("indptr must have length n_cols + 1 and start at 0")
    if np.any(np.diff(indptr) < 0):
        raise ValueError("indptr must be nondecreasing")
    if indices.shape != data.shape or len(indices) != indptr[-1]:
        raise ValueError("indices/data length does not match indptr")
    if len(indices):
        if indices.min() < 0 or indices.max() >= n_rows:
            raise ValueError("row index out of range")
        col_ids = np.repeat(np.arange(n_cols), np.diff(indptr))
        same_col = col_ids[1:] == col_ids[:-1]
        if np.any(np.diff(indices)[same_col] <= 0):
            raise ValueError("row indices must be strictly increasing within a column")
