"""Dataset ingestion (LibSVM, CSV) and a seeded synthetic generator."""

import csv
import hashlib
from dataclasses import dataclass

import numpy as np

from .matrix import DesignMatrix


class DataError(ValueError):
    """Malformed input file; the message carries the location."""


@dataclass
class Dataset:
    X: DesignMatrix
    y: np.ndarray
    source: str

    def __post_init__(self):
        if self.X.n_rows != len(self.y):
            raise DataError(f"{self.X.n_rows} rows in X but {len(self.y)} responses")

    @property
    def is_empty(self):
        return self.X.n_rows == 0 or self.X.n_cols == 0

    def digest(self):
        """Dimensions, nonzero count and a SHA-256 over the canonical column storage."""
        h = hashlib.sha256()
        X = self.X if self.X.is_sparse else self.X.to_sparse()
        h.update(np.asarray([X.n_rows, X.n_cols], dtype="<i8").tobytes())
        for arr, dt in ((X.indptr, "<i8"), (X.indices, "<i8"), (X.data, "<f8"), (self.y, "<f8")):
            h.update(np.ascontiguousarray(arr, dtype=dt).tobytes())
        return {
            "n_samples": self.X.n_rows,
            "n_features": self.X.n_cols,
            "nnz": X.nnz,
            "storage": "sparse" if self.X.is_sparse else "dense",
            "sha256": h.hexdigest(),
            "source": self.source,
        }


def load_libsvm(path, n_features=None):
    """Parse ``label idx:val ...`` lines (1-based, strictly increasing indices).

    Rows become samples; the file is transposed into column storage.
    """
    labels, rows, cols, vals = [], [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                label = float(tokens[0])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad label {tokens[0]!r}") from None
            row = len(labels)
            labels.append(label)
            prev = 0
            for tok in tokens[1:]:
                idx, sep, val = tok.partition(":")
                try:
                    if not sep:
                        raise ValueError
                    j = int(idx)
                    v = float(val)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: malformed token {tok!r}") from None
                if j < 1:
                    raise DataError(f"{path}:{lineno}: feature index {j} < 1")
                if j <= prev:
                    raise DataError(f"{path}:{lineno}: feature indices not strictly increasing at {tok!r}")
                prev = j
                rows.append(row)
                cols.append(j - 1)
                vals.append(v)
    n = len(labels)
    d = max(cols) + 1 if cols else 0
    if n_features is not None:
        if n_features < d:
            raise DataError(f"{path}: found feature {d} but n_features={n_features}")
        d = n_features
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    # stable sort by column keeps rows increasing inside each column
    order = np.argsort(cols, kind="stable")
    indptr = np.zeros(d + 1, dtype=np.int64)
    np.cumsum(np.bincount(cols, minlength=d), out=indptr[1:])
    X = DesignMatrix(n, d, indptr=indptr, indices=rows[order], data=vals[order])
    return Dataset(X, np.asarray(labels, dtype=np.float64), str(path))


def load_csv(path, has_header=False):
    """Dense dataset from a rectangular numeric CSV whose first column is ``y``."""
    table = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, rec in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not rec or all(not c.strip() for c in rec):
                continue
            if table and len(rec) != len(table[0]):
                raise DataError(f"{path}:{lineno}: expected {len(table[0])} fields, found {len(rec)}")
            row = []
            for col, cell in enumerate(rec, start=1):
                try:
                    row.append(float(cell))
                except ValueError:
                    raise DataError(f"{path}:{lineno}:{col}: non-numeric cell {cell!r}") from None
            table.append(row)
    arr = np.asarray(table, dtype=np.float64).reshape(len(table), -1) if table else np.zeros((0, 1))
    return Dataset(DesignMatrix.from_dense(arr[:, 1:]), arr[:, 0].copy(), str(path))


def generate(n, d, density=1.0, nnz_true=10, noise_sd=0.1, seed=0):
    """Gaussian design (optionally sparsified), ``nnz_true``-sparse truth, Gaussian noise.

    Same arguments give a bitwise-identical dataset.  ``density == 1`` keeps
    dense storage.
    """
    if n < 1 or d < 1 or nnz_true < 0:
        raise ValueError("n and d must be positive and nnz_true nonnegative")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, d))
    if density < 1:
        A *= rng.random((n, d)) < density
    beta = np.zeros(d)
    support = rng.choice(d, size=min(nnz_true, d), replace=False)
    beta[support] = rng.standard_normal(len(support))
    y = A @ beta + noise_sd * rng.standard_normal(n)
    X = DesignMatrix.from_dense(A) if density == 1 else DesignMatrix.from_scipy(A)
    src = f"generate(n={n}, d={d}, density={density}, nnz_true={nnz_true}, noise_sd={noise_sd}, seed={seed})"
    return Dataset(X, y, src)
