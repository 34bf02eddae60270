# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Linear operators, model problems and MatrixMarket files.

Every operator exposes the matrix-free contract ``matvec(v) -> A v`` plus
its ``diagonal()``. Operators are immutable once built and may be applied
from several threads at once.

The finite difference Laplacians use the unit-grid convention: diagonal 4
(2D) or 6 (3D) and off-diagonal -1. Grid point ``(ix, iy, iz)`` has index
``ix + nx * iy + nx**2 * iz``.
"""

import logging
import sys
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.sparse as sp
from scipy.io import mmwrite

from . import config
from .errors import (
    AsymmetricMatrixError,
    DimensionMismatchError,
    InvalidMatrixError,
    InvalidParameterError,
    MatrixMarketParseError,
    NonPositiveDiagonalError,
    ProblemSizeError,
)
from .storage import FileStorage, pyfs_storage_factory

logger = logging.getLogger(__name__)

KINDS = {"2d": 2, "3d": 3}
"""Model problem kinds and their dimension."""


def _ndim(kind):
    """Return the dimension of a model problem kind."""
    try:
        return KINDS[str(kind).lower()]
    except KeyError:
        raise InvalidParameterError(
            "Unknown model problem kind {0!r} (expected 2d or 3d).".format(kind)
        )


def _problem_size(kind, nx):
    """Compute ``nx**d`` and guard it against the addressable size."""
    d = _ndim(kind)
    if int(nx) < 1:
        raise InvalidParameterError("nx must be at least 1, got {0}.".format(nx))
    n = int(nx) ** d
    if n > sys.maxsize:
        raise ProblemSizeError(n=n, limit=sys.maxsize)
    return d, n


class LinearOperator(object):
    """Symmetric positive definite action ``v -> A v`` of dimension ``n``."""

    def __init__(self, n):
        """Initialize operator."""
        self.n = int(n)

    @property
    def shape(self):
        """Shape of the operator."""
        return (self.n, self.n)

    def matvec(self, v):
        """Apply the operator to a vector of the right length."""
        raise NotImplementedError

    def diagonal(self):
        """Return the diagonal entries."""
        raise NotImplementedError

    def to_dense(self):
        """Materialize the operator column by column (small ``n`` only)."""
        return np.column_stack([self.matvec(e) for e in np.eye(self.n)])


class IdentityOperator(LinearOperator):
    """Identity of dimension ``n``."""

    def matvec(self, v):
        """Return a copy of ``v``."""
        return np.array(v, dtype=np.float64)

    def diagonal(self):
        """Return ones."""
        return np.ones(self.n)


class DiagonalOperator(LinearOperator):
    """Diagonal matrix given by its entries."""

    def __init__(self, diag):
        """Initialize operator."""
        self.diag = np.array(diag, dtype=np.float64)
        self.diag.flags.writeable = False
        super(DiagonalOperator, self).__init__(self.diag.size)

    def matvec(self, v):
        """Scale ``v`` entrywise."""
        return self.diag * v

    def diagonal(self):
        """Return the entries."""
        return self.diag.copy()


class DenseOperator(LinearOperator):
    """Dense symmetric matrix, for small problems and test oracles."""

    def __init__(self, matrix, rtol=config.NC_LOAD_SYMMETRY_RTOL):
        """Initialize operator.

        :param matrix: Square array-like.
        :param rtol: Tolerated asymmetry relative to ``max(abs(a_ij))``.
        """
        a = np.array(matrix, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidMatrixError(
                "Expected a square matrix, got {0}.".format(a.shape)
            )
        deviation = np.abs(a - a.T).max() if a.size else 0.0
        if deviation > rtol * (np.abs(a).max() if a.size else 0.0):
            raise AsymmetricMatrixError(deviation=deviation)
        a.flags.writeable = False
        self.matrix = a
        super(DenseOperator, self).__init__(a.shape[0])

    def matvec(self, v):
        """Multiply by the matrix."""
        return self.matrix @ v

    def diagonal(self):
        """Return the diagonal."""
        return np.diag(self.matrix).copy()

    def to_dense(self):
        """Return a copy of the matrix."""
        return self.matrix.copy()


class CsrMatrix(LinearOperator):
    """Symmetric sparse matrix in compressed sparse row storage.

    The arrays are validated on construction: ``row_ptr`` starts at 0, is
    nondecreasing and ends at ``nnz``; column indices are strictly
    increasing within each row and lie in ``[0, n)``; the matrix is
    symmetric within ``rtol * max(abs(a_ij))``.

    With ``threads > 1`` the product is split in contiguous row blocks over
    a thread pool. The pool is created with the matrix and reused by every
    product until :meth:`close`. Every row is still summed by a single
    thread in column order, so the result is bitwise identical to the
    serial product.
    """

    def __init__(self, n, row_ptr, col_idx, values, rtol=0.0, threads=1):
        """Initialize and validate the matrix."""
        super(CsrMatrix, self).__init__(n)
        self.row_ptr = np.array(row_ptr)
        self.col_idx = np.array(col_idx)
        self.values = np.array(values, dtype=np.float64)
        self.threads = max(1, int(threads))
        self._validate_structure()
        self.csr = sp.csr_matrix(
            (self.values, self.col_idx, self.row_ptr), shape=self.shape, copy=False
        )
        self._validate_symmetry(rtol)
        self._row_blocks = [(a, b, self.csr[a:b]) for a, b in self._blocks()]
        self._pool = None
        if len(self._row_blocks) >= 2:
            self._pool = ThreadPoolExecutor(max_workers=self.threads)
        for a in (self.row_ptr, self.col_idx, self.values):
            a.flags.writeable = False

    @classmethod
    def from_scipy(cls, matrix, rtol=0.0, threads=1):
        """Build from any scipy sparse matrix."""
        csr = sp.csr_matrix(matrix)
        csr.sort_indices()
        return cls(
            csr.shape[0], csr.indptr, csr.indices, csr.data, rtol=rtol, threads=threads
        )

    def with_threads(self, threads):
        """Return the same matrix applied with another thread count."""
        return CsrMatrix(
            self.n, self.row_ptr, self.col_idx, self.values, threads=threads
        )

    @property
    def nnz(self):
        """Number of stored entries."""
        return int(self.row_ptr[-1])

    def _validate_structure(self):
        n, ptr, idx = self.n, self.row_ptr, self.col_idx
        if ptr.ndim != 1 or ptr.size != n + 1:
            raise InvalidMatrixError("row_ptr must have length n+1.")
        if ptr[0] != 0 or np.any(np.diff(ptr) < 0):
            raise InvalidMatrixError("row_ptr must start at 0 and be nondecreasing.")
        nnz = int(ptr[-1])
        if idx.size != nnz or self.values.size != nnz:
            raise InvalidMatrixError("row_ptr[n] must equal the number of entries.")
        if nnz == 0:
            return
        if idx.min() < 0 or idx.max() >= n:
            raise InvalidMatrixError("Column index out of range [0, {0}).".format(n))
        row_start = np.zeros(nnz, dtype=bool)
        row_start[ptr[:-1][ptr[:-1] < nnz]] = True
        if np.any((np.diff(idx) <= 0) & ~row_start[1:]):
            raise InvalidMatrixError(
                "Column indices must be strictly increasing within each row."
            )

    def _validate_symmetry(self, rtol):
        pattern = self.csr.copy()
        pattern.data = np.ones_like(pattern.data)
        if (pattern - pattern.T).nnz:
            raise AsymmetricMatrixError("Matrix is not structurally symmetric.")
        diff = self.csr - self.csr.T
        deviation = abs(diff).max() if diff.nnz else 0.0
        scale = np.abs(self.values).max() if self.values.size else 0.0
        if deviation > rtol * scale:
            raise AsymmetricMatrixError(deviation=deviation)

    def _blocks(self):
        if self.threads == 1:
            return []
        bounds = np.linspace(0, self.n, self.threads + 1).astype(int)
        return [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def matvec(self, v):
        """Multiply by the matrix."""
        if self._pool is None:
            return self.csr @ v
        out = np.empty(self.n)

        def work(block):
            a, b, rows = block
            out[a:b] = rows @ v

        list(self._pool.map(work, self._row_blocks))
        return out

    def close(self):
        """Shut down the thread pool. Later products run serially."""
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def diagonal(self):
        """Return the diagonal."""
        return self.csr.diagonal()

    def to_dense(self):
        """Materialize the matrix."""
        return self.csr.toarray()


class StencilOperator(LinearOperator):
    """Matrix-free finite difference Laplacian with Dirichlet boundary.

    The product accumulates the neighbors in increasing column order, the
    same order in which the assembled CSR rows are summed, so both forms
    return the same bits.
    """

    def __init__(self, kind, nx):
        """Initialize operator."""
        self.ndim, n = _problem_size(kind, nx)
        self.kind = "{0}d".format(self.ndim)
        self.nx = int(nx)
        self.diag_value = 2.0 * self.ndim
        super(StencilOperator, self).__init__(n)

    def matvec(self, v):
        """Apply the stencil."""
        grid = (self.nx,) * self.ndim
        x = np.asarray(v, dtype=np.float64).reshape(grid)
        y = np.zeros(grid)

        def cut(axis, start, stop):
            s = [slice(None)] * self.ndim
            s[axis] = slice(start, stop)
            return tuple(s)

        for axis in range(self.ndim):
            y[cut(axis, 1, None)] -= x[cut(axis, None, -1)]
        y += self.diag_value * x
        for axis in reversed(range(self.ndim)):
            y[cut(axis, None, -1)] -= x[cut(axis, 1, None)]
        return y.reshape(-1)

    def diagonal(self):
        """Return the constant diagonal."""
        return np.full(self.n, self.diag_value)

    def assemble(self, threads=1):
        """Assemble the same operator in CSR form."""
        if self.n > config.NC_ASSEMBLE_MAX_N:
            raise ProblemSizeError(n=self.n, limit=config.NC_ASSEMBLE_MAX_N)
        nx = self.nx
        t = sp.diags(
            [-np.ones(nx - 1), 2.0 * np.ones(nx), -np.ones(nx - 1)],
            [-1, 0, 1],
            shape=(nx, nx),
        )
        eye = sp.identity(nx)
        terms = []
        for axis in range(self.ndim):
            factors = [eye] * self.ndim
            factors[axis] = t
            term = factors[0]
            for f in factors[1:]:
                term = sp.kron(term, f)
            terms.append(term)
        a = sum(terms[1:], terms[0]).tocsr()
        a.eliminate_zeros()
        a.sort_indices()
        return CsrMatrix.from_scipy(a, threads=threads)


class ScaledOperator(LinearOperator):
    """Symmetric diagonal scaling ``D^(-1/2) inner D^(-1/2)``."""

    def __init__(self, inner, inv_sqrt_diag):
        """Initialize operator."""
        self.inner = inner
        self.inv_sqrt_diag = np.array(inv_sqrt_diag, dtype=np.float64)
        self.inv_sqrt_diag.flags.writeable = False
        super(ScaledOperator, self).__init__(inner.n)

    def matvec(self, v):
        """Apply the scaled operator."""
        d = self.inv_sqrt_diag
        return d * self.inner.matvec(d * v)

    def diagonal(self):
        """Return the scaled diagonal, ones up to rounding."""
        d = self.inv_sqrt_diag
        return d * self.inner.diagonal() * d


class CountingOperator(LinearOperator):
    """Wrapper counting the applications of another operator."""

    def __init__(self, inner):
        """Initialize operator."""
        self.inner = inner
        self._count = 0
        self._lock = threading.Lock()
        super(CountingOperator, self).__init__(inner.n)

    @property
    def count(self):
        """Number of products computed so far."""
        return self._count

    def reset(self):
        """Reset the counter to zero."""
        with self._lock:
            self._count = 0

    def matvec(self, v):
        """Apply the wrapped operator and count it."""
        with self._lock:
            self._count += 1
        return self.inner.matvec(v)

    def diagonal(self):
        """Return the wrapped diagonal."""
        return self.inner.diagonal()


def as_vector(v, n):
    """Convert to a float64 vector of length ``n``.

    :raises ncprec.errors.DimensionMismatchError: On any other shape.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != n:
        raise DimensionMismatchError(expected=n, got=v.shape)
    return v


def apply(op, v):
    """Apply an operator to a vector.

    >>> apply(IdentityOperator(3), [1.0, 2.0, 3.0])
    array([1., 2., 3.])

    :raises ncprec.errors.DimensionMismatchError: If ``v`` does not have
        length ``op.n``.
    """
    return op.matvec(as_vector(v, op.n))


def fd_laplacian(kind, nx, form="stencil", threads=1):
    """Build the 5-point (2D) or 7-point (3D) finite difference Laplacian.

    :param kind: ``"2d"`` or ``"3d"``.
    :param nx: Interior grid points per dimension.
    :param form: ``"stencil"`` (matrix-free) or ``"assembled"`` (CSR).
    :param threads: Thread count of the assembled product.
    """
    op = StencilOperator(kind, nx)
    if form == "stencil":
        return op
    if form == "assembled":
        return op.assemble(threads=threads)
    raise InvalidParameterError("Unknown operator form {0!r}.".format(form))


def jacobi_scale(op):
    """Scale an operator symmetrically by its diagonal.

    :returns: ``(scaled, inv_sqrt_diag)``; a solution ``y`` of the scaled
        system maps back to the original one as ``inv_sqrt_diag * y``.
    :raises ncprec.errors.NonPositiveDiagonalError: On the first diagonal
        entry that is not strictly positive.
    """
    diag = np.asarray(op.diagonal(), dtype=np.float64)
    bad = np.flatnonzero(~(diag > 0))
    if bad.size:
        raise NonPositiveDiagonalError(index=int(bad[0]), value=float(diag[bad[0]]))
    inv_sqrt_diag = 1.0 / np.sqrt(diag)
    return ScaledOperator(op, inv_sqrt_diag), inv_sqrt_diag


def _sin2(nx):
    """Return ``sin(k pi h / 2)**2`` for ``k = 1..nx`` and ``h = 1/(nx+1)``."""
    k = np.arange(1, nx + 1)
    return np.sin(k * np.pi / (2.0 * (nx + 1))) ** 2


def analytic_spectrum(kind, nx, scaled=True, max_n=config.NC_ANALYTIC_MAX_N):
    """Return the sorted eigenvalues of the model Laplacian.

    >>> analytic_spectrum("2d", 2).round(12).tolist()
    [0.5, 1.0, 1.0, 1.5]

    The unscaled eigenvalues are ``4 * sum(sin(k_i pi h / 2)**2)`` over the
    dimensions; Jacobi scaling divides them by the diagonal ``2 d``.
    """
    d, n = _problem_size(kind, nx)
    if n > max_n:
        raise ProblemSizeError(n=n, limit=max_n)
    s = _sin2(int(nx))
    lam = s
    for _ in range(d - 1):
        lam = np.add.outer(lam, s).ravel()
    factor = 2.0 / d if scaled else 4.0
    return np.sort(factor * lam)


def analytic_extremes(kind, nx, scaled=True):
    """Return ``(lambda_min, lambda_max)`` without enumerating the spectrum.

    >>> lo, hi = analytic_extremes("3d", 512)
    >>> float(round(hi / lo, -2))
    106700.0
    """
    d, _ = _problem_size(kind, nx)
    h = np.pi / (2.0 * (int(nx) + 1))
    factor = 2.0 if scaled else 4.0 * d
    return factor * np.sin(h) ** 2, factor * np.sin(int(nx) * h) ** 2


def load_matrix_market(path, rtol=config.NC_LOAD_SYMMETRY_RTOL, threads=1):
    """Load a real symmetric matrix from a MatrixMarket coordinate file.

    Symmetric files store one triangle. General files must hold a matrix
    symmetric within ``rtol * max(abs(a_ij))``; their lower triangle is kept.
    Both triangles are present in the returned matrix.

    :param path: File path or URL, or a :class:`ncprec.storage.FileStorage`.
    :raises ncprec.errors.MatrixMarketParseError: With the offending line.
    """
    storage = path if isinstance(path, FileStorage) else pyfs_storage_factory(path)
    lines = storage.read_text().splitlines()
    if not lines:
        raise MatrixMarketParseError(line=1, reason="empty file")

    banner = lines[0].split()
    if len(banner) != 5 or banner[0] != "%%MatrixMarket":
        raise MatrixMarketParseError(line=1, reason="missing %%MatrixMarket banner")
    obj, fmt, field, symmetry = [b.lower() for b in banner[1:]]
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketParseError(line=1, reason="only coordinate matrices")
    if field not in ("real", "integer", "double"):
        raise MatrixMarketParseError(line=1, reason="unsupported field " + field)
    if symmetry not in ("symmetric", "general"):
        raise MatrixMarketParseError(line=1, reason="unsupported symmetry " + symmetry)

    size = None
    rows, cols, vals = [], [], []
    lineno = 1
    for lineno, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text.startswith("%"):
            continue
        tokens = text.split()
        if size is None:
            try:
                nrows, ncols, nnz = (int(t) for t in tokens)
            except ValueError:
                raise MatrixMarketParseError(line=lineno, reason="bad size line")
            if nrows != ncols:
                raise MatrixMarketParseError(line=lineno, reason="matrix not square")
            size = (nrows, nnz)
            continue
        try:
            i, j, value = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except (ValueError, IndexError):
            raise MatrixMarketParseError(line=lineno, reason="bad entry")
        if len(tokens) != 3:
            raise MatrixMarketParseError(line=lineno, reason="trailing tokens")
        if not (1 <= i <= size[0] and 1 <= j <= size[0]):
            raise MatrixMarketParseError(
                line=lineno, reason="index ({0}, {1}) not 1-based in range".format(i, j)
            )
        if len(vals) == size[1]:
            raise MatrixMarketParseError(line=lineno, reason="too many entries")
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(value)

    if size is None:
        raise MatrixMarketParseError(line=lineno, reason="missing size line")
    n, nnz = size
    if len(vals) != nnz:
        raise MatrixMarketParseError(
            line=lineno, reason="expected {0} entries, got {1}".format(nnz, len(vals))
        )

    rows = np.array(rows, dtype=np.int64)
    cols = np.array(cols, dtype=np.int64)
    vals = np.array(vals, dtype=np.float64)
    if symmetry == "general":
        full = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        diff = full - full.T
        deviation = abs(diff).max() if diff.nnz else 0.0
        if deviation > rtol * (np.abs(vals).max() if vals.size else 0.0):
            raise AsymmetricMatrixError(deviation=deviation)
        keep = rows >= cols
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    else:
        rows, cols = np.maximum(rows, cols), np.minimum(rows, cols)

    keys = rows * n + cols
    if np.unique(keys).size != keys.size:
        raise MatrixMarketParseError(line=lineno, reason="duplicate entries")
    off = rows != cols
    lower = sp.coo_matrix(
        (
            np.concatenate([vals, vals[off]]),
            (np.concatenate([rows, cols[off]]), np.concatenate([cols, rows[off]])),
        ),
        shape=(n, n),
    ).tocsr()
    lower.sort_indices()
    logger.debug("Loaded %s: n=%d, nnz=%d.", storage.fileurl, n, lower.nnz)
    return CsrMatrix.from_scipy(lower, threads=threads)


def save_matrix_market(matrix, path):
    """Write a CSR matrix as a symmetric MatrixMarket file.

    Only the lower triangle is written, values with 17 significant digits.

    :returns: The ``"md5:<hex>"`` checksum of the written file.
    """
    storage = path if isinstance(path, FileStorage) else pyfs_storage_factory(path)
    lower = sp.tril(matrix.csr, format="coo")
    with storage.open(mode="wb") as fp:
        mmwrite(fp, lower, symmetry="symmetric", precision=17)
    return storage.checksum()
