"""Small helpers shared by the sparse-matrix pipeline."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def as_csr(m) -> sp.csr_matrix:
    """Coerce a dense array / sparse matrix / SparseHermitian to complex CSR."""
    matrix = getattr(m, "matrix", m)
    if sp.issparse(matrix):
        out = matrix.tocsr()
    else:
        out = sp.csr_matrix(np.asarray(matrix))
    if out.dtype != np.complex128:
        out = out.astype(np.complex128)
    if out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    return out


def hermiticity_defect(m) -> float:
    """Largest absolute entry of m - m^dagger."""
    m = as_csr(m)
    d = m - m.conjugate().T
    return 0.0 if d.nnz == 0 else float(np.abs(d.data).max())


def abs_row_sums(m) -> np.ndarray:
    m = as_csr(m)
    return np.asarray(np.abs(m).sum(axis=1)).ravel()


def abs_row_sum_bound(m) -> float:
    """max over rows of sum_j |m_ij|; bounds |lambda| for any normal m."""
    s = abs_row_sums(m)
    return float(s.max()) if s.size else 0.0


def gershgorin_upper(m) -> float:
    """Upper Gershgorin bound on the spectrum of a Hermitian matrix."""
    m = as_csr(m)
    s = abs_row_sums(m)
    d = m.diagonal()
    return float((s - np.abs(d) + d.real).max())


def gershgorin_lower(m) -> float:
    """Lower Gershgorin bound on the spectrum of a Hermitian matrix."""
    m = as_csr(m)
    s = abs_row_sums(m)
    d = m.diagonal()
    return float((d.real - (s - np.abs(d))).min())


def drop_small(m, threshold_rel: float = 1e-14) -> sp.csr_matrix:
    """Drop entries below threshold_rel * max|entry| to contain fill-in.

    threshold_rel = 0 disables dropping.
    """
    m = as_csr(m).copy()
    if threshold_rel <= 0.0 or m.nnz == 0:
        m.eliminate_zeros()
        return m
    cut = threshold_rel * float(np.abs(m.data).max())
    m.data[np.abs(m.data) < cut] = 0.0
    m.eliminate_zeros()
    return m


def frobenius(m) -> float:
    m = as_csr(m)
    return float(np.linalg.norm(m.data)) if m.nnz else 0.0
