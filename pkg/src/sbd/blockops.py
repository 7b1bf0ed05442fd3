"""Quadrant partitioning and the non-commutative block-determinant algebra.

The flexibilized determinant treats the four quadrants of a matrix as if
they were the scalars of a 2x2 determinant, keeping the inverse as a linear
solve so sparsity survives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import OddDimension, Singular
from .sparsetools import as_csr, drop_small

PIVOT_REL_TOL = 1e-12

DROP_REL_TOL = 1e-14


@dataclass(frozen=True)
class BlockPartition:
    """Four equally sized square quadrants a (top-left), b, c, d."""

    a: sp.csr_matrix
    b: sp.csr_matrix
    c: sp.csr_matrix
    d: sp.csr_matrix

    @property
    def half(self) -> int:
        return self.a.shape[0]

    def reassemble(self) -> sp.csr_matrix:
        return sp.bmat([[self.a, self.b], [self.c, self.d]], format="csr")


def split(m) -> BlockPartition:
    """Quadrant split of an even-dimension square matrix."""
    m = as_csr(m)
    dim = m.shape[0]
    if dim % 2:
        raise OddDimension(f"dim {dim} is odd; pad first")
    h = dim // 2
    return BlockPartition(
        a=m[:h, :h].tocsr(),
        b=m[:h, h:].tocsr(),
        c=m[h:, :h].tocsr(),
        d=m[h:, h:].tocsr(),
    )


def _lu_or_singular(a: sp.csr_matrix) -> spla.SuperLU:
    scale = float(np.abs(a.data).max()) if a.nnz else 0.0
    if scale == 0.0:
        raise Singular("zero block")
    try:
        lu = spla.splu(a.tocsc())
    except RuntimeError as exc:  # exactly singular factor
        raise Singular(str(exc)) from exc
    pivots = np.abs(lu.U.diagonal())
    if pivots.min() < PIVOT_REL_TOL * scale:
        raise Singular(f"pivot {pivots.min():.3e} below {PIVOT_REL_TOL:.0e} * {scale:.3e}")
    return lu


def solve_block(a, rhs, drop_tol: float = DROP_REL_TOL) -> sp.csr_matrix:
    """X with a @ X = rhs via sparse LU with partial pivoting.

    Raises Singular on a numerically zero pivot so the caller can fall back
    to the commuting determinant. drop_tol = 0 keeps every entry.
    """
    a = as_csr(a)
    rhs = as_csr(rhs)
    if a.shape != rhs.shape:
        raise ValueError(f"block shapes differ: {a.shape} vs {rhs.shape}")
    lu = _lu_or_singular(a)
    x = lu.solve(rhs.toarray())
    return drop_small(sp.csr_matrix(x), drop_tol)


def solve_block_right(a, lhs, drop_tol: float = DROP_REL_TOL) -> sp.csr_matrix:
    """X with X @ a = lhs, i.e. lhs applied to a^{-1} on the right."""
    a = as_csr(a)
    lhs = as_csr(lhs)
    lu = _lu_or_singular(sp.csr_matrix(a.T))
    x = lu.solve(lhs.T.toarray()).T
    return drop_small(sp.csr_matrix(np.ascontiguousarray(x)), drop_tol)


def mul(x, y, drop_tol: float = DROP_REL_TOL) -> sp.csr_matrix:
    """Sparse product with the fill-in drop threshold applied."""
    return drop_small(as_csr(x) @ as_csr(y), drop_tol)


def det_block(
    p: BlockPartition,
    schur_correction: bool = False,
    drop_tol: float = DROP_REL_TOL,
) -> sp.csr_matrix:
    """Flexibilized block determinant A D - A C A^{-1} B.

    schur_correction swaps the correction term for the symmetric Schur form
    A D - C A^{-1} B (experimentation knob; the expanded-root form is the
    default contract).
    """
    x = solve_block(p.a, p.b, drop_tol)  # A^{-1} B
    if schur_correction:
        corr = mul(p.c, x, drop_tol)
    else:
        corr = mul(mul(p.a, p.c, drop_tol), x, drop_tol)
    return drop_small(mul(p.a, p.d, drop_tol) - corr, drop_tol)


def det_prime(p: BlockPartition, drop_tol: float = DROP_REL_TOL) -> sp.csr_matrix:
    """Commuting fallback A D - C B, used when A is not invertible."""
    return drop_small(mul(p.a, p.d, drop_tol) - mul(p.c, p.b, drop_tol), drop_tol)
