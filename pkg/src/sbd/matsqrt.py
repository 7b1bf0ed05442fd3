"""Principal matrix square root by a fixed-length Newton iteration.

The iteration is A_{r+1} = (A_r + M A_r^{-1}) / 2 seeded with
A_0 = (Tr M)^{1/4} I, run for a fixed number of updates (six by default).
A residual-triggered dense fallback guards the downstream eigenvalue
pipeline against silent divergence on small matrices.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .blockops import solve_block_right
from .errors import IterationSingular, SeedDegenerate, Singular
from .sparsetools import as_csr, drop_small, frobenius

DROP_REL_TOL = 1e-14

RESIDUAL_REL_TOL = 1e-6


@dataclass(frozen=True)
class SqrtConfig:
    iterations: int = 6
    residual_check: bool = True
    fallback_dim_cap: int = 512

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass(frozen=True)
class SqrtResult:
    matrix: sp.csr_matrix
    residual: float
    fallback: bool
    iterations: int


def _dense_principal_sqrt(m: np.ndarray) -> np.ndarray:
    """Eigendecomposition square root on the principal branch."""
    w, v = np.linalg.eig(m)
    near_cut = (w.real < 0) & (np.abs(w.imag) <= 1e-12 * np.abs(w.real))
    if near_cut.any():
        warnings.warn(
            "square-root fallback found eigenvalues on the negative real axis; "
            "the principal branch is ill-conditioned there",
            RuntimeWarning,
            stacklevel=3,
        )
    return v @ (np.sqrt(w.astype(np.complex128))[:, None] * np.linalg.inv(v))


def newton_sqrt(m, cfg: SqrtConfig | None = None) -> SqrtResult:
    """Approximate principal sqrt of a square complex matrix.

    Runs exactly cfg.iterations updates. When the residual check is on and
    ||A^2 - m||_F exceeds 1e-6 ||m||_F, small matrices are recomputed by a
    dense eigendecomposition and flagged as fallback.
    """
    cfg = cfg or SqrtConfig()
    m = as_csr(m)
    dim = m.shape[0]
    trace = complex(m.diagonal().sum())
    if abs(trace) < 1e-14:
        raise SeedDegenerate(f"|Tr m| = {abs(trace):.3e} cannot seed the iteration")
    seed = trace ** 0.25
    a = sp.identity(dim, dtype=np.complex128, format="csr") * seed

    norm_m = frobenius(m)
    fallback = False
    try:
        for _ in range(cfg.iterations):
            a = drop_small((a + solve_block_right(a, m)) * 0.5, DROP_REL_TOL)
    except Singular as exc:
        if dim > cfg.fallback_dim_cap:
            raise IterationSingular(str(exc)) from exc
        a = sp.csr_matrix(_dense_principal_sqrt(m.toarray()))
        fallback = True

    residual = frobenius(as_csr(a @ a) - m)
    if (
        cfg.residual_check
        and not fallback
        and residual > RESIDUAL_REL_TOL * max(norm_m, 1e-300)
        and dim <= cfg.fallback_dim_cap
    ):
        a = sp.csr_matrix(_dense_principal_sqrt(m.toarray()))
        fallback = True
        residual = frobenius(as_csr(a @ a) - m)
    return SqrtResult(
        matrix=drop_small(a, DROP_REL_TOL),
        residual=residual,
        fallback=fallback,
        iterations=cfg.iterations,
    )
