"""Extreme-eigenvalue solvers: restarted Lanczos with full
reorthogonalization (an Arnoldi variant is kept for diagnosing
Hermiticity-drifted intermediates) and a dense verification oracle.

Smallest-eigenvalue queries use the spectral shift
lambda_min(m) = sigma - lambda_max(sigma I - m) with sigma the upper
Gershgorin bound, so the Krylov iteration always chases a dominant,
nonnegative extreme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import CapExceeded, NoConvergence
from .sparsetools import as_csr, gershgorin_lower, gershgorin_upper, hermiticity_defect

DENSE_CAP = 4096

KRYLOV_HERMITICITY_TOL = 1e-8


@dataclass(frozen=True)
class EigResult:
    value: float
    residual: float
    iterations: int
    method: str


def _lanczos_sweep(op, v0: np.ndarray, ncv: int):
    """One full-reorthogonalized Lanczos pass; returns (V, alpha, beta)."""
    dim = v0.shape[0]
    k = min(ncv, dim)
    V = np.zeros((dim, k), dtype=np.complex128)
    alpha = np.zeros(k)
    beta = np.zeros(max(k - 1, 0))
    v = v0 / np.linalg.norm(v0)
    V[:, 0] = v
    w = op @ v
    alpha[0] = np.real(np.vdot(v, w))
    w = w - alpha[0] * v
    actual = 1
    for j in range(1, k):
        b = np.linalg.norm(w)
        if b < 1e-13:
            break  # invariant subspace found
        v = w / b
        # full reorthogonalization, twice for safety
        for _ in range(2):
            v = v - V[:, :j] @ (V[:, :j].conj().T @ v)
        v /= np.linalg.norm(v)
        beta[j - 1] = b
        V[:, j] = v
        w = op @ v - b * V[:, j - 1]
        alpha[j] = np.real(np.vdot(v, w))
        w = w - alpha[j] * v
        actual = j + 1
    return V[:, :actual], alpha[:actual], beta[: max(actual - 1, 0)]


def krylov_extreme(
    m,
    which: str = "smallest",
    tol: float = 1e-8,
    max_iter: int | None = None,
    seed: int = 0,
    ncv: int = 32,
    method: str = "lanczos",
) -> EigResult:
    """Extreme eigenvalue of a Hermitian matrix by restarted Krylov sweeps.

    Deterministic for a fixed seed. method="arnoldi" switches to the
    general (non-symmetric) iteration and skips the Hermiticity gate.
    """
    m = as_csr(m)
    dim = m.shape[0]
    if dim < 2:
        raise ValueError("need dim >= 2")
    if which not in ("smallest", "largest"):
        raise ValueError(f"which must be smallest or largest, got {which!r}")
    if method == "lanczos":
        scale = max(1.0, float(np.abs(m.data).max()) if m.nnz else 0.0)
        if hermiticity_defect(m) > KRYLOV_HERMITICITY_TOL * scale:
            raise ValueError(
                "matrix is not Hermitian within 1e-8; use method='arnoldi'"
            )
    elif method != "arnoldi":
        raise ValueError(f"unknown method {method!r}")
    if max_iter is None:
        max_iter = 10 * dim

    if which == "smallest":
        sigma = gershgorin_upper(m)
        op = (sp.identity(dim, dtype=np.complex128, format="csr") * sigma - m).tocsr()
    else:
        sigma = gershgorin_lower(m)
        op = (m - sp.identity(dim, dtype=np.complex128, format="csr") * sigma).tocsr()

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    matvecs = 0
    residual = np.inf
    for _ in range(max_iter):
        if method == "lanczos":
            V, alpha, beta = _lanczos_sweep(op, v, ncv)
            matvecs += V.shape[1]
            theta_all, y_all = scipy.linalg.eigh_tridiagonal(alpha, beta)
            theta = theta_all[-1]
            y = y_all[:, -1]
        else:
            V, H = _arnoldi_sweep(op, v, ncv)
            matvecs += V.shape[1]
            w_all, y_all = np.linalg.eig(H)
            pick = int(np.argmax(w_all.real))
            theta = complex(w_all[pick])  # Ritz values are complex here
            y = y_all[:, pick]
        x = V @ y
        x /= np.linalg.norm(x)
        residual = float(np.linalg.norm(op @ x - theta * x))
        if residual <= tol:
            shifted = sigma - theta if which == "smallest" else sigma + theta
            return EigResult(
                value=float(np.real(shifted)),
                residual=residual,
                iterations=matvecs,
                method="krylov",
            )
        v = x
    raise NoConvergence(
        f"no residual <= {tol} within {max_iter} restart sweeps (last {residual:.3e})"
    )


def _arnoldi_sweep(op, v0: np.ndarray, ncv: int):
    """Modified Gram-Schmidt Arnoldi; returns (V, Hessenberg)."""
    dim = v0.shape[0]
    k = min(ncv, dim)
    V = np.zeros((dim, k), dtype=np.complex128)
    H = np.zeros((k, k), dtype=np.complex128)
    V[:, 0] = v0 / np.linalg.norm(v0)
    actual = 1
    for j in range(k):
        w = op @ V[:, j]
        for i in range(j + 1):
            H[i, j] = np.vdot(V[:, i], w)
            w = w - H[i, j] * V[:, i]
        b = np.linalg.norm(w)
        if j + 1 < k:
            if b < 1e-13:
                break
            H[j + 1, j] = b
            V[:, j + 1] = w / b
            actual = j + 2
        else:
            actual = k
    return V[:, :actual], H[:actual, :actual]


def dense_oracle(m, hermitian: bool | None = None, cap: int = DENSE_CAP) -> np.ndarray:
    """Full spectrum by dense eigensolve, sorted ascending by real part."""
    mat = as_csr(m)
    dim = mat.shape[0]
    if dim > cap:
        raise CapExceeded(f"dim {dim} exceeds dense cap {cap}")
    if hermitian is None:
        flagged = getattr(m, "hermitian", None)
        if flagged is not None:
            hermitian = flagged
        else:
            scale = max(1.0, float(np.abs(mat.data).max()) if mat.nnz else 0.0)
            hermitian = hermiticity_defect(mat) <= 1e-10 * scale
    dense = mat.toarray()
    if hermitian:
        return np.sort(np.linalg.eigvalsh(dense))
    w = np.linalg.eigvals(dense)
    return w[np.argsort(w.real, kind="stable")]
