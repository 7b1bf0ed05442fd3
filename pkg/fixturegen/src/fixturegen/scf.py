"""Restricted Hartree-Fock with DIIS convergence acceleration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import build_shells, n_electrons, nuclear_charges, nuclear_repulsion
from .integrals import electron_repulsion_packed, jk_build, one_electron_matrices


class ScfNotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class ScfResult:
    energy: float  # total, including nuclear repulsion
    mo_coeff: np.ndarray  # AO x MO
    mo_energy: np.ndarray
    n_electrons: int
    e_nuclear: float
    hcore: np.ndarray
    overlap: np.ndarray
    eri: np.ndarray  # 8-fold packed AO integrals
    n_ao: int
    iterations: int


def _orthogonalizer(S: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(S)
    if w.min() < 1e-9:
        raise ScfNotConverged(f"overlap matrix near singular ({w.min():.3e})")
    return v @ np.diag(w**-0.5) @ v.T


def run_rhf(
    atoms,
    max_iter: int = 200,
    conv_energy: float = 1e-10,
    conv_orbital_gradient: float = 1e-8,
    diis_depth: int = 8,
    damping: float = 0.7,
    damping_iters: int = 8,
    level_shift: float = 0.3,
) -> ScfResult:
    """Closed-shell SCF from a core-Hamiltonian guess.

    Density convention D = 2 sum_occ C C^T, so F = Hcore + J - K/2.
    Early iterations mix in the previous density and shift the virtual
    orbitals up; both wear off once DIIS has traction.
    """
    shells = build_shells(atoms)
    charges = nuclear_charges(atoms)
    S, T, V = one_electron_matrices(shells, charges)
    hcore = T + V
    eri, n_ao = electron_repulsion_packed(shells)
    e_nuc = nuclear_repulsion(atoms)
    nelec = n_electrons(atoms)
    if nelec % 2:
        raise ValueError("restricted HF needs an even electron count")
    nocc = nelec // 2

    X = _orthogonalizer(S)

    def density(fock, shift=0.0, dens_old=None):
        f_eff = fock
        if shift and dens_old is not None:
            # raise virtuals: F + shift * (S - S D S / 2) projects onto them
            f_eff = fock + shift * (S - 0.5 * S @ dens_old @ S)
        eps, c_ortho = np.linalg.eigh(X.T @ f_eff @ X)
        c = X @ c_ortho
        occ = c[:, :nocc]
        return 2.0 * occ @ occ.T, c, eps

    dens, mo_c, mo_e = density(hcore)
    energy = 0.0
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []
    for iteration in range(1, max_iter + 1):
        J, K = jk_build(eri, dens, n_ao)
        fock = hcore + J - 0.5 * K
        grad = fock @ dens @ S - S @ dens @ fock
        gnorm = float(np.abs(grad).max())
        new_energy = 0.5 * np.sum(dens * (hcore + fock)) + e_nuc
        settling = iteration <= damping_iters and gnorm > 1e-3
        if not settling:
            # DIIS extrapolation over the orbital-gradient residuals
            fock_history.append(fock)
            error_history.append(grad)
            if len(fock_history) > diis_depth:
                fock_history.pop(0)
                error_history.pop(0)
            if len(fock_history) > 1:
                m = len(fock_history)
                B = -np.ones((m + 1, m + 1))
                B[m, m] = 0.0
                for i in range(m):
                    for j in range(m):
                        B[i, j] = np.sum(error_history[i] * error_history[j])
                rhs = np.zeros(m + 1)
                rhs[m] = -1.0
                try:
                    coeffs = np.linalg.solve(B, rhs)[:m]
                    fock = sum(c * f for c, f in zip(coeffs, fock_history))
                except np.linalg.LinAlgError:
                    pass
        if (
            abs(new_energy - energy) < conv_energy
            and gnorm < conv_orbital_gradient
        ):
            return ScfResult(
                energy=float(new_energy),
                mo_coeff=mo_c,
                mo_energy=mo_e,
                n_electrons=nelec,
                e_nuclear=e_nuc,
                hcore=hcore,
                overlap=S,
                eri=eri,
                n_ao=n_ao,
                iterations=iteration,
            )
        energy = new_energy
        shift = level_shift if settling else 0.0
        new_dens, mo_c, mo_e = density(fock, shift=shift, dens_old=dens)
        if settling:
            new_dens = (1.0 - damping) * new_dens + damping * dens
        dens = new_dens
    raise ScfNotConverged(f"no convergence in {max_iter} iterations")
