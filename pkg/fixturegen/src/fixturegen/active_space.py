"""Complete-active-space reduction of a converged RHF solution.

Produces the effective one-body integrals, the active-space two-electron
integrals in chemist notation, and the frozen-core energy (including
nuclear repulsion), ready for second quantization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrals import j_batch, jk_build
from .scf import ScfResult


@dataclass(frozen=True)
class ActiveSpace:
    h1: np.ndarray  # n_act x n_act effective one-body (MO basis)
    eri: np.ndarray  # n_act^4 chemist (ij|kl)
    e_core: float  # nuclear repulsion + frozen-core mean field
    n_active_electrons: int
    n_active_orbitals: int


def build_active_space(scf: ScfResult, n_elec: int, n_orb: int) -> ActiveSpace:
    if n_elec % 2:
        raise ValueError("active electron count must be even for an RHF core")
    if (scf.n_electrons - n_elec) % 2:
        raise ValueError("core electron count must be even")
    n_core = (scf.n_electrons - n_elec) // 2
    if n_core < 0 or n_core + n_orb > scf.n_ao:
        raise ValueError(
            f"active space ({n_elec},{n_orb}) does not fit "
            f"{scf.n_electrons} electrons in {scf.n_ao} orbitals"
        )
    c_core = scf.mo_coeff[:, :n_core]
    c_act = scf.mo_coeff[:, n_core : n_core + n_orb]

    d_core = 2.0 * c_core @ c_core.T
    if n_core:
        j_core, k_core = jk_build(scf.eri, d_core, scf.n_ao)
        g_core = j_core - 0.5 * k_core
    else:
        g_core = np.zeros_like(scf.hcore)
    e_core = (
        scf.e_nuclear
        + float(np.sum(d_core * scf.hcore))
        + 0.5 * float(np.sum(d_core * g_core))
    )
    h1 = c_act.T @ (scf.hcore + g_core) @ c_act

    # (ij|kl) via one Coulomb-type contraction per symmetrized (k,l) pair
    pairs = [(k, l) for k in range(n_orb) for l in range(k + 1)]
    dens = np.empty((len(pairs), scf.n_ao, scf.n_ao))
    for b, (k, l) in enumerate(pairs):
        outer = np.outer(c_act[:, k], c_act[:, l])
        dens[b] = 0.5 * (outer + outer.T)
    contracted = j_batch(scf.eri, dens, scf.n_ao)
    eri_act = np.empty((n_orb, n_orb, n_orb, n_orb))
    for b, (k, l) in enumerate(pairs):
        block = c_act.T @ contracted[b] @ c_act
        eri_act[:, :, k, l] = block
        eri_act[:, :, l, k] = block
    return ActiveSpace(
        h1=h1,
        eri=eri_act,
        e_core=e_core,
        n_active_electrons=n_elec,
        n_active_orbitals=n_orb,
    )
