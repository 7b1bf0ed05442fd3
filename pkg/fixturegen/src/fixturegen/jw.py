"""Second quantization of an active space and the Jordan-Wigner mapping
to Pauli words.

Spin-orbital 2i+sigma (alpha first) maps to qubit 2i+sigma; qubit 0 is the
leftmost character of a Pauli word. |1> marks an occupied spin-orbital.
"""

from __future__ import annotations

import numpy as np

from .active_space import ActiveSpace

# single-qubit products: (left, right) -> (phase, result)
_MUL = {
    ("I", "I"): (1.0, "I"),
    ("I", "X"): (1.0, "X"),
    ("I", "Y"): (1.0, "Y"),
    ("I", "Z"): (1.0, "Z"),
    ("X", "I"): (1.0, "X"),
    ("Y", "I"): (1.0, "Y"),
    ("Z", "I"): (1.0, "Z"),
    ("X", "X"): (1.0, "I"),
    ("Y", "Y"): (1.0, "I"),
    ("Z", "Z"): (1.0, "I"),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

PauliSum = dict[str, complex]


def word_multiply(w1: str, w2: str) -> tuple[complex, str]:
    phase = 1.0 + 0.0j
    out = []
    for c1, c2 in zip(w1, w2):
        ph, c = _MUL[(c1, c2)]
        phase *= ph
        out.append(c)
    return phase, "".join(out)


def op_multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    out: PauliSum = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            ph, w = word_multiply(w1, w2)
            out[w] = out.get(w, 0.0) + c1 * c2 * ph
    return out


def op_add(target: PauliSum, other: PauliSum, scale: complex = 1.0) -> None:
    for w, c in other.items():
        target[w] = target.get(w, 0.0) + scale * c


def annihilation(p: int, n_qubits: int) -> PauliSum:
    """a_p = Z_0..Z_{p-1} (X_p + i Y_p)/2."""
    zs = "Z" * p
    tail = "I" * (n_qubits - p - 1)
    return {zs + "X" + tail: 0.5, zs + "Y" + tail: 0.5j}


def creation(p: int, n_qubits: int) -> PauliSum:
    return {w: np.conj(c) for w, c in annihilation(p, n_qubits).items()}


def qubit_hamiltonian(space: ActiveSpace, cutoff: float = 1e-12) -> dict[str, float]:
    """Pauli-word expansion of the active-space Hamiltonian.

    H = e_core + sum h_ij a+_i a_j + 1/2 sum (ij|kl) a+_i a+_k a_l a_j
    over both spins, with spatial orbitals i,j,k,l.
    """
    n_orb = space.n_active_orbitals
    n_q = 2 * n_orb
    annis = [annihilation(p, n_q) for p in range(n_q)]
    creas = [creation(p, n_q) for p in range(n_q)]
    ident = "I" * n_q
    total: PauliSum = {ident: complex(space.e_core)}

    for i in range(n_orb):
        for j in range(n_orb):
            hij = space.h1[i, j]
            if abs(hij) < cutoff:
                continue
            for s in range(2):
                op_add(total, op_multiply(creas[2 * i + s], annis[2 * j + s]), hij)

    for i in range(n_orb):
        for j in range(n_orb):
            for k in range(n_orb):
                for l in range(n_orb):
                    g = space.eri[i, j, k, l]
                    if abs(g) < cutoff:
                        continue
                    for s1 in range(2):
                        for s2 in range(2):
                            p, q = 2 * i + s1, 2 * j + s1
                            r, s = 2 * k + s2, 2 * l + s2
                            if p == r or q == s:
                                continue  # a+a+ or aa on one mode vanishes
                            term = op_multiply(
                                op_multiply(creas[p], creas[r]),
                                op_multiply(annis[s], annis[q]),
                            )
                            op_add(total, term, 0.5 * g)

    out: dict[str, float] = {}
    for w, c in total.items():
        if abs(c) < cutoff:
            continue
        if abs(c.imag) > 1e-9:
            raise ValueError(f"non-real coefficient {c} on {w}")
        out[w] = float(c.real)
    return out


# ---------------------------------------------------------------------------
# Independent occupation-number-basis construction (test oracle)


def fermion_matrix_hamiltonian(space: ActiveSpace) -> np.ndarray:
    """Dense active-space Hamiltonian built from explicit ladder matrices.

    Signs come from occupation-count bookkeeping, not from Pauli algebra,
    so this is an independent construction of the same operator.
    """
    n_q = 2 * space.n_active_orbitals
    dim = 1 << n_q
    ladders = []
    for p in range(n_q):
        a = np.zeros((dim, dim))
        for state in range(dim):
            # qubit p is the p-th character from the left = bit n_q-1-p
            bit = 1 << (n_q - 1 - p)
            if state & bit:
                parity = bin(state >> (n_q - p)).count("1")
                a[state ^ bit, state] = (-1.0) ** parity
        ladders.append(a)
    h = np.eye(dim) * space.e_core
    for i in range(space.n_active_orbitals):
        for j in range(space.n_active_orbitals):
            for s in range(2):
                h += space.h1[i, j] * ladders[2 * i + s].T @ ladders[2 * j + s]
    for i in range(space.n_active_orbitals):
        for j in range(space.n_active_orbitals):
            for k in range(space.n_active_orbitals):
                for l in range(space.n_active_orbitals):
                    g = space.eri[i, j, k, l]
                    if abs(g) < 1e-14:
                        continue
                    for s1 in range(2):
                        for s2 in range(2):
                            p, q = 2 * i + s1, 2 * j + s1
                            r, s = 2 * k + s2, 2 * l + s2
                            h += (
                                0.5
                                * g
                                * ladders[p].T
                                @ ladders[r].T
                                @ ladders[s]
                                @ ladders[q]
                            )
    return h


def number_operator(n_qubits: int) -> np.ndarray:
    dim = 1 << n_qubits
    return np.diag([bin(s).count("1") for s in range(dim)]).astype(float)
