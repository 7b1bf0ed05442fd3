import numpy as np
import pytest

from fixturegen.active_space import ActiveSpace, build_active_space
from fixturegen.jw import (
    annihilation,
    creation,
    fermion_matrix_hamiltonian,
    number_operator,
    op_multiply,
    qubit_hamiltonian,
    word_multiply,
)
from fixturegen.scf import run_rhf

BOHR = 0.52917721092

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def realize_words(words: dict) -> np.ndarray:
    n = len(next(iter(words)))
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for word, coeff in words.items():
        acc = np.array([[1.0]], dtype=complex)
        for ch in word:
            acc = np.kron(acc, PAULI[ch])
        out += coeff * acc
    return out


def random_active_space(n_orb: int, seed: int) -> ActiveSpace:
    rng = np.random.default_rng(seed)
    h1 = rng.normal(size=(n_orb, n_orb))
    h1 = (h1 + h1.T) / 2
    npair = n_orb * (n_orb + 1) // 2
    pair_mat = rng.normal(size=(npair, npair))
    pair_mat = (pair_mat + pair_mat.T) / 2
    eri = np.empty((n_orb,) * 4)
    def pid(p, q):
        p, q = max(p, q), min(p, q)
        return p * (p + 1) // 2 + q
    for p in range(n_orb):
        for q in range(n_orb):
            for r in range(n_orb):
                for s in range(n_orb):
                    eri[p, q, r, s] = pair_mat[pid(p, q), pid(r, s)]
    return ActiveSpace(
        h1=h1, eri=eri, e_core=rng.normal(),
        n_active_electrons=2, n_active_orbitals=n_orb,
    )


class TestPauliAlgebra:
    def test_word_products(self):
        assert word_multiply("X", "Y") == (1j, "Z")
        assert word_multiply("Y", "X") == (-1j, "Z")
        assert word_multiply("XZ", "XI") == (1.0, "IZ")

    def test_number_operator_is_projector(self):
        # a+_p a_p must realize to (I - Z_p)/2
        for n, p in [(2, 0), (2, 1), (3, 1)]:
            num = op_multiply(creation(p, n), annihilation(p, n))
            mat = realize_words(num)
            want = np.zeros((1 << n, 1 << n), dtype=complex)
            eye = np.eye(1 << n)
            for word, mats in [(None, None)]:
                pass
            zword = "".join("Z" if k == p else "I" for k in range(n))
            want = (eye - realize_words({zword: 1.0})) / 2
            np.testing.assert_allclose(mat, want, atol=1e-14)

    def test_anticommutation(self):
        n = 3
        for p in range(n):
            for q in range(n):
                ap = realize_words(annihilation(p, n))
                aq = realize_words(annihilation(q, n))
                acp = realize_words(creation(p, n))
                anti = ap @ acp + acp @ ap if p == q else ap @ aq + aq @ ap
                want = np.eye(1 << n) if p == q else np.zeros((1 << n, 1 << n))
                np.testing.assert_allclose(anti, want, atol=1e-14)


class TestQubitHamiltonian:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_ladder_matrix_construction(self, seed):
        space = random_active_space(2, seed)
        words = qubit_hamiltonian(space)
        got = realize_words(words)
        want = fermion_matrix_hamiltonian(space)
        assert np.abs(got - want).max() < 1e-10

    def test_hermitian_and_real(self):
        space = random_active_space(2, 5)
        words = qubit_hamiltonian(space)
        mat = realize_words(words)
        assert np.abs(mat - mat.conj().T).max() < 1e-12
        assert np.abs(mat.imag).max() < 1e-12

    def test_commutes_with_particle_number(self):
        space = random_active_space(2, 7)
        mat = realize_words(qubit_hamiltonian(space))
        num = number_operator(4)
        assert np.abs(mat @ num - num @ mat).max() < 1e-10


class TestH2EndToEnd:
    def h2(self):
        return [
            ("H", np.array([0.0, 0.0, 0.0])),
            ("H", np.array([0.0, 0.0, 1.4 * BOHR])),
        ]

    def test_cas22_reproduces_fci(self):
        scf = run_rhf(self.h2())
        space = build_active_space(scf, 2, 2)
        words = qubit_hamiltonian(space)
        mat = realize_words(words)
        num = number_operator(4)
        sector = np.isclose(np.diag(num), 2.0)
        block = mat[np.ix_(sector, sector)]
        ground = np.linalg.eigvalsh(block).min()
        # minimal-basis H2 full CI at R = 1.4 bohr
        assert ground == pytest.approx(-1.1373, abs=2e-3)
        assert ground <= scf.energy + 1e-12

    def test_active_space_energy_expression(self):
        # putting both electrons in the lowest active orbital reproduces the
        # mean-field energy of that determinant: here CAS(2,2) with core none
        scf = run_rhf(self.h2())
        space = build_active_space(scf, 2, 2)
        # closed-shell determinant in the lowest active orbital:
        # E = e_core + 2 h_00 + (00|00)
        e_hf = space.e_core + 2 * space.h1[0, 0] + space.eri[0, 0, 0, 0]
        assert e_hf == pytest.approx(scf.energy, abs=1e-8)
