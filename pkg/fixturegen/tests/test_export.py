import json

import numpy as np
import pytest

from fixturegen.export import ACTIVE_SPACES, GeometryUnresolved, MoleculeSpec, export, main
from fixturegen.geometry import MOLECULES

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def realize_file(payload) -> np.ndarray:
    n = payload["n_qubits"]
    out = payload["constant"] * np.eye(1 << n, dtype=complex)
    for term in payload["terms"]:
        acc = np.array([[1.0]], dtype=complex)
        for ch in term["word"]:
            acc = np.kron(acc, PAULI[ch])
        out += complex(term["coeff"][0], term["coeff"][1]) * acc
    return out


class TestSpec:
    def test_qubit_counts(self):
        assert MoleculeSpec("pyrene", 2, 2).n_qubits == 4
        assert MoleculeSpec("pyrene", 4, 4).n_qubits == 8
        assert MoleculeSpec("pyrene", 6, 6).n_qubits == 12

    def test_unknown_molecule(self):
        with pytest.raises(GeometryUnresolved):
            MoleculeSpec("coronene", 2, 2)

    def test_active_space_whitelist(self):
        with pytest.raises(ValueError):
            MoleculeSpec("pyrene", 3, 3)

    def test_grid_shape(self):
        assert len(MOLECULES) == 6
        assert len(ACTIVE_SPACES) == 3


@pytest.fixture(scope="module")
def exported(tmp_path_factory, scf_cache):
    out = tmp_path_factory.mktemp("fix")
    path = export(MoleculeSpec("pyrene", 2, 2), out, scf_cache=scf_cache)
    return json.loads(path.read_text())


class TestExportedFile:

    def test_schema(self, exported):
        assert exported["n_qubits"] == 4
        assert exported["label"] == "pyrene (2,2)"
        assert {"coeff", "word"} == set(exported["terms"][0])
        words = [t["word"] for t in exported["terms"]]
        assert words == sorted(words)
        assert "I" * 4 not in words  # identity lives in the constant

    def test_provenance(self, exported):
        prov = exported["provenance"]
        assert prov["formula"] == "C16H10"
        assert "STO-3G" in prov["method"]
        assert len(prov["geometry_hash"]) == 16

    def test_realized_matrix_hermitian_and_sane(self, exported):
        mat = realize_file(exported)
        assert np.abs(mat - mat.conj().T).max() < 1e-10
        ground = np.linalg.eigvalsh(mat).min()
        # total energies of a C16H10 system sit far below zero and the
        # active-space ground state cannot rise above the SCF determinant
        assert ground <= exported["provenance"]["scf_energy_hartree"] + 1e-10
        assert ground == pytest.approx(exported["provenance"]["scf_energy_hartree"], abs=0.5)

    def test_reexport_byte_identical(self, tmp_path, scf_cache):
        p1 = export(MoleculeSpec("pyrene", 2, 2), tmp_path / "a", scf_cache=scf_cache)
        p2 = export(MoleculeSpec("pyrene", 2, 2), tmp_path / "b", scf_cache=scf_cache)
        assert p1.read_bytes() == p2.read_bytes()


class TestCli:
    def test_requires_target(self, tmp_path, capsys):
        with pytest.raises(SystemExit):
            main(["--out", str(tmp_path)])

    def test_single_export(self, tmp_path):
        code = main(["--molecule", "pyrene", "--active", "2", "2", "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "pyrene_cas2e2o.json").exists()
