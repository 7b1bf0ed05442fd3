"""Qubit-Hamiltonian data model: Pauli terms, sparse realization, padding,
synthetic generators, and the Pauli-term JSON / Matrix Market file formats.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse as sp

from .errors import BadWord, CapExceeded
from .sparsetools import as_csr, gershgorin_upper, hermiticity_defect

PAULI_ALPHABET = frozenset("IXYZ")

DEFAULT_QUBIT_CAP = 14

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli word, e.g. 0.5 * XZYI."""

    coeff: complex
    word: str

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        if not cmath.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff!r}")
        bad = set(self.word) - PAULI_ALPHABET
        if bad:
            raise BadWord(f"word {self.word!r} contains {sorted(bad)}")


@dataclass(frozen=True)
class QubitHamiltonian:
    """Weighted Pauli words defining a 2**n_qubits Hermitian operator."""

    n_qubits: int
    terms: tuple[PauliTerm, ...]
    constant: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if len(t.word) != self.n_qubits:
                raise ValueError(
                    f"word {t.word!r} has length {len(t.word)}, expected {self.n_qubits}"
                )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


@dataclass(frozen=True)
class SparseHermitian:
    """CSR complex matrix, the universal numeric carrier.

    hermitian=False flags intermediate blocks that are allowed to drift off
    the Hermitian manifold (the raw block roots before hermitization).
    """

    matrix: sp.csr_matrix
    hermitian: bool = True

    def __post_init__(self):
        m = as_csr(self.matrix)
        m.sort_indices()
        object.__setattr__(self, "matrix", m)
        if self.hermitian:
            scale = max(1.0, float(np.abs(m.data).max()) if m.nnz else 0.0)
            defect = hermiticity_defect(m)
            if defect > HERMITICITY_TOL * scale:
                raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def _word_masks(word: str) -> tuple[int, int, int]:
    """Bit masks (x-like, y, z-like) with word[0] on the most significant bit."""
    n = len(word)
    x_mask = yz_mask = 0
    n_y = 0
    for k, ch in enumerate(word):
        bit = 1 << (n - 1 - k)
        if ch in "XY":
            x_mask |= bit
        if ch in "YZ":
            yz_mask |= bit
        if ch == "Y":
            n_y += 1
    return x_mask, yz_mask, n_y


def realize(h: QubitHamiltonian, cap: int = DEFAULT_QUBIT_CAP) -> SparseHermitian:
    """Expand Pauli terms into the 2**n x 2**n sparse matrix.

    Every Pauli word is a signed permutation, so each term contributes one
    entry per column: column j maps to row j XOR x_mask with phase
    i**n_Y * (-1)**popcount(j & (y|z)_mask).
    """
    if h.n_qubits > cap:
        raise CapExceeded(f"n_qubits={h.n_qubits} exceeds cap {cap}")
    dim = h.dim
    cols = np.arange(dim, dtype=np.int64)
    rows_all, cols_all, vals_all = [], [], []
    for t in h.terms:
        x_mask, yz_mask, n_y = _word_masks(t.word)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & yz_mask) & 1)
        vals = (t.coeff * (1j**n_y)) * signs
        rows_all.append(cols ^ x_mask)
        cols_all.append(cols)
        vals_all.append(vals.astype(np.complex128))
    if h.constant != 0.0:
        rows_all.append(cols)
        cols_all.append(cols)
        vals_all.append(np.full(dim, h.constant, dtype=np.complex128))
    if not rows_all:
        return SparseHermitian(sp.csr_matrix((dim, dim), dtype=np.complex128))
    m = sp.coo_matrix(
        (np.concatenate(vals_all), (np.concatenate(rows_all), np.concatenate(cols_all))),
        shape=(dim, dim),
    ).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return SparseHermitian(m)


def next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def default_pad_value(m) -> float:
    """Pad diagonal above the Gershgorin bound so padding never becomes the
    recovered ground state."""
    return gershgorin_upper(m) + 1.0


def pad_to_pow2(m: SparseHermitian, pad_value: float) -> SparseHermitian:
    """Extend with diagonal entries pad_value up to the next power of two."""
    mat = as_csr(m)
    dim = mat.shape[0]
    target = next_pow2(dim)
    if target == dim:
        return m if isinstance(m, SparseHermitian) else SparseHermitian(mat)
    extra = sp.identity(target - dim, dtype=np.complex128, format="csr") * pad_value
    out = sp.block_diag([mat, extra], format="csr")
    return SparseHermitian(out, hermitian=getattr(m, "hermitian", True))


def gen_tfim(n: int, J: float = 1.0, h_field: float = 1.0, label: str = "") -> QubitHamiltonian:
    """Transverse-field Ising chain -J sum Z_i Z_{i+1} - h sum X_i, open ends."""
    if n < 2:
        raise ValueError("TFIM chain needs n >= 2")
    terms = []
    for i in range(n - 1):
        word = ["I"] * n
        word[i] = word[i + 1] = "Z"
        terms.append(PauliTerm(-J, "".join(word)))
    for i in range(n):
        word = ["I"] * n
        word[i] = "X"
        terms.append(PauliTerm(-h_field, "".join(word)))
    return QubitHamiltonian(
        n_qubits=n,
        terms=tuple(terms),
        label=label or f"tfim-n{n}-J{J:g}-h{h_field:g}",
    )


def gen_commuting_block(dim: int, seed: int) -> SparseHermitian:
    """Hermitian matrix whose quadrant blocks are polynomials of one shared
    Hermitian K, hence pairwise commuting; the block-root pipeline is exact
    on this family up to square-root truncation.

    A and D carry a +2 shift so A stays comfortably invertible.
    """
    if dim < 4 or dim & (dim - 1):
        raise ValueError("dim must be a power of two >= 4")
    half = dim // 2
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((half, half)) + 1j * rng.standard_normal((half, half))
    k = (g + g.conj().T) / 2.0
    k /= max(1.0, np.linalg.norm(k, 2))
    eye = np.eye(half)
    k2 = k @ k

    def poly(c0, c1, c2):
        return c0 * eye + c1 * k + c2 * k2

    ca = rng.uniform(-0.5, 0.5, 2)
    cd = rng.uniform(-0.5, 0.5, 2)
    cb = rng.uniform(-0.5, 0.5, 3)
    a = poly(2.0, *ca)
    d = poly(-2.0, *cd)
    b = poly(*cb)
    h = np.block([[a, b], [b, d]])
    h = (h + h.conj().T) / 2.0
    return SparseHermitian(sp.csr_matrix(h))


def gen_random_hermitian(dim: int, seed: int) -> SparseHermitian:
    """Dense random Hermitian test matrix with O(1) spectral radius."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / (2.0 * math.sqrt(dim))
    return SparseHermitian(sp.csr_matrix(h))


# ---------------------------------------------------------------------------
# File formats


def to_pauli_dict(h: QubitHamiltonian) -> dict:
    return {
        "label": h.label,
        "n_qubits": h.n_qubits,
        "constant": float(h.constant),
        "terms": [
            {"coeff": [t.coeff.real, t.coeff.imag], "word": t.word} for t in h.terms
        ],
    }


def from_pauli_dict(d: dict) -> QubitHamiltonian:
    terms = tuple(
        PauliTerm(complex(t["coeff"][0], t["coeff"][1]), t["word"]) for t in d["terms"]
    )
    return QubitHamiltonian(
        n_qubits=int(d["n_qubits"]),
        terms=terms,
        constant=float(d.get("constant", 0.0)),
        label=str(d.get("label", "")),
    )


def write_pauli_json(h: QubitHamiltonian, path) -> None:
    Path(path).write_text(json.dumps(to_pauli_dict(h), indent=1) + "\n")


def read_pauli_json(path) -> QubitHamiltonian:
    return from_pauli_dict(json.loads(Path(path).read_text()))


def write_matrix_market(m, path, hermitian: bool | None = None) -> None:
    mat = as_csr(m)
    if hermitian is None:
        hermitian = bool(getattr(m, "hermitian", True))
    symmetry = "hermitian" if hermitian else "general"
    scipy.io.mmwrite(str(path), mat.tocoo(), field="complex", symmetry=symmetry)


def read_matrix_market(path) -> SparseHermitian:
    mat = sp.csr_matrix(scipy.io.mmread(str(path)))
    hermitian = hermiticity_defect(mat) <= HERMITICITY_TOL * max(
        1.0, float(np.abs(mat.data).max()) if mat.nnz else 0.0
    )
    return SparseHermitian(mat.astype(np.complex128), hermitian=hermitian)


def load_input(path) -> tuple[SparseHermitian, str]:
    """Load either a Pauli-term JSON file or a Matrix Market file.

    Returns the realized matrix and a label.
    """
    p = Path(path)
    if p.suffix.lower() in {".mtx", ".mm"}:
        return read_matrix_market(p), p.stem
    h = read_pauli_json(p)
    return realize(h), h.label or p.stem
