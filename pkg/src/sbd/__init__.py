"""Recursive eigenvalue-preserving block compression for Hermitian qubit
Hamiltonians, with Krylov and simulated-VQE eigensolvers and a benchmark
harness.
"""

from .errors import (
    BadWord,
    CapExceeded,
    DegenerateFit,
    DepthTooLarge,
    DomainError,
    IncompleteGrid,
    IterationSingular,
    NegativeRadicand,
    NoConvergence,
    NotPowerOfTwo,
    OddDimension,
    SbdError,
    SeedDegenerate,
    Singular,
    ZeroMatrix,
)
from .hamiltonians import (
    PauliTerm,
    QubitHamiltonian,
    SparseHermitian,
    default_pad_value,
    gen_commuting_block,
    gen_random_hermitian,
    gen_tfim,
    load_input,
    pad_to_pow2,
    read_matrix_market,
    read_pauli_json,
    realize,
    write_matrix_market,
    write_pauli_json,
)
from .blockops import BlockPartition, det_block, det_prime, solve_block, split
from .matsqrt import SqrtConfig, SqrtResult, newton_sqrt
from .compress import (
    CompressedHamiltonian,
    CompressionStep,
    applications_needed,
    compress,
    compression_ratio,
    hermitize,
    normalize_spectrum,
    read_artifact,
    recover_eigenvalue,
    recover_through,
    sbd_step,
    write_artifact,
)
from .eigsolve import EigResult, dense_oracle, krylov_extreme
from .vqe import VqeConfig, VqeResult, pauli_decompose, vqe_minimize

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
