"""Exact-statevector variational eigensolver.

Ansatz: per layer one RY rotation on every qubit followed by a linear chain
of CZ entanglers. Expectations are exact (the sparse operator is applied to
the statevector), so the variational bound holds to rounding precision and
runs are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, NotPowerOfTwo
from .hamiltonians import PauliTerm, QubitHamiltonian
from .sparsetools import as_csr


@dataclass(frozen=True)
class VqeConfig:
    seed: int
    layers: int = 3
    max_iters: int = 500
    learning_rate: float = 0.05
    tol: float = 1e-6
    gradient: str = "parameter_shift"
    restarts: int = 3

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.gradient not in ("parameter_shift", "finite_difference"):
            raise ValueError(f"unknown gradient mode {self.gradient!r}")


@dataclass(frozen=True)
class VqeResult:
    energy: float
    params: np.ndarray
    iterations: int
    energy_trace: tuple[float, ...]
    converged: bool


def _apply_ry(state: np.ndarray, qubit: int, theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    shaped = state.reshape(1 << qubit, 2, -1)
    out = np.empty_like(shaped)
    out[:, 0, :] = c * shaped[:, 0, :] - s * shaped[:, 1, :]
    out[:, 1, :] = s * shaped[:, 0, :] + c * shaped[:, 1, :]
    return out.reshape(state.shape)


def _apply_cz_chain(state: np.ndarray, n: int) -> np.ndarray:
    out = state
    for q in range(n - 1):
        shaped = out.reshape(1 << q, 2, 2, -1).copy()
        shaped[:, 1, 1, :] *= -1.0
        out = shaped.reshape(state.shape)
    return out


def ansatz_state(params: np.ndarray, n: int, layers: int) -> np.ndarray:
    """|psi(theta)> from |0...0>; qubit 0 is the most significant bit."""
    state = np.zeros(1 << n)
    state[0] = 1.0
    idx = 0
    for _ in range(layers):
        for q in range(n):
            state = _apply_ry(state, q, params[idx])
            idx += 1
        state = _apply_cz_chain(state, n)
    return state


def _expectation(m, params: np.ndarray, n: int, layers: int) -> float:
    psi = ansatz_state(params, n, layers)
    return float(np.real(np.vdot(psi, m @ psi)))


def energy_gradient(m, params: np.ndarray, n: int, layers: int, mode: str) -> np.ndarray:
    """Gradient of the energy, exact parameter-shift or central differences."""
    grad = np.empty_like(params)
    if mode == "parameter_shift":
        shift = np.pi / 2.0
        for i in range(params.size):
            params[i] += shift
            plus = _expectation(m, params, n, layers)
            params[i] -= 2.0 * shift
            minus = _expectation(m, params, n, layers)
            params[i] += shift
            grad[i] = 0.5 * (plus - minus)
    else:
        h = 1e-5
        for i in range(params.size):
            params[i] += h
            plus = _expectation(m, params, n, layers)
            params[i] -= 2.0 * h
            minus = _expectation(m, params, n, layers)
            params[i] += h
            grad[i] = (plus - minus) / (2.0 * h)
    return grad


def _single_run(m, n: int, cfg: VqeConfig, seed: int):
    rng = np.random.default_rng(seed)
    params = rng.uniform(-np.pi, np.pi, cfg.layers * n)
    v = np.zeros_like(params)  # second-moment accumulator (momentum-free)
    beta2, eps = 0.999, 1e-8
    trace = []
    energy = _expectation(m, params, n, cfg.layers)
    trace.append(energy)
    best_energy, best_params = energy, params.copy()
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        grad = energy_gradient(m, params, n, cfg.layers, cfg.gradient)
        v = beta2 * v + (1.0 - beta2) * grad * grad
        v_hat = v / (1.0 - beta2**it)
        params = params - cfg.learning_rate * grad / (np.sqrt(v_hat) + eps)
        previous = energy
        energy = _expectation(m, params, n, cfg.layers)
        trace.append(energy)
        if energy < best_energy:
            best_energy, best_params = energy, params.copy()
        if abs(energy - previous) < cfg.tol:
            converged = True
            break
    return best_energy, best_params, it, trace, converged


def vqe_minimize(m, cfg: VqeConfig) -> VqeResult:
    """Minimize <psi(theta)| m |psi(theta)> over the layered RY/CZ ansatz.

    Runs cfg.restarts independent seeded starts and reports the best energy
    observed. A run that exhausts max_iters without the energy settling is
    still returned, flagged via converged=False.
    """
    m = as_csr(m)
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or dim < 2:
        raise NotPowerOfTwo(f"dim {dim} is not a power of two >= 2")
    if n > 14:
        raise CapExceeded(f"{n} qubits exceeds the statevector cap of 14")
    best = None
    for r in range(max(1, cfg.restarts)):
        run = _single_run(m, n, cfg, seed=cfg.seed + r)
        if best is None or run[0] < best[0]:
            best = run
    energy, params, iterations, trace, converged = best
    return VqeResult(
        energy=energy,
        params=params,
        iterations=iterations,
        energy_trace=tuple(trace),
        converged=converged,
    )


PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli_decompose(m, label: str = "", tol: float = 1e-12) -> QubitHamiltonian:
    """Expand a Hermitian 2**q matrix in the Pauli-word basis.

    Coefficients are Tr(m sigma_w) / 2**q over all 4**q words; terms below
    tol are dropped. realize() of the result reproduces m.
    """
    mat = as_csr(m).toarray()
    dim = mat.shape[0]
    q = dim.bit_length() - 1
    if dim != 1 << q:
        raise NotPowerOfTwo(f"dim {dim} is not a power of two")
    if q > 6:
        raise CapExceeded(f"{q} qubits would scan 4**{q} words")
    terms = []
    for idx in range(4**q):
        word = ""
        rest = idx
        for _ in range(q):
            word = "IXYZ"[rest & 3] + word
            rest >>= 2
        sigma = np.array([[1.0]], dtype=np.complex128)
        for ch in word:
            sigma = np.kron(sigma, PAULI_MATRICES[ch])
        coeff = np.sum(mat * sigma.T) / dim  # Tr(m sigma) without the matmul
        if abs(coeff) >= tol:
            terms.append(PauliTerm(complex(coeff), word))
    return QubitHamiltonian(n_qubits=q, terms=tuple(terms), label=label)
