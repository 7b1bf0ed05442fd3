"""The two eigensolver routes: restarted Lanczos with full
reorthogonalization (with the Gershgorin shift trick for smallest
eigenvalues) and the exact-statevector variational minimizer.
"""

import numpy as np

from sbd import VqeConfig, dense_oracle, gen_tfim, krylov_extreme, realize, vqe_minimize
from sbd.vqe import pauli_decompose

print("=" * 70)
print("1. Transverse-field Ising chain, 8 sites")
print("=" * 70)
m = realize(gen_tfim(8, J=1.0, h_field=1.0))
exact = dense_oracle(m)[0]
res = krylov_extreme(m, which="smallest", seed=0)
print(f"dense ground state:  {exact:.10f}")
print(
    f"Lanczos ground state: {res.value:.10f} "
    f"(residual {res.residual:.1e}, {res.iterations} matvecs)"
)

print()
print("=" * 70)
print("2. Variational minimization on the same chain (layered RY + CZ)")
print("=" * 70)
for layers in (2, 3, 4):
    res = vqe_minimize(
        m.matrix, VqeConfig(seed=1, layers=layers, max_iters=400, restarts=2)
    )
    print(
        f"layers={layers}: energy {res.energy:.6f} "
        f"(error {res.energy - exact:.2e}, converged={res.converged})"
    )

print()
print("=" * 70)
print("3. Pauli-word expansion of a generic Hermitian block")
print("=" * 70)
rng = np.random.default_rng(0)
g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
block = (g + g.conj().T) / 2
h = pauli_decompose(block)
print(f"dim-4 Hermitian -> {len(h.terms)} Pauli terms:")
for t in h.terms[:6]:
    print(f"  {t.coeff.real:+.4f}{t.coeff.imag:+.4f}j * {t.word}")
back = realize(h).toarray()
print(f"round-trip max error: {np.abs(back - block).max():.2e}")
