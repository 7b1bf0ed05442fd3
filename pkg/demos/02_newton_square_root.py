"""Behavior of the fixed-length Newton square-root iteration: convergence
from the fourth-root-of-trace seed, and the residual-triggered dense
fallback when six iterations cannot bridge a wide spectrum.
"""

import numpy as np

from sbd import SqrtConfig, newton_sqrt
from sbd.hamiltonians import gen_commuting_block

print("=" * 70)
print("1. Iterate counts vs accuracy on a well-scaled matrix")
print("=" * 70)
m = gen_commuting_block(16, seed=3).toarray()
target = m @ m.conj().T + 0.1 * np.eye(16)  # comfortably positive definite
for iters in (1, 2, 3, 4, 6, 8):
    res = newton_sqrt(target, SqrtConfig(iterations=iters, residual_check=False))
    rel = res.residual / np.linalg.norm(target)
    print(f"iterations={iters}: relative residual {rel:.3e}")

print()
print("=" * 70)
print("2. The seed matters: (Tr M)^(1/4) puts the iteration within reach of")
print("   spectra that are O(1); a spread of 12 orders defeats six steps,")
print("   and the residual check hands the job to a dense eigensolve.")
print("=" * 70)
wide = np.diag([1e6, 1e-6])
res = newton_sqrt(wide)
print(f"dim-2 matrix diag(1e6, 1e-6): fallback={res.fallback}")
print(f"result diag: {np.diag(res.matrix.toarray()).real}")
res_strict = newton_sqrt(wide, SqrtConfig(residual_check=False))
print(
    f"without the check: fallback={res_strict.fallback}, "
    f"residual {res_strict.residual:.3e} (silently wrong sqrt)"
)

print()
print("=" * 70)
print("3. Determinism: the iteration is a fixed arithmetic program.")
print("=" * 70)
a = newton_sqrt(target)
b = newton_sqrt(target)
print(f"two runs bitwise identical: {(a.matrix != b.matrix).nnz == 0}")
