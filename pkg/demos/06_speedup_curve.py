"""Wall-time advantage of compressing before the variational eigensolver:
median-of-seven timings at increasing compression depth on an 8-qubit
chain, with the exponential fit of the relative speed.
"""

import tempfile
from pathlib import Path

from sbd.bench import ModelSpec, run_timed, speed_fit
from sbd.hamiltonians import gen_tfim, write_pauli_json

OVERRIDES = {"layers": 2, "max_iters": 100, "restarts": 1, "vqe_tol": 1e-15}

with tempfile.TemporaryDirectory() as tmp:
    src = Path(tmp) / "tfim8.json"
    write_pauli_json(gen_tfim(8, 1.0, 1.0), src)

    times = {}
    energies = {}
    for depth in (0, 1, 2, 3):
        spec = ModelSpec("tfim8", str(src), "vqe", depth, overrides=dict(OVERRIDES))
        rec, median = run_timed(spec, runs=7, warmup=1)
        times[depth] = median
        energies[depth] = rec.energy
        print(
            f"depth {depth}: solve dim {rec.matrix_dim:4d}, "
            f"median {median * 1e3:8.1f} ms, energy {rec.energy:.6f}"
        )

depths = sorted(times)
rel = [times[0] / times[d] for d in depths]
a, b, resid = speed_fit(depths, rel)
print()
print("relative speed vs the uncompressed run:")
for d in depths:
    print(f"  depth {d}: {times[0] / times[d]:6.2f}x")
print(f"exponential fit speed ~ a*exp(b*depth): a={a:.3f}, b={b:.3f} (rms {resid:.3f})")
print("b > 0 means the advantage grows with every halving")
