"""Molecular energy ranking over the committed aromatic fixtures: build a
model grid (eigensolver x compression depth), sort the six molecules by
ground-state energy under each model, and compare orderings against the
uncompressed variational reference.

The uncompressed variational runs need generous restart budgets: with too
few restarts the 4-qubit optimization can strand 0.1 Ha above the true
ground state and the reference ordering itself goes wrong. Expect a few
minutes.
"""

from pathlib import Path

from sbd.bench import ModelSpec, rank

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

MOLECULES = [
    "benzaanthracene",
    "benzocphenanthrene",
    "chrysene",
    "pyrene",
    "tetracene",
    "triphenylene",
]

VQE = {"layers": 4, "max_iters": 1500, "restarts": 3, "vqe_tol": 1e-12}

specs = []
for name in MOLECULES:
    src = str(FIXTURES / f"{name}_cas2e2o.json")
    for solver in ("dense", "krylov", "vqe"):
        for depth in (0, 1, 2):
            overrides = dict(VQE) if solver == "vqe" else {}
            specs.append(ModelSpec(name, src, solver, depth, overrides=overrides))

print(f"running {len(specs)} model evaluations ...")
report, records = rank(specs, reference="vqe-d0")

print()
print(f"{'model':12s} ordering (most stable first)")
for model in report.models:
    marker = "*" if model == report.reference else " "
    print(f"{marker}{model:11s} " + " < ".join(report.orderings[model]))

print()
print(f"reference model:  {report.reference}")
print(f"match rate:       {report.match_rate:.3f}")
print(f"ground hit rate:  {report.ground_hit_rate:.3f}")
print()
print("energies (hartree):")
header = " ".join(f"{m[:12]:>14s}" for m in report.molecules)
print(f"{'model':12s} {header}")
for model in report.models:
    row = " ".join(f"{report.energies[model][m]:14.6f}" for m in report.molecules)
    print(f"{model:12s} {row}")
