"""Export qubit Hamiltonians for the six benchmark aromatics as Pauli-term
JSON files (one per molecule and active space).

The file layout matches the consumer's format: label, n_qubits, constant,
terms sorted lexicographically by word, plus a provenance block recording
the toolchain and geometry.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .active_space import build_active_space
from .geometry import (
    GEOMETRY_SOURCE,
    MOLECULES,
    build_geometry,
    formula,
    geometry_hash,
)
from .jw import qubit_hamiltonian
from .scf import run_rhf

ACTIVE_SPACES = ((2, 2), (4, 4), (6, 6))


class ToolchainMissing(RuntimeError):
    """The integral/SCF backend is unavailable (numba import failed)."""


class GeometryUnresolved(KeyError):
    """Molecule name not in the geometry registry."""


@dataclass(frozen=True)
class MoleculeSpec:
    name: str
    active_electrons: int
    active_orbitals: int

    def __post_init__(self):
        if self.name not in MOLECULES:
            raise GeometryUnresolved(self.name)
        if (self.active_electrons, self.active_orbitals) not in ACTIVE_SPACES:
            raise ValueError(
                f"active space must be one of {ACTIVE_SPACES}, got "
                f"({self.active_electrons},{self.active_orbitals})"
            )

    @property
    def n_qubits(self) -> int:
        return 2 * self.active_orbitals

    @property
    def file_name(self) -> str:
        safe = (
            self.name.replace("(", "")
            .replace(")", "")
            .replace("[", "")
            .replace("]", "")
        )
        return f"{safe}_cas{self.active_electrons}e{self.active_orbitals}o.json"


def check_toolchain() -> None:
    try:
        import numba  # noqa: F401
    except ImportError as exc:  # pragma: no cover - environment specific
        raise ToolchainMissing("numba is required for integral evaluation") from exc


def export(spec: MoleculeSpec, out_dir, scf_cache: dict | None = None) -> Path:
    """Run the HF/active-space/Jordan-Wigner pipeline and write the file."""
    check_toolchain()
    atoms = build_geometry(spec.name)
    if scf_cache is not None and spec.name in scf_cache:
        scf = scf_cache[spec.name]
    else:
        scf = run_rhf(atoms)
        if scf_cache is not None:
            scf_cache[spec.name] = scf
    space = build_active_space(scf, spec.active_electrons, spec.active_orbitals)
    words = qubit_hamiltonian(space)

    n_q = spec.n_qubits
    identity = "I" * n_q
    constant = words.pop(identity, 0.0)
    terms = [
        {"coeff": [float(c), 0.0], "word": w} for w, c in sorted(words.items())
    ]
    n_c, n_h = formula(atoms)
    payload = {
        "label": f"{spec.name} ({spec.active_electrons},{spec.active_orbitals})",
        "n_qubits": n_q,
        "constant": float(constant),
        "terms": terms,
        "provenance": {
            "generator": f"fixturegen {__version__}",
            "numpy": np.__version__,
            "method": "RHF/STO-3G, CAS integrals, Jordan-Wigner (interleaved spins)",
            "geometry_source": GEOMETRY_SOURCE,
            "geometry_hash": geometry_hash(atoms),
            "formula": f"C{n_c}H{n_h}",
            "scf_energy_hartree": scf.energy,
            "scf_iterations": scf.iterations,
        },
    }
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / spec.file_name
    path.write_text(json.dumps(payload, indent=1) + "\n")
    return path


def export_all(out_dir, log=print) -> list[Path]:
    paths = []
    cache: dict = {}
    for name in MOLECULES:
        for e, o in ACTIVE_SPACES:
            spec = MoleculeSpec(name, e, o)
            path = export(spec, out_dir, scf_cache=cache)
            log(f"wrote {path}")
            paths.append(path)
    return paths


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fixturegen",
        description="Export PAH Hartree-Fock qubit Hamiltonians to Pauli-term JSON.",
    )
    parser.add_argument("--molecule", choices=MOLECULES, help="one molecule")
    parser.add_argument(
        "--active",
        nargs=2,
        type=int,
        metavar=("E", "O"),
        help="active electrons and orbitals, e.g. --active 2 2",
    )
    parser.add_argument("--all", action="store_true", help="export the full grid")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    try:
        if args.all:
            export_all(args.out)
            return 0
        if not args.molecule or not args.active:
            parser.error("need --molecule and --active, or --all")
        spec = MoleculeSpec(args.molecule, args.active[0], args.active[1])
        path = export(spec, args.out)
        print(f"wrote {path}")
        return 0
    except (ToolchainMissing, GeometryUnresolved, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
