"""In-tree Hartree-Fock/STO-3G toolchain and Jordan-Wigner exporter for the
benchmark aromatic fixtures."""

__version__ = "0.1.0"
