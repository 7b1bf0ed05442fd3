"""STO-3G basis data for H and C, with primitive and contracted
normalization folded into the contraction weights.

Kernels elsewhere integrate over unnormalized Cartesian primitives
x^i y^j z^k exp(-a r^2); everything normalization-related lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BOHR_PER_ANGSTROM = 1.0 / 0.52917721092

# exponents and contraction coefficients for normalized primitives
STO3G = {
    "H": {
        "1s": (
            [3.42525091, 0.62391373, 0.16885540],
            [0.15432897, 0.53532814, 0.44463454],
        ),
    },
    "C": {
        "1s": (
            [71.6168370, 13.0450960, 3.5305122],
            [0.15432897, 0.53532814, 0.44463454],
        ),
        "2s": (
            [2.9412494, 0.6834831, 0.2222899],
            [-0.09996723, 0.39951283, 0.70011547],
        ),
        "2p": (
            [2.9412494, 0.6834831, 0.2222899],
            [0.15591627, 0.60768372, 0.39195739],
        ),
    },
}

ATOMIC_NUMBER = {"H": 1, "C": 6}


@dataclass(frozen=True)
class Shell:
    center: tuple[float, float, float]  # bohr
    l: int  # 0 = s, 1 = p (three Cartesian components)
    exps: tuple[float, ...]
    weights: tuple[float, ...]  # contraction coefs * primitive norms, renormalized

    @property
    def n_components(self) -> int:
        return 1 if self.l == 0 else 3


def primitive_norm(a: float, l: int) -> float:
    """Norm of x^l exp(-a r^2) type Cartesian primitives (axis-aligned)."""
    if l == 0:
        return (2.0 * a / math.pi) ** 0.75
    return (2.0 * a / math.pi) ** 0.75 * 2.0 * math.sqrt(a)


def _contracted_self_overlap(exps, weights, l: int) -> float:
    """<phi|phi> for a contracted shell of unnormalized primitives.

    1D Gaussian product integrals: s: (pi/p)^(3/2); p_x: (pi/p)^(3/2)/(2p).
    """
    s = 0.0
    for a, ca in zip(exps, weights):
        for b, cb in zip(exps, weights):
            p = a + b
            base = (math.pi / p) ** 1.5
            if l == 1:
                base /= 2.0 * p
            s += ca * cb * base
    return s


def make_shell(center_bohr, l: int, exps, coefs) -> Shell:
    weights = [c * primitive_norm(a, l) for a, c in zip(exps, coefs)]
    norm = _contracted_self_overlap(exps, weights, l)
    weights = [w / math.sqrt(norm) for w in weights]
    return Shell(
        center=tuple(float(x) for x in center_bohr),
        l=l,
        exps=tuple(float(a) for a in exps),
        weights=tuple(float(w) for w in weights),
    )


def build_shells(atoms: list[tuple[str, np.ndarray]]) -> list[Shell]:
    """atoms: list of (element, xyz in angstrom)."""
    shells = []
    for element, xyz in atoms:
        center = np.asarray(xyz, dtype=float) * BOHR_PER_ANGSTROM
        for name, (exps, coefs) in STO3G[element].items():
            l = 1 if name.endswith("p") else 0
            shells.append(make_shell(center, l, exps, coefs))
    return shells


def nuclear_charges(atoms) -> list[tuple[int, np.ndarray]]:
    return [
        (ATOMIC_NUMBER[el], np.asarray(xyz, dtype=float) * BOHR_PER_ANGSTROM)
        for el, xyz in atoms
    ]


def n_electrons(atoms) -> int:
    return sum(ATOMIC_NUMBER[el] for el, _ in atoms)


def nuclear_repulsion(atoms) -> float:
    charges = nuclear_charges(atoms)
    e = 0.0
    for i in range(len(charges)):
        zi, ri = charges[i]
        for j in range(i + 1, len(charges)):
            zj, rj = charges[j]
            e += zi * zj / float(np.linalg.norm(ri - rj))
    return e
