"""Idealized geometries for the six benchmark polycyclic aromatics.

Each molecule starts as fused hexagons on a honeycomb lattice (axial ring
coordinates) with carbons on the vertices. Carbon-carbon bond lengths are
then differentiated by the Coulson bond-order relation r = 1.517 - 0.18 p,
with pi bond orders p from tight-binding theory on the ring graph, and the
skeleton re-embedded by least squares; this restores the bond alternation
that separates the isomer energies. Hydrogens sit at 1.09 A on the outward
bisector of every two-coordinated carbon.
"""

from __future__ import annotations

import hashlib

import numpy as np
from scipy.optimize import least_squares

CC_BOND = 1.40  # angstrom
CH_BOND = 1.09  # angstrom

# axial (q, r) hexagon coordinates; neighbors differ by one of
# (1,0), (-1,0), (0,1), (0,-1), (1,-1), (-1,1)
RING_PATTERNS = {
    "tetracene": [(0, 0), (1, 0), (2, 0), (3, 0)],
    "benz(a)anthracene": [(0, 0), (1, 0), (2, 0), (2, 1)],
    "triphenylene": [(0, 0), (1, 0), (-1, 1), (0, -1)],
    "benzo[c]phenanthrene": [(0, 0), (1, 0), (1, 1), (0, 2)],
    "pyrene": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "chrysene": [(0, 0), (1, 0), (1, 1), (2, 1)],
}

MOLECULES = tuple(sorted(RING_PATTERNS))

FORMULAS = {
    "tetracene": (18, 12),
    "benz(a)anthracene": (18, 12),
    "triphenylene": (18, 12),
    "benzo[c]phenanthrene": (18, 12),
    "pyrene": (16, 10),
    "chrysene": (18, 12),
}


def _hex_center(q: int, r: int) -> np.ndarray:
    vq = np.array([np.sqrt(3.0) * CC_BOND, 0.0])
    vr = np.array([np.sqrt(3.0) * CC_BOND / 2.0, 1.5 * CC_BOND])
    return q * vq + r * vr


def _ring_vertices(center: np.ndarray) -> list[np.ndarray]:
    out = []
    for k in range(6):
        angle = np.pi / 6.0 + k * np.pi / 3.0  # pointy-top hexagon
        out.append(center + CC_BOND * np.array([np.cos(angle), np.sin(angle)]))
    return out


# helical out-of-plane displacement per ring index; only the fjord-strained
# molecule needs it (planar idealization puts its terminal hydrogens 0.54 A
# apart, which is unphysical and SCF-hostile)
HELICAL_TWIST = {"benzo[c]phenanthrene": 0.60}


def _bond_length_targets(carbons: np.ndarray) -> dict[tuple[int, int], float]:
    """Coulson bond lengths from tight-binding pi bond orders."""
    n = len(carbons)
    adj = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(carbons[i] - carbons[j]) < 1.2 * CC_BOND:
                adj[i, j] = adj[j, i] = 1.0
    _, vecs = np.linalg.eigh(-adj)
    occ = vecs[:, : n // 2]  # one pi electron per carbon
    orders = 2.0 * occ @ occ.T
    return {
        (i, j): 1.517 - 0.18 * orders[i, j]
        for i in range(n)
        for j in range(i + 1, n)
        if adj[i, j]
    }


def _embed_bond_lengths(carbons: np.ndarray) -> np.ndarray:
    """Re-embed the planar carbon skeleton with the target bond lengths.

    Second-neighbor distances at the ideal 120-degree angle rigidify the
    rings against shear.
    """
    targets = _bond_length_targets(carbons)
    neighbors: dict[int, list[int]] = {}
    for i, j in targets:
        neighbors.setdefault(i, []).append(j)
        neighbors.setdefault(j, []).append(i)
    second: list[tuple[int, int, float]] = []
    for j, around in neighbors.items():
        for a in range(len(around)):
            for b in range(a + 1, len(around)):
                i, k = around[a], around[b]
                r1 = targets.get((min(i, j), max(i, j)))
                r2 = targets.get((min(j, k), max(j, k)))
                second.append((i, k, np.sqrt(r1 * r1 + r2 * r2 + r1 * r2)))

    def residuals(flat):
        pos = flat.reshape(-1, 2)
        out = []
        for (i, j), r in targets.items():
            out.append(np.linalg.norm(pos[i] - pos[j]) - r)
        for i, k, r in second:
            out.append(0.5 * (np.linalg.norm(pos[i] - pos[k]) - r))
        return out

    fit = least_squares(residuals, carbons[:, :2].ravel(), method="trf", xtol=1e-12)
    return fit.x.reshape(-1, 2)


def _relax_3d(carbons: np.ndarray, z0: np.ndarray) -> np.ndarray:
    """Re-fit bond lengths in 3D while holding the helical z profile softly."""
    flat2d = carbons[:, :2]
    targets = _bond_length_targets(
        np.column_stack([flat2d, np.zeros(len(flat2d))])
    )

    def residuals(flat):
        pos = flat.reshape(-1, 3)
        out = []
        for (i, j), r in targets.items():
            out.append(np.linalg.norm(pos[i] - pos[j]) - r)
        out.extend(0.4 * (pos[:, 2] - z0))
        return out

    x0 = np.column_stack([flat2d, z0]).ravel()
    fit = least_squares(residuals, x0, method="trf", xtol=1e-12)
    return fit.x.reshape(-1, 3)


def build_geometry(name: str) -> list[tuple[str, np.ndarray]]:
    """Atoms as (element, xyz angstrom); planar except for helical strain."""
    if name not in RING_PATTERNS:
        raise KeyError(f"unknown molecule {name!r}; known: {list(MOLECULES)}")
    rings = RING_PATTERNS[name]
    seen: dict[tuple[int, int], np.ndarray] = {}
    ring_idx: dict[tuple[int, int], list[int]] = {}
    for idx, (q, r) in enumerate(rings):
        for v in _ring_vertices(_hex_center(q, r)):
            key = (round(v[0] * 1e4), round(v[1] * 1e4))
            seen.setdefault(key, v)
            ring_idx.setdefault(key, []).append(idx)

    twist = HELICAL_TWIST.get(name, 0.0)
    mid = (len(rings) - 1) / 2.0
    carbons, zs = [], []
    for key, v in seen.items():
        carbons.append(v)
        mean_ring = sum(ring_idx[key]) / len(ring_idx[key])
        zs.append(twist * (mean_ring - mid))
    flat = _embed_bond_lengths(np.asarray(carbons))
    if twist:
        pos = _relax_3d(np.asarray(carbons), np.asarray(zs))
    else:
        pos = np.column_stack([flat, zs])

    atoms: list[tuple[str, np.ndarray]] = []
    for c in pos:
        atoms.append(("C", c.copy()))
    # hydrogens on carbons with exactly two carbon neighbors
    for c in pos:
        neighbors = [o for o in pos if 0.1 < np.linalg.norm(o - c) < 1.2 * CC_BOND]
        if len(neighbors) == 2:
            bisector = sum(n - c for n in neighbors)
            direction = -bisector / np.linalg.norm(bisector)
            atoms.append(("H", c + CH_BOND * direction))
        elif len(neighbors) != 3:
            raise ValueError(f"{name}: carbon with {len(neighbors)} neighbors")
    return atoms


def formula(atoms) -> tuple[int, int]:
    els = [el for el, _ in atoms]
    return els.count("C"), els.count("H")


def min_hh_distance(atoms) -> float:
    hs = [xyz for el, xyz in atoms if el == "H"]
    best = np.inf
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            best = min(best, float(np.linalg.norm(hs[i] - hs[j])))
    return best


def geometry_hash(atoms) -> str:
    payload = ";".join(
        f"{el}:{xyz[0]:.6f},{xyz[1]:.6f},{xyz[2]:.6f}" for el, xyz in atoms
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


GEOMETRY_SOURCE = (
    f"idealized-hex-lattice-v2 (start CC={CC_BOND} A, Coulson bond-order "
    f"refinement r=1.517-0.18p, CH={CH_BOND} A)"
)
