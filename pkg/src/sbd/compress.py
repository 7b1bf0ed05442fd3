"""The compression pipeline: block roots, hermitization, spectral
adjustment, recursion along a branch bitstring, the compression/depth
algebra, and eigenvalue recovery back through the recorded steps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .blockops import det_block, det_prime, mul, split
from .errors import (
    DepthTooLarge,
    DomainError,
    NegativeRadicand,
    Singular,
    ZeroMatrix,
)
from .matsqrt import SqrtConfig, newton_sqrt
from .sparsetools import abs_row_sum_bound, as_csr, drop_small, hermiticity_defect

DROP_REL_TOL = 1e-14


@dataclass(frozen=True)
class StepDiagnostics:
    used_det_prime: bool
    sqrt_fallback: bool
    sqrt_residual: float


@dataclass(frozen=True)
class CompressionStep:
    """Per-level record needed to invert the spectral adjustment."""

    branch: int
    n_scale: float
    t_shift: float
    used_det_prime: bool = False
    sqrt_fallback: bool = False

    def __post_init__(self):
        if self.branch not in (0, 1):
            raise ValueError("branch must be 0 or 1")
        if not self.n_scale > 0:
            raise ValueError("n_scale must be positive")


@dataclass(frozen=True)
class CompressedHamiltonian:
    """Final block plus the ordered list of steps (the branch path)."""

    block: sp.csr_matrix
    steps: tuple[CompressionStep, ...]
    original_dim: int
    sign: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "block", as_csr(self.block))
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if self.block.shape[0] * (1 << len(self.steps)) != self.original_dim:
            raise ValueError("block dim and step count do not match original_dim")
        self.check_hermitian()

    @property
    def dim(self) -> int:
        return self.block.shape[0]

    @property
    def path(self) -> str:
        return "".join(str(s.branch) for s in self.steps)

    def check_hermitian(self, tol: float = 1e-8) -> None:
        scale = max(1.0, float(np.abs(self.block.data).max()) if self.block.nnz else 0.0)
        defect = hermiticity_defect(self.block)
        if defect > tol * scale:
            raise ValueError(f"compressed block is not Hermitian (defect {defect:.3e})")


def sbd_step(
    m,
    sqrt_cfg: SqrtConfig | None = None,
    schur_correction: bool = False,
) -> tuple[sp.csr_matrix, sp.csr_matrix, StepDiagnostics]:
    """Both block roots of the quadratic block secular equation.

    gamma1 = (A + D + sqrt((A+D)^2 - 4 det)) / 2 takes the plus sign and
    holds the upper-magnitude half; gamma0 takes the minus sign. When A has
    no usable LU pivot the commuting determinant A D - C B is used instead
    and flagged.
    """
    p = split(m)
    used_det_prime = False
    try:
        det = det_block(p, schur_correction=schur_correction)
    except Singular:
        det = det_prime(p)
        used_det_prime = True
    trace_block = drop_small(p.a + p.d, DROP_REL_TOL)
    disc = drop_small(mul(trace_block, trace_block) - 4.0 * det, DROP_REL_TOL)
    root = newton_sqrt(disc, sqrt_cfg)
    gamma1 = drop_small((trace_block + root.matrix) * 0.5, DROP_REL_TOL)
    gamma0 = drop_small((trace_block - root.matrix) * 0.5, DROP_REL_TOL)
    diag = StepDiagnostics(
        used_det_prime=used_det_prime,
        sqrt_fallback=root.fallback,
        sqrt_residual=root.residual,
    )
    return gamma0, gamma1, diag


def hermitize(g) -> sp.csr_matrix:
    """g g^dagger: restores Hermiticity, squaring eigenvalue magnitudes."""
    g = as_csr(g)
    h = g @ g.conjugate().T
    h = (h + h.conjugate().T) * 0.5  # kill rounding-level asymmetry
    return drop_small(h, DROP_REL_TOL)


def normalize_spectrum(g_prime) -> tuple[sp.csr_matrix, float, float]:
    """Scale-and-shift (1/N) G + T I forcing the spectrum into [0, 1].

    The default policy is T = 0 with N the max absolute row sum, which is
    enough because the hermitized block is positive semidefinite.
    """
    g = as_csr(g_prime)
    n_scale = abs_row_sum_bound(g)
    if n_scale < 1e-300:
        raise ZeroMatrix("normalization bound is numerically zero")
    return drop_small(g * (1.0 / n_scale), DROP_REL_TOL), n_scale, 0.0


ScalePolicy = Callable[[sp.csr_matrix], tuple[sp.csr_matrix, float, float]]


def recover_eigenvalue(eps: float, step: CompressionStep, sign: int) -> float:
    """Invert one hermitize/normalize level: sign * |sqrt((eps - T) N)|."""
    radicand = (eps - step.t_shift) * step.n_scale
    if radicand < 0.0:
        if eps < step.t_shift - 1e-12:
            raise NegativeRadicand(
                f"eps={eps!r} below t_shift={step.t_shift!r} beyond slack"
            )
        radicand = 0.0
    return float(sign) * abs(math.sqrt(radicand))


def recover_through(
    eps: float, steps: tuple[CompressionStep, ...], sign: int
) -> float:
    """Compose recovery innermost level first.

    Intermediate levels recover the magnitude of that level's block root
    (their input blocks are already positive semidefinite); the requested
    sign is applied only at the outermost level.
    """
    value = eps
    last = len(steps) - 1
    for i, step in enumerate(reversed(steps)):
        value = recover_eigenvalue(value, step, sign if i == last else 1)
    return value


def _largest_eigenvalue(block: sp.csr_matrix) -> float:
    if block.shape[0] <= 256:
        return float(np.linalg.eigvalsh(block.toarray()).max())
    from .eigsolve import krylov_extreme

    return krylov_extreme(block, which="largest", seed=0).value


def compress(
    m,
    depth: int,
    path: str | None = None,
    sign: int = -1,
    sqrt_cfg: SqrtConfig | None = None,
    branch_policy: str = "path",
    schur_correction: bool = False,
    scale_policy: ScalePolicy = normalize_spectrum,
    label: str = "",
) -> CompressedHamiltonian:
    """Apply depth levels of root-selection, hermitization and adjustment.

    branch_policy "path" follows the given bitstring. The default path is
    0 followed by all 1s: the minus-sign root carries the global ground
    state on the first split, but hermitization squares magnitudes, so on
    every later level the target image is the largest eigenvalue and lives
    in the plus-sign root. "best-of-both" expands both roots per level and
    keeps the one whose recovered candidate energy is smaller, ties broken
    toward branch 0.
    """
    mat = as_csr(m)
    dim = mat.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise DomainError(f"dim {dim} is not a power of two; pad first")
    if not 1 <= depth <= n - 1:
        raise DepthTooLarge(f"depth {depth} not in [1, {n - 1}] for dim {dim}")
    if branch_policy not in ("path", "best-of-both"):
        raise ValueError(f"unknown branch policy {branch_policy!r}")
    bits = [0] + [1] * (depth - 1) if path is None else [int(ch) for ch in str(path)]
    if branch_policy == "path" and len(bits) != depth:
        raise ValueError(f"path length {len(bits)} != depth {depth}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("path must be a bitstring of 0s and 1s")

    steps: list[CompressionStep] = []
    current = mat
    for level in range(depth):
        gamma0, gamma1, diag = sbd_step(
            current, sqrt_cfg=sqrt_cfg, schur_correction=schur_correction
        )
        candidates = (gamma0, gamma1)
        if branch_policy == "path":
            chosen = bits[level]
            adjusted, n_scale, t_shift = scale_policy(hermitize(candidates[chosen]))
        else:
            best = None
            for bit in (0, 1):
                adj, n_s, t_s = scale_policy(hermitize(candidates[bit]))
                step = CompressionStep(
                    branch=bit,
                    n_scale=n_s,
                    t_shift=t_s,
                    used_det_prime=diag.used_det_prime,
                    sqrt_fallback=diag.sqrt_fallback,
                )
                eps = _largest_eigenvalue(adj)
                candidate_energy = recover_through(eps, tuple(steps) + (step,), sign)
                if best is None or candidate_energy < best[0]:
                    best = (candidate_energy, bit, adj, n_s, t_s)
            _, chosen, adjusted, n_scale, t_shift = best
        steps.append(
            CompressionStep(
                branch=chosen,
                n_scale=n_scale,
                t_shift=t_shift,
                used_det_prime=diag.used_det_prime,
                sqrt_fallback=diag.sqrt_fallback,
            )
        )
        current = adjusted
    return CompressedHamiltonian(
        block=current,
        steps=tuple(steps),
        original_dim=dim,
        sign=sign,
        label=label,
    )


def compression_ratio(k: int) -> float:
    """Size reduction percentage after k halvings: (1 - 2^-k) * 100."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return (1.0 - 2.0 ** (-k)) * 100.0


def applications_needed(c: float) -> int:
    """Halvings needed for at least c percent size reduction."""
    if not 0.0 < c < 100.0:
        raise DomainError("percentage must lie strictly between 0 and 100")
    # (100 - c) / 100 keeps the round trip with compression_ratio exact;
    # the 1e-12 guard absorbs the last-bit rounding of the log.
    raw = -math.log2((100.0 - c) / 100.0)
    return max(1, math.ceil(raw - 1e-12))


# ---------------------------------------------------------------------------
# Compressed-artifact file format (sbd-v1)

ARTIFACT_FORMAT = "sbd-v1"


def artifact_to_dict(c: CompressedHamiltonian) -> dict:
    block = c.block.tocsr()
    block.sort_indices()
    return {
        "format": ARTIFACT_FORMAT,
        "label": c.label,
        "original_dim": c.original_dim,
        "sign": c.sign,
        "steps": [
            {
                "branch": s.branch,
                "n_scale": s.n_scale,
                "t_shift": s.t_shift,
                "used_det_prime": s.used_det_prime,
                "sqrt_fallback": s.sqrt_fallback,
            }
            for s in c.steps
        ],
        "block": {
            "dim": block.shape[0],
            "indptr": block.indptr.tolist(),
            "indices": block.indices.tolist(),
            "data": [[v.real, v.imag] for v in block.data],
        },
    }


def artifact_from_dict(d: dict) -> CompressedHamiltonian:
    if d.get("format") != ARTIFACT_FORMAT:
        raise ValueError(f"unsupported artifact format {d.get('format')!r}")
    b = d["block"]
    data = np.array([complex(re, im) for re, im in b["data"]], dtype=np.complex128)
    block = sp.csr_matrix(
        (data, np.asarray(b["indices"]), np.asarray(b["indptr"])),
        shape=(b["dim"], b["dim"]),
    )
    steps = tuple(
        CompressionStep(
            branch=int(s["branch"]),
            n_scale=float(s["n_scale"]),
            t_shift=float(s["t_shift"]),
            used_det_prime=bool(s["used_det_prime"]),
            sqrt_fallback=bool(s["sqrt_fallback"]),
        )
        for s in d["steps"]
    )
    return CompressedHamiltonian(
        block=block,
        steps=steps,
        original_dim=int(d["original_dim"]),
        sign=int(d["sign"]),
        label=str(d.get("label", "")),
    )


def write_artifact(c: CompressedHamiltonian, path) -> None:
    Path(path).write_text(json.dumps(artifact_to_dict(c), indent=1) + "\n")


def read_artifact(path) -> CompressedHamiltonian:
    return artifact_from_dict(json.loads(Path(path).read_text()))


def is_artifact_file(path) -> bool:
    p = Path(path)
    if p.suffix.lower() in {".mtx", ".mm"}:
        return False
    try:
        head = p.read_text()[:200]
    except (UnicodeDecodeError, OSError):
        return False
    return f'"{ARTIFACT_FORMAT}"' in head
