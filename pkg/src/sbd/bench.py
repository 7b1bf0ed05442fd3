"""Experiment harness: per-model energy runs, wall-time protocol
(median of seven timed runs, warm-up excluded), molecular energy ranking
with match rates, and the exponential speed fit.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .compress import compress, recover_through
from .eigsolve import dense_oracle, krylov_extreme
from .errors import DegenerateFit, DomainError, IncompleteGrid, SbdError
from .hamiltonians import default_pad_value, load_input, pad_to_pow2
from .matsqrt import SqrtConfig
from .vqe import VqeConfig, vqe_minimize

TIMED_RUNS = 7

EIGENSOLVERS = ("dense", "krylov", "vqe")


@dataclass(frozen=True)
class ModelSpec:
    """One (Hamiltonian, eigensolver, compression depth) cell of a grid."""

    label: str
    source: str
    eigensolver: str
    depth: int = 0
    model: str = ""
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.eigensolver not in EIGENSOLVERS:
            raise ValueError(f"eigensolver must be one of {EIGENSOLVERS}")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if not self.model:
            object.__setattr__(self, "model", f"{self.eigensolver}-d{self.depth}")


@dataclass(frozen=True)
class RunRecord:
    label: str
    eigensolver: str
    depth: int
    matrix_dim: int
    energy: float
    wall_time: float
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class RankingReport:
    models: tuple[str, ...]
    molecules: tuple[str, ...]
    energies: dict  # model -> {molecule: energy}
    orderings: dict  # model -> tuple of molecule labels, ascending energy
    reference: str
    match_rate: float
    ground_hit_rate: float


@dataclass(frozen=True)
class SpeedReport:
    models: tuple[str, ...]
    depths: tuple[int, ...]
    times: dict  # model -> median wall seconds
    relative_speed: dict  # model -> t_reference / t_model
    reference: str


def _vqe_config(seed: int, overrides: dict) -> VqeConfig:
    return VqeConfig(
        seed=int(overrides.get("seed", seed)),
        layers=int(overrides.get("layers", 3)),
        max_iters=int(overrides.get("max_iters", 500)),
        learning_rate=float(overrides.get("learning_rate", 0.05)),
        tol=float(overrides.get("vqe_tol", 1e-6)),
        gradient=str(overrides.get("gradient", "parameter_shift")),
        restarts=int(overrides.get("restarts", 3)),
    )


def _solve_extreme(matrix, which: str, method: str, seed: int, tol: float, overrides: dict) -> float:
    if method == "dense":
        spectrum = dense_oracle(matrix)
        return float(spectrum[0] if which == "smallest" else spectrum[-1])
    if method == "krylov":
        return krylov_extreme(matrix, which=which, tol=tol, seed=seed).value
    cfg = _vqe_config(seed, overrides)
    if which == "smallest":
        return vqe_minimize(matrix, cfg).energy
    return -vqe_minimize(-matrix.tocsr(), cfg).energy


def run_model(
    spec: ModelSpec,
    seed: int = 0,
    tol: float = 1e-8,
    strict_paper_mode: bool = False,
    base_dir: str | Path | None = None,
) -> RunRecord:
    """Load, pad, optionally compress, eigensolve and recover one model.

    The wall time covers compression and eigensolving, not file input.
    Failures are recorded in the status column instead of raising.
    """
    source = Path(base_dir or ".") / spec.source
    try:
        m, _ = load_input(source)
        m = pad_to_pow2(m, default_pad_value(m))
        ov = dict(spec.overrides)
        run_seed = int(ov.get("seed", seed))
        run_tol = float(ov.get("tol", tol))
        sqrt_cfg = SqrtConfig(residual_check=not strict_paper_mode)
        policy = str(ov.get("branch_policy", "path"))
        if strict_paper_mode:
            policy = "path"
        sign = int(ov.get("sign", -1))
        t0 = time.perf_counter()
        if spec.depth > 0:
            art = compress(
                m,
                depth=spec.depth,
                path=ov.get("path"),
                sign=sign,
                sqrt_cfg=sqrt_cfg,
                branch_policy=policy,
                schur_correction=bool(ov.get("schur_correction", False)),
                label=spec.label,
            )
            eps = _solve_extreme(
                art.block, "largest", spec.eigensolver, run_seed, run_tol, ov
            )
            energy = recover_through(eps, art.steps, art.sign)
            solved_dim = art.dim
        else:
            energy = _solve_extreme(
                m.matrix, "smallest", spec.eigensolver, run_seed, run_tol, ov
            )
            solved_dim = m.dim
        wall = time.perf_counter() - t0
        return RunRecord(
            label=spec.label,
            eigensolver=spec.eigensolver,
            depth=spec.depth,
            matrix_dim=solved_dim,
            energy=energy,
            wall_time=wall,
            status="ok",
        )
    except (SbdError, ValueError, OSError, json.JSONDecodeError) as exc:
        return RunRecord(
            label=spec.label,
            eigensolver=spec.eigensolver,
            depth=spec.depth,
            matrix_dim=0,
            energy=math.nan,
            wall_time=math.nan,
            status=f"failed:{type(exc).__name__}",
        )


def run_timed(
    spec: ModelSpec,
    runs: int = TIMED_RUNS,
    warmup: int = 1,
    **kwargs,
) -> tuple[RunRecord, float]:
    """Median wall time over `runs` timed executions, warm-up excluded."""
    times = []
    record = None
    for i in range(warmup + runs):
        record = run_model(spec, **kwargs)
        if not record.ok:
            return record, math.nan
        if i >= warmup:
            times.append(record.wall_time)
    return record, float(statistics.median(times))


def rank(
    specs: list[ModelSpec],
    reference: str | None = None,
    **kwargs,
) -> tuple[RankingReport, list[RunRecord]]:
    """Per-model molecule orderings and match metrics against a reference.

    Every model must cover the same molecule set. The reference defaults to
    the uncompressed dense model when present.
    """
    by_model: dict[str, list[ModelSpec]] = {}
    for s in specs:
        by_model.setdefault(s.model, []).append(s)
    models = tuple(by_model)
    molecule_sets = {m: sorted(s.label for s in group) for m, group in by_model.items()}
    molecules = tuple(molecule_sets[models[0]])
    for m, labels in molecule_sets.items():
        if tuple(labels) != molecules or len(set(labels)) != len(labels):
            raise IncompleteGrid(
                f"model {m} covers {labels}, expected exactly {list(molecules)}"
            )
    if reference is None:
        candidates = [
            m for m, g in by_model.items() if g[0].eigensolver == "dense" and g[0].depth == 0
        ]
        if not candidates:
            raise ValueError("no uncompressed dense model; pass reference explicitly")
        reference = candidates[0]
    if reference not in by_model:
        raise ValueError(f"reference model {reference!r} not in manifest")

    records: list[RunRecord] = []
    energies: dict[str, dict[str, float]] = {}
    for model in models:
        energies[model] = {}
        for s in sorted(by_model[model], key=lambda s: s.label):
            rec = run_model(s, **kwargs)
            records.append(rec)
            if not rec.ok:
                raise IncompleteGrid(f"model {model} failed on {s.label}: {rec.status}")
            energies[model][s.label] = rec.energy
    orderings = {
        m: tuple(sorted(molecules, key=lambda lab: (energies[m][lab], lab)))
        for m in models
    }
    match_rate, ground_hit_rate = match_metrics(orderings, reference)
    report = RankingReport(
        models=models,
        molecules=molecules,
        energies=energies,
        orderings=orderings,
        reference=reference,
        match_rate=match_rate,
        ground_hit_rate=ground_hit_rate,
    )
    return report, records


def match_metrics(orderings: dict, reference: str) -> tuple[float, float]:
    """Fraction of models matching the reference ordering / its minimum."""
    ref = orderings[reference]
    n = len(orderings)
    matches = sum(order == ref for order in orderings.values())
    hits = sum(order[0] == ref[0] for order in orderings.values())
    return matches / n, hits / n


def build_speed_report(
    records: list[RunRecord],
    medians: dict[str, float],
    reference: str,
) -> SpeedReport:
    """Relative speeds t_reference / t_model from per-model median times.

    medians maps model names (eigensolver-dN) to median wall seconds; the
    report is normalized per the reference model's time.
    """
    if reference not in medians:
        raise ValueError(f"reference model {reference!r} has no timing")
    ref_time = medians[reference]
    models = tuple(medians)
    depths = {}
    for r in records:
        depths[f"{r.eigensolver}-d{r.depth}"] = r.depth
    return SpeedReport(
        models=models,
        depths=tuple(depths.get(m, 0) for m in models),
        times=dict(medians),
        relative_speed={m: ref_time / t for m, t in medians.items()},
        reference=reference,
    )


def speed_fit(depths, speeds) -> tuple[float, float, float]:
    """Least-squares fit speed ~ a * exp(b * depth).

    Returns (a, b, rms residual of log speed).
    """
    depths = np.asarray(depths, dtype=float)
    speeds = np.asarray(speeds, dtype=float)
    if depths.size < 3:
        raise DomainError("need at least 3 depth points")
    if np.all(depths == depths[0]):
        raise DegenerateFit("all depths equal")
    if np.any(speeds <= 0):
        raise DomainError("speeds must be positive")
    b, loga = np.polyfit(depths, np.log(speeds), 1)
    resid = float(np.sqrt(np.mean((np.log(speeds) - (loga + b * depths)) ** 2)))
    return float(np.exp(loga)), float(b), resid


# ---------------------------------------------------------------------------
# Manifest and report files


def read_manifest(path) -> list[ModelSpec]:
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise ValueError("manifest must be a JSON list of model specs")
    return [
        ModelSpec(
            label=str(d["label"]),
            source=str(d["source"]),
            eigensolver=str(d["eigensolver"]),
            depth=int(d.get("depth", 0)),
            model=str(d.get("model", "")),
            overrides=dict(d.get("overrides", {})),
        )
        for d in raw
    ]


def write_results_csv(records: list[RunRecord], path) -> None:
    lines = ["label,eigensolver,depth,matrix_dim,energy_hartree,wall_time_s,status"]
    for r in records:
        lines.append(
            f"{r.label},{r.eigensolver},{r.depth},{r.matrix_dim},"
            f"{r.energy!r},{r.wall_time!r},{r.status}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_ranking_csv(report: RankingReport, path) -> None:
    width = len(report.molecules)
    header = ",".join(["model"] + [f"rank_{i}" for i in range(1, width + 1)])
    lines = [header]
    for m in report.models:
        lines.append(",".join([m, *report.orderings[m]]))
    lines.append(f"# reference,{report.reference}")
    lines.append(f"# match_rate,{report.match_rate!r}")
    lines.append(f"# ground_hit_rate,{report.ground_hit_rate!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_plot_table(path, header: str, rows: list[tuple]) -> None:
    """Gnuplot-style whitespace table with a # header line."""
    lines = [f"# {header}"]
    for row in rows:
        lines.append(" ".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
