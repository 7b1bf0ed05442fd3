"""Command-line surface binding the library into reproducible workflows.

Commands: gen, compress, eig, rank, bench, sqrt-check. Primary outputs are
byte-identical across repeated invocations with the same inputs, flags and
seeds; log lines go to stderr. Exit codes: 2 input/parse error, 3 pipeline
error, 4 incomplete ranking grid.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .compress import (
    applications_needed,
    compress,
    compression_ratio,
    is_artifact_file,
    read_artifact,
    recover_through,
    write_artifact,
)
from .eigsolve import dense_oracle, krylov_extreme
from .errors import IncompleteGrid, SbdError
from .hamiltonians import (
    default_pad_value,
    gen_commuting_block,
    gen_random_hermitian,
    gen_tfim,
    load_input,
    pad_to_pow2,
    write_matrix_market,
    write_pauli_json,
)
from .matsqrt import SqrtConfig, newton_sqrt
from .sparsetools import as_csr, gershgorin_lower
from .vqe import VqeConfig, ansatz_state, vqe_minimize

EXIT_PARSE = 2
EXIT_PIPELINE = 3
EXIT_GRID = 4


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(**kv) -> None:
    print(" ".join(f"{k}={v}" for k, v in kv.items()))


def parse_result_line(line: str) -> dict[str, str]:
    """Inverse of the key=value result format every command prints."""
    return dict(part.split("=", 1) for part in line.strip().split())


@dataclass(frozen=True)
class GlobalConfig:
    """Flags shared by every command; logged at the start of each run."""

    seed: int = 0
    tol: float = 1e-8
    threads: int = 1
    strict_paper_mode: bool = False

    @classmethod
    def from_args(cls, args) -> "GlobalConfig":
        return cls(
            seed=args.seed,
            tol=args.tol,
            threads=args.threads,
            strict_paper_mode=args.strict_paper_mode,
        )

    def log(self) -> None:
        _log(
            f"# config seed={self.seed} tol={self.tol} threads={self.threads} "
            f"strict_paper_mode={self.strict_paper_mode}"
        )


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # The same flags hang off the main parser and every subcommand; the
    # subcommand copies default to SUPPRESS so they never clobber values
    # parsed before the subcommand name.
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--seed",
        type=int,
        default=d if suppress else int(os.environ.get("SBD_SEED", "0")),
        help="global RNG seed (env SBD_SEED overrides the default of 0)",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=d if suppress else 1e-8,
        help="eigensolver residual tolerance",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=d if suppress else 1,
        help="worker cap for parallel sections",
    )
    parser.add_argument(
        "--strict-paper-mode",
        action="store_true",
        default=d if suppress else False,
        help="disable the square-root dense fallback and best-of-both branching",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sbd",
        description="Eigenvalue-preserving block compression and eigensolvers "
        "for Hermitian qubit Hamiltonians.",
    )
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        cp = sub.add_parser(name, help=help_text)
        _global_flags(cp, suppress=True)
        return cp

    g = add_command("gen", "write a synthetic test instance")
    g.add_argument("--model", required=True, choices=("tfim", "randherm", "commuting"))
    g.add_argument("--out", required=True)
    g.add_argument("--n", type=int, default=4, help="tfim qubit count")
    g.add_argument("--coupling", type=float, default=1.0, help="tfim ZZ coupling")
    g.add_argument("--field", type=float, default=1.0, help="tfim transverse field")
    g.add_argument("--dim", type=int, default=16, help="matrix families: dimension")

    c = add_command("compress", "compress an input into an sbd-v1 artifact")
    c.add_argument("input")
    c.add_argument("--out", required=True)
    grp = c.add_mutually_exclusive_group(required=True)
    grp.add_argument("--depth", type=int)
    grp.add_argument("--target-percent", type=float)
    c.add_argument(
        "--path",
        default=None,
        help="branch bitstring; default 0 then 1s (ground tracking)",
    )
    c.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    c.add_argument("--branch-policy", choices=("path", "best-of-both"), default="path")
    c.add_argument(
        "--schur-correction",
        action="store_true",
        help="use the symmetric correction term in the block determinant",
    )
    c.add_argument("--label", default=None)

    e = add_command("eig", "extreme eigenvalue of a raw input or artifact")
    e.add_argument("input")
    e.add_argument("--method", choices=("dense", "krylov", "vqe"), default="krylov")
    e.add_argument("--which", choices=("smallest", "largest"), default="smallest")
    e.add_argument("--vqe-layers", type=int, default=3)
    e.add_argument("--vqe-iters", type=int, default=500)
    e.add_argument("--vqe-restarts", type=int, default=3)
    e.add_argument("--vqe-lr", type=float, default=0.05)

    r = add_command("rank", "molecular energy ranking over a manifest")
    r.add_argument("--manifest", required=True)
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--reference", default=None, help="reference model name")

    b = add_command("bench", "timed runs over a manifest")
    b.add_argument("--manifest", required=True)
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--runs", type=int, default=bench_mod.TIMED_RUNS)
    b.add_argument("--warmup", type=int, default=1)
    b.add_argument(
        "--speed-reference",
        default="vqe-d0",
        help="model whose time normalizes relative speeds (per label)",
    )

    s = add_command("sqrt-check", "square-root residual diagnostics")
    s.add_argument("input")
    s.add_argument("--iterations", type=int, default=6)
    s.add_argument("--no-residual-check", action="store_true")
    return p


def _load_matrix(path: str):
    try:
        return load_input(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _log(f"error: cannot parse {path}: {exc}")
        raise SystemExit(EXIT_PARSE) from exc


def cmd_gen(args) -> int:
    if args.model == "tfim":
        h = gen_tfim(args.n, args.coupling, args.field)
        write_pauli_json(h, args.out)
        _emit(model="tfim", n_qubits=args.n, out=args.out)
        return 0
    if args.model == "commuting":
        m = gen_commuting_block(args.dim, seed=args.seed)
    else:
        m = gen_random_hermitian(args.dim, seed=args.seed)
    write_matrix_market(m, args.out)
    _emit(model=args.model, dim=args.dim, seed=args.seed, out=args.out)
    return 0


def cmd_compress(args) -> int:
    m, label = _load_matrix(args.input)
    m = pad_to_pow2(m, default_pad_value(m))
    if args.depth is not None:
        depth = args.depth
    else:
        depth = applications_needed(args.target_percent)
    sqrt_cfg = SqrtConfig(residual_check=not args.strict_paper_mode)
    policy = "path" if args.strict_paper_mode else args.branch_policy
    art = compress(
        m,
        depth=depth,
        path=args.path,
        sign=args.sign,
        sqrt_cfg=sqrt_cfg,
        branch_policy=policy,
        schur_correction=args.schur_correction,
        label=args.label if args.label is not None else label,
    )
    write_artifact(art, args.out)
    _emit(
        depth=depth,
        ratio=compression_ratio(depth),
        dim=art.original_dim,
        block_dim=art.dim,
        path=art.path,
        out=args.out,
    )
    return 0


def _vqe_largest(block, cfg: VqeConfig) -> tuple[float, float]:
    """Largest eigenvalue estimate by minimizing the negated block."""
    res = vqe_minimize(-as_csr(block), cfg)
    eps = -res.energy
    n = block.shape[0].bit_length() - 1
    psi = ansatz_state(res.params, n, cfg.layers)
    residual = float(np.linalg.norm(as_csr(block) @ psi - eps * psi))
    return eps, residual


def cmd_eig(args) -> int:
    if is_artifact_file(args.input):
        try:
            art = read_artifact(args.input)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            _log(f"error: cannot parse {args.input}: {exc}")
            return EXIT_PARSE
        block = art.block
        iterations = 0
        if args.method == "dense":
            eps = float(dense_oracle(block)[-1])
            residual = 0.0
        elif args.method == "krylov":
            r = krylov_extreme(block, which="largest", tol=args.tol, seed=args.seed)
            eps, residual, iterations = r.value, r.residual, r.iterations
        else:
            cfg = VqeConfig(
                seed=args.seed,
                layers=args.vqe_layers,
                max_iters=args.vqe_iters,
                restarts=args.vqe_restarts,
                learning_rate=args.vqe_lr,
            )
            eps, residual = _vqe_largest(block, cfg)
        energy = recover_through(eps, art.steps, art.sign)
        _emit(
            energy=repr(energy),
            residual=repr(residual),
            method=args.method,
            dim=block.shape[0],
            depth=len(art.steps),
            iterations=iterations,
        )
        return 0

    m, _ = _load_matrix(args.input)
    matrix = m.matrix
    iterations = 0
    if args.method == "dense":
        spectrum = dense_oracle(m)
        energy = float(spectrum[0] if args.which == "smallest" else spectrum[-1])
        residual = 0.0
    elif args.method == "krylov":
        r = krylov_extreme(matrix, which=args.which, tol=args.tol, seed=args.seed)
        energy, residual, iterations = r.value, r.residual, r.iterations
    else:
        if args.which == "smallest":
            pad = default_pad_value(m)  # above the spectrum: cannot win
        else:
            pad = gershgorin_lower(m.matrix) - 1.0  # below it, same reason
        padded = pad_to_pow2(m, pad)
        cfg = VqeConfig(
            seed=args.seed,
            layers=args.vqe_layers,
            max_iters=args.vqe_iters,
            restarts=args.vqe_restarts,
            learning_rate=args.vqe_lr,
        )
        if args.which == "smallest":
            res = vqe_minimize(padded.matrix, cfg)
            energy = res.energy
            n = padded.dim.bit_length() - 1
            psi = ansatz_state(res.params, n, cfg.layers)
            residual = float(np.linalg.norm(padded.matrix @ psi - energy * psi))
        else:
            energy, residual = _vqe_largest(padded.matrix, cfg)
    _emit(
        energy=repr(float(energy)),
        residual=repr(float(residual)),
        method=args.method,
        dim=matrix.shape[0],
        depth=0,
        iterations=iterations,
    )
    return 0


def cmd_rank(args) -> int:
    try:
        specs = bench_mod.read_manifest(args.manifest)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _log(f"error: cannot parse manifest {args.manifest}: {exc}")
        return EXIT_PARSE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = Path(args.manifest).resolve().parent
    report, records = bench_mod.rank(
        specs,
        reference=args.reference,
        seed=args.seed,
        tol=args.tol,
        strict_paper_mode=args.strict_paper_mode,
        base_dir=base,
    )
    bench_mod.write_ranking_csv(report, out / "ranking.csv")
    bench_mod.write_results_csv(records, out / "rank_results.csv")
    rows = [
        (model, *[report.energies[model][mol] for mol in report.molecules])
        for model in report.models
    ]
    bench_mod.write_plot_table(
        out / "rank_energies.dat",
        "model " + " ".join(report.molecules),
        rows,
    )
    _emit(
        models=len(report.models),
        reference=report.reference,
        match_rate=repr(report.match_rate),
        ground_hit_rate=repr(report.ground_hit_rate),
        out=str(out),
    )
    return 0


def cmd_bench(args) -> int:
    try:
        specs = bench_mod.read_manifest(args.manifest)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _log(f"error: cannot parse manifest {args.manifest}: {exc}")
        return EXIT_PARSE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = Path(args.manifest).resolve().parent
    records = []
    medians: dict[tuple[str, str], float] = {}
    failed = False
    for spec in specs:
        rec, median = bench_mod.run_timed(
            spec,
            runs=args.runs,
            warmup=args.warmup,
            seed=args.seed,
            tol=args.tol,
            strict_paper_mode=args.strict_paper_mode,
            base_dir=base,
        )
        failed = failed or not rec.ok
        records.append(
            bench_mod.RunRecord(
                label=rec.label,
                eigensolver=rec.eigensolver,
                depth=rec.depth,
                matrix_dim=rec.matrix_dim,
                energy=rec.energy,
                wall_time=median,
                status=rec.status,
            )
        )
    bench_mod.write_results_csv(records, out / "bench_results.csv")
    # relative speed normalized per label on the reference model's time
    rows = []
    by_label: dict[str, list] = {}
    for r in records:
        by_label.setdefault(r.label, []).append(r)
    reports = {}
    for label, group in by_label.items():
        medians = {f"{r.eigensolver}-d{r.depth}": r.wall_time for r in group if r.ok}
        if args.speed_reference in medians:
            reports[label] = bench_mod.build_speed_report(
                group, medians, args.speed_reference
            )
    for r in records:
        model = f"{r.eigensolver}-d{r.depth}"
        rep = reports.get(r.label)
        rel = rep.relative_speed.get(model, float("nan")) if (rep and r.ok) else float("nan")
        rows.append((r.label, r.eigensolver, r.depth, r.matrix_dim, r.wall_time, rel))
        _emit(
            label=r.label,
            eigensolver=r.eigensolver,
            depth=r.depth,
            median_s=repr(r.wall_time),
            relative_speed=repr(rel),
            status=r.status,
        )
    bench_mod.write_plot_table(
        out / "bench_speed.dat",
        f"label eigensolver depth matrix_dim median_s relative_speed "
        f"(normalized per label on {args.speed_reference})",
        rows,
    )
    # exponential fit per (label, eigensolver) series with enough depths
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for (label, solver, depth, _dim, _t, rel) in rows:
        if rel == rel:  # not nan
            series.setdefault((label, solver), []).append((depth, rel))
    for (label, solver), pts in sorted(series.items()):
        if len(pts) >= 3:
            depths, rels = zip(*sorted(pts))
            a, b, resid = bench_mod.speed_fit(depths, rels)
            _emit(fit_label=label, fit_eigensolver=solver, a=repr(a), b=repr(b), resid=repr(resid))
    return 1 if failed else 0


def cmd_sqrt_check(args) -> int:
    m, _ = _load_matrix(args.input)
    cfg = SqrtConfig(
        iterations=args.iterations,
        residual_check=not (args.no_residual_check or args.strict_paper_mode),
    )
    result = newton_sqrt(m, cfg)
    _emit(
        dim=m.dim,
        iterations=result.iterations,
        residual=repr(result.residual),
        fallback=result.fallback,
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    GlobalConfig.from_args(args).log()
    handlers = {
        "gen": cmd_gen,
        "compress": cmd_compress,
        "eig": cmd_eig,
        "rank": cmd_rank,
        "bench": cmd_bench,
        "sqrt-check": cmd_sqrt_check,
    }
    try:
        return handlers[args.command](args)
    except SystemExit:
        raise
    except IncompleteGrid as exc:
        _log(f"error: incomplete grid: {exc}")
        return EXIT_GRID
    except (SbdError, ValueError) as exc:
        _log(f"error: {type(exc).__name__}: {exc}")
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
