import json

import numpy as np
import pytest

from sbd.cli import main, parse_result_line
from sbd.compress import read_artifact
from sbd.eigsolve import dense_oracle
from sbd.hamiltonians import (
    gen_commuting_block,
    gen_tfim,
    realize,
    write_matrix_market,
    write_pauli_json,
)


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def parse_kv(line):
    return parse_result_line(line)


class TestGen:
    def test_tfim_realizes_to_expected_matrix(self, tmp_path, capsys):
        out = tmp_path / "t.json"
        code, _ = run_cli(capsys, "gen", "--model", "tfim", "--n", 2, "--coupling", 1, "--field", 0, "--out", out)
        assert code == 0
        from sbd.hamiltonians import read_pauli_json

        m = realize(read_pauli_json(out)).toarray()
        np.testing.assert_allclose(np.diag(m), [-1.0, 1.0, 1.0, -1.0])

    def test_byte_identical_outputs(self, tmp_path, capsys):
        a, b = tmp_path / "a.mtx", tmp_path / "b.mtx"
        run_cli(capsys, "gen", "--model", "commuting", "--dim", 8, "--seed", 4, "--out", a)
        run_cli(capsys, "gen", "--model", "commuting", "--dim", 8, "--seed", 4, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_randherm(self, tmp_path, capsys):
        out = tmp_path / "r.mtx"
        code, _ = run_cli(capsys, "gen", "--model", "randherm", "--dim", 8, "--seed", 1, "--out", out)
        assert code == 0 and out.exists()


class TestCompress:
    def test_depth_on_dim16(self, tmp_path, capsys):
        src = tmp_path / "t.json"
        write_pauli_json(gen_tfim(4, 1.0, 1.0), src)
        art = tmp_path / "a.json"
        code, out = run_cli(capsys, "compress", src, "--depth", 1, "--out", art)
        assert code == 0
        kv = parse_kv(out)
        assert kv["block_dim"] == "8"
        assert read_artifact(art).dim == 8

    def test_target_percent_maps_to_depth(self, tmp_path, capsys):
        src = tmp_path / "c.mtx"
        write_matrix_market(gen_commuting_block(64, seed=0), src)
        art = tmp_path / "a.json"
        code, out = run_cli(capsys, "compress", src, "--target-percent", 90, "--out", art)
        assert code == 0
        kv = parse_kv(out)
        assert kv["depth"] == "4"
        assert kv["ratio"] == "93.75"
        assert read_artifact(art).dim == 4

    def test_repeat_byte_identical(self, tmp_path, capsys):
        src = tmp_path / "c.mtx"
        write_matrix_market(gen_commuting_block(16, seed=3), src)
        a1, a2 = tmp_path / "a1.json", tmp_path / "a2.json"
        run_cli(capsys, "compress", src, "--depth", 2, "--out", a1)
        run_cli(capsys, "compress", src, "--depth", 2, "--out", a2)
        assert a1.read_bytes() == a2.read_bytes()

    def test_schur_flag_changes_artifact(self, tmp_path, capsys):
        from sbd.hamiltonians import gen_random_hermitian

        src = tmp_path / "m.mtx"
        write_matrix_market(gen_random_hermitian(16, seed=3), src)
        a1, a2 = tmp_path / "a1.json", tmp_path / "a2.json"
        run_cli(capsys, "compress", src, "--depth", 1, "--out", a1)
        run_cli(capsys, "compress", src, "--depth", 1, "--out", a2, "--schur-correction")
        assert a1.read_bytes() != a2.read_bytes()

    def test_depth_too_large_is_pipeline_error(self, tmp_path, capsys):
        src = tmp_path / "c.mtx"
        write_matrix_market(gen_commuting_block(8, seed=0), src)
        code, _ = run_cli(capsys, "compress", src, "--depth", 5, "--out", tmp_path / "x.json")
        assert code == 3

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        with pytest.raises(SystemExit) as exc:
            run_cli(capsys, "compress", bad, "--depth", 1, "--out", tmp_path / "x.json")
        assert exc.value.code == 2


class TestEig:
    def test_depth1_recovery_matches_dense(self, tmp_path, capsys):
        src = tmp_path / "c.mtx"
        m = gen_commuting_block(16, seed=8)
        write_matrix_market(m, src)
        ground = dense_oracle(m)[0]
        art = tmp_path / "a.json"
        run_cli(capsys, "compress", src, "--depth", 1, "--out", art)
        code, out = run_cli(capsys, "eig", art, "--method", "krylov")
        assert code == 0
        kv = parse_kv(out)
        assert float(kv["energy"]) == pytest.approx(ground, abs=1e-5)
        assert kv["depth"] == "1"

    def test_raw_dense(self, tmp_path, capsys):
        src = tmp_path / "t.json"
        write_pauli_json(gen_tfim(3, 1.0, 1.0), src)
        code, out = run_cli(capsys, "eig", src, "--method", "dense")
        kv = parse_kv(out)
        want = np.linalg.eigvalsh(realize(gen_tfim(3, 1.0, 1.0)).toarray()).min()
        assert float(kv["energy"]) == pytest.approx(want, abs=1e-10)

    def test_artifact_vqe_recovery(self, tmp_path, capsys):
        # real-symmetric commuting instance: the RY/CZ ansatz spans real
        # amplitudes only, so complex eigenvectors are out of its reach
        rng = np.random.default_rng(5)
        g = rng.normal(size=(4, 4))
        k = (g + g.T) / 2
        k /= np.linalg.norm(k, 2)
        a = 2.0 * np.eye(4) + 0.3 * k
        d = -2.0 * np.eye(4) + 0.2 * k @ k
        b = 0.4 * k
        m = np.block([[a, b], [b, d]])
        src = tmp_path / "c.mtx"
        write_matrix_market(m, src)
        ground = float(np.linalg.eigvalsh(m).min())
        art = tmp_path / "a.json"
        run_cli(capsys, "compress", src, "--depth", 1, "--out", art)
        code, out = run_cli(
            capsys, "eig", art, "--method", "vqe",
            "--vqe-layers", 3, "--vqe-iters", 600, "--vqe-restarts", 2,
        )
        assert code == 0
        kv = parse_kv(out)
        assert float(kv["energy"]) == pytest.approx(ground, abs=1e-3)

    def test_raw_vqe(self, tmp_path, capsys):
        src = tmp_path / "t.json"
        write_pauli_json(gen_tfim(2, 1.0, 0.0), src)
        code, out = run_cli(
            capsys, "eig", src, "--method", "vqe", "--vqe-iters", 300, "--vqe-layers", 2
        )
        kv = parse_kv(out)
        assert float(kv["energy"]) == pytest.approx(-1.0, abs=1e-3)

    def test_missing_file(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(capsys, "eig", tmp_path / "nope.json")
        assert exc.value.code == 2


class TestRankBench:
    def _write_grid(self, tmp_path, models):
        entries = []
        for i in range(2):
            path = tmp_path / f"mol{i}.mtx"
            write_matrix_market(gen_commuting_block(8, seed=20 + i), path)
            for solver, depth in models:
                entries.append(
                    {
                        "label": f"mol{i}",
                        "source": path.name,
                        "eigensolver": solver,
                        "depth": depth,
                    }
                )
        manifest = tmp_path / "manifest.json"
        manifest.write_text(json.dumps(entries))
        return manifest

    def test_rank_outputs(self, tmp_path, capsys):
        manifest = self._write_grid(tmp_path, [("dense", 0), ("krylov", 1)])
        out_dir = tmp_path / "out"
        code, out = run_cli(capsys, "rank", "--manifest", manifest, "--out", out_dir)
        assert code == 0
        kv = parse_kv(out)
        assert kv["match_rate"] == "1.0"
        assert (out_dir / "ranking.csv").exists()
        assert (out_dir / "rank_results.csv").exists()
        assert (out_dir / "rank_energies.dat").exists()

    def test_rank_incomplete_grid_exit4(self, tmp_path, capsys):
        manifest = self._write_grid(tmp_path, [("dense", 0), ("krylov", 0)])
        entries = json.loads(manifest.read_text())
        manifest.write_text(json.dumps(entries[:-1]))  # krylov-d0 loses mol1
        code, _ = run_cli(capsys, "rank", "--manifest", manifest, "--out", tmp_path / "o")
        assert code == 4

    def test_bench_outputs(self, tmp_path, capsys):
        manifest = self._write_grid(tmp_path, [("krylov", 0), ("krylov", 1)])
        out_dir = tmp_path / "out"
        code, out = run_cli(
            capsys, "bench", "--manifest", manifest, "--out", out_dir,
            "--runs", 3, "--warmup", 1, "--speed-reference", "krylov-d0",
        )
        assert code == 0
        assert (out_dir / "bench_results.csv").exists()
        table = (out_dir / "bench_speed.dat").read_text()
        assert "krylov" in table
        assert "median_s" in out

    def test_bench_with_vqe_models(self, tmp_path, capsys):
        entries = []
        path = tmp_path / "mol.mtx"
        write_matrix_market(gen_commuting_block(8, seed=22), path)
        for depth in (0, 1):
            entries.append(
                {
                    "label": "mol",
                    "source": path.name,
                    "eigensolver": "vqe",
                    "depth": depth,
                    "overrides": {"layers": 2, "max_iters": 25, "restarts": 1},
                }
            )
        manifest = tmp_path / "m.json"
        manifest.write_text(json.dumps(entries))
        code, out = run_cli(
            capsys, "bench", "--manifest", manifest, "--out", tmp_path / "o",
            "--runs", 2, "--warmup", 0,
        )
        assert code == 0
        assert "relative_speed" in out

    def test_bench_failed_model_nonzero_exit(self, tmp_path, capsys):
        manifest = tmp_path / "m.json"
        manifest.write_text(
            json.dumps(
                [{"label": "x", "source": "missing.mtx", "eigensolver": "dense", "depth": 0}]
            )
        )
        code, _ = run_cli(capsys, "bench", "--manifest", manifest, "--out", tmp_path / "o", "--runs", 1)
        assert code == 1


class TestSqrtCheck:
    def test_reports_residual(self, tmp_path, capsys):
        src = tmp_path / "c.mtx"
        m = gen_commuting_block(8, seed=0)
        write_matrix_market(hermitize_like(m), src)
        code, out = run_cli(capsys, "sqrt-check", src)
        kv = parse_kv(out)
        assert code == 0
        assert float(kv["residual"]) < 1e-6
        assert kv["fallback"] == "False"


def hermitize_like(m):
    arr = m.toarray()
    return (arr @ arr.conj().T).astype(complex)


class TestGlobalFlags:
    def test_seed_env_override(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SBD_SEED", "77")
        a = tmp_path / "a.mtx"
        code, out = run_cli(capsys, "gen", "--model", "randherm", "--dim", 8, "--out", a)
        assert parse_kv(out)["seed"] == "77"

    def test_seed_flag_after_subcommand(self, tmp_path, capsys):
        a = tmp_path / "a.mtx"
        _, out = run_cli(capsys, "gen", "--model", "randherm", "--dim", 8, "--seed", 5, "--out", a)
        assert parse_kv(out)["seed"] == "5"

    def test_unknown_flag_hard_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--model", "tfim", "--out", "x.json", "--bogus"])
        assert exc.value.code == 2

    def test_help_lists_commands(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        for cmd in ("gen", "compress", "eig", "rank", "bench", "sqrt-check"):
            assert cmd in out
